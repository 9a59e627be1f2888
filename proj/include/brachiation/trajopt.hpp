/*
 Copyright 2026 The Brachiation Toolkit Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef BRACHIATION_TRAJOPT_HPP
#define BRACHIATION_TRAJOPT_HPP

#include <functional>
#include <optional>
#include <vector>

#include "brachiation/dynamics.hpp"
#include "brachiation/types.hpp"

namespace brachiation {

/// Discrete-time plant interface used by the optimizer. The default is the
/// robot under an explicit Euler step; tests may inject synthetic plants.
struct DiscreteSystem {
  std::function<Vec6(const Vec6&, const Vec2&)> step;
  std::function<DiscreteJacobians(const Vec6&, const Vec2&)> linearize;
};

/// Robot dynamics discretized with the Euler integrator at fixed dt.
DiscreteSystem robot_euler_system(const RobotParams& params, double dt);

/// Robot dynamics discretized with a single RK4 step per dt. References
/// planned on this model stay integrator-consistent with the fine-step
/// simulation plant, so tracked swings carry no discretization bias.
DiscreteSystem robot_rk4_system(const RobotParams& params, double dt);

/// Finite-horizon swing optimization problem with quadratic cost
///
///   J = (x_T - x*)' diag(Qf) (x_T - x*)
///       + dt * sum_i [ x_i' diag(Q) x_i + u_i' diag(R) u_i ]
///
/// over i = 0..Tn-1 with Tn = T/dt. The running term is the discrete
/// integral of the effort/velocity penalty; the terminal term is a plain
/// boundary penalty (a unit q1 error contributes exactly Qf[0]).
struct IlqrProblem {
  RobotParams params;
  Vec6 x0 = Vec6::Zero();
  Vec6 x_target = Vec6::Zero();
  double horizon_T = 1.0;
  double dt = 1e-2;
  Vec6 Q = Vec6::Zero();   ///< running state weight diagonal
  Vec2 R = Vec2::Zero();   ///< running effort weight diagonal
  Vec6 Qf = Vec6::Zero();  ///< terminal weight diagonal
  int max_iters = 100;
  double rel_tol = 1e-6;
  /// Plant override for tests; defaults to robot_euler_system(params, dt).
  std::optional<DiscreteSystem> system;
  /// Warm-start control sequence; empty means zeros. If nonempty its length
  /// must equal steps().
  std::vector<Vec2> initial_controls;

  /// Number of control steps Tn; requires horizon_T/dt to be integral
  /// within 1e-9 relative (throws InvalidParams otherwise).
  int steps() const;
  void validate() const;
  DiscreteSystem dynamics() const;
};

/// Discrete trajectory: Tn+1 states and Tn controls, states produced by the
/// problem's own step function (rollout consistency is bitwise).
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec6> states;
  std::vector<Vec2> controls;
  double cost = 0.0;
};

/// Time-varying affine policy u_i + alpha*k_i + K_i (x - x_i), length Tn.
struct GainSchedule {
  std::vector<Vec2> k;
  std::vector<Mat26> K;
};

/// Open-loop rollout of a control sequence from problem.x0.
Trajectory rollout(const IlqrProblem& problem,
                   const std::vector<Vec2>& controls);

/// Recomputes the cost of a trajectory under the problem weights.
double total_cost(const IlqrProblem& problem, const Trajectory& traj);

struct BackwardResult {
  GainSchedule gains;
  /// Model-predicted cost reduction for a full step (alpha = 1).
  double expected_decrease = 0.0;
};

/// Riccati-style backward sweep along traj with Levenberg regularization mu
/// added to the control Hessian. Throws NotPositiveDefinite when the
/// regularized Hessian fails its Cholesky test.
BackwardResult backward_pass(const IlqrProblem& problem,
                             const Trajectory& traj, double mu);

/// Closed-loop rollout of the improved policy with step scale alpha.
Trajectory forward_pass(const IlqrProblem& problem, const Trajectory& traj,
                        const GainSchedule& gains, double alpha);

enum class SolveStatus { kConverged, kMaxIterations, kDiverged };

struct SolveResult {
  Trajectory trajectory;
  GainSchedule gains;
  std::vector<double> cost_history;  ///< initial cost then accepted costs
  int iterations = 0;
  SolveStatus status = SolveStatus::kMaxIterations;
};

/// Iterates backward/forward passes from a zero control sequence. Only
/// strict cost decreases are accepted (backtracking line search on the
/// feedforward, alpha = 1, 1/2, ..., 2^-10); failure to decrease escalates
/// mu tenfold within [1e-9, 1e6] and a success halves it. Stops when the
/// relative cost change drops below rel_tol. kDiverged reports the best
/// trajectory found so far.
SolveResult solve(const IlqrProblem& problem);

/// Time of the first hand-height minimum under zero control from x0: the
/// plant integrates with RK4 at dt = 1e-4 until the hand's vertical
/// velocity crosses from negative to non-negative (crossing time refined
/// by linear interpolation). Throws NoMinimumFound after 10 s.
double freefall_time(const RobotParams& params, const FullState& x0);

/// Swing horizon rule: twice the free-fall time to the lowest hand point.
double swing_horizon(const RobotParams& params, const FullState& x0);

}  // namespace brachiation

#endif  // BRACHIATION_TRAJOPT_HPP
