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

#include "brachiation/trajopt.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "brachiation/errors.hpp"

namespace brachiation {

namespace {

constexpr double kMuMin = 1e-9;
constexpr double kMuMax = 1e6;
constexpr int kLineSearchSteps = 11;  // alpha = 1, 1/2, ..., 2^-10

bool finite(const Vec6& v) { return v.allFinite(); }

}  // namespace

DiscreteSystem robot_euler_system(const RobotParams& params, double dt) {
  DiscreteSystem sys;
  sys.step = [params, dt](const Vec6& x, const Vec2& u) -> Vec6 {
    return step(params, FullState::from_vec(x), u, dt, IntegrationMethod::kEuler)
        .vec();
  };
  sys.linearize = [params, dt](const Vec6& x, const Vec2& u) {
    return linearize_discrete(params, FullState::from_vec(x), u, dt);
  };
  return sys;
}

DiscreteSystem robot_rk4_system(const RobotParams& params, double dt) {
  DiscreteSystem sys;
  sys.step = [params, dt](const Vec6& x, const Vec2& u) -> Vec6 {
    return step(params, FullState::from_vec(x), u, dt, IntegrationMethod::kRk4)
        .vec();
  };
  // Central differences through the full RK4 map; the Euler shortcut of
  // exact position rows does not apply here.
  sys.linearize = [step = sys.step](const Vec6& x, const Vec2& u) {
    constexpr double h = 1e-6;
    DiscreteJacobians jac;
    for (int j = 0; j < 6; ++j) {
      Vec6 xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      jac.A.col(j) = (step(xp, u) - step(xm, u)) / (2.0 * h);
    }
    for (int j = 0; j < 2; ++j) {
      Vec2 up = u, um = u;
      up[j] += h;
      um[j] -= h;
      jac.B.col(j) = (step(x, up) - step(x, um)) / (2.0 * h);
    }
    return jac;
  };
  return sys;
}

int IlqrProblem::steps() const {
  if (!(dt > 0.0) || !(horizon_T > 0.0)) {
    throw InvalidParams("horizon_T and dt must be positive");
  }
  const double ratio = horizon_T / dt;
  const long long n = std::llround(ratio);
  if (n < 1 ||
      std::abs(static_cast<double>(n) * dt - horizon_T) >
          1e-9 * std::max(1.0, std::abs(horizon_T))) {
    std::ostringstream msg;
    msg << "horizon_T=" << horizon_T << " is not an integer multiple of dt="
        << dt;
    throw InvalidParams(msg.str());
  }
  return static_cast<int>(n);
}

void IlqrProblem::validate() const {
  params.validate();
  steps();
  if (!finite(x0) || !finite(x_target)) {
    throw InvalidParams("x0 and x_target must be finite");
  }
  if ((Q.array() < 0.0).any() || (Qf.array() < 0.0).any()) {
    throw InvalidParams("Q and Qf weights must be non-negative");
  }
  if (!(R.array() > 0.0).all()) {
    throw InvalidParams("R weights must be strictly positive");
  }
  if (max_iters < 1) throw InvalidParams("max_iters must be at least 1");
  if (!(rel_tol > 0.0)) throw InvalidParams("rel_tol must be positive");
  if (!initial_controls.empty() &&
      static_cast<int>(initial_controls.size()) != steps()) {
    throw InvalidParams("initial_controls length must equal horizon steps");
  }
  if (system && (!system->step || !system->linearize)) {
    throw InvalidParams("injected system must provide step and linearize");
  }
}

DiscreteSystem IlqrProblem::dynamics() const {
  if (system) return *system;
  return robot_euler_system(params, dt);
}

Trajectory rollout(const IlqrProblem& problem,
                   const std::vector<Vec2>& controls) {
  const int n = problem.steps();
  if (static_cast<int>(controls.size()) != n) {
    throw InvalidParams("control sequence length must equal horizon steps");
  }
  const DiscreteSystem sys = problem.dynamics();
  Trajectory traj;
  traj.times.resize(n + 1);
  traj.states.resize(n + 1);
  traj.controls = controls;
  traj.states[0] = problem.x0;
  traj.times[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    traj.states[i + 1] = sys.step(traj.states[i], controls[i]);
    traj.times[i + 1] = (i + 1) * problem.dt;
    if (!finite(traj.states[i + 1])) {
      throw NonFiniteState("rollout produced a non-finite state");
    }
  }
  traj.cost = total_cost(problem, traj);
  return traj;
}

double total_cost(const IlqrProblem& problem, const Trajectory& traj) {
  const int n = problem.steps();
  if (static_cast<int>(traj.states.size()) != n + 1 ||
      static_cast<int>(traj.controls.size()) != n) {
    throw InvalidParams("trajectory size does not match problem horizon");
  }
  double running = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec6& x = traj.states[i];
    const Vec2& u = traj.controls[i];
    running += x.dot(problem.Q.asDiagonal() * x) +
               u.dot(problem.R.asDiagonal() * u);
  }
  const Vec6 e = traj.states[n] - problem.x_target;
  return e.dot(problem.Qf.asDiagonal() * e) + problem.dt * running;
}

BackwardResult backward_pass(const IlqrProblem& problem,
                             const Trajectory& traj, double mu) {
  const int n = problem.steps();
  if (static_cast<int>(traj.states.size()) != n + 1 ||
      static_cast<int>(traj.controls.size()) != n) {
    throw InvalidParams("trajectory size does not match problem horizon");
  }
  const DiscreteSystem sys = problem.dynamics();
  const double dt = problem.dt;

  BackwardResult out;
  out.gains.k.resize(n);
  out.gains.K.resize(n);

  // Cost has no 1/2 convention, so gradients and Hessians carry a factor 2.
  Vec6 v_x = 2.0 * (problem.Qf.asDiagonal() * (traj.states[n] - problem.x_target));
  Mat66 v_xx = 2.0 * Mat66(problem.Qf.asDiagonal());

  double d_linear = 0.0;
  double d_quadratic = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    const Vec6& x = traj.states[i];
    const Vec2& u = traj.controls[i];
    const DiscreteJacobians jac = sys.linearize(x, u);

    const Vec6 lx = 2.0 * dt * (problem.Q.asDiagonal() * x);
    const Vec2 lu = 2.0 * dt * (problem.R.asDiagonal() * u);
    const Mat66 lxx = 2.0 * dt * Mat66(problem.Q.asDiagonal());
    const Mat22 luu = 2.0 * dt * Mat22(problem.R.asDiagonal());

    const Vec6 q_x = lx + jac.A.transpose() * v_x;
    const Vec2 q_u = lu + jac.B.transpose() * v_x;
    const Mat66 q_xx = lxx + jac.A.transpose() * v_xx * jac.A;
    const Mat26 q_ux = jac.B.transpose() * v_xx * jac.A;
    Mat22 q_uu = luu + jac.B.transpose() * v_xx * jac.B;
    q_uu = 0.5 * (q_uu + q_uu.transpose()).eval();

    const Mat22 q_uu_reg = q_uu + mu * Mat22::Identity();
    const Eigen::LLT<Mat22> llt(q_uu_reg);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite(
          "regularized control Hessian is not positive definite");
    }
    const Vec2 k = -llt.solve(q_u);
    const Mat26 K = -llt.solve(q_ux);
    out.gains.k[i] = k;
    out.gains.K[i] = K;

    d_linear += k.dot(q_u);
    d_quadratic += 0.5 * k.dot(q_uu_reg * k);

    v_x = q_x + K.transpose() * (q_uu_reg * k) + K.transpose() * q_u +
          q_ux.transpose() * k;
    v_xx = q_xx + K.transpose() * q_uu_reg * K + K.transpose() * q_ux +
           q_ux.transpose() * K;
    v_xx = 0.5 * (v_xx + v_xx.transpose()).eval();
  }
  out.expected_decrease = -(d_linear + d_quadratic);
  return out;
}

Trajectory forward_pass(const IlqrProblem& problem, const Trajectory& traj,
                        const GainSchedule& gains, double alpha) {
  const int n = problem.steps();
  if (static_cast<int>(gains.k.size()) != n ||
      static_cast<int>(gains.K.size()) != n) {
    throw InvalidParams("gain schedule length must equal horizon steps");
  }
  const DiscreteSystem sys = problem.dynamics();
  Trajectory next;
  next.times = traj.times;
  next.states.resize(n + 1);
  next.controls.resize(n);
  next.states[0] = problem.x0;
  for (int i = 0; i < n; ++i) {
    const Vec6 dx = next.states[i] - traj.states[i];
    next.controls[i] = traj.controls[i] + alpha * gains.k[i] + gains.K[i] * dx;
    next.states[i + 1] = sys.step(next.states[i], next.controls[i]);
    if (!finite(next.states[i + 1]) || !next.controls[i].allFinite()) {
      throw NonFiniteState("forward pass produced a non-finite state");
    }
  }
  next.cost = total_cost(problem, next);
  return next;
}

SolveResult solve(const IlqrProblem& problem) {
  problem.validate();
  const int n = problem.steps();

  SolveResult result;
  result.trajectory = rollout(problem, problem.initial_controls.empty()
                                           ? std::vector<Vec2>(n, Vec2::Zero())
                                           : problem.initial_controls);
  result.cost_history.push_back(result.trajectory.cost);
  result.status = SolveStatus::kMaxIterations;

  double mu = kMuMin;
  bool have_gains = false;

  for (int iter = 1; iter <= problem.max_iters; ++iter) {
    // Backward pass; a failed Cholesky escalates regularization in place.
    BackwardResult bp;
    bool bp_ok = false;
    while (true) {
      try {
        bp = backward_pass(problem, result.trajectory, mu);
        bp_ok = true;
        break;
      } catch (const NotPositiveDefinite&) {
        mu *= 10.0;
        if (mu > kMuMax) break;
      }
    }
    if (!bp_ok) {
      result.status = SolveStatus::kDiverged;
      break;
    }
    result.iterations = iter;

    const double scale = std::max(1.0, std::abs(result.trajectory.cost));
    if (bp.expected_decrease <= problem.rel_tol * scale) {
      result.gains = bp.gains;
      have_gains = true;
      result.status = SolveStatus::kConverged;
      break;
    }

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < kLineSearchSteps; ++ls, alpha *= 0.5) {
      Trajectory candidate;
      try {
        candidate = forward_pass(problem, result.trajectory, bp.gains, alpha);
      } catch (const Error&) {
        continue;  // unstable rollout; shrink the step
      }
      if (!std::isfinite(candidate.cost)) continue;
      if (candidate.cost < result.trajectory.cost) {
        const double previous = result.trajectory.cost;
        result.trajectory = std::move(candidate);
        result.gains = bp.gains;
        have_gains = true;
        result.cost_history.push_back(result.trajectory.cost);
        accepted = true;
        mu = std::max(mu * 0.5, kMuMin);
        const double change = previous - result.trajectory.cost;
        if (change < problem.rel_tol * std::max(1.0, std::abs(previous))) {
          result.status = SolveStatus::kConverged;
        }
        break;
      }
    }
    if (result.status == SolveStatus::kConverged) break;
    if (!accepted) {
      mu *= 10.0;
      if (mu > kMuMax) {
        result.status = SolveStatus::kDiverged;
        break;
      }
    }
  }

  // Refresh the policy around the final trajectory so returned gains track it.
  if (have_gains) {
    try {
      result.gains = backward_pass(problem, result.trajectory, mu).gains;
    } catch (const NotPositiveDefinite&) {
      // Keep the last accepted schedule.
    }
  }
  return result;
}

double freefall_time(const RobotParams& params, const FullState& x0) {
  params.validate();
  if (!x0.all_finite()) throw InvalidParams("initial state must be finite");

  constexpr double kDt = 1e-4;
  constexpr double kMaxTime = 10.0;
  const Vec2 u0 = Vec2::Zero();

  auto hand_zdot = [&params](const FullState& x) {
    return (jacobian_hand(params, x.q) * x.dq).y();
  };

  FullState x = x0;
  double prev = hand_zdot(x);
  double t = 0.0;
  while (t < kMaxTime) {
    x = step(params, x, u0, kDt, IntegrationMethod::kRk4);
    t += kDt;
    const double cur = hand_zdot(x);
    const bool both_zero = prev == 0.0 && cur == 0.0;
    if (!both_zero && prev <= 0.0 && cur >= 0.0) {
      return (t - kDt) + kDt * (prev / (prev - cur));
    }
    prev = cur;
  }
  throw NoMinimumFound("hand height reached no minimum within 10 s");
}

double swing_horizon(const RobotParams& params, const FullState& x0) {
  return 2.0 * freefall_time(params, x0);
}

}  // namespace brachiation
