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

#ifndef BRACHIATION_TRACKING_HPP
#define BRACHIATION_TRACKING_HPP

#include <array>
#include <optional>
#include <vector>

#include "brachiation/trajopt.hpp"
#include "brachiation/types.hpp"

namespace brachiation {

/// Positional PID gains with integral clamping and an optional output clamp.
struct PidParams {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral_limit = 10.0;
  std::optional<double> output_limit;
  void validate() const;
};

/// Mutable per-loop PID memory: clamped integral and previous error.
struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
};

/// One PID update:
///   out = kp*e + ki*clamp(integral + e*dt) + kd*(e - prev)/dt
/// The derivative acts on the error; the integral clamps at
/// +-integral_limit (anti-windup); the output clamps when a limit is set.
double pid_step(const PidParams& params, PidState& state, double error,
                double dt);

/// Tracker settings: per-joint cascaded PID (joints 2 and 3), the
/// task-space blend alpha, and the error-dynamics gains of the
/// input-output linearizing term (diagonal entries of Kp, Kd).
struct TrackerConfig {
  std::array<PidParams, 2> pos_pid;  ///< outer loop, joints 2 and 3
  std::array<PidParams, 2> vel_pid;  ///< inner loop, joints 2 and 3
  double alpha = 1.0;                ///< u = u_config + alpha*u_task
  Vec2 kp_task = Vec2(100.0, 100.0);
  Vec2 kd_task = Vec2(20.0, 20.0);
  double pinv_tolerance = 1e-6;  ///< singular values below tol*sigma_max drop
  double control_dt = 1e-3;
  void validate() const;
  /// Gains tuned on the nominal reference swing (see the default config).
  static TrackerConfig defaults();
};

/// PID memories for the two cascades.
struct TrackerState {
  std::array<PidState, 2> pos;
  std::array<PidState, 2> vel;
  void reset();
};

/// Sampled reference: joint targets plus the hand path and its derivatives.
struct ReferencePoint {
  double t = 0.0;
  Vec3 q = Vec3::Zero();
  Vec3 dq = Vec3::Zero();
  Vec2 p = Vec2::Zero();
  Vec2 dp = Vec2::Zero();
  Vec2 ddp = Vec2::Zero();
};

/// Piecewise-linear reference over [0, duration] built from trajectory
/// knots. q and dq interpolate linearly; p and dp are recomputed from the
/// interpolated joints (so p = fk_hand(q) and dp = J(q)*dq hold exactly at
/// every query); ddp interpolates knot-level differences of J*dq.
class ReferenceSignal {
 public:
  ReferenceSignal(const RobotParams& params, const Trajectory& traj);

  /// Constant hold at q_hold with zero derivatives.
  static ReferenceSignal constant(const RobotParams& params, const Vec3& q_hold,
                                  double duration);

  /// Throws OutOfRange outside [0, duration] (1e-9 slack).
  ReferencePoint at(double t) const;
  /// Clamps t into [0, duration] and samples.
  ReferencePoint clamped(double t) const;
  double duration() const { return times_.back(); }

 private:
  ReferenceSignal() = default;
  ReferencePoint sample(double t) const;

  RobotParams params_;
  std::vector<double> times_;
  std::vector<Vec3> q_;
  std::vector<Vec3> dq_;
  std::vector<Vec2> ddp_;
};

/// Builds the tracking reference from an optimized trajectory.
ReferenceSignal build_reference(const RobotParams& params,
                                const Trajectory& traj);

/// Configuration-space term: for each actuated joint, an outer position PID
/// commands a velocity correction that is added to the reference velocity
/// and closed by an inner velocity PID. The unactuated joint gets nothing.
Vec2 u_config(const TrackerConfig& cfg, TrackerState& state, const Vec3& q_d,
              const Vec3& dq_d, const Vec3& q, const Vec3& dq, double dt);

struct TaskResult {
  Vec2 u = Vec2::Zero();
  bool singular = false;  ///< a pseudo-inverse direction was truncated
};

/// Task-space term: input-output linearization of the hand position. With
/// y = p_d - fk_hand(q):
///
///   u_task = pinv(-J M^-1 B) (v - ddp_d - J M^-1 (C dq + G) + Jdot dq)
///   v = -Kp y - Kd dy
///
/// which renders ddy = v on the nominal model. Near a singular hand
/// Jacobian the pseudo-inverse drops the deficient direction and sets the
/// singular flag instead of failing.
TaskResult u_task(const RobotParams& params, const TrackerConfig& cfg,
                  const ReferencePoint& ref, const Vec3& q, const Vec3& dq);

/// Combined controller sample plus telemetry terms.
struct ControlOutput {
  Vec2 u = Vec2::Zero();
  Vec2 u_config = Vec2::Zero();
  Vec2 u_task = Vec2::Zero();
  Vec2 y = Vec2::Zero();
  Vec2 dy = Vec2::Zero();
  bool singular = false;
};

/// u = u_config + alpha*u_task, saturated at params.torque_limit when set.
ControlOutput control(const RobotParams& params, const TrackerConfig& cfg,
                      TrackerState& state, const ReferencePoint& ref,
                      const FullState& x);

}  // namespace brachiation

#endif  // BRACHIATION_TRACKING_HPP
