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

#include "brachiation/tracking.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "brachiation/dynamics.hpp"
#include "brachiation/errors.hpp"

namespace brachiation {

void PidParams::validate() const {
  if (kp < 0.0 || ki < 0.0 || kd < 0.0)
    throw InvalidParams("PID gains must be non-negative");
  if (!(integral_limit > 0.0))
    throw InvalidParams("integral_limit must be positive");
  if (output_limit && !(*output_limit > 0.0))
    throw InvalidParams("output_limit must be positive when set");
}

double pid_step(const PidParams& params, PidState& state, double error,
                double dt) {
  if (!(dt > 0.0)) throw InvalidParams("pid_step needs dt > 0");
  state.integral = std::clamp(state.integral + error * dt,
                              -params.integral_limit, params.integral_limit);
  const double derivative = (error - state.prev_error) / dt;
  state.prev_error = error;
  double out = params.kp * error + params.ki * state.integral +
               params.kd * derivative;
  if (params.output_limit)
    out = std::clamp(out, -*params.output_limit, *params.output_limit);
  return out;
}

void TrackerConfig::validate() const {
  for (const auto& p : pos_pid) p.validate();
  for (const auto& p : vel_pid) p.validate();
  if (alpha < 0.0) throw InvalidParams("alpha must be non-negative");
  if (!(kp_task.array() > 0.0).all() || !(kd_task.array() > 0.0).all())
    throw InvalidParams("task gains must be positive");
  if (!(pinv_tolerance > 0.0))
    throw InvalidParams("pinv_tolerance must be positive");
  if (!(control_dt > 0.0)) throw InvalidParams("control_dt must be positive");
}

TrackerConfig TrackerConfig::defaults() {
  TrackerConfig cfg;
  for (auto& p : cfg.pos_pid) {
    p.kp = 20.0;
    p.ki = 2.0;
    p.kd = 0.0;
    p.integral_limit = 5.0;
  }
  for (auto& p : cfg.vel_pid) {
    p.kp = 2.0;
    p.ki = 0.5;
    p.kd = 0.0;
    p.integral_limit = 5.0;
  }
  return cfg;
}

void TrackerState::reset() {
  pos = {};
  vel = {};
}

ReferenceSignal::ReferenceSignal(const RobotParams& params,
                                 const Trajectory& traj) {
  params.validate();
  const std::size_t n = traj.times.size();
  if (n < 2 || traj.states.size() != n)
    throw InvalidParams("reference needs at least two trajectory knots");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(traj.times[i + 1] > traj.times[i]))
      throw InvalidParams("trajectory knot times must strictly increase");
  }
  params_ = params;
  times_ = traj.times;
  q_.resize(n);
  dq_.resize(n);
  ddp_.resize(n);
  std::vector<Vec2> dp(n);
  for (std::size_t i = 0; i < n; ++i) {
    q_[i] = traj.states[i].head<3>();
    dq_[i] = traj.states[i].tail<3>();
    dp[i] = jacobian_hand(params_, q_[i]) * dq_[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    ddp_[i] = (dp[hi] - dp[lo]) / (times_[hi] - times_[lo]);
  }
}

ReferenceSignal ReferenceSignal::constant(const RobotParams& params,
                                          const Vec3& q_hold,
                                          double duration) {
  params.validate();
  if (!(duration > 0.0))
    throw InvalidParams("constant reference needs duration > 0");
  ReferenceSignal ref;
  ref.params_ = params;
  ref.times_ = {0.0, duration};
  ref.q_ = {q_hold, q_hold};
  ref.dq_ = {Vec3::Zero(), Vec3::Zero()};
  ref.ddp_ = {Vec2::Zero(), Vec2::Zero()};
  return ref;
}

ReferencePoint ReferenceSignal::at(double t) const {
  constexpr double kSlack = 1e-9;
  if (t < -kSlack || t > times_.back() + kSlack) {
    std::ostringstream msg;
    msg << "reference time " << t << " outside [0, " << times_.back() << "]";
    throw OutOfRange(msg.str());
  }
  return sample(std::clamp(t, 0.0, times_.back()));
}

ReferencePoint ReferenceSignal::clamped(double t) const {
  return sample(std::clamp(t, 0.0, times_.back()));
}

ReferencePoint ReferenceSignal::sample(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t i = it == times_.begin()
                      ? 0
                      : static_cast<std::size_t>(it - times_.begin()) - 1;
  i = std::min(i, times_.size() - 2);
  const double span = times_[i + 1] - times_[i];
  const double s = (t - times_[i]) / span;

  ReferencePoint out;
  out.t = t;
  out.q = (1.0 - s) * q_[i] + s * q_[i + 1];
  out.dq = (1.0 - s) * dq_[i] + s * dq_[i + 1];
  out.ddp = (1.0 - s) * ddp_[i] + s * ddp_[i + 1];
  out.p = fk_hand(params_, out.q);
  out.dp = jacobian_hand(params_, out.q) * out.dq;
  return out;
}

ReferenceSignal build_reference(const RobotParams& params,
                                const Trajectory& traj) {
  return ReferenceSignal(params, traj);
}

Vec2 u_config(const TrackerConfig& cfg, TrackerState& state, const Vec3& q_d,
              const Vec3& dq_d, const Vec3& q, const Vec3& dq, double dt) {
  Vec2 u = Vec2::Zero();
  for (int j = 0; j < 2; ++j) {
    const int joint = j + 1;  // joints 2 and 3
    const double vel_cmd =
        pid_step(cfg.pos_pid[j], state.pos[j], q_d[joint] - q[joint], dt) +
        dq_d[joint];
    u[j] = pid_step(cfg.vel_pid[j], state.vel[j], vel_cmd - dq[joint], dt);
  }
  return u;
}

TaskResult u_task(const RobotParams& params, const TrackerConfig& cfg,
                  const ReferencePoint& ref, const Vec3& q, const Vec3& dq) {
  const Mat33 m = mass_matrix(params, q);
  const auto ldlt = m.ldlt();
  if (ldlt.info() != Eigen::Success)
    throw LinearSolveFailure("mass matrix factorization failed");

  const Mat23 jac = jacobian_hand(params, q);
  const Vec3 bias = coriolis_matrix(params, q, dq) * dq +
                    gravity_vector(params, q);
  const Mat22 a = -jac * ldlt.solve(Mat32(input_matrix()));

  const Vec2 y = ref.p - fk_hand(params, q);
  const Vec2 dy = ref.dp - jac * dq;
  const Vec2 v = -(cfg.kp_task.asDiagonal() * y) -
                 (cfg.kd_task.asDiagonal() * dy);
  const Vec2 rhs = v - ref.ddp - jac * ldlt.solve(bias) +
                   jacobian_dot(params, q, dq) * dq;

  Eigen::JacobiSVD<Mat22> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec2 sigma = svd.singularValues();
  const double cutoff = cfg.pinv_tolerance * sigma(0);

  TaskResult out;
  Vec2 inv = Vec2::Zero();
  for (int i = 0; i < 2; ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) {
      inv(i) = 1.0 / sigma(i);
    } else {
      out.singular = true;
    }
  }
  out.u = svd.matrixV() * (inv.asDiagonal() * (svd.matrixU().transpose() * rhs));
  return out;
}

ControlOutput control(const RobotParams& params, const TrackerConfig& cfg,
                      TrackerState& state, const ReferencePoint& ref,
                      const FullState& x) {
  ControlOutput out;
  out.u_config = u_config(cfg, state, ref.q, ref.dq, x.q, x.dq, cfg.control_dt);
  const TaskResult task = u_task(params, cfg, ref, x.q, x.dq);
  out.u_task = task.u;
  out.singular = task.singular;
  out.y = ref.p - fk_hand(params, x.q);
  out.dy = ref.dp - jacobian_hand(params, x.q) * x.dq;
  out.u = out.u_config + cfg.alpha * out.u_task;
  if (params.torque_limit) {
    out.u = out.u.cwiseMax(-*params.torque_limit).cwiseMin(*params.torque_limit);
  }
  return out;
}

}  // namespace brachiation
