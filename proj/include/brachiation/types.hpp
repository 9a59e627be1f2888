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

#ifndef BRACHIATION_TYPES_HPP
#define BRACHIATION_TYPES_HPP

#include <Eigen/Dense>
#include <optional>

namespace brachiation {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat22 = Eigen::Matrix2d;
using Mat23 = Eigen::Matrix<double, 2, 3>;
using Mat26 = Eigen::Matrix<double, 2, 6>;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat33 = Eigen::Matrix3d;
using Mat62 = Eigen::Matrix<double, 6, 2>;
using Mat66 = Eigen::Matrix<double, 6, 6>;

/// Joint configuration (q1, q2, q3) in radians.
///
/// q1: angle of the holding arm about the gripped bar (unactuated).
/// q2: offset angle between the holding arm axis and the body axis
///     (zero means fully extended).
/// q3: angle between the body axis and the swing arm, shifted so that the
///     home configuration (hanging with both arms folded together) is q = 0.
using JointConfig = Vec3;

/// Actuated joint torques (tau2, tau3) in N*m. Joint 1 is passive.
using ControlInput = Vec2;

/// Planar model of a two-arm, one-body brachiating robot.
///
/// The robot moves in the vertical X-Z plane. Both arms are identical.
/// COM offsets are measured from the proximal joint of each link in the
/// current kinematic chain (bar side for the holding arm, front shoulder
/// for the body). Inertias are about each link's COM, normal to the plane.
struct RobotParams {
  double arm_length = 0.0;       ///< m, > 0
  double arm_mass = 0.0;         ///< kg, > 0 (per arm)
  double arm_com_offset = 0.0;   ///< m, in [0, arm_length]
  double arm_inertia = 0.0;      ///< kg*m^2, >= 0
  double body_length = 0.0;      ///< m, >= 0 (zero = point hub)
  double body_mass = 0.0;        ///< kg, > 0
  double body_com_offset = 0.0;  ///< m, in [0, body_length]
  double body_inertia = 0.0;     ///< kg*m^2, >= 0
  double gravity = 9.81;         ///< m/s^2, > 0
  /// Optional actuator saturation applied per joint in simulation.
  /// Trajectory optimization runs unsaturated; the effort weight penalizes
  /// large torques instead.
  std::optional<double> torque_limit;

  /// Throws InvalidParams unless every invariant above holds and each
  /// joint sees strictly positive inertia (mass matrix positive definite).
  void validate() const;

  /// Reference hardware design used throughout the test suite: 0.3098 m,
  /// 0.384 kg arms (inertia 1.694e-3) and a 0.08182 m, 2.111 kg body
  /// (inertia 1.712e-2), COMs at mid-length.
  static RobotParams reference_robot();
};

/// Full dynamic state: joint angles and joint velocities.
struct FullState {
  Vec3 q = Vec3::Zero();
  Vec3 dq = Vec3::Zero();

  Vec6 vec() const {
    Vec6 x;
    x << q, dq;
    return x;
  }
  static FullState from_vec(const Vec6& x) {
    FullState s;
    s.q = x.head<3>();
    s.dq = x.tail<3>();
    return s;
  }
  bool all_finite() const { return q.allFinite() && dq.allFinite(); }
};

/// Input map from actuated torques to generalized forces: tau = B u.
inline Mat32 input_matrix() {
  Mat32 b;
  b << 0, 0, 1, 0, 0, 1;
  return b;
}

}  // namespace brachiation

#endif  // BRACHIATION_TYPES_HPP
