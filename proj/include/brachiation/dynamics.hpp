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

#ifndef BRACHIATION_DYNAMICS_HPP
#define BRACHIATION_DYNAMICS_HPP

#include "brachiation/types.hpp"

namespace brachiation {

// Rigid-body dynamics of the planar three-link chain
//
//   M(q) ddq + C(q, dq) dq + G(q) = B u + tau_ext
//
// rooted at the gripped bar. Kinematic convention: each link has an
// absolute angle measured from the downward vertical,
//
//   theta1 = q1, theta2 = q1 + q2, theta3 = q1 + q2 + q3 + pi,
//
// and a unit direction dir(theta) = (sin theta, -cos theta), so the home
// configuration q = 0 hangs with both arms folded together and the swing
// hand at (0, -body_length).

/// Joint-space inertia matrix. Symmetric positive definite for validated
/// parameters.
Mat33 mass_matrix(const RobotParams& params, const Vec3& q);

/// Coriolis/centrifugal matrix assembled from Christoffel symbols of
/// mass_matrix, so that dM/dt - 2C is skew-symmetric and C(q, 0) = 0.
Mat33 coriolis_matrix(const RobotParams& params, const Vec3& q,
                      const Vec3& dq);

/// Gravity torque vector G(q) = dV/dq. Zero at the home configuration.
Vec3 gravity_vector(const RobotParams& params, const Vec3& q);

/// Gravitational potential referenced to the home configuration q = 0.
double potential_energy(const RobotParams& params, const Vec3& q);

/// Joint accelerations ddq = M^-1 (B u + tau_ext - C dq - G).
///
/// Throws NonFiniteState on non-finite inputs, LinearSolveFailure if the
/// mass matrix cannot be factored.
Vec3 forward_dynamics(const RobotParams& params, const FullState& x,
                      const Vec2& u, const Vec3& tau_ext = Vec3::Zero());

/// Generalized force (3-vector) required to realize ddq at (q, dq).
Vec3 inverse_dynamics(const RobotParams& params, const Vec3& q,
                      const Vec3& dq, const Vec3& ddq);

/// Swing-hand position in the bar frame.
Vec2 fk_hand(const RobotParams& params, const Vec3& q);

/// All chain points in the bar frame. joint1 is the gripped bar itself.
struct ChainPoints {
  Vec2 joint1;
  Vec2 shoulder1;
  Vec2 shoulder2;
  Vec2 hand;
};
ChainPoints fk_all(const RobotParams& params, const Vec3& q);

/// Hand Jacobian J = d fk_hand / dq (2x3).
Mat23 jacobian_hand(const RobotParams& params, const Vec3& q);

/// Time derivative of the hand Jacobian along (q, dq).
Mat23 jacobian_dot(const RobotParams& params, const Vec3& q, const Vec3& dq);

/// Kinetic, potential and total mechanical energy. Potential is referenced
/// to q = 0, so the home configuration at rest has zero total energy.
struct EnergyBreakdown {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
};
EnergyBreakdown total_energy(const RobotParams& params, const FullState& x);

enum class IntegrationMethod { kEuler, kRk4 };

/// One explicit integration step of the full state under constant torque
/// and constant external generalized force.
FullState step(const RobotParams& params, const FullState& x, const Vec2& u,
               double dt, IntegrationMethod method,
               const Vec3& tau_ext = Vec3::Zero());

/// Jacobians A = dx'/dx, B = dx'/du of the Euler step x' = step(x, u, dt).
///
/// The position rows are exact by the Euler structure (I and dt*I); the
/// acceleration rows use central finite differences with step 1e-6.
struct DiscreteJacobians {
  Mat66 A;
  Mat62 B;
};
DiscreteJacobians linearize_discrete(const RobotParams& params,
                                     const FullState& x, const Vec2& u,
                                     double dt);

}  // namespace brachiation

#endif  // BRACHIATION_DYNAMICS_HPP
