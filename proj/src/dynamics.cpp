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

#include "brachiation/dynamics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "brachiation/errors.hpp"

namespace brachiation {
namespace {

constexpr double kPi = std::numbers::pi;

// dtheta/dq for theta = (q1, q1+q2, q1+q2+q3 + pi).
const Mat33& chain_map() {
  static const Mat33 w = [] {
    Mat33 m;
    m << 1, 0, 0, 1, 1, 0, 1, 1, 1;
    return m;
  }();
  return w;
}

struct LinkAngles {
  double t1, t2, t3;
};

LinkAngles link_angles(const Vec3& q) {
  return {q[0], q[0] + q[1], q[0] + q[1] + q[2] + kPi};
}

Vec2 dir(double theta) { return {std::sin(theta), -std::cos(theta)}; }

// d dir / d theta.
Vec2 dir_tangent(double theta) { return {std::cos(theta), std::sin(theta)}; }

// First moments of mass about each absolute link angle:
//   m1 = arm COM + everything carried by link 1,
//   m2 = body COM + the swing arm carried by the body,
//   m3 = swing-arm COM about its own shoulder.
struct MassMoments {
  double m1, m2, m3;
};

MassMoments mass_moments(const RobotParams& p) {
  return {p.arm_mass * p.arm_com_offset +
              (p.body_mass + p.arm_mass) * p.arm_length,
          p.body_mass * p.body_com_offset + p.arm_mass * p.body_length,
          p.arm_mass * p.arm_com_offset};
}

// Inertia matrix in absolute link angles; mass_matrix conjugates it by the
// chain map. Off-diagonal couplings depend on q only through relative
// angles: theta1-theta2 = -q2, theta1-theta3 = -(q2+q3+pi),
// theta2-theta3 = -(q3+pi).
Mat33 link_inertia(const RobotParams& p, const Vec3& q) {
  const double l = p.arm_length, lb = p.body_length;
  const double ca = p.arm_com_offset, cb = p.body_com_offset;
  const double ma = p.arm_mass, mb = p.body_mass;

  const double d1 = p.arm_inertia + ma * ca * ca + (mb + ma) * l * l;
  const double d2 = p.body_inertia + mb * cb * cb + ma * lb * lb;
  const double d3 = p.arm_inertia + ma * ca * ca;

  const double o12 = l * (mb * cb + ma * lb) * std::cos(q[1]);
  const double o13 = -ma * l * ca * std::cos(q[1] + q[2]);
  const double o23 = -ma * lb * ca * std::cos(q[2]);

  Mat33 m;
  m << d1, o12, o13, o12, d2, o23, o13, o23, d3;
  return m;
}

// Analytic dM/dq_k, k = 0..2, in joint coordinates.
std::array<Mat33, 3> mass_matrix_partials(const RobotParams& p,
                                          const Vec3& q) {
  const double l = p.arm_length, lb = p.body_length;
  const double ca = p.arm_com_offset, cb = p.body_com_offset;
  const double ma = p.arm_mass, mb = p.body_mass;

  const double a12 = -l * (mb * cb + ma * lb) * std::sin(q[1]);
  const double a13 = ma * l * ca * std::sin(q[1] + q[2]);
  const double a23 = ma * lb * ca * std::sin(q[2]);

  Mat33 d2 = Mat33::Zero();
  d2(0, 1) = d2(1, 0) = a12;
  d2(0, 2) = d2(2, 0) = a13;

  Mat33 d3 = Mat33::Zero();
  d3(0, 2) = d3(2, 0) = a13;
  d3(1, 2) = d3(2, 1) = a23;

  const Mat33& w = chain_map();
  return {Mat33::Zero(), w.transpose() * d2 * w, w.transpose() * d3 * w};
}

}  // namespace

void RobotParams::validate() const {
  std::ostringstream why;
  if (!(arm_length > 0)) why << "arm_length must be > 0; ";
  if (!(arm_mass > 0)) why << "arm_mass must be > 0; ";
  if (!(body_mass > 0)) why << "body_mass must be > 0; ";
  if (!(body_length >= 0)) why << "body_length must be >= 0; ";
  if (!(arm_inertia >= 0)) why << "arm_inertia must be >= 0; ";
  if (!(body_inertia >= 0)) why << "body_inertia must be >= 0; ";
  if (!(arm_com_offset >= 0 && arm_com_offset <= arm_length))
    why << "arm_com_offset must lie in [0, arm_length]; ";
  if (!(body_com_offset >= 0 && body_com_offset <= body_length))
    why << "body_com_offset must lie in [0, body_length]; ";
  if (!(gravity > 0)) why << "gravity must be > 0; ";
  if (torque_limit && !(*torque_limit > 0))
    why << "torque_limit must be > 0 when set; ";
  // Every joint must see strictly positive inertia or the mass matrix
  // degenerates (joint 1 always does: the arm carries the body).
  if (!(arm_inertia + arm_mass * arm_com_offset * arm_com_offset > 0))
    why << "swing arm needs rotational inertia "
           "(arm_inertia + arm_mass*arm_com_offset^2 > 0); ";
  if (!(body_inertia + body_mass * body_com_offset * body_com_offset +
            arm_mass * body_length * body_length >
        0))
    why << "body joint needs rotational inertia "
           "(body_inertia + body_mass*body_com_offset^2 "
           "+ arm_mass*body_length^2 > 0); ";
  const std::string msg = why.str();
  if (!msg.empty()) throw InvalidParams("invalid robot parameters: " + msg);
}

RobotParams RobotParams::reference_robot() {
  RobotParams p;
  p.arm_length = 0.3098;
  p.arm_mass = 0.384;
  p.arm_com_offset = p.arm_length / 2.0;
  p.arm_inertia = 0.001694;
  p.body_length = 0.08182;
  p.body_mass = 2.111;
  p.body_com_offset = p.body_length / 2.0;
  p.body_inertia = 0.01712;
  p.gravity = 9.81;
  return p;
}

Mat33 mass_matrix(const RobotParams& params, const Vec3& q) {
  const Mat33& w = chain_map();
  return w.transpose() * link_inertia(params, q) * w;
}

Mat33 coriolis_matrix(const RobotParams& params, const Vec3& q,
                      const Vec3& dq) {
  const auto dm = mass_matrix_partials(params, q);
  Mat33 c = Mat33::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) {
        v += 0.5 * (dm[k](i, j) + dm[j](i, k) - dm[i](j, k)) * dq[k];
      }
      c(i, j) = v;
    }
  }
  return c;
}

Vec3 gravity_vector(const RobotParams& params, const Vec3& q) {
  const auto mm = mass_moments(params);
  const auto a = link_angles(q);
  const double g = params.gravity;
  const Vec3 dv_dtheta(g * mm.m1 * std::sin(a.t1), g * mm.m2 * std::sin(a.t2),
                       g * mm.m3 * std::sin(a.t3));
  return chain_map().transpose() * dv_dtheta;
}

double potential_energy(const RobotParams& params, const Vec3& q) {
  const auto mm = mass_moments(params);
  const auto a = link_angles(q);
  const double g = params.gravity;
  // V(q) - V(0); at home cos(theta) = (1, 1, -1).
  return g * (mm.m1 * (1.0 - std::cos(a.t1)) + mm.m2 * (1.0 - std::cos(a.t2)) +
              mm.m3 * (-1.0 - std::cos(a.t3)));
}

Vec3 forward_dynamics(const RobotParams& params, const FullState& x,
                      const Vec2& u, const Vec3& tau_ext) {
  if (!x.all_finite() || !u.allFinite() || !tau_ext.allFinite())
    throw NonFiniteState("forward_dynamics: non-finite input");
  const Mat33 m = mass_matrix(params, x.q);
  const Vec3 rhs = input_matrix() * u + tau_ext -
                   coriolis_matrix(params, x.q, x.dq) * x.dq -
                   gravity_vector(params, x.q);
  Eigen::LDLT<Mat33> ldlt(m);
  if (ldlt.info() != Eigen::Success)
    throw LinearSolveFailure("forward_dynamics: mass matrix factorization");
  const Vec3 ddq = ldlt.solve(rhs);
  if (!ddq.allFinite())
    throw LinearSolveFailure("forward_dynamics: singular mass matrix");
  return ddq;
}

Vec3 inverse_dynamics(const RobotParams& params, const Vec3& q,
                      const Vec3& dq, const Vec3& ddq) {
  return mass_matrix(params, q) * ddq + coriolis_matrix(params, q, dq) * dq +
         gravity_vector(params, q);
}

Vec2 fk_hand(const RobotParams& params, const Vec3& q) {
  const auto a = link_angles(q);
  return params.arm_length * dir(a.t1) + params.body_length * dir(a.t2) +
         params.arm_length * dir(a.t3);
}

ChainPoints fk_all(const RobotParams& params, const Vec3& q) {
  const auto a = link_angles(q);
  ChainPoints pts;
  pts.joint1 = Vec2::Zero();
  pts.shoulder1 = params.arm_length * dir(a.t1);
  pts.shoulder2 = pts.shoulder1 + params.body_length * dir(a.t2);
  pts.hand = pts.shoulder2 + params.arm_length * dir(a.t3);
  return pts;
}

Mat23 jacobian_hand(const RobotParams& params, const Vec3& q) {
  const auto a = link_angles(q);
  Mat23 jt;
  jt.col(0) = params.arm_length * dir_tangent(a.t1);
  jt.col(1) = params.body_length * dir_tangent(a.t2);
  jt.col(2) = params.arm_length * dir_tangent(a.t3);
  return jt * chain_map();
}

Mat23 jacobian_dot(const RobotParams& params, const Vec3& q, const Vec3& dq) {
  const auto a = link_angles(q);
  const Vec3 dtheta = chain_map() * dq;
  // d/dt dir_tangent(theta) = -dir(theta) * dtheta.
  Mat23 jt;
  jt.col(0) = -params.arm_length * dtheta[0] * dir(a.t1);
  jt.col(1) = -params.body_length * dtheta[1] * dir(a.t2);
  jt.col(2) = -params.arm_length * dtheta[2] * dir(a.t3);
  return jt * chain_map();
}

EnergyBreakdown total_energy(const RobotParams& params, const FullState& x) {
  EnergyBreakdown e;
  e.kinetic = 0.5 * x.dq.dot(mass_matrix(params, x.q) * x.dq);
  e.potential = potential_energy(params, x.q);
  e.total = e.kinetic + e.potential;
  return e;
}

FullState step(const RobotParams& params, const FullState& x, const Vec2& u,
               double dt, IntegrationMethod method, const Vec3& tau_ext) {
  const auto f = [&](const FullState& s) -> Vec6 {
    Vec6 dx;
    dx << s.dq, forward_dynamics(params, s, u, tau_ext);
    return dx;
  };
  FullState out;
  if (method == IntegrationMethod::kEuler) {
    out = FullState::from_vec(x.vec() + dt * f(x));
  } else {
    const Vec6 x0 = x.vec();
    const Vec6 k1 = f(x);
    const Vec6 k2 = f(FullState::from_vec(x0 + 0.5 * dt * k1));
    const Vec6 k3 = f(FullState::from_vec(x0 + 0.5 * dt * k2));
    const Vec6 k4 = f(FullState::from_vec(x0 + dt * k3));
    out = FullState::from_vec(x0 + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4));
  }
  if (!out.all_finite()) throw NonFiniteState("step: non-finite result");
  return out;
}

DiscreteJacobians linearize_discrete(const RobotParams& params,
                                     const FullState& x, const Vec2& u,
                                     double dt) {
  constexpr double kH = 1e-6;
  DiscreteJacobians jac;
  jac.A.setZero();
  jac.B.setZero();
  jac.A.topLeftCorner<3, 3>().setIdentity();
  jac.A.topRightCorner<3, 3>() = dt * Mat33::Identity();
  jac.A.bottomRightCorner<3, 3>().setIdentity();

  const Vec6 x0 = x.vec();
  for (int j = 0; j < 6; ++j) {
    Vec6 xp = x0, xm = x0;
    xp[j] += kH;
    xm[j] -= kH;
    const Vec3 dp = forward_dynamics(params, FullState::from_vec(xp), u);
    const Vec3 dm = forward_dynamics(params, FullState::from_vec(xm), u);
    jac.A.block<3, 1>(3, j) += dt * (dp - dm) / (2.0 * kH);
  }
  for (int j = 0; j < 2; ++j) {
    Vec2 up = u, um = u;
    up[j] += kH;
    um[j] -= kH;
    const Vec3 dp = forward_dynamics(params, x, up);
    const Vec3 dm = forward_dynamics(params, x, um);
    jac.B.block<3, 1>(3, j) = dt * (dp - dm) / (2.0 * kH);
  }
  return jac;
}

}  // namespace brachiation
