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

#ifndef BRACHIATION_TESTS_TESTING_UTIL_HPP
#define BRACHIATION_TESTS_TESTING_UTIL_HPP

#include <cmath>
#include <functional>
#include <random>

#include "brachiation/dynamics.hpp"
#include "brachiation/types.hpp"

namespace brachiation::testing {

inline std::mt19937& rng() {
  static std::mt19937 gen(20260816u);
  return gen;
}

inline Vec3 random_q() {
  std::uniform_real_distribution<double> d(-M_PI, M_PI);
  return Vec3(d(rng()), d(rng()), d(rng()));
}

inline Vec3 random_dq(double scale = 10.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return Vec3(d(rng()), d(rng()), d(rng()));
}

inline FullState random_state(double dq_scale = 10.0) {
  return FullState{random_q(), random_dq(dq_scale)};
}

inline Vec2 random_u(double scale = 5.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return Vec2(d(rng()), d(rng()));
}

/// Central-difference gradient of a scalar field on R^3.
inline Vec3 grad3(const std::function<double(const Vec3&)>& f, const Vec3& q,
                  double h = 1e-6) {
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    Vec3 qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    g[i] = (f(qp) - f(qm)) / (2.0 * h);
  }
  return g;
}

/// A heavier long-arm design used by the disturbance-style tests
/// (2 kg / 1 m arms, 5 kg / 0.15 m body, uniform-rod inertias).
inline RobotParams long_arm_robot() {
  RobotParams p;
  p.arm_length = 1.0;
  p.arm_mass = 2.0;
  p.arm_com_offset = 0.5;
  p.arm_inertia = 2.0 / 12.0;
  p.body_length = 0.15;
  p.body_mass = 5.0;
  p.body_com_offset = 0.075;
  p.body_inertia = 5.0 * 0.15 * 0.15 / 12.0;
  p.gravity = 9.81;
  return p;
}

// Solves for the base angle that puts the total center of mass below the
// pivot at the given elbow and shoulder angles, by bisecting the first
// gravity torque component over q1 in [-1.5, 1.5].
inline Vec3 balanced_pose(const RobotParams& params, double q2, double q3) {
  auto imbalance = [&](double q1) {
    return gravity_vector(params, Vec3(q1, q2, q3))[0];
  };
  double lo = -1.5;
  double hi = 1.5;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (imbalance(lo) * imbalance(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return Vec3(0.5 * (lo + hi), q2, q3);
}

}  // namespace brachiation::testing

#endif  // BRACHIATION_TESTS_TESTING_UTIL_HPP
