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

#ifndef BRACHIATION_CONFIGSPACE_HPP
#define BRACHIATION_CONFIGSPACE_HPP

#include <vector>

#include "brachiation/types.hpp"

namespace brachiation {

/// A ladder of bar positions in the world X-Z plane, ordered by X, plus the
/// index of the bar the holding hand currently grips.
struct BarLayout {
  std::vector<Vec2> bars;
  int base_index = 0;

  /// Throws InvalidParams unless there are at least two bars, base_index is
  /// in range, and consecutive spacing is positive and within the maximum
  /// reach 2*arm_length + body_length.
  void validate(const RobotParams& params) const;
};

/// Boundary configurations of one swing: q0 grips the rear bar with the
/// swing hand, qT grips the target bar. Velocities are zero by definition.
struct SwingEndpoints {
  Vec3 q0 = Vec3::Zero();
  Vec3 qT = Vec3::Zero();
  double offset_angle = 0.0;
};

/// Closed-form first-guess catch configuration from the bar bearing:
///
///   q1 = asin(|p| / (2 l)) + atan(pz / px)
///   q3 = asin(|p| / (2 l)) - 2 pi + q2
///
/// This expression ignores the body link; it is kept as a documented
/// approximation and exact_catch_config is authoritative. Throws
/// Unreachable when |p| > 2 l and DegenerateBearing when px = 0.
Vec3 approx_catch_config(double arm_length, const Vec2& p, double q2);

/// Configuration with the swing hand exactly at p (bar frame) for a fixed
/// offset angle q2: fk_hand(params, q) = p to residual < 1e-9.
///
/// Of the two elbow solutions the one whose shoulder pair hangs lower is
/// returned (the hand path swings under the bar); exact ties pick the
/// branch with the smaller |q3 - pi|. Angles are wrapped to (-pi, pi].
/// Throws Unreachable when |p| lies outside the reachable annulus.
Vec3 exact_catch_config(const RobotParams& params, const Vec2& p, double q2);

/// Swing endpoints for the gap ahead of layout.base_index. The rear bar is
/// the one behind the base; when the base is the first bar the rear grip
/// point is the mirror image of the target (a virtual rung one gap back).
SwingEndpoints swing_endpoints(const RobotParams& params,
                               const BarLayout& layout,
                               double offset_angle = 0.0);

/// Endpoints from bar positions given relative to the current base grip:
/// q0 reaches rear_rel, qT reaches target_rel, both at the offset angle.
SwingEndpoints swing_endpoints_rel(const RobotParams& params,
                                   const Vec2& target_rel,
                                   const Vec2& rear_rel,
                                   double offset_angle = 0.0);

}  // namespace brachiation

#endif  // BRACHIATION_CONFIGSPACE_HPP
