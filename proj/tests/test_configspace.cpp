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

#include "brachiation/configspace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "brachiation/dynamics.hpp"
#include "brachiation/errors.hpp"
#include "testing_util.hpp"

namespace brachiation {
namespace {

RobotParams zero_body_robot() {
  RobotParams p = RobotParams::reference_robot();
  p.body_length = 0.0;
  p.body_com_offset = 0.0;
  p.body_inertia = 1e-4;
  return p;
}

TEST(ApproxCatch, EvaluatesTheClosedFormulas) {
  // Frozen values of the closed-form approximation (which ignores body
  // length): q1 = asin(|p|/2L) + atan(pz/px), q3 = asin(|p|/2L) - 2pi + q2.
  const Vec3 q = approx_catch_config(0.3, Vec2(0.4, 0.0), 0.0);
  EXPECT_NEAR(q[0], std::asin(0.4 / 0.6), 1e-12);
  EXPECT_NEAR(q[1], 0.0, 1e-15);
  EXPECT_NEAR(q[2], std::asin(0.4 / 0.6) - 2.0 * M_PI, 1e-12);

  const Vec3 q2 = approx_catch_config(0.3, Vec2(0.3, 0.1), 0.0);
  EXPECT_NEAR(q2[0], std::asin(std::sqrt(0.10) / 0.6) + std::atan(1.0 / 3.0),
              1e-12);

  // Offset angle passes straight through to q2 and shifts q3.
  const Vec3 q3 = approx_catch_config(0.3, Vec2(0.4, 0.0), 0.25);
  EXPECT_NEAR(q3[1], 0.25, 1e-15);
  EXPECT_NEAR(q3[2], q[2] + 0.25, 1e-12);
}

TEST(ApproxCatch, ShortGapLimitRecoversHome) {
  const Vec3 q = approx_catch_config(0.3, Vec2(1e-9, 0.0), 0.0);
  EXPECT_NEAR(q[0], 0.0, 1e-8);
  // q3 -> -2pi, the home configuration modulo a full turn.
  EXPECT_NEAR(std::remainder(q[2], 2.0 * M_PI), 0.0, 1e-8);
}

TEST(ApproxCatch, RejectsOutOfReachAndVerticalBearing) {
  EXPECT_THROW(approx_catch_config(0.3, Vec2(0.7, 0.0), 0.0), Unreachable);
  EXPECT_THROW(approx_catch_config(0.3, Vec2(0.0, -0.3), 0.0),
               DegenerateBearing);
}

TEST(ApproxCatch, IsDeterministic) {
  const Vec3 a = approx_catch_config(0.31, Vec2(0.35, 0.05), 0.1);
  const Vec3 b = approx_catch_config(0.31, Vec2(0.35, 0.05), 0.1);
  EXPECT_EQ(a, b);
}

TEST(ExactCatch, HomeAndExtendedInversions) {
  const RobotParams p = RobotParams::reference_robot();
  const Vec3 home = exact_catch_config(p, Vec2(0.0, -p.body_length), 0.0);
  EXPECT_LT(home.norm(), 1e-9);

  const Vec3 down = exact_catch_config(
      p, Vec2(0.0, -(2.0 * p.arm_length + p.body_length)), 0.0);
  EXPECT_NEAR(down[0], 0.0, 1e-9);
  EXPECT_NEAR(down[1], 0.0, 1e-15);
  EXPECT_NEAR(std::abs(down[2]), M_PI, 1e-9);
}

TEST(ExactCatch, ForwardKinematicsRoundTrip) {
  const RobotParams p = RobotParams::reference_robot();
  std::mt19937 gen(7u);
  std::uniform_real_distribution<double> radius(0.05, 0.66);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> offset(-0.5, 0.5);
  int accepted = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double rr = radius(gen), aa = angle(gen), q2 = offset(gen);
    const Vec2 target(rr * std::sin(aa), -rr * std::cos(aa));
    Vec3 q;
    try {
      q = exact_catch_config(p, target, q2);
    } catch (const Unreachable&) {
      continue;  // outside the annulus for this q2; not under test here
    }
    ++accepted;
    EXPECT_LT((fk_hand(p, q) - target).norm(), 1e-9);
    EXPECT_DOUBLE_EQ(q[1], q2);
  }
  EXPECT_GT(accepted, 300);
}

TEST(ExactCatch, PaperGapRoundTripAtTableScale) {
  const RobotParams p = RobotParams::reference_robot();
  const Vec2 target(0.4, 0.0);
  const Vec3 q = exact_catch_config(p, target, 0.0);
  EXPECT_LT((fk_hand(p, q) - target).norm(), 1e-9);
}

TEST(ExactCatch, InteriorArmAngleObeysTriangleLawAsBodyVanishes) {
  // With the body gone the chain is an isosceles two-link triangle whose
  // apex angle is 2 asin(|p| / 2L).
  const Vec2 target(0.4, 0.0);
  const double expected =
      2.0 * std::asin(target.norm() / (2.0 * 0.3098));
  double prev_err = 1.0;
  for (const double lb : {1e-2, 1e-3, 1e-4}) {
    RobotParams p = zero_body_robot();
    p.body_length = lb;
    p.body_com_offset = lb / 2.0;
    const Vec3 q = exact_catch_config(p, target, 0.0);
    const ChainPoints pts = fk_all(p, q);
    const Vec2 to_bar = (pts.joint1 - pts.shoulder1).normalized();
    const Vec2 to_hand = (pts.hand - pts.shoulder2).normalized();
    const double apex = std::acos(std::clamp(to_bar.dot(to_hand), -1.0, 1.0));
    const double err = std::abs(apex - expected);
    EXPECT_LT(err, prev_err);
    prev_err = err;
  }
  EXPECT_LT(prev_err, 1e-3);
}

TEST(ExactCatch, SelectsTheUnderswingBranch) {
  // The chosen elbow keeps the body below the bar line so the hand
  // approaches from underneath.
  const RobotParams p = RobotParams::reference_robot();
  for (const double px : {0.2, 0.3, 0.4, 0.5}) {
    const Vec3 q = exact_catch_config(p, Vec2(px, 0.0), 0.0);
    const ChainPoints pts = fk_all(p, q);
    EXPECT_LT(pts.shoulder1[1], 0.0);
    EXPECT_LT(pts.shoulder2[1], 0.0);
  }
}

TEST(ExactCatch, ReportsUnreachableTargets) {
  const RobotParams p = RobotParams::reference_robot();
  EXPECT_THROW(exact_catch_config(p, Vec2(0.8, 0.0), 0.0), Unreachable);
  EXPECT_THROW(exact_catch_config(p, Vec2(1e-6, 0.0), 0.0), Unreachable);
  EXPECT_THROW(exact_catch_config(p, Vec2(0.4, 0.0),
                                  std::numeric_limits<double>::quiet_NaN()),
               InvalidParams);
}

TEST(Endpoints, MirrorSymmetryAcrossTheBase) {
  // Symmetric rear/target bars give mirrored endpoint configurations for a
  // straight chain (q2 = 0), body length included.
  for (const RobotParams& p :
       {RobotParams::reference_robot(), zero_body_robot()}) {
    const SwingEndpoints ep =
        swing_endpoints_rel(p, Vec2(0.4, 0.0), Vec2(-0.4, 0.0), 0.0);
    EXPECT_NEAR(ep.q0[0], -ep.qT[0], 1e-9);
    EXPECT_NEAR(ep.q0[2], -ep.qT[2], 1e-9);
    EXPECT_LT((fk_hand(p, ep.qT) - Vec2(0.4, 0.0)).norm(), 1e-9);
    EXPECT_LT((fk_hand(p, ep.q0) - Vec2(-0.4, 0.0)).norm(), 1e-9);
  }
}

TEST(Endpoints, OffsetAngleAppearsInBothConfigs) {
  const RobotParams p = RobotParams::reference_robot();
  const SwingEndpoints ep =
      swing_endpoints_rel(p, Vec2(0.4, 0.0), Vec2(-0.4, 0.0), 0.3);
  EXPECT_DOUBLE_EQ(ep.q0[1], 0.3);
  EXPECT_DOUBLE_EQ(ep.qT[1], 0.3);
  EXPECT_DOUBLE_EQ(ep.offset_angle, 0.3);
  EXPECT_LT((fk_hand(p, ep.qT) - Vec2(0.4, 0.0)).norm(), 1e-9);
}

TEST(Endpoints, LayoutFormDefaultsRearToMirroredGap) {
  const RobotParams p = RobotParams::reference_robot();
  BarLayout layout;
  layout.bars = {Vec2(0.0, 0.0), Vec2(0.4, 0.0)};
  layout.base_index = 0;
  const SwingEndpoints from_layout = swing_endpoints(p, layout, 0.0);
  const SwingEndpoints direct =
      swing_endpoints_rel(p, Vec2(0.4, 0.0), Vec2(-0.4, 0.0), 0.0);
  EXPECT_EQ(from_layout.q0, direct.q0);
  EXPECT_EQ(from_layout.qT, direct.qT);
}

TEST(Endpoints, LayoutFormUsesTheActualRearBar) {
  const RobotParams p = RobotParams::reference_robot();
  BarLayout layout;
  layout.bars = {Vec2(-0.3, 0.0), Vec2(0.0, 0.0), Vec2(0.4, 0.0)};
  layout.base_index = 1;
  const SwingEndpoints ep = swing_endpoints(p, layout, 0.0);
  EXPECT_LT((fk_hand(p, ep.q0) - Vec2(-0.3, 0.0)).norm(), 1e-9);
  EXPECT_LT((fk_hand(p, ep.qT) - Vec2(0.4, 0.0)).norm(), 1e-9);
}

TEST(BarLayout, ValidatesGeometry) {
  const RobotParams p = RobotParams::reference_robot();
  BarLayout layout;
  layout.bars = {Vec2(0.0, 0.0)};
  EXPECT_THROW(layout.validate(p), InvalidParams);

  layout.bars = {Vec2(0.0, 0.0), Vec2(0.4, 0.0)};
  layout.base_index = 5;
  EXPECT_THROW(layout.validate(p), InvalidParams);

  layout.base_index = 0;
  EXPECT_NO_THROW(layout.validate(p));

  layout.bars = {Vec2(0.0, 0.0), Vec2(0.0, 0.0)};
  EXPECT_THROW(layout.validate(p), InvalidParams);

  // Spacing beyond the full chain reach can never be caught.
  layout.bars = {Vec2(0.0, 0.0), Vec2(0.75, 0.0)};
  EXPECT_THROW(layout.validate(p), InvalidParams);
}

}  // namespace
}  // namespace brachiation
