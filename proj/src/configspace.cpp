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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "brachiation/dynamics.hpp"
#include "brachiation/errors.hpp"

namespace brachiation {
namespace {

constexpr double kPi = std::numbers::pi;

// Wrap into (-pi, pi]; -pi maps to +pi.
double wrap_angle(double a) {
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w <= 0.0) w += 2.0 * kPi;
  return w - kPi;
}

Vec2 dir(double theta) { return {std::sin(theta), -std::cos(theta)}; }

// Bearing of a planar vector measured from the downward vertical, i.e. the
// beta with v = |v| * dir(beta).
double bearing(const Vec2& v) { return std::atan2(v.x(), -v.y()); }

}  // namespace

void BarLayout::validate(const RobotParams& params) const {
  if (bars.size() < 2)
    throw InvalidParams("bar layout needs at least two bars");
  if (base_index < 0 || base_index >= static_cast<int>(bars.size()))
    throw InvalidParams("base_index outside the bar list");
  const double reach = 2.0 * params.arm_length + params.body_length;
  for (std::size_t i = 0; i + 1 < bars.size(); ++i) {
    if (!bars[i].allFinite() || !bars[i + 1].allFinite())
      throw InvalidParams("bar positions must be finite");
    const double gap = (bars[i + 1] - bars[i]).norm();
    if (!(gap > 0.0))
      throw InvalidParams("consecutive bar spacing must be positive");
    if (!(gap < reach)) {
      std::ostringstream msg;
      msg << "bar spacing " << gap << " exceeds the reach " << reach;
      throw InvalidParams(msg.str());
    }
  }
}

Vec3 approx_catch_config(double arm_length, const Vec2& p, double q2) {
  const double pn = p.norm();
  if (pn > 2.0 * arm_length) {
    std::ostringstream msg;
    msg << "target at distance " << pn << " exceeds 2*arm_length = "
        << 2.0 * arm_length;
    throw Unreachable(msg.str());
  }
  if (p.x() == 0.0)
    throw DegenerateBearing("vertical bearing: atan(pz/px) undefined");
  const double half = std::asin(pn / (2.0 * arm_length));
  const double q1 = half + std::atan(p.y() / p.x());
  const double q3 = half - 2.0 * kPi + q2;
  return {q1, q2, q3};
}

Vec3 exact_catch_config(const RobotParams& params, const Vec2& p, double q2) {
  if (!p.allFinite() || !std::isfinite(q2))
    throw InvalidParams("catch target must be finite");
  const double l = params.arm_length, lb = params.body_length;

  // The holding arm and the body form a rigid compound once q2 is fixed:
  // shoulder2(theta1) = r * dir(theta1 + phi).
  const double r2 = l * l + lb * lb + 2.0 * l * lb * std::cos(q2);
  const double r = std::sqrt(std::max(r2, 0.0));
  const double lo = std::abs(r - l), hi = r + l;

  const double pn = p.norm();
  if (pn < lo || pn > hi) {
    std::ostringstream msg;
    msg << "target at distance " << pn << " outside the reachable interval ["
        << lo << ", " << hi << "] for offset angle " << q2;
    throw Unreachable(msg.str());
  }
  if (pn == 0.0 || r == 0.0)
    throw DegenerateBearing("catch bearing undefined (zero-length leg)");

  const double phi =
      std::atan2(lb * std::sin(q2), l + lb * std::cos(q2));
  const double beta = bearing(p);

  // Triangle with sides |p|, r, l: angle at the base between p and the
  // compound direction.
  const double c =
      std::clamp((pn * pn + r2 - l * l) / (2.0 * pn * r), -1.0, 1.0);
  const double gamma = std::acos(c);

  Vec3 best = Vec3::Zero();
  double best_s2z = 0.0;
  bool have = false;
  for (const double sign : {+1.0, -1.0}) {
    const double theta1 = beta - phi + sign * gamma;
    const Vec2 s2 = l * dir(theta1) + lb * dir(theta1 + q2);
    const double theta3 = bearing(p - s2);
    Vec3 q(wrap_angle(theta1), q2,
           wrap_angle(theta3 - theta1 - q2 - kPi));
    const double s2z = s2.y();
    constexpr double kTie = 1e-12;
    if (!have || s2z < best_s2z - kTie ||
        (std::abs(s2z - best_s2z) <= kTie &&
         std::abs(q[2] - kPi) < std::abs(best[2] - kPi))) {
      best = q;
      best_s2z = s2z;
      have = true;
    }
  }

  const double residual = (fk_hand(params, best) - p).norm();
  if (!(residual < 1e-9)) {
    std::ostringstream msg;
    msg << "catch configuration residual " << residual
        << " (degenerate geometry near the reach boundary)";
    throw Unreachable(msg.str());
  }
  return best;
}

SwingEndpoints swing_endpoints(const RobotParams& params,
                               const BarLayout& layout, double offset_angle) {
  layout.validate(params);
  const int base = layout.base_index;
  if (base + 1 >= static_cast<int>(layout.bars.size()))
    throw InvalidParams("no target bar ahead of the base");
  const Vec2 target_rel = layout.bars[base + 1] - layout.bars[base];
  const Vec2 rear_rel =
      base >= 1 ? Vec2(layout.bars[base - 1] - layout.bars[base])
                : Vec2(-target_rel);
  return swing_endpoints_rel(params, target_rel, rear_rel, offset_angle);
}

SwingEndpoints swing_endpoints_rel(const RobotParams& params,
                                   const Vec2& target_rel,
                                   const Vec2& rear_rel, double offset_angle) {
  SwingEndpoints ep;
  ep.q0 = exact_catch_config(params, rear_rel, offset_angle);
  ep.qT = exact_catch_config(params, target_rel, offset_angle);
  ep.offset_angle = offset_angle;
  return ep;
}

}  // namespace brachiation
