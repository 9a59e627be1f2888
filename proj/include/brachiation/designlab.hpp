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

#ifndef BRACHIATION_DESIGNLAB_HPP
#define BRACHIATION_DESIGNLAB_HPP

#include <string>
#include <vector>

#include "brachiation/types.hpp"

namespace brachiation {

enum class SweepAxis { kBodyLength, kArmMassFraction };

/// One mass distribution: body mass plus per-arm mass (totals may differ
/// between cases; they are reported, not renormalized).
struct MassCase {
  std::string name;
  double body_mass = 0.0;
  double arm_mass = 0.0;
};

/// A design study: sweep one geometric axis, solve the swing optimization
/// at every point, record the final cost.
struct SweepSpec {
  RobotParams base;
  SweepAxis axis = SweepAxis::kBodyLength;
  std::vector<double> values;   ///< strictly increasing axis samples
  std::vector<MassCase> cases;  ///< body-length axis only
  Vec2 gap = Vec2(0.6, 0.0);    ///< target bar relative to the pivot
  double offset_angle = 0.0;
  Vec6 Q = Vec6::Zero();
  Vec2 R = Vec2(0.3, 0.3);
  Vec6 Qf = Vec6::Zero();
  int steps = 300;  ///< horizon knots; dt = T / steps
  int max_iters = 100;
  double rel_tol = 1e-6;
  void validate() const;
};

struct SweepRecord {
  SweepAxis axis = SweepAxis::kBodyLength;
  double value = 0.0;
  std::string case_name;
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;
  double terminal_hand_error = 0.0;
};

/// Robot at one sweep point. Body-length axis: sets Lb (COM at half
/// length) and the case masses, scaling each inertia from the base by the
/// uniform-rod law (mass ratio times squared length ratio); a zero-length
/// body keeps a small hub inertia so the mass matrix stays positive
/// definite. Arm-mass-fraction axis: splits the base total mass as
/// arm_mass = value * total per arm, inertias scaled by mass ratio.
/// case_index -1 keeps the base masses.
RobotParams derive_params(const SweepSpec& spec, double value, int case_index);

/// Solves every sweep point (horizon 2x free-fall time each) and returns
/// records ordered by (case, value). Points run in parallel; BRACHIATE_THREADS
/// caps the worker count. A point that throws is recorded as not converged
/// with NaN cost.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

}  // namespace brachiation

#endif  // BRACHIATION_DESIGNLAB_HPP
