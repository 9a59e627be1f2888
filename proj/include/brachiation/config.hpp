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

#ifndef BRACHIATION_CONFIG_HPP
#define BRACHIATION_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "brachiation/configspace.hpp"
#include "brachiation/designlab.hpp"
#include "brachiation/simulator.hpp"
#include "brachiation/tracking.hpp"
#include "brachiation/types.hpp"

namespace brachiation {

/// Swing-optimization knobs as configured (problem geometry comes from the
/// robot and bars sections).
struct OptimizerConfig {
  Vec6 Q = (Vec6() << 0, 0, 0, 0.02, 0.02, 0.02).finished();
  Vec2 R = Vec2(0.3, 0.3);
  Vec6 Qf = (Vec6() << 6400, 6400, 6400, 1e-5, 1e-5, 1e-5).finished();
  int steps = 300;
  int max_iters = 100;
  double rel_tol = 1e-6;
  /// Fixed horizon in seconds; absent means twice the free-fall time.
  std::optional<double> horizon;
  /// Discretization for planning. RK4 keeps the reference consistent with
  /// the fine-step plant; Euler is the coarser single-slope update.
  IntegrationMethod integrator = IntegrationMethod::kRk4;
};

/// Sweep section of the config; combined with the robot and optimizer
/// sections into a designlab::SweepSpec by the sweep command.
struct SweepSection {
  SweepAxis axis = SweepAxis::kBodyLength;
  std::vector<double> values;
  std::vector<MassCase> cases;
  Vec2 gap = Vec2(0.6, 0.0);
};

/// Full run configuration. The JSON schema is strict: unknown keys are
/// rejected with the offending section and key named, and every module
/// invariant is enforced at load time.
struct RunConfig {
  RobotParams robot;
  BarLayout bars;
  OptimizerConfig optimizer;
  TrackerConfig tracker = TrackerConfig::defaults();
  SimOptions sim;
  double offset_angle = 0.0;
  int max_swings = -1;
  std::optional<SweepSection> sweep;
  void validate() const;
};

/// Parses a config document, applying dotted-path overrides such as
/// "robot.arm_mass=0.5" or "sim.disturbance={\"force\":[0,20],...}" first
/// (override values parse as JSON, falling back to a plain string).
/// Throws ConfigError with a field diagnostic on any problem.
RunConfig load_config_text(const std::string& text,
                           const std::vector<std::string>& overrides = {});

/// load_config_text over the contents of a file.
RunConfig load_config_file(const std::string& path,
                           const std::vector<std::string>& overrides = {});

}  // namespace brachiation

#endif  // BRACHIATION_CONFIG_HPP
