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

#ifndef BRACHIATION_SIMULATOR_HPP
#define BRACHIATION_SIMULATOR_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "brachiation/configspace.hpp"
#include "brachiation/tracking.hpp"
#include "brachiation/trajopt.hpp"
#include "brachiation/types.hpp"

namespace brachiation {

/// Constant world-frame force applied at the hand while t is inside
/// [t_start, t_end), mapped to joint torques via J(q)^T at the plant rate.
struct DisturbanceSpec {
  Vec2 force = Vec2::Zero();
  double t_start = 0.0;
  double t_end = 0.0;
  void validate() const;
};

struct SimOptions {
  double plant_dt = 1e-4;  ///< RK4 plant step; control_dt must be a multiple
  double catch_tolerance = 0.03;
  /// Record one telemetry row per plant substep instead of per control
  /// sample (used to inspect the zero-order hold).
  bool telemetry_at_plant_rate = false;
  std::optional<DisturbanceSpec> disturbance;
  void validate() const;
};

/// One telemetry sample. Rows are recorded at the control rate (or plant
/// rate on request) plus a final state-only row where has_control is false.
struct TelemetryRow {
  double t = 0.0;
  Vec3 q = Vec3::Zero();
  Vec3 dq = Vec3::Zero();
  Vec2 u = Vec2::Zero();
  Vec2 u_config = Vec2::Zero();
  Vec2 u_task = Vec2::Zero();
  Vec2 y = Vec2::Zero();   ///< hand tracking error p_d - p
  Vec2 dy = Vec2::Zero();
  bool singular = false;
  bool has_control = true;
};

struct ExecutedTrajectory {
  std::vector<TelemetryRow> rows;
};

/// Closed-loop swing record: final plant state, hand tracking-error
/// metrics, catch result, and an energy audit of the run.
struct SwingOutcome {
  FullState final_state;
  Vec2 catch_position = Vec2::Zero();  ///< hand at T in the base frame
  double final_ee_error = 0.0;         ///< |y(T)|
  double max_ee_error = 0.0;           ///< max |y| over the run
  bool caught = false;
  double control_work = 0.0;      ///< integral of dq . B u
  double disturbance_work = 0.0;  ///< integral of dq . tau_ext
  double energy_drift = 0.0;      ///< |dE - total work|, joules
  ExecutedTrajectory telemetry;
};

/// Simulates one swing: RK4 plant at options.plant_dt, controller sampled
/// and zero-order-held every tracker.control_dt, optional hand disturbance.
/// The horizon is the reference duration snapped to the nearest control
/// sample. Catch is evaluated at the final time against target_rel.
/// Throws NonFiniteState (annotated with the failure time) on blow-up.
SwingOutcome simulate_swing(const RobotParams& params,
                            const TrackerConfig& tracker,
                            const ReferenceSignal& ref, const FullState& x0,
                            const Vec2& target_rel, const SimOptions& options);

/// True when the hand lands within tol of the target (closed boundary).
bool catch_check(const RobotParams& params, const Vec3& q_final,
                 const Vec2& target_rel, double tol = 0.03);

enum class Hand { kLeft, kRight };

/// Bookkeeping frame of the current cycle: which bar is held, which hand
/// swings, and the world position of the pivot. The world transform is a
/// pure translation; mirrored stays false because reversing a symmetric
/// chain needs no reflection.
struct CycleFrame {
  int base_bar = 0;
  Hand swing_hand = Hand::kRight;
  Vec2 base_position = Vec2::Zero();
  bool mirrored = false;

  Vec2 to_world(const Vec2& p_base) const { return base_position + p_base; }
  Vec2 to_base(const Vec2& p_world) const { return p_world - base_position; }
};

/// Re-expresses the state after a catch with the chain reversed: the
/// formerly swinging arm becomes the pendulum root. The new frame is
/// anchored at the actual hand position, so world positions of every joint
/// are preserved exactly (the caller may then snap the pivot to the bar).
/// Throws NotCaught unless the hand is within tol of caught_bar_world.
std::pair<FullState, CycleFrame> swap_roles(const RobotParams& params,
                                            const FullState& x_T,
                                            const CycleFrame& frame,
                                            const Vec2& caught_bar_world,
                                            int caught_bar_index, double tol);

/// Produces the swing trajectory for one gap, given the target and rear bar
/// positions relative to the current pivot. Implementations may cache.
using TrajectorySource = std::function<Trajectory(
    const RobotParams&, const Vec2& target_rel, const Vec2& rear_rel,
    double offset_angle)>;

/// Swing-optimization settings for the default trajectory source.
struct IlqrSourceSettings {
  Vec6 Q = Vec6::Zero();
  Vec2 R = Vec2(0.3, 0.3);
  Vec6 Qf = Vec6::Zero();
  int steps = 300;  ///< knots per swing; dt = horizon / steps
  int max_iters = 100;
  double rel_tol = 1e-6;
  /// Fixed horizon; when absent the horizon is twice the free-fall time
  /// from the swing start.
  std::optional<double> horizon;
  /// Planning discretization; RK4 keeps references consistent with the
  /// fine-step tracking plant.
  IntegrationMethod integrator = IntegrationMethod::kRk4;
};

/// Trajectory source that solves each distinct gap once and caches the
/// solution (equal spacing reuses one swing). The cache is keyed on the
/// gap geometry only, so a source instance serves a single robot.
/// Throws Diverged when the optimizer fails on a gap.
TrajectorySource ilqr_trajectory_source(const IlqrSourceSettings& settings);

struct BrachiationOptions {
  SimOptions sim;
  double offset_angle = 0.0;
  int max_swings = -1;  ///< negative: continue through the last bar
};

struct CycleOutcome {
  int from_bar = 0;
  int to_bar = 0;
  SwingOutcome outcome;
};

/// Multi-bar run: for each gap ahead of the pivot, plan (or reuse) a swing,
/// reposition to its start configuration, simulate, check the catch, and
/// swap hand roles. Stops at the first failed catch and reports the partial
/// record with the failing cycle index.
struct BrachiationResult {
  std::vector<CycleOutcome> cycles;
  bool all_caught = false;
  std::optional<int> failed_cycle;
  CycleFrame final_frame;
};

BrachiationResult run_brachiation(const RobotParams& params,
                                  const BarLayout& layout,
                                  const TrackerConfig& tracker,
                                  const TrajectorySource& source,
                                  const BrachiationOptions& options);

}  // namespace brachiation

#endif  // BRACHIATION_SIMULATOR_HPP
