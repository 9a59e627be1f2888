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

#include "brachiation/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>

#include "brachiation/dynamics.hpp"
#include "brachiation/errors.hpp"

namespace brachiation {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w <= 0.0) w += 2.0 * kPi;
  return w - kPi;
}

}  // namespace

void DisturbanceSpec::validate() const {
  if (!force.allFinite()) throw InvalidParams("disturbance force must be finite");
  if (!(t_start < t_end))
    throw InvalidParams("disturbance window needs t_start < t_end");
  if (!(t_start >= 0.0))
    throw InvalidParams("disturbance window must start at t >= 0");
}

void SimOptions::validate() const {
  if (!(plant_dt > 0.0)) throw InvalidParams("plant_dt must be positive");
  if (!(catch_tolerance > 0.0))
    throw InvalidParams("catch_tolerance must be positive");
  if (disturbance) disturbance->validate();
}

bool catch_check(const RobotParams& params, const Vec3& q_final,
                 const Vec2& target_rel, double tol) {
  return (fk_hand(params, q_final) - target_rel).norm() <= tol;
}

SwingOutcome simulate_swing(const RobotParams& params,
                            const TrackerConfig& tracker,
                            const ReferenceSignal& ref, const FullState& x0,
                            const Vec2& target_rel, const SimOptions& options) {
  params.validate();
  tracker.validate();
  options.validate();
  if (!x0.all_finite()) throw InvalidParams("initial state must be finite");

  const double control_dt = tracker.control_dt;
  const long long substeps = std::llround(control_dt / options.plant_dt);
  if (substeps < 1 ||
      std::abs(static_cast<double>(substeps) * options.plant_dt - control_dt) >
          1e-9 * control_dt) {
    throw InvalidParams("control_dt must be an integer multiple of plant_dt");
  }
  const long long n_ctrl =
      std::max(1ll, std::llround(ref.duration() / control_dt));

  SwingOutcome out;
  TrackerState pid;
  pid.reset();
  FullState x = x0;
  const double e0 = total_energy(params, x).total;
  const Mat32 b = input_matrix();

  auto external_torque = [&](double t, const Vec3& q) -> Vec3 {
    if (!options.disturbance) return Vec3::Zero();
    const DisturbanceSpec& d = *options.disturbance;
    if (t >= d.t_start && t < d.t_end) {
      return jacobian_hand(params, q).transpose() * d.force;
    }
    return Vec3::Zero();
  };

  for (long long ic = 0; ic < n_ctrl; ++ic) {
    const double t_c = static_cast<double>(ic) * control_dt;
    const ReferencePoint target = ref.clamped(t_c);
    const ControlOutput cmd = control(params, tracker, pid, target, x);

    TelemetryRow row;
    row.t = t_c;
    row.q = x.q;
    row.dq = x.dq;
    row.u = cmd.u;
    row.u_config = cmd.u_config;
    row.u_task = cmd.u_task;
    row.y = cmd.y;
    row.dy = cmd.dy;
    row.singular = cmd.singular;
    if (!options.telemetry_at_plant_rate) out.telemetry.rows.push_back(row);
    out.max_ee_error = std::max(out.max_ee_error, cmd.y.norm());

    for (long long ip = 0; ip < substeps; ++ip) {
      const double t_p =
          static_cast<double>(ic * substeps + ip) * options.plant_dt;
      if (options.telemetry_at_plant_rate) {
        TelemetryRow prow = row;
        prow.t = t_p;
        prow.q = x.q;
        prow.dq = x.dq;
        out.telemetry.rows.push_back(prow);
      }
      const Vec3 tau_ext = external_torque(t_p, x.q);
      const double power_before =
          x.dq.dot(b * cmd.u) + x.dq.dot(tau_ext);
      const double ext_before = x.dq.dot(tau_ext);
      FullState x_next;
      try {
        x_next = step(params, x, cmd.u, options.plant_dt,
                      IntegrationMethod::kRk4, tau_ext);
      } catch (const NonFiniteState&) {
        std::ostringstream msg;
        msg << "swing simulation blew up at t = " << t_p << " s";
        throw NonFiniteState(msg.str());
      }
      const double power_after =
          x_next.dq.dot(b * cmd.u) + x_next.dq.dot(tau_ext);
      const double ext_after = x_next.dq.dot(tau_ext);
      const double half_dt = 0.5 * options.plant_dt;
      out.control_work +=
          half_dt * ((power_before - ext_before) + (power_after - ext_after));
      out.disturbance_work += half_dt * (ext_before + ext_after);
      x = x_next;
    }
  }

  const double t_final = static_cast<double>(n_ctrl) * control_dt;
  const ReferencePoint end_ref = ref.clamped(t_final);
  TelemetryRow last;
  last.t = t_final;
  last.q = x.q;
  last.dq = x.dq;
  last.y = end_ref.p - fk_hand(params, x.q);
  last.dy = end_ref.dp - jacobian_hand(params, x.q) * x.dq;
  last.has_control = false;
  out.telemetry.rows.push_back(last);

  out.final_state = x;
  out.catch_position = fk_hand(params, x.q);
  out.final_ee_error = last.y.norm();
  out.max_ee_error = std::max(out.max_ee_error, out.final_ee_error);
  out.caught = catch_check(params, x.q, target_rel, options.catch_tolerance);
  const double e1 = total_energy(params, x).total;
  out.energy_drift =
      std::abs(e1 - e0 - out.control_work - out.disturbance_work);
  return out;
}

std::pair<FullState, CycleFrame> swap_roles(const RobotParams& params,
                                            const FullState& x_T,
                                            const CycleFrame& frame,
                                            const Vec2& caught_bar_world,
                                            int caught_bar_index, double tol) {
  const Vec2 bar_rel = frame.to_base(caught_bar_world);
  if (!catch_check(params, x_T.q, bar_rel, tol)) {
    std::ostringstream msg;
    msg << "hand is " << (fk_hand(params, x_T.q) - bar_rel).norm()
        << " m from the bar (tolerance " << tol << ")";
    throw NotCaught(msg.str());
  }

  // Reversing the chain: the old swing arm becomes the pendulum root, link
  // directions flip, and the relative angles reverse order.
  const Vec3& q = x_T.q;
  const Vec3& dq = x_T.dq;
  FullState swapped;
  swapped.q = Vec3(wrap_angle(q[0] + q[1] + q[2]), wrap_angle(-q[2] - kPi),
                   wrap_angle(-q[1] - kPi));
  swapped.dq = Vec3(dq[0] + dq[1] + dq[2], -dq[2], -dq[1]);

  CycleFrame next;
  next.base_bar = caught_bar_index;
  next.swing_hand =
      frame.swing_hand == Hand::kRight ? Hand::kLeft : Hand::kRight;
  next.base_position = frame.to_world(fk_hand(params, x_T.q));
  next.mirrored = false;
  return {swapped, next};
}

TrajectorySource ilqr_trajectory_source(const IlqrSourceSettings& settings) {
  auto cache = std::make_shared<std::map<std::string, Trajectory>>();
  return [settings, cache](const RobotParams& params, const Vec2& target_rel,
                           const Vec2& rear_rel,
                           double offset_angle) -> Trajectory {
    char key[200];
    std::snprintf(key, sizeof key, "%.17g,%.17g,%.17g,%.17g,%.17g",
                  target_rel.x(), target_rel.y(), rear_rel.x(), rear_rel.y(),
                  offset_angle);
    if (auto it = cache->find(key); it != cache->end()) return it->second;

    const SwingEndpoints ep =
        swing_endpoints_rel(params, target_rel, rear_rel, offset_angle);
    IlqrProblem problem;
    problem.params = params;
    problem.x0 << ep.q0, Vec3::Zero();
    problem.x_target << ep.qT, Vec3::Zero();
    problem.horizon_T = settings.horizon
                            ? *settings.horizon
                            : swing_horizon(params, FullState{ep.q0, Vec3::Zero()});
    problem.dt = problem.horizon_T / settings.steps;
    problem.Q = settings.Q;
    problem.R = settings.R;
    problem.Qf = settings.Qf;
    problem.max_iters = settings.max_iters;
    problem.rel_tol = settings.rel_tol;
    if (settings.integrator == IntegrationMethod::kRk4) {
      problem.system = robot_rk4_system(params, problem.dt);
    }

    const SolveResult res = solve(problem);
    if (res.status == SolveStatus::kDiverged) {
      std::ostringstream msg;
      msg << "swing optimization diverged for gap (" << target_rel.x() << ", "
          << target_rel.y() << ")";
      throw Diverged(msg.str());
    }
    cache->emplace(key, res.trajectory);
    return res.trajectory;
  };
}

BrachiationResult run_brachiation(const RobotParams& params,
                                  const BarLayout& layout,
                                  const TrackerConfig& tracker,
                                  const TrajectorySource& source,
                                  const BrachiationOptions& options) {
  params.validate();
  layout.validate(params);
  options.sim.validate();
  if (!source) throw InvalidParams("trajectory source must be callable");

  const int bar_count = static_cast<int>(layout.bars.size());
  int planned = bar_count - 1 - layout.base_index;
  if (options.max_swings >= 0) planned = std::min(planned, options.max_swings);
  if (planned < 1)
    throw InvalidParams("layout leaves no gap ahead of the base bar");

  BrachiationResult result;
  CycleFrame frame;
  frame.base_bar = layout.base_index;
  frame.base_position = layout.bars[layout.base_index];
  frame.swing_hand = Hand::kRight;

  for (int cycle = 0; cycle < planned; ++cycle) {
    const int cur = frame.base_bar;
    const Vec2 target_rel = layout.bars[cur + 1] - layout.bars[cur];
    const Vec2 rear_rel = cur >= 1
                              ? Vec2(layout.bars[cur - 1] - layout.bars[cur])
                              : Vec2(-target_rel);

    const Trajectory traj =
        source(params, target_rel, rear_rel, options.offset_angle);
    const SwingEndpoints ep = swing_endpoints_rel(params, target_rel, rear_rel,
                                                  options.offset_angle);
    // Between cycles the robot repositions to the planned start; each swing
    // launches from rest at its boundary configuration.
    const FullState x0{ep.q0, Vec3::Zero()};
    const ReferenceSignal ref = build_reference(params, traj);
    SwingOutcome outcome =
        simulate_swing(params, tracker, ref, x0, target_rel, options.sim);

    const bool caught = outcome.caught;
    const FullState final_state = outcome.final_state;
    result.cycles.push_back({cur, cur + 1, std::move(outcome)});
    if (!caught) {
      result.failed_cycle = cycle;
      break;
    }
    auto [swapped, next] =
        swap_roles(params, final_state, frame, layout.bars[cur + 1], cur + 1,
                   options.sim.catch_tolerance);
    (void)swapped;
    next.base_position = layout.bars[cur + 1];  // snap the pivot to the bar
    frame = next;
  }

  result.all_caught = !result.failed_cycle &&
                      static_cast<int>(result.cycles.size()) == planned;
  result.final_frame = frame;
  return result;
}

}  // namespace brachiation
