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

// Command-line driver: optimize | simulate | sweep | brachiate.
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brachiation/config.hpp"
#include "brachiation/csvio.hpp"
#include "brachiation/designlab.hpp"
#include "brachiation/dynamics.hpp"
#include "brachiation/errors.hpp"
#include "brachiation/simulator.hpp"
#include "brachiation/tracking.hpp"
#include "brachiation/trajopt.hpp"

namespace {

using nlohmann::json;
using namespace brachiation;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Path to the JSON config")
      ->required();
  cmd->add_option("--out", args.out_dir, "Output directory (default: .)");
  cmd->add_option("--override", args.overrides,
                  "Dotted config override, e.g. robot.arm_mass=0.5");
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return (std::filesystem::path(args.out_dir) / name).string();
}

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxIterations:
      return "max_iterations";
    case SolveStatus::kDiverged:
      return "diverged";
  }
  return "unknown";
}

IlqrProblem problem_from_config(const RunConfig& cfg) {
  const SwingEndpoints ep =
      swing_endpoints(cfg.robot, cfg.bars, cfg.offset_angle);
  IlqrProblem problem;
  problem.params = cfg.robot;
  problem.x0 << ep.q0, Vec3::Zero();
  problem.x_target << ep.qT, Vec3::Zero();
  problem.horizon_T =
      cfg.optimizer.horizon
          ? *cfg.optimizer.horizon
          : swing_horizon(cfg.robot, FullState{ep.q0, Vec3::Zero()});
  problem.dt = problem.horizon_T / cfg.optimizer.steps;
  problem.Q = cfg.optimizer.Q;
  problem.R = cfg.optimizer.R;
  problem.Qf = cfg.optimizer.Qf;
  problem.max_iters = cfg.optimizer.max_iters;
  problem.rel_tol = cfg.optimizer.rel_tol;
  if (cfg.optimizer.integrator == IntegrationMethod::kRk4) {
    problem.system = robot_rk4_system(cfg.robot, problem.dt);
  }
  return problem;
}

int cmd_optimize(const CommonArgs& args) {
  const RunConfig cfg = load_config_file(args.config_path, args.overrides);
  const IlqrProblem problem = problem_from_config(cfg);
  const SolveResult res = solve(problem);

  const Vec2 target_rel =
      cfg.bars.bars[cfg.bars.base_index + 1] - cfg.bars.bars[cfg.bars.base_index];
  const double terminal_err =
      (fk_hand(cfg.robot, res.trajectory.states.back().head<3>()) - target_rel)
          .norm();

  write_trajectory_csv(out_path(args, "trajectory.csv"), res.trajectory);
  json summary;
  summary["initial_cost"] = res.cost_history.front();
  summary["final_cost"] = res.trajectory.cost;
  summary["iterations"] = res.iterations;
  summary["status"] = status_name(res.status);
  summary["terminal_hand_error"] = terminal_err;
  summary["horizon"] = problem.horizon_T;
  summary["dt"] = problem.dt;
  write_text_atomic(out_path(args, "summary.json"), summary.dump(2) + "\n");

  std::cout << "optimize: status=" << status_name(res.status)
            << " iterations=" << res.iterations
            << " final_cost=" << res.trajectory.cost
            << " terminal_hand_error=" << terminal_err << "\n";
  return res.status == SolveStatus::kDiverged ? kExitNumerical : kExitOk;
}

int cmd_simulate(const CommonArgs& args, const std::string& trajectory_path) {
  const RunConfig cfg = load_config_file(args.config_path, args.overrides);
  const Trajectory traj = read_trajectory_csv(trajectory_path);
  const ReferenceSignal ref = build_reference(cfg.robot, traj);
  const FullState x0 = FullState::from_vec(traj.states.front());
  const Vec2 target_rel =
      cfg.bars.bars[cfg.bars.base_index + 1] - cfg.bars.bars[cfg.bars.base_index];

  const SwingOutcome outcome =
      simulate_swing(cfg.robot, cfg.tracker, ref, x0, target_rel, cfg.sim);

  write_telemetry_csv(out_path(args, "telemetry.csv"), outcome.telemetry);
  json report;
  report["caught"] = outcome.caught;
  report["final_ee_error"] = outcome.final_ee_error;
  report["max_ee_error"] = outcome.max_ee_error;
  report["catch_position"] = {outcome.catch_position.x(),
                              outcome.catch_position.y()};
  report["control_work"] = outcome.control_work;
  report["disturbance_work"] = outcome.disturbance_work;
  report["energy_drift"] = outcome.energy_drift;
  write_text_atomic(out_path(args, "outcome.json"), report.dump(2) + "\n");

  std::cout << "simulate: caught=" << (outcome.caught ? "true" : "false")
            << " final_ee_error=" << outcome.final_ee_error
            << " max_ee_error=" << outcome.max_ee_error << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
  const RunConfig cfg = load_config_file(args.config_path, args.overrides);
  if (!cfg.sweep)
    throw ConfigError("config has no 'sweep' section");

  SweepSpec spec;
  spec.base = cfg.robot;
  spec.axis = cfg.sweep->axis;
  spec.values = cfg.sweep->values;
  spec.cases = cfg.sweep->cases;
  spec.gap = cfg.sweep->gap;
  spec.offset_angle = cfg.offset_angle;
  spec.Q = cfg.optimizer.Q;
  spec.R = cfg.optimizer.R;
  spec.Qf = cfg.optimizer.Qf;
  spec.steps = cfg.optimizer.steps;
  spec.max_iters = cfg.optimizer.max_iters;
  spec.rel_tol = cfg.optimizer.rel_tol;

  const std::vector<SweepRecord> records = run_sweep(spec);
  write_sweep_csv(out_path(args, "sweep.csv"), records);
  std::cout << "sweep: " << records.size() << " points written\n";
  return kExitOk;
}

int cmd_brachiate(const CommonArgs& args) {
  const RunConfig cfg = load_config_file(args.config_path, args.overrides);

  IlqrSourceSettings settings;
  settings.Q = cfg.optimizer.Q;
  settings.R = cfg.optimizer.R;
  settings.Qf = cfg.optimizer.Qf;
  settings.steps = cfg.optimizer.steps;
  settings.max_iters = cfg.optimizer.max_iters;
  settings.rel_tol = cfg.optimizer.rel_tol;
  settings.horizon = cfg.optimizer.horizon;
  settings.integrator = cfg.optimizer.integrator;

  BrachiationOptions options;
  options.sim = cfg.sim;
  options.offset_angle = cfg.offset_angle;
  options.max_swings = cfg.max_swings;

  const BrachiationResult result = run_brachiation(
      cfg.robot, cfg.bars, cfg.tracker, ilqr_trajectory_source(settings),
      options);

  json report;
  report["all_caught"] = result.all_caught;
  if (result.failed_cycle) report["failed_cycle"] = *result.failed_cycle;
  report["cycles"] = json::array();
  for (std::size_t i = 0; i < result.cycles.size(); ++i) {
    const CycleOutcome& c = result.cycles[i];
    json jc;
    jc["from_bar"] = c.from_bar;
    jc["to_bar"] = c.to_bar;
    jc["caught"] = c.outcome.caught;
    jc["final_ee_error"] = c.outcome.final_ee_error;
    jc["max_ee_error"] = c.outcome.max_ee_error;
    report["cycles"].push_back(jc);
    write_telemetry_csv(
        out_path(args, "cycle_" + std::to_string(i) + "_telemetry.csv"),
        c.outcome.telemetry);
  }
  write_text_atomic(out_path(args, "brachiation.json"), report.dump(2) + "\n");

  std::cout << "brachiate: cycles=" << result.cycles.size() << " all_caught="
            << (result.all_caught ? "true" : "false") << "\n";
  return result.all_caught ? kExitOk : kExitNumerical;
}

int classify(const Error& e) {
  if (dynamic_cast<const Diverged*>(&e) ||
      dynamic_cast<const NonFiniteState*>(&e) ||
      dynamic_cast<const NotPositiveDefinite*>(&e) ||
      dynamic_cast<const LinearSolveFailure*>(&e) ||
      dynamic_cast<const NoMinimumFound*>(&e) ||
      dynamic_cast<const NotCaught*>(&e)) {
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-link brachiation toolkit"};
  app.require_subcommand(1);

  CommonArgs optimize_args, simulate_args, sweep_args, brachiate_args;
  std::string trajectory_path;

  CLI::App* optimize =
      app.add_subcommand("optimize", "Solve one swing and write trajectory.csv");
  add_common(optimize, optimize_args);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Track a trajectory CSV in the closed-loop plant");
  add_common(simulate, simulate_args);
  simulate->add_option("trajectory", trajectory_path, "trajectory.csv to track")
      ->required();

  CLI::App* sweep =
      app.add_subcommand("sweep", "Run the configured design sweep");
  add_common(sweep, sweep_args);

  CLI::App* brachiate =
      app.add_subcommand("brachiate", "Swing across all configured bars");
  add_common(brachiate, brachiate_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (optimize->parsed()) return cmd_optimize(optimize_args);
    if (simulate->parsed()) return cmd_simulate(simulate_args, trajectory_path);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (brachiate->parsed()) return cmd_brachiate(brachiate_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
