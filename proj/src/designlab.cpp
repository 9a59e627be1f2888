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

#include "brachiation/designlab.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "brachiation/configspace.hpp"
#include "brachiation/dynamics.hpp"
#include "brachiation/errors.hpp"
#include "brachiation/trajopt.hpp"

namespace brachiation {
namespace {

// Minimum hub inertia for a zero-length body (keeps M positive definite).
constexpr double kHubInertia = 1e-4;

int worker_count(std::size_t points) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("BRACHIATE_THREADS")) {
    const long requested = std::strtol(env, nullptr, 10);
    if (requested >= 1) n = static_cast<unsigned>(requested);
  }
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(points, 1)));
}

struct SweepPoint {
  double value;
  int case_index;
  std::string case_name;
};

// Solves one sweep point, optionally warm-started from the previous point's
// controls; a warm seed that fails is retried cold before reporting failure.
SweepRecord solve_point(const SweepSpec& spec, const SweepPoint& point,
                        std::vector<Vec2>* warm) {
  SweepRecord rec;
  rec.axis = spec.axis;
  rec.value = point.value;
  rec.case_name = point.case_name;
  try {
    const RobotParams params =
        derive_params(spec, point.value, point.case_index);
    const SwingEndpoints ep = swing_endpoints_rel(
        params, spec.gap, -spec.gap, spec.offset_angle);
    const FullState x0{ep.q0, Vec3::Zero()};

    IlqrProblem problem;
    problem.params = params;
    problem.x0 << ep.q0, Vec3::Zero();
    problem.x_target << ep.qT, Vec3::Zero();
    problem.horizon_T = swing_horizon(params, x0);
    problem.dt = problem.horizon_T / spec.steps;
    problem.Q = spec.Q;
    problem.R = spec.R;
    problem.Qf = spec.Qf;
    problem.max_iters = spec.max_iters;
    problem.rel_tol = spec.rel_tol;

    SolveResult res;
    bool solved = false;
    if (warm != nullptr && !warm->empty()) {
      problem.initial_controls = *warm;
      try {
        res = solve(problem);
        solved = res.status == SolveStatus::kConverged;
      } catch (const Error&) {
        solved = false;
      }
      problem.initial_controls.clear();
    }
    if (!solved) {
      const SolveResult cold = solve(problem);
      // Keep the better of the two basins when both ran.
      if (res.trajectory.controls.empty() ||
          cold.trajectory.cost < res.trajectory.cost) {
        res = cold;
      }
    }
    rec.final_cost = res.trajectory.cost;
    rec.iterations = res.iterations;
    rec.converged = res.status == SolveStatus::kConverged;
    rec.terminal_hand_error =
        (fk_hand(params, res.trajectory.states.back().head<3>()) - spec.gap)
            .norm();
    if (warm != nullptr && rec.converged) *warm = res.trajectory.controls;
  } catch (const Error&) {
    rec.final_cost = std::numeric_limits<double>::quiet_NaN();
    rec.terminal_hand_error = std::numeric_limits<double>::quiet_NaN();
    rec.iterations = 0;
    rec.converged = false;
  }
  return rec;
}

}  // namespace

void SweepSpec::validate() const {
  base.validate();
  if (values.empty()) throw InvalidParams("sweep needs at least one value");
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!(values[i] < values[i + 1]))
      throw InvalidParams("sweep values must strictly increase");
  }
  if (axis == SweepAxis::kBodyLength) {
    for (const double v : values) {
      if (!(v >= 0.0)) throw InvalidParams("body lengths must be >= 0");
    }
    for (const MassCase& c : cases) {
      if (!(c.body_mass > 0.0) || !(c.arm_mass > 0.0))
        throw InvalidParams("mass case entries must be positive");
    }
  } else {
    for (const double v : values) {
      if (!(v > 0.0 && v < 0.5))
        throw InvalidParams(
            "arm mass fractions must lie in (0, 0.5) to leave body mass");
    }
  }
  if (!gap.allFinite() || !(gap.norm() > 0.0))
    throw InvalidParams("sweep gap must be finite and nonzero");
  if (steps < 2) throw InvalidParams("steps must be at least 2");
  if (max_iters < 1) throw InvalidParams("max_iters must be at least 1");
  if (!(rel_tol > 0.0)) throw InvalidParams("rel_tol must be positive");
}

RobotParams derive_params(const SweepSpec& spec, double value,
                          int case_index) {
  RobotParams p = spec.base;
  if (spec.axis == SweepAxis::kBodyLength) {
    if (!(value >= 0.0)) throw InvalidParams("body length must be >= 0");
    double body_mass = spec.base.body_mass;
    double arm_mass = spec.base.arm_mass;
    if (case_index >= 0) {
      if (case_index >= static_cast<int>(spec.cases.size()))
        throw InvalidParams("mass case index out of range");
      body_mass = spec.cases[case_index].body_mass;
      arm_mass = spec.cases[case_index].arm_mass;
    }
    p.body_length = value;
    p.body_com_offset = value / 2.0;
    p.body_mass = body_mass;
    p.arm_mass = arm_mass;
    // Uniform-rod scaling relative to the base (m l^2 law); a base with no
    // body falls back to the rod formula directly.
    if (spec.base.body_length > 0.0) {
      const double ratio = value / spec.base.body_length;
      p.body_inertia = spec.base.body_inertia *
                       (body_mass / spec.base.body_mass) * ratio * ratio;
    } else {
      p.body_inertia = body_mass * value * value / 12.0;
    }
    if (p.body_length == 0.0)
      p.body_inertia = std::max(p.body_inertia, kHubInertia);
    p.arm_inertia =
        spec.base.arm_inertia * (arm_mass / spec.base.arm_mass);
  } else {
    const double total = spec.base.body_mass + 2.0 * spec.base.arm_mass;
    const double arm_mass = value * total;
    const double body_mass = total - 2.0 * arm_mass;
    if (!(body_mass > 0.0))
      throw InvalidParams("arm mass fraction leaves no body mass");
    p.arm_mass = arm_mass;
    p.body_mass = body_mass;
    p.arm_inertia =
        spec.base.arm_inertia * (arm_mass / spec.base.arm_mass);
    p.body_inertia =
        spec.base.body_inertia * (body_mass / spec.base.body_mass);
  }
  p.validate();
  return p;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  spec.validate();

  // One chain per mass case; each chain walks its values in order and
  // warm-starts every solve from the previous converged point, so the whole
  // case stays on one solution branch instead of basin-hopping.
  struct Chain {
    int case_index;
    std::string case_name;
    std::size_t offset;
  };
  std::vector<Chain> chains;
  if (spec.axis == SweepAxis::kBodyLength && !spec.cases.empty()) {
    for (int c = 0; c < static_cast<int>(spec.cases.size()); ++c) {
      chains.push_back({c, spec.cases[c].name, c * spec.values.size()});
    }
  } else {
    chains.push_back({-1, "base", 0});
  }

  // A converged record beats a failed one; among equals the cheaper basin
  // wins (NaN costs lose).
  auto better = [](const SweepRecord& a, const SweepRecord& b) {
    if (a.converged != b.converged) return a.converged ? a : b;
    if (std::isnan(b.final_cost)) return a;
    if (std::isnan(a.final_cost)) return b;
    return a.final_cost <= b.final_cost ? a : b;
  };

  std::vector<SweepRecord> records(chains.size() * spec.values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t ci = next.fetch_add(1);
      if (ci >= chains.size()) return;
      const Chain& chain = chains[ci];
      // Continuation in both directions guards against losing the branch at
      // a basin boundary; each point keeps its best result.
      const std::size_t nv = spec.values.size();
      std::vector<Vec2> warm;
      for (std::size_t vi = 0; vi < nv; ++vi) {
        const SweepPoint point{spec.values[vi], chain.case_index,
                               chain.case_name};
        records[chain.offset + vi] = solve_point(spec, point, &warm);
      }
      warm.clear();
      for (std::size_t vi = nv; vi-- > 0;) {
        const SweepPoint point{spec.values[vi], chain.case_index,
                               chain.case_name};
        const SweepRecord rev = solve_point(spec, point, &warm);
        records[chain.offset + vi] =
            better(records[chain.offset + vi], rev);
      }
    }
  };

  const int threads = worker_count(chains.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

}  // namespace brachiation
