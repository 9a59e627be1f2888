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

#include "brachiation/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "brachiation/errors.hpp"

namespace brachiation {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw ConfigError(message);
}

void check_keys(const json& j, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail("section '" + section + "' must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail("unknown key '" + item.key() + "' in '" + section + "'");
  }
}

double require_number(const json& j, const std::string& section,
                      const char* key) {
  if (!j.contains(key))
    fail("missing required key '" + std::string(key) + "' in '" + section + "'");
  if (!j[key].is_number())
    fail("'" + section + "." + key + "' must be a number");
  return j[key].get<double>();
}

double number_or(const json& j, const std::string& section, const char* key,
                 double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    fail("'" + section + "." + key + "' must be a number");
  return j[key].get<double>();
}

int int_or(const json& j, const std::string& section, const char* key,
           int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    fail("'" + section + "." + key + "' must be an integer");
  return j[key].get<int>();
}

bool bool_or(const json& j, const std::string& section, const char* key,
             bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean())
    fail("'" + section + "." + key + "' must be a boolean");
  return j[key].get<bool>();
}

template <typename Vec>
Vec fixed_vector(const json& j, const std::string& where, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail("'" + where + "' must be an array of " + std::to_string(n) +
         " numbers");
  Vec v;
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_number()) fail("'" + where + "' must hold numbers only");
    v[i] = j[i].get<double>();
  }
  return v;
}

RobotParams parse_robot(const json& j) {
  check_keys(j, "robot",
             {"arm_length", "arm_mass", "arm_com_offset", "arm_inertia",
              "body_length", "body_mass", "body_com_offset", "body_inertia",
              "gravity", "torque_limit"});
  RobotParams p;
  p.arm_length = require_number(j, "robot", "arm_length");
  p.arm_mass = require_number(j, "robot", "arm_mass");
  p.arm_com_offset = require_number(j, "robot", "arm_com_offset");
  p.arm_inertia = require_number(j, "robot", "arm_inertia");
  p.body_length = require_number(j, "robot", "body_length");
  p.body_mass = require_number(j, "robot", "body_mass");
  p.body_com_offset = require_number(j, "robot", "body_com_offset");
  p.body_inertia = require_number(j, "robot", "body_inertia");
  p.gravity = number_or(j, "robot", "gravity", 9.81);
  if (j.contains("torque_limit") && !j["torque_limit"].is_null()) {
    if (!j["torque_limit"].is_number())
      fail("'robot.torque_limit' must be a number or null");
    p.torque_limit = j["torque_limit"].get<double>();
  }
  return p;
}

BarLayout parse_bars(const json& j) {
  check_keys(j, "bars", {"positions", "base_index"});
  if (!j.contains("positions") || !j["positions"].is_array())
    fail("'bars.positions' must be an array of [x, z] pairs");
  BarLayout bars;
  for (std::size_t i = 0; i < j["positions"].size(); ++i) {
    bars.bars.push_back(fixed_vector<Vec2>(
        j["positions"][i], "bars.positions[" + std::to_string(i) + "]", 2));
  }
  bars.base_index = int_or(j, "bars", "base_index", 0);
  return bars;
}

PidParams parse_pid(const json& j, const std::string& where) {
  check_keys(j, where, {"kp", "ki", "kd", "integral_limit", "output_limit"});
  PidParams p;
  p.kp = number_or(j, where, "kp", 0.0);
  p.ki = number_or(j, where, "ki", 0.0);
  p.kd = number_or(j, where, "kd", 0.0);
  p.integral_limit = number_or(j, where, "integral_limit", 10.0);
  if (j.contains("output_limit") && !j["output_limit"].is_null()) {
    if (!j["output_limit"].is_number())
      fail("'" + where + ".output_limit' must be a number or null");
    p.output_limit = j["output_limit"].get<double>();
  }
  return p;
}

void parse_pid_pair(const json& j, const std::string& where,
                    std::array<PidParams, 2>& out) {
  if (j.is_object()) {
    out[0] = parse_pid(j, where);
    out[1] = out[0];
  } else if (j.is_array() && j.size() == 2) {
    out[0] = parse_pid(j[0], where + "[0]");
    out[1] = parse_pid(j[1], where + "[1]");
  } else {
    fail("'" + where + "' must be a PID object or an array of two");
  }
}

TrackerConfig parse_tracker(const json& j) {
  check_keys(j, "tracker",
             {"pos_pid", "vel_pid", "alpha", "kp_task", "kd_task",
              "pinv_tolerance", "control_dt"});
  TrackerConfig cfg = TrackerConfig::defaults();
  if (j.contains("pos_pid")) parse_pid_pair(j["pos_pid"], "tracker.pos_pid", cfg.pos_pid);
  if (j.contains("vel_pid")) parse_pid_pair(j["vel_pid"], "tracker.vel_pid", cfg.vel_pid);
  cfg.alpha = number_or(j, "tracker", "alpha", cfg.alpha);
  if (j.contains("kp_task"))
    cfg.kp_task = fixed_vector<Vec2>(j["kp_task"], "tracker.kp_task", 2);
  if (j.contains("kd_task"))
    cfg.kd_task = fixed_vector<Vec2>(j["kd_task"], "tracker.kd_task", 2);
  cfg.pinv_tolerance =
      number_or(j, "tracker", "pinv_tolerance", cfg.pinv_tolerance);
  cfg.control_dt = number_or(j, "tracker", "control_dt", cfg.control_dt);
  return cfg;
}

SimOptions parse_sim(const json& j) {
  check_keys(j, "sim",
             {"plant_dt", "catch_tolerance", "telemetry_at_plant_rate",
              "disturbance"});
  SimOptions sim;
  sim.plant_dt = number_or(j, "sim", "plant_dt", sim.plant_dt);
  sim.catch_tolerance =
      number_or(j, "sim", "catch_tolerance", sim.catch_tolerance);
  sim.telemetry_at_plant_rate =
      bool_or(j, "sim", "telemetry_at_plant_rate", false);
  if (j.contains("disturbance") && !j["disturbance"].is_null()) {
    const json& d = j["disturbance"];
    check_keys(d, "sim.disturbance", {"force", "t_start", "t_end"});
    DisturbanceSpec spec;
    spec.force = fixed_vector<Vec2>(d.contains("force") ? d["force"] : json(),
                                    "sim.disturbance.force", 2);
    spec.t_start = require_number(d, "sim.disturbance", "t_start");
    spec.t_end = require_number(d, "sim.disturbance", "t_end");
    sim.disturbance = spec;
  }
  return sim;
}

OptimizerConfig parse_optimizer(const json& j) {
  check_keys(j, "optimizer",
             {"Q", "R", "Qf", "steps", "max_iters", "rel_tol", "horizon",
              "integrator"});
  OptimizerConfig opt;
  if (j.contains("Q")) opt.Q = fixed_vector<Vec6>(j["Q"], "optimizer.Q", 6);
  if (j.contains("R")) opt.R = fixed_vector<Vec2>(j["R"], "optimizer.R", 2);
  if (j.contains("Qf")) opt.Qf = fixed_vector<Vec6>(j["Qf"], "optimizer.Qf", 6);
  opt.steps = int_or(j, "optimizer", "steps", opt.steps);
  opt.max_iters = int_or(j, "optimizer", "max_iters", opt.max_iters);
  opt.rel_tol = number_or(j, "optimizer", "rel_tol", opt.rel_tol);
  if (j.contains("horizon") && !j["horizon"].is_null()) {
    if (!j["horizon"].is_number())
      fail("'optimizer.horizon' must be a number or null");
    opt.horizon = j["horizon"].get<double>();
  }
  if (j.contains("integrator")) {
    if (!j["integrator"].is_string())
      fail("'optimizer.integrator' must be \"rk4\" or \"euler\"");
    const std::string kind = j["integrator"].get<std::string>();
    if (kind == "rk4") {
      opt.integrator = IntegrationMethod::kRk4;
    } else if (kind == "euler") {
      opt.integrator = IntegrationMethod::kEuler;
    } else {
      fail("unknown optimizer.integrator '" + kind + "'");
    }
  }
  return opt;
}

SweepSection parse_sweep(const json& j) {
  check_keys(j, "sweep", {"axis", "values", "cases", "gap"});
  SweepSection sweep;
  if (!j.contains("axis") || !j["axis"].is_string())
    fail("'sweep.axis' must be \"body_length\" or \"arm_mass_fraction\"");
  const std::string axis = j["axis"].get<std::string>();
  if (axis == "body_length") {
    sweep.axis = SweepAxis::kBodyLength;
  } else if (axis == "arm_mass_fraction") {
    sweep.axis = SweepAxis::kArmMassFraction;
  } else {
    fail("unknown sweep axis '" + axis + "'");
  }
  if (!j.contains("values") || !j["values"].is_array() || j["values"].empty())
    fail("'sweep.values' must be a non-empty array of numbers");
  for (const auto& v : j["values"]) {
    if (!v.is_number()) fail("'sweep.values' must hold numbers only");
    sweep.values.push_back(v.get<double>());
  }
  if (j.contains("cases")) {
    if (!j["cases"].is_array()) fail("'sweep.cases' must be an array");
    for (std::size_t i = 0; i < j["cases"].size(); ++i) {
      const json& c = j["cases"][i];
      const std::string where = "sweep.cases[" + std::to_string(i) + "]";
      check_keys(c, where, {"name", "body_mass", "arm_mass"});
      MassCase mc;
      if (!c.contains("name") || !c["name"].is_string())
        fail("'" + where + ".name' must be a string");
      mc.name = c["name"].get<std::string>();
      mc.body_mass = require_number(c, where, "body_mass");
      mc.arm_mass = require_number(c, where, "arm_mass");
      sweep.cases.push_back(mc);
    }
  }
  if (j.contains("gap"))
    sweep.gap = fixed_vector<Vec2>(j["gap"], "sweep.gap", 2);
  return sweep;
}

RunConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"robot", "bars", "optimizer", "tracker", "sim", "brachiation",
              "sweep"});
  if (!j.contains("robot")) fail("missing required section 'robot'");
  if (!j.contains("bars")) fail("missing required section 'bars'");

  RunConfig cfg;
  cfg.robot = parse_robot(j["robot"]);
  cfg.bars = parse_bars(j["bars"]);
  if (j.contains("optimizer")) cfg.optimizer = parse_optimizer(j["optimizer"]);
  if (j.contains("tracker")) cfg.tracker = parse_tracker(j["tracker"]);
  if (j.contains("sim")) cfg.sim = parse_sim(j["sim"]);
  if (j.contains("brachiation")) {
    check_keys(j["brachiation"], "brachiation", {"offset_angle", "max_swings"});
    cfg.offset_angle =
        number_or(j["brachiation"], "brachiation", "offset_angle", 0.0);
    cfg.max_swings = int_or(j["brachiation"], "brachiation", "max_swings", -1);
  }
  if (j.contains("sweep")) cfg.sweep = parse_sweep(j["sweep"]);
  cfg.validate();
  return cfg;
}

void apply_override(json& root, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    fail("override '" + spec + "' must look like path.to.key=value");
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // unquoted strings pass through verbatim
  }

  json* node = &root;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = path.find('.', begin);
    const std::string key = path.substr(
        begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (key.empty()) fail("override path '" + path + "' has an empty segment");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object())
      (*node)[key] = json::object();
    node = &(*node)[key];
    begin = dot + 1;
  }
}

}  // namespace

void RunConfig::validate() const {
  robot.validate();
  bars.validate(robot);
  tracker.validate();
  sim.validate();
  if (!std::isfinite(offset_angle))
    throw ConfigError("brachiation.offset_angle must be finite");
}

RunConfig load_config_text(const std::string& text,
                           const std::vector<std::string>& overrides) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  for (const std::string& o : overrides) apply_override(j, o);
  try {
    return parse_config(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(std::string("invalid config: ") + e.what());
  }
}

RunConfig load_config_file(const std::string& path,
                           const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_text(buf.str(), overrides);
}

}  // namespace brachiation
