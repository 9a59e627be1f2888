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

#include "brachiation/csvio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "brachiation/errors.hpp"

namespace brachiation {
namespace {

constexpr const char* kMagic = "# brachiation-csv v1 ";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp + " for writing");
    out << content;
    if (!out.flush()) throw ConfigError("failed writing " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ConfigError("failed to move " + tmp + " into " + path);
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("malformed number '" + s + "' in " + context);
  return v;
}

void expect_header(std::istream& in, const std::string& kind,
                   const std::string& columns, const std::string& path) {
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError(path + " is empty");
  if (line != kMagic + kind)
    throw ConfigError(path + " has unsupported format line '" + line + "'");
  if (!std::getline(in, line) || line != columns)
    throw ConfigError(path + " has unexpected column header");
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  if (traj.states.size() != traj.times.size() ||
      traj.controls.size() + 1 != traj.states.size())
    throw InvalidParams("trajectory sizes are inconsistent");
  std::ostringstream out;
  out << kMagic << "trajectory\n";
  out << "t,q1,q2,q3,dq1,dq2,dq3,u2,u3\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out << fmt(traj.times[i]);
    for (int j = 0; j < 6; ++j) out << ',' << fmt(traj.states[i][j]);
    if (i < traj.controls.size()) {
      out << ',' << fmt(traj.controls[i][0]) << ','
          << fmt(traj.controls[i][1]);
    } else {
      out << ",,";
    }
    out << '\n';
  }
  write_text_atomic(path, out.str());
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trajectory file " + path);
  expect_header(in, "trajectory", "t,q1,q2,q3,dq1,dq2,dq3,u2,u3", path);

  Trajectory traj;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    const auto fields = split(line);
    if (fields.size() != 9)
      throw ConfigError(path + ": row " + std::to_string(row) +
                        " has " + std::to_string(fields.size()) +
                        " fields, expected 9");
    const std::string ctx = path + " row " + std::to_string(row);
    traj.times.push_back(parse_double(fields[0], ctx));
    Vec6 x;
    for (int j = 0; j < 6; ++j) x[j] = parse_double(fields[1 + j], ctx);
    traj.states.push_back(x);
    const bool has_u = !fields[7].empty() || !fields[8].empty();
    if (has_u) {
      traj.controls.emplace_back(parse_double(fields[7], ctx),
                                 parse_double(fields[8], ctx));
    }
  }
  if (traj.states.size() < 2)
    throw ConfigError(path + " holds fewer than two knots");
  if (traj.controls.size() + 1 != traj.states.size())
    throw ConfigError(path +
                      ": exactly the final row must leave the controls empty");
  return traj;
}

void write_telemetry_csv(const std::string& path,
                         const ExecutedTrajectory& telemetry) {
  std::ostringstream out;
  out << kMagic << "telemetry\n";
  out << "t,q1,q2,q3,dq1,dq2,dq3,u2,u3,ex,ez,singular\n";
  for (const TelemetryRow& row : telemetry.rows) {
    out << fmt(row.t);
    for (int j = 0; j < 3; ++j) out << ',' << fmt(row.q[j]);
    for (int j = 0; j < 3; ++j) out << ',' << fmt(row.dq[j]);
    if (row.has_control) {
      out << ',' << fmt(row.u[0]) << ',' << fmt(row.u[1]);
    } else {
      out << ",,";
    }
    out << ',' << fmt(row.y[0]) << ',' << fmt(row.y[1]) << ','
        << (row.singular ? '1' : '0') << '\n';
  }
  write_text_atomic(path, out.str());
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out << kMagic << "sweep\n";
  out << "axis,value,case,final_cost,iterations,converged,terminal_hand_error\n";
  for (const SweepRecord& rec : records) {
    out << (rec.axis == SweepAxis::kBodyLength ? "body_length"
                                               : "arm_mass_fraction")
        << ',' << fmt(rec.value) << ',' << rec.case_name << ','
        << fmt(rec.final_cost) << ',' << rec.iterations << ','
        << (rec.converged ? '1' : '0') << ',' << fmt(rec.terminal_hand_error)
        << '\n';
  }
  write_text_atomic(path, out.str());
}

}  // namespace brachiation
