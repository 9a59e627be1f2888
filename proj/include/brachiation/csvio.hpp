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

#ifndef BRACHIATION_CSVIO_HPP
#define BRACHIATION_CSVIO_HPP

#include <string>
#include <vector>

#include "brachiation/designlab.hpp"
#include "brachiation/simulator.hpp"
#include "brachiation/trajopt.hpp"

namespace brachiation {

/// CSV files open with "# brachiation-csv v1 <kind>"; readers reject other
/// versions or kinds. Numbers serialize with 17 significant digits so a
/// write/read round trip is exact. Writes go to a temporary file in the
/// same directory and are renamed into place (atomic replacement).

/// Columns t,q1,q2,q3,dq1,dq2,dq3,u2,u3; the final knot has no control and
/// leaves u2,u3 empty. Throws ConfigError on I/O failure.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Reads a trajectory written by write_trajectory_csv. The cost field is
/// not stored in the CSV and comes back as zero. Throws ConfigError on
/// missing files, version mismatch, or malformed rows.
Trajectory read_trajectory_csv(const std::string& path);

/// Columns t,q1,q2,q3,dq1,dq2,dq3,u2,u3,ex,ez,singular; rows without a
/// control sample leave the u fields empty.
void write_telemetry_csv(const std::string& path,
                         const ExecutedTrajectory& telemetry);

/// Columns axis,value,case,final_cost,iterations,converged,terminal_hand_error.
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRecord>& records);

/// Write-temp-then-rename file write used for all emitted artifacts.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace brachiation

#endif  // BRACHIATION_CSVIO_HPP
