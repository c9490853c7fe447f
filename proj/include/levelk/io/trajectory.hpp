// Copyright 2026 The levelk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace levelk::io {

/// One measurement of one vehicle. Frames are 10 Hz ticks.
struct TrajectoryRecord {
  int vehicle_id = 0;
  long long frame = 0;
  double x = 0.0;  // m, longitudinal
  double y = 0.0;  // m, lateral
  int lane = 0;
  double v = 0.0;  // m/s
  double a = 0.0;  // m/s^2
  bool operator==(const TrajectoryRecord&) const = default;
};

/// Canonical header of the trajectory CSV.
inline constexpr const char* kTrajectoryHeader = "vehicle_id,frame,x,y,lane,v,a";

struct ParseOptions {
  bool strict = true;
  std::size_t lanes = 0;  // lane bound; 0 disables the check
};

/// Records grouped by vehicle id, each vehicle's frames strictly increasing.
struct TrajectorySet {
  std::map<int, std::vector<TrajectoryRecord>> vehicles;
  std::size_t skipped_rows = 0;
  std::vector<std::string> warnings;

  std::size_t record_count() const;
};

/// Reads the canonical CSV. A header that does not match throws SchemaError.
/// Strict mode throws on the first bad row: unparsable fields or a wrong
/// column count raise SchemaError, an out-of-range lane, a non-finite value
/// or a frame order violation raise IntegrityError, all naming the 1-based
/// line. Lenient mode skips bad rows (counting them), re-sorts frames that
/// arrive out of order and drops duplicate frames, with a warning for each.
TrajectorySet parse_trajectories(std::istream& in, const ParseOptions& options = {});
TrajectorySet load_trajectories(const std::filesystem::path& path, const ParseOptions& options = {});

/// Writes the canonical CSV, vehicles in id order. Values are printed with 17
/// significant digits, so a round trip is exact.
void write_trajectories(std::ostream& out, const TrajectorySet& set);
void save_trajectories(const std::filesystem::path& path, const TrajectorySet& set);

/// Converts an NGSIM-style CSV (Vehicle_ID, Frame_ID, Local_X, Local_Y,
/// Lane_ID, v_Vel, v_Acc; extra columns ignored; feet based) to the canonical
/// schema: x = Local_Y, y = Local_X, lane = Lane_ID - 1, all lengths times
/// 0.3048. Missing columns throw SchemaError.
void convert_ngsim(std::istream& in, std::ostream& out);

}  // namespace levelk::io
