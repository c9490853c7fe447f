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

#include "levelk/io/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "levelk/common/error.hpp"
#include "levelk/common/text.hpp"

namespace levelk::io {

std::size_t TrajectorySet::record_count() const {
  std::size_t n = 0;
  for (const auto& [id, rows] : vehicles) n += rows.size();
  return n;
}

namespace {

TrajectoryRecord parse_row(std::string_view line, std::size_t line_no, const ParseOptions& options) {
  const auto f = split(line, ',');
  if (f.size() != 7) {
    throw SchemaError("expected 7 columns, found " + std::to_string(f.size()), line_no);
  }
  TrajectoryRecord r;
  try {
    r.vehicle_id = static_cast<int>(parse_int(f[0]));
    r.frame = parse_int(f[1]);
    r.x = parse_double(f[2]);
    r.y = parse_double(f[3]);
    r.lane = static_cast<int>(parse_int(f[4]));
    r.v = parse_double(f[5]);
    r.a = parse_double(f[6]);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what(), line_no);
  }
  if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.v) || !std::isfinite(r.a)) {
    throw IntegrityError("non-finite value", line_no);
  }
  if (r.lane < 0 || (options.lanes > 0 && static_cast<std::size_t>(r.lane) >= options.lanes)) {
    throw IntegrityError("lane " + std::to_string(r.lane) + " outside [0, " + std::to_string(options.lanes) + ")",
                         line_no);
  }
  return r;
}

}  // namespace

TrajectorySet parse_trajectories(std::istream& in, const ParseOptions& options) {
  TrajectorySet set;
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty trajectory file");
  if (trim(line) != kTrajectoryHeader) {
    throw SchemaError("header must be '" + std::string(kTrajectoryHeader) + "', found '" + std::string(trim(line)) +
                      "'", 1);
  }
  std::set<int> unsorted;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    TrajectoryRecord r;
    try {
      r = parse_row(line, line_no, options);
      auto& rows = set.vehicles[r.vehicle_id];
      if (!rows.empty() && r.frame <= rows.back().frame) {
        if (options.strict) {
          throw IntegrityError("frame " + std::to_string(r.frame) + " of vehicle " + std::to_string(r.vehicle_id) +
                               " does not follow frame " + std::to_string(rows.back().frame), line_no);
        }
        unsorted.insert(r.vehicle_id);
      }
      rows.push_back(r);
    } catch (const DataError& e) {
      if (options.strict) throw;
      ++set.skipped_rows;
      set.warnings.push_back(std::string("skipped: ") + e.what());
    }
  }
  for (int id : unsorted) {
    auto& rows = set.vehicles[id];
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.frame < b.frame; });
    const auto before = rows.size();
    rows.erase(std::unique(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.frame == b.frame; }),
               rows.end());
    std::string msg = "vehicle " + std::to_string(id) + ": frames re-sorted";
    if (rows.size() != before) {
      msg += ", " + std::to_string(before - rows.size()) + " duplicate frame(s) dropped";
      set.skipped_rows += before - rows.size();
    }
    set.warnings.push_back(msg);
  }
  return set;
}

TrajectorySet load_trajectories(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_trajectories(in, options);
}

void write_trajectories(std::ostream& out, const TrajectorySet& set) {
  out << kTrajectoryHeader << '\n';
  for (const auto& [id, rows] : set.vehicles) {
    for (const auto& r : rows) {
      out << r.vehicle_id << ',' << r.frame << ',' << format_g(r.x, 17) << ',' << format_g(r.y, 17) << ','
          << r.lane << ',' << format_g(r.v, 17) << ',' << format_g(r.a, 17) << '\n';
    }
  }
}

void save_trajectories(const std::filesystem::path& path, const TrajectorySet& set) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_trajectories(out, set);
}

void convert_ngsim(std::istream& in, std::ostream& out) {
  constexpr double kFeet = 0.3048;
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty NGSIM file");
  std::unordered_map<std::string, std::size_t> col;
  const auto names = split(trim(line), ',');
  for (std::size_t i = 0; i < names.size(); ++i) col[std::string(trim(names[i]))] = i;
  const char* needed[] = {"Vehicle_ID", "Frame_ID", "Local_X", "Local_Y", "Lane_ID", "v_Vel", "v_Acc"};
  std::size_t idx[7];
  for (std::size_t k = 0; k < 7; ++k) {
    const auto it = col.find(needed[k]);
    if (it == col.end()) throw SchemaError(std::string("missing column ") + needed[k], 1);
    idx[k] = it->second;
  }
  out << kTrajectoryHeader << '\n';
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != names.size()) throw SchemaError("column count differs from header", line_no);
    try {
      const long long id = parse_int(f[idx[0]]);
      const long long frame = parse_int(f[idx[1]]);
      const double local_x = parse_double(f[idx[2]]);
      const double local_y = parse_double(f[idx[3]]);
      const long long lane = parse_int(f[idx[4]]);
      const double v = parse_double(f[idx[5]]);
      const double a = parse_double(f[idx[6]]);
      out << id << ',' << frame << ',' << format_g(local_y * kFeet, 17) << ',' << format_g(local_x * kFeet, 17) << ','
          << lane - 1 << ',' << format_g(v * kFeet, 17) << ',' << format_g(a * kFeet, 17) << '\n';
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what(), line_no);
    }
  }
}

}  // namespace levelk::io
