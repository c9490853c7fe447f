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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>

#include "levelk/io/trajectory.hpp"
#include "levelk/traffic/types.hpp"

namespace levelk::validation {

struct StateCounts {
  std::array<std::uint64_t, traffic::kNumTrafficActions> actions{};
  std::uint64_t visits = 0;  // always the sum of `actions`
};

/// Action frequencies of one driver, by driver-observation index.
struct EmpiricalPolicy {
  std::map<std::size_t, StateCounts> states;

  void add(std::size_t state, std::size_t action);
  std::uint64_t total_visits() const;
};

struct EmpiricalOptions {
  traffic::RoadConfig road{};
  bool ring = true;                  // wrap gaps around road.length
  long long stride = 10;             // frames between decisions, aligned to frame 0
  long long lane_change_frames = 20; // lookahead for a lane change
  double maintain_band = 0.5;        // |a| below is maintain
  double hard_threshold = 2.5;       // |a| above is hard
  double centred_tolerance = 0.1;    // fraction of lane width; beyond is mid-maneuver
};

/// Label of the action behind one measurement. A lane index that differs
/// `lane_change_frames` later wins over the acceleration.
std::size_t classify_action(double a, int lane_now, int lane_later, const EmpiricalOptions& options = {});

/// Rebuilds, at every decision frame, each driver's observation from the
/// vehicles present in the same frame and labels the action. Frames where
/// the driver is off its lane centre (in the middle of a lane change), or
/// lacks a record `lane_change_frames` later, are skipped. On a straight
/// road (ring = false) the gaps are not wrapped.
std::map<int, EmpiricalPolicy> build_empirical(const io::TrajectorySet& data, const EmpiricalOptions& options = {});

}  // namespace levelk::validation
