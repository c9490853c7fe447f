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

#include "levelk/rl/learner.hpp"
#include "levelk/rl/policy.hpp"

namespace levelk::io {

/// Policy text format: header `#levelk-policy v1 states=S actions=A level=k`,
/// then one row `state,p_0,...,p_{A-1}` per state (12 significant digits).
void write_policy(std::ostream& out, const rl::StochasticPolicy& policy, std::size_t level);
void save_policy(const std::filesystem::path& path, const rl::StochasticPolicy& policy, std::size_t level);

struct LoadedPolicy {
  rl::StochasticPolicy policy;
  std::size_t level;
};

/// Throws SchemaError on a bad header and DataError (with line number) on a
/// malformed row. States without a row stay uniform.
LoadedPolicy read_policy(std::istream& in);
LoadedPolicy load_policy(const std::filesystem::path& path);

/// Learner checkpoint: header
///   `#levelk-checkpoint v1 states=S actions=A level=k steps=t avg_reward=R`
/// then, for every visited state, `state,V,count_s,beta_s` followed by
/// `p,Q,count,beta` for each action (4 + 4A columns; 16 for three actions).
/// Values use 17 significant digits so a round trip is exact.
void write_checkpoint(std::ostream& out, const rl::LearnerState& learner, const rl::StochasticPolicy& policy,
                      std::size_t level);
void save_checkpoint(const std::filesystem::path& path, const rl::LearnerState& learner,
                     const rl::StochasticPolicy& policy, std::size_t level);

struct LoadedCheckpoint {
  rl::LearnerState learner;
  rl::StochasticPolicy policy;
  std::size_t level;
};

LoadedCheckpoint read_checkpoint(std::istream& in);
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace levelk::io
