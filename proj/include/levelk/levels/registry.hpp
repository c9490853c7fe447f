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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levelk/rl/policy.hpp"

namespace levelk::levels {

/// Policies by (domain, level). Level 0 is the domain's anchor and must be
/// set before anything else; level i + 1 may only be stored once level i exists.
class PolicyRegistry {
 public:
  void set_anchor(const std::string& domain, rl::StochasticPolicy anchor);

  bool has(const std::string& domain, std::size_t level) const;
  /// Throws RegistryError if absent.
  const rl::StochasticPolicy& get(const std::string& domain, std::size_t level) const;
  /// Throws RegistryError for level 0 or a missing level - 1.
  void put(const std::string& domain, std::size_t level, rl::StochasticPolicy policy,
           std::vector<std::uint64_t> state_visits = {});

  /// Per-state visit counts recorded while the level was trained (empty if unknown).
  const std::vector<std::uint64_t>& visits(const std::string& domain, std::size_t level) const;

  /// Highest stored level (0 when only the anchor exists). Throws
  /// RegistryError for an unknown domain.
  std::size_t top_level(const std::string& domain) const;
  std::vector<std::size_t> levels(const std::string& domain) const;

  /// Writes `<root>/<domain>/level<k>.policy` for every trained level k >= 1.
  void save(const std::filesystem::path& root, const std::string& domain) const;
  /// Reads level1.policy, level2.policy, ... until the first gap; per-state
  /// visit counts come from a matching level<k>.checkpoint when present.
  /// Throws RegistryError if the directory is missing.
  void load(const std::filesystem::path& root, const std::string& domain);

  static std::filesystem::path policy_path(const std::filesystem::path& root, const std::string& domain,
                                           std::size_t level);
  static std::filesystem::path checkpoint_path(const std::filesystem::path& root, const std::string& domain,
                                               std::size_t level);

 private:
  struct Entry {
    rl::StochasticPolicy policy;
    std::vector<std::uint64_t> visits;
  };
  std::map<std::string, std::map<std::size_t, Entry>> entries_;
};

}  // namespace levelk::levels
