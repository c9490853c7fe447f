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

#include "levelk/levels/registry.hpp"

#include "levelk/common/error.hpp"
#include "levelk/io/policy_io.hpp"

namespace levelk::levels {

void PolicyRegistry::set_anchor(const std::string& domain, rl::StochasticPolicy anchor) {
  auto& levels = entries_[domain];
  levels.erase(0);
  levels.emplace(0, Entry{std::move(anchor), {}});
}

bool PolicyRegistry::has(const std::string& domain, std::size_t level) const {
  const auto it = entries_.find(domain);
  return it != entries_.end() && it->second.count(level) > 0;
}

const rl::StochasticPolicy& PolicyRegistry::get(const std::string& domain, std::size_t level) const {
  const auto it = entries_.find(domain);
  if (it == entries_.end() || !it->second.count(level)) {
    throw RegistryError("no level-" + std::to_string(level) + " policy for domain '" + domain + "'");
  }
  return it->second.at(level).policy;
}

void PolicyRegistry::put(const std::string& domain, std::size_t level, rl::StochasticPolicy policy,
                         std::vector<std::uint64_t> state_visits) {
  if (level == 0) throw RegistryError("level 0 is the anchor; use set_anchor");
  if (!has(domain, level - 1)) {
    throw RegistryError("cannot store level " + std::to_string(level) + " for '" + domain + "' before level " +
                        std::to_string(level - 1));
  }
  const auto& anchor = get(domain, 0);
  if (policy.num_states() != anchor.num_states() || policy.num_actions() != anchor.num_actions()) {
    throw RegistryError("policy shape does not match the '" + domain + "' anchor");
  }
  auto& levels = entries_[domain];
  levels.erase(level);
  levels.emplace(level, Entry{std::move(policy), std::move(state_visits)});
}

const std::vector<std::uint64_t>& PolicyRegistry::visits(const std::string& domain, std::size_t level) const {
  get(domain, level);
  return entries_.at(domain).at(level).visits;
}

std::size_t PolicyRegistry::top_level(const std::string& domain) const {
  const auto it = entries_.find(domain);
  if (it == entries_.end() || it->second.empty()) throw RegistryError("unknown domain '" + domain + "'");
  std::size_t k = 0;
  while (it->second.count(k + 1)) ++k;
  return k;
}

std::vector<std::size_t> PolicyRegistry::levels(const std::string& domain) const {
  std::vector<std::size_t> out;
  const auto it = entries_.find(domain);
  if (it == entries_.end()) return out;
  for (const auto& [level, entry] : it->second) out.push_back(level);
  return out;
}

std::filesystem::path PolicyRegistry::policy_path(const std::filesystem::path& root, const std::string& domain,
                                                  std::size_t level) {
  return root / domain / ("level" + std::to_string(level) + ".policy");
}

std::filesystem::path PolicyRegistry::checkpoint_path(const std::filesystem::path& root,
                                                      const std::string& domain, std::size_t level) {
  return root / domain / ("level" + std::to_string(level) + ".checkpoint");
}

void PolicyRegistry::save(const std::filesystem::path& root, const std::string& domain) const {
  const std::size_t top = top_level(domain);
  for (std::size_t k = 1; k <= top; ++k) io::save_policy(policy_path(root, domain, k), get(domain, k), k);
}

void PolicyRegistry::load(const std::filesystem::path& root, const std::string& domain) {
  if (!std::filesystem::is_directory(root / domain)) {
    throw RegistryError("policy directory '" + (root / domain).string() + "' does not exist");
  }
  for (std::size_t k = 1;; ++k) {
    const auto path = policy_path(root, domain, k);
    if (!std::filesystem::exists(path)) break;
    io::LoadedPolicy loaded = [&] {
      try {
        return io::load_policy(path);
      } catch (const DataError& e) {
        throw RegistryError("'" + path.string() + "': " + e.what());
      }
    }();
    if (loaded.level != k) throw RegistryError("'" + path.string() + "' declares level " + std::to_string(loaded.level));
    std::vector<std::uint64_t> visits;
    const auto cp = checkpoint_path(root, domain, k);
    if (std::filesystem::exists(cp)) {
      const auto checkpoint = io::load_checkpoint(cp);
      visits.resize(checkpoint.learner.num_states());
      for (std::size_t s = 0; s < visits.size(); ++s) visits[s] = checkpoint.learner.count(s);
    }
    put(domain, k, std::move(loaded.policy), std::move(visits));
  }
}

}  // namespace levelk::levels
