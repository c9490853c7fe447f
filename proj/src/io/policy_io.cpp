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

#include "levelk/io/policy_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "levelk/common/error.hpp"
#include "levelk/common/text.hpp"

namespace levelk::io {
namespace {

std::map<std::string, std::string> parse_header(const std::string& line, std::string_view magic) {
  const auto fields = split(trim(line), ' ');
  if (fields.size() < 2 || fields[0] != magic || fields[1] != "v1") {
    throw SchemaError("expected header '" + std::string(magic) + " v1 ...'", 1);
  }
  std::map<std::string, std::string> out;
  for (std::size_t i = 2; i < fields.size(); ++i) {
    if (fields[i].empty()) continue;
    const auto eq = fields[i].find('=');
    if (eq == std::string_view::npos) throw SchemaError("header field without '='", 1);
    out.emplace(std::string(fields[i].substr(0, eq)), std::string(fields[i].substr(eq + 1)));
  }
  return out;
}

std::size_t header_size(const std::map<std::string, std::string>& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) throw SchemaError("header is missing '" + key + "'", 1);
  try {
    const long long v = parse_int(it->second);
    if (v < 0) throw std::invalid_argument("negative");
    return static_cast<std::size_t>(v);
  } catch (const std::invalid_argument&) {
    throw SchemaError("header field '" + key + "' is not a nonnegative integer", 1);
  }
}

void append(std::string& buf, double v, int digits) {
  char tmp[40];
  const int n = std::snprintf(tmp, sizeof tmp, "%.*g", digits, v);
  buf.append(tmp, static_cast<std::size_t>(n));
}

void append(std::string& buf, std::uint64_t v) { buf += std::to_string(v); }

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

double field_double(std::string_view f, std::size_t line) {
  try {
    return parse_double(f);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what(), line);
  }
}

std::uint64_t field_count(std::string_view f, std::size_t line) {
  try {
    const long long v = parse_int(f);
    if (v < 0) throw DataError("negative count", line);
    return static_cast<std::uint64_t>(v);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what(), line);
  }
}

void set_row_checked(rl::StochasticPolicy& policy, std::size_t state, const std::vector<double>& row,
                     std::size_t line) {
  try {
    policy.set_row(state, row);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what(), line);
  }
}

}  // namespace

void write_policy(std::ostream& out, const rl::StochasticPolicy& policy, std::size_t level) {
  std::string buf = "#levelk-policy v1 states=" + std::to_string(policy.num_states()) +
                    " actions=" + std::to_string(policy.num_actions()) + " level=" + std::to_string(level) + "\n";
  for (std::size_t s = 0; s < policy.num_states(); ++s) {
    append(buf, static_cast<std::uint64_t>(s));
    for (double p : policy.row(s)) {
      buf += ',';
      append(buf, p, 12);
    }
    buf += '\n';
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

void save_policy(const std::filesystem::path& path, const rl::StochasticPolicy& policy, std::size_t level) {
  auto out = open_out(path);
  write_policy(out, policy, level);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

LoadedPolicy read_policy(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty policy file", 1);
  const auto h = parse_header(line, "#levelk-policy");
  const std::size_t S = header_size(h, "states"), A = header_size(h, "actions");
  const std::size_t level = header_size(h, "level");
  if (S == 0 || A == 0) throw SchemaError("policy header declares an empty table", 1);
  LoadedPolicy result{rl::StochasticPolicy(S, A), level};
  std::vector<bool> seen(S, false);
  std::vector<double> row(A);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != A + 1) throw DataError("expected " + std::to_string(A + 1) + " fields", line_no);
    const auto s = field_count(fields[0], line_no);
    if (s >= S) throw DataError("state index out of range", line_no);
    if (seen[s]) throw DataError("duplicate state row", line_no);
    seen[s] = true;
    for (std::size_t a = 0; a < A; ++a) row[a] = field_double(fields[a + 1], line_no);
    set_row_checked(result.policy, s, row, line_no);
  }
  return result;
}

LoadedPolicy load_policy(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_policy(in);
}

void write_checkpoint(std::ostream& out, const rl::LearnerState& learner, const rl::StochasticPolicy& policy,
                      std::size_t level) {
  if (policy.num_states() != learner.num_states() || policy.num_actions() != learner.num_actions()) {
    throw std::invalid_argument("checkpoint: policy and learner shapes differ");
  }
  std::string buf = "#levelk-checkpoint v1 states=" + std::to_string(learner.num_states()) +
                    " actions=" + std::to_string(learner.num_actions()) + " level=" + std::to_string(level) +
                    " steps=" + std::to_string(learner.steps()) + " avg_reward=";
  append(buf, learner.avg_reward(), 17);
  buf += '\n';
  std::vector<std::uint32_t> states = learner.visited_states();
  std::sort(states.begin(), states.end());
  for (std::uint32_t s : states) {
    append(buf, static_cast<std::uint64_t>(s));
    buf += ',';
    append(buf, learner.v(s), 17);
    buf += ',';
    append(buf, learner.count(s));
    buf += ',';
    append(buf, learner.beta_state(s), 17);
    for (std::size_t a = 0; a < learner.num_actions(); ++a) {
      buf += ',';
      append(buf, policy.prob(s, a), 17);
      buf += ',';
      append(buf, learner.q(s, a), 17);
      buf += ',';
      append(buf, learner.count(s, a));
      buf += ',';
      append(buf, learner.beta(s, a), 17);
    }
    buf += '\n';
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

void save_checkpoint(const std::filesystem::path& path, const rl::LearnerState& learner,
                     const rl::StochasticPolicy& policy, std::size_t level) {
  auto out = open_out(path);
  write_checkpoint(out, learner, policy, level);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

LoadedCheckpoint read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty checkpoint file", 1);
  const auto h = parse_header(line, "#levelk-checkpoint");
  const std::size_t S = header_size(h, "states"), A = header_size(h, "actions");
  if (S == 0 || A == 0) throw SchemaError("checkpoint header declares an empty table", 1);
  const std::size_t level = header_size(h, "level");
  const std::size_t steps = header_size(h, "steps");
  const auto avg_it = h.find("avg_reward");
  if (avg_it == h.end()) throw SchemaError("header is missing 'avg_reward'", 1);
  LoadedCheckpoint result{rl::LearnerState(S, A), rl::StochasticPolicy(S, A), level};
  result.learner.restore_globals(steps, field_double(avg_it->second, 1));
  std::vector<double> p(A), q(A), beta(A);
  std::vector<std::uint64_t> counts(A);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 4 + 4 * A) throw DataError("expected " + std::to_string(4 + 4 * A) + " fields", line_no);
    const auto s = field_count(f[0], line_no);
    if (s >= S) throw DataError("state index out of range", line_no);
    for (std::size_t a = 0; a < A; ++a) {
      p[a] = field_double(f[4 + 4 * a], line_no);
      q[a] = field_double(f[5 + 4 * a], line_no);
      counts[a] = field_count(f[6 + 4 * a], line_no);
      beta[a] = field_double(f[7 + 4 * a], line_no);
    }
    result.learner.restore_state(s, field_double(f[1], line_no), field_double(f[3], line_no),
                                 field_count(f[2], line_no), q, beta, counts);
    set_row_checked(result.policy, s, p, line_no);
  }
  return result;
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_checkpoint(in);
}

}  // namespace levelk::io
