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
#include <span>
#include <vector>

namespace levelk {

/// Bijective mixed-radix codec between digit tuples and dense indices.
/// Digit 0 is the most significant, so the all-max tuple maps to size()-1.
class MixedRadix {
 public:
  explicit MixedRadix(std::vector<std::size_t> radices);

  std::size_t size() const noexcept { return size_; }
  std::size_t num_digits() const noexcept { return radices_.size(); }
  std::span<const std::size_t> radices() const noexcept { return radices_; }

  /// Throws std::out_of_range if a digit is outside its radix or the count
  /// of digits is wrong.
  std::size_t encode(std::span<const std::size_t> digits) const;
  std::vector<std::size_t> decode(std::size_t index) const;

  /// Digits scaled to [0, 1]; the state encoding fed to function approximators.
  std::vector<double> normalized(std::size_t index) const;

 private:
  std::vector<std::size_t> radices_;
  std::size_t size_ = 1;
};

}  // namespace levelk
