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

#include "levelk/common/mixed_radix.hpp"

#include <stdexcept>
#include <string>

namespace levelk {

MixedRadix::MixedRadix(std::vector<std::size_t> radices) : radices_(std::move(radices)) {
  if (radices_.empty()) throw std::invalid_argument("mixed radix needs at least one digit");
  for (std::size_t r : radices_) {
    if (r == 0) throw std::invalid_argument("mixed radix digit with radix 0");
    size_ *= r;
  }
}

std::size_t MixedRadix::encode(std::span<const std::size_t> digits) const {
  if (digits.size() != radices_.size()) {
    throw std::out_of_range("expected " + std::to_string(radices_.size()) + " digits, got " +
                            std::to_string(digits.size()));
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= radices_[i]) {
      throw std::out_of_range("digit " + std::to_string(i) + " = " + std::to_string(digits[i]) +
                              " outside radix " + std::to_string(radices_[i]));
    }
    index = index * radices_[i] + digits[i];
  }
  return index;
}

std::vector<std::size_t> MixedRadix::decode(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("index " + std::to_string(index) + " >= " + std::to_string(size_));
  std::vector<std::size_t> digits(radices_.size());
  for (std::size_t i = radices_.size(); i-- > 0;) {
    digits[i] = index % radices_[i];
    index /= radices_[i];
  }
  return digits;
}

std::vector<double> MixedRadix::normalized(std::size_t index) const {
  const auto digits = decode(index);
  std::vector<double> out(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    out[i] = radices_[i] > 1 ? static_cast<double>(digits[i]) / static_cast<double>(radices_[i] - 1) : 0.0;
  }
  return out;
}

}  // namespace levelk
