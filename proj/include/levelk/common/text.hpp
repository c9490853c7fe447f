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

#include <string>
#include <string_view>
#include <vector>

namespace levelk {

/// printf-style "%.<digits>g" rendering; the fixed textual form used in
/// every output file so that reruns are byte-identical.
std::string format_g(double value, int significant_digits = 12);

/// Splits on `sep` without trimming; empty fields are preserved.
std::vector<std::string_view> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

/// Strict numeric parsing of a whole field; throws std::invalid_argument.
double parse_double(std::string_view field);
long long parse_int(std::string_view field);

}  // namespace levelk
