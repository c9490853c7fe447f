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
#include <stdexcept>
#include <string>

namespace levelk {

/// Invalid or out-of-range configuration value. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A referenced policy level or registry entry is missing or unreadable.
/// Maps to CLI exit code 3.
class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base class for data ingestion failures. Maps to CLI exit code 4.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  /// 1-based line number of the offending row, or 0 when not row-specific.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Header or column layout does not match the documented schema.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

/// A row violates a value or ordering rule (lane bounds, frame order, ...).
class IntegrityError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace levelk
