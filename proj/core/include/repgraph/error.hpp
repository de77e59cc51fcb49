// Copyright 2026 The repgraph Authors
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

#ifndef REPGRAPH_ERROR_HPP_
#define REPGRAPH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace repgraph {

// Broad failure classes. The CLI maps each class to its own exit code.
enum class ErrorClass { kConfig, kData, kNumeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass error_class, const std::string& what)
      : std::runtime_error(what), class_(error_class) {}

  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

// Bad or missing configuration: unreadable config files, invalid
// parameters, malformed policy tables.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorClass::kConfig, what) {}
};

// Input data that violates a contract: unknown nodes, clock regressions,
// rejected telemetry batches.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what)
      : Error(ErrorClass::kData, what) {}
};

// An edge whose endpoint kinds have no entry in the edge-policy table.
class PolicyError : public DataError {
 public:
  explicit PolicyError(const std::string& what) : DataError(what) {}
};

// Numerical preconditions that do not hold (zero-degree rows, degenerate
// objective, undefined metrics).
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorClass::kNumeric, what) {}
};

}  // namespace repgraph

#endif  // REPGRAPH_ERROR_HPP_
