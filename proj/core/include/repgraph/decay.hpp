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

#ifndef REPGRAPH_DECAY_HPP_
#define REPGRAPH_DECAY_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repgraph/kinds.hpp"

namespace repgraph {

// Edges lighter than this are dropped by pruning.
inline constexpr double kPruneThreshold = 0.01;

enum class DecayFunction { kConstant, kLinear, kExponential };

std::string_view to_string(DecayFunction fn) noexcept;
std::optional<DecayFunction> parse_decay_function(std::string_view name) noexcept;

// How an edge's weight evolves with age.
//
//   Constant:     w0                        while age <= max_alive
//   Linear:       w0 * (1 - age/max_alive)  reaching 0 at max_alive
//   Exponential:  w0 * exp(-rate * age)     while age <= max_alive
//
// Every function is 0 past max_alive.
struct DecayPolicy {
  DecayFunction function = DecayFunction::kConstant;
  double initial_weight = 1.0;
  double decay_rate = 0.0;  // per hour, exponential only
  Hours max_alive_hours = 168.0;

  // Throws ConfigError when the fields are inconsistent (negative weight,
  // non-positive lifetime, a rate on a non-exponential policy, ...).
  void validate() const;
};

// Weight after `age` hours. Negative ages are clamped to 0.
double weight_at(const DecayPolicy& policy, Hours age) noexcept;

// Longest age at which the weight is still >= threshold; 0 if the initial
// weight is already below it. Used by the generator to size its rates.
Hours survival_hours(const DecayPolicy& policy, double threshold) noexcept;

struct EdgePolicy {
  EntityKind source{};
  EntityKind target{};
  DecayPolicy decay;
};

// Kind-pair -> decay policy lookup. Pairs are unordered: an edge between
// a URL and an alert resolves to the (AlertId, URL) row.
class EdgePolicyTable {
 public:
  EdgePolicyTable() = default;
  explicit EdgePolicyTable(std::vector<EdgePolicy> entries);

  // The 18 shipped rows (initial weights, decay rates, lifetimes).
  static EdgePolicyTable defaults();

  // JSON array of {source_kind, target_kind, decay, initial_weight,
  // decay_rate, max_alive_hours}. Throws ConfigError.
  static EdgePolicyTable from_json(std::string_view text);
  static EdgePolicyTable load(const std::filesystem::path& path);
  std::string to_json() const;

  std::optional<std::size_t> find(EntityKind a, EntityKind b) const noexcept;
  const EdgePolicy& at(std::size_t index) const { return entries_.at(index); }
  std::span<const EdgePolicy> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  // Longest max-alive among the rows that mention `kind`; 0 when the kind
  // appears in no row.
  Hours node_lifespan(EntityKind kind) const noexcept {
    return lifespan_[index_of(kind)];
  }

  // "AlertId-SHA1" style label of a row.
  std::string pair_label(std::size_t index) const;

 private:
  std::vector<EdgePolicy> entries_;
  std::array<std::array<int, kNumEntityKinds>, kNumEntityKinds> lookup_{};
  std::array<Hours, kNumEntityKinds> lifespan_{};
};

}  // namespace repgraph

#endif  // REPGRAPH_DECAY_HPP_
