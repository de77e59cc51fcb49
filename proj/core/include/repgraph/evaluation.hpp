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

#ifndef REPGRAPH_EVALUATION_HPP_
#define REPGRAPH_EVALUATION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <span>
#include <utility>
#include <vector>

#include "repgraph/kinds.hpp"

namespace repgraph {

enum class SplitRole : std::uint8_t { kTrain, kValidation, kTest };

std::string_view to_string(SplitRole role) noexcept;

struct SplitFractions {
  double train = 0.7;
  double validation = 0.1;
  double test = 0.2;

  void validate() const;  // nonnegative, summing to 1
};

struct LabeledEntity {
  EntityRef ref;
  bool malicious = false;
};

struct SplitAssignment {
  std::map<EntityRef, SplitRole> roles;
  std::uint64_t seed = 0;

  std::array<std::size_t, 3> counts() const;  // train, validation, test
  std::optional<SplitRole> role_of(const EntityRef& ref) const;
};

inline constexpr std::size_t kMinSplitSize = 10;

// Stratified by (kind, class). Within a stratum, entities are ordered by a
// seeded hash of their key and cut into consecutive runs. Run lengths are
// rounded so that every stratum is within one entity of its exact share
// and the global counts equal the largest-remainder rounding of the
// fractions. Throws DataError below kMinSplitSize entities or on
// duplicates.
SplitAssignment split(std::span<const LabeledEntity> truth, std::uint64_t seed,
                      const SplitFractions& fractions = {});

struct Confusion {
  std::size_t tp = 0;  // malicious predicted malicious
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

// Binary metrics with malicious as the positive class (label 1). A score
// at or above a threshold predicts malicious.
struct MetricsReport {
  std::size_t support = 0;
  std::size_t positives = 0;
  double threshold = 0.5;
  // Unweighted means over the two classes at `threshold`.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::array<double, 2> class_f1{};  // benign, malicious
  double malicious_recall = 0.0;
  Confusion at_threshold;
  // Area under the precision-recall curve pooled over both one-vs-rest
  // class columns. Undefined (nullopt) unless both classes are present.
  std::optional<double> pr_auc;
  // Same curve for the malicious column alone.
  std::optional<double> malicious_ap;
  // Operating point of the malicious-class PR curve with the highest F1.
  double best_threshold = 1.0;
  double best_f1 = 0.0;
  Confusion at_best;

  // pr_auc, or NumericError when the set holds a single class.
  double require_pr_auc() const;
};

// Step-wise area under the PR curve: sum over distinct score thresholds of
// (recall gain) * precision, with tied scores forming one threshold.
// Throws NumericError without positive labels.
double average_precision(std::span<const double> scores,
                         std::span<const std::uint8_t> labels);

// Throws NumericError for an empty set and DataError for length mismatch,
// labels outside {0, 1} or scores outside [0, 1].
MetricsReport compute_metrics(std::span<const double> scores,
                              std::span<const std::uint8_t> labels,
                              double threshold = 0.5);

inline constexpr std::size_t kMinKindSupport = 100;

struct KindBreakdown {
  std::map<EntityKind, MetricsReport> reports;
  std::vector<std::pair<EntityKind, std::size_t>> skipped;  // kind, support
};

KindBreakdown per_kind_breakdown(std::span<const double> scores,
                                 std::span<const std::uint8_t> labels,
                                 std::span<const EntityKind> kinds,
                                 std::size_t min_support = kMinKindSupport,
                                 double threshold = 0.5);

// Equal-width bins over [0, 1]; 1.0 falls in the last bin.
std::vector<std::size_t> histogram(std::span<const double> scores,
                                   std::size_t bins = 20);

}  // namespace repgraph

#endif  // REPGRAPH_EVALUATION_HPP_
