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

#ifndef REPGRAPH_REPUTATION_HPP_
#define REPGRAPH_REPUTATION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "repgraph/graph.hpp"
#include "repgraph/kinds.hpp"

namespace repgraph {

// Column order of a label row.
inline constexpr std::size_t kBenignColumn = 0;
inline constexpr std::size_t kMaliciousColumn = 1;

using LabelRow = std::array<double, 2>;

// N x 2 beliefs [P(benign), P(malicious)] plus the frozen-row mask.
struct LabelMatrix {
  std::vector<LabelRow> rows;
  std::vector<std::uint8_t> mask;  // 1 = high confidence, frozen

  // Rows [1 - s, s] with the mask set wherever classify(s) is not Unknown.
  static LabelMatrix from_scores(std::span<const double> p_malicious);

  std::size_t size() const noexcept { return rows.size(); }
  double malicious(std::size_t i) const { return rows[i][kMaliciousColumn]; }
  bool masked(std::size_t i) const { return mask[i] != 0; }
  std::vector<double> malicious_scores() const;
};

// Cross-organization evidence gathered for one entity.
struct BootstrapSignals {
  std::uint64_t orgs_true_positive = 0;
  std::uint64_t products_flagging = 0;
  std::uint64_t unique_detectors = 0;
  std::uint64_t alerts_linked = 0;
  std::uint64_t orgs_observing = 0;
  std::uint64_t tp_graded_alerts = 0;
  std::uint64_t fp_or_bp_graded_alerts = 0;
};

// One weight per signal, in BootstrapSignals field order. The last weight
// is subtracted.
struct BootstrapWeights {
  std::array<double, 7> values = {1.0, 0.5, 0.25, 0.1, 0.1, 0.5, 1.0};

  // {"orgs_true_positive": w, ...}; missing fields keep their default.
  static BootstrapWeights from_json(std::string_view text);
  static BootstrapWeights load(const std::filesystem::path& path);
  void validate() const;
};

// logistic(sum_i w_i log(1 + x_i) - w_7 log(1 + x_7)); 0.5 for no evidence.
double bootstrap_score(const BootstrapSignals& signals,
                       const BootstrapWeights& weights = {});

enum class AlertGrade { kUngraded, kTruePositive, kFalsePositive, kBenignPositive };

std::string_view to_string(AlertGrade grade) noexcept;
std::optional<AlertGrade> parse_alert_grade(std::string_view name) noexcept;

// Accumulates bootstrap evidence per entity across batches. Observations
// are keyed by alert, so replaying a batch does not inflate the counts.
class SignalLedger {
 public:
  struct Observation {
    std::string_view org;
    std::string_view alert;
    std::string_view detector;  // may be empty
    std::string_view product;   // may be empty
    AlertGrade grade = AlertGrade::kUngraded;
  };

  void record(const EntityRef& entity, const Observation& obs);

  BootstrapSignals signals(const EntityRef& entity) const;
  std::size_t size() const noexcept { return entries_.size(); }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [ref, e] : entries_) fn(ref, summarize(e));
  }

 private:
  struct Entry {
    std::unordered_set<std::string> orgs;
    std::unordered_set<std::string> orgs_tp;
    std::unordered_set<std::string> products;
    std::unordered_set<std::string> detectors;
    std::unordered_map<std::string, AlertGrade> alerts;
  };

  static BootstrapSignals summarize(const Entry& e);

  std::map<EntityRef, Entry> entries_;
};

// Everything besides the graph that decides the starting beliefs.
struct LabelInputs {
  std::unordered_map<NodeId, double> intel;      // known scores
  std::unordered_map<NodeId, double> bootstrap;  // signal-derived priors
  std::unordered_set<NodeId> hidden;             // forced to 0.5, unmasked
};

// Starting beliefs for the nodes in `order`:
//   org       intel, else 0.5
//   alert     intel, else the node's reputation (0.5, or 1 when disrupted)
//   incident  intel, else the highest score among its alerts
//   entity    0.5 if hidden, else intel, else bootstrap, else 0.5
// Throws DataError for intel on nodes outside `order` or scores outside
// [0, 1].
LabelMatrix initialize_labels(const ThreatGraph& graph,
                              std::span<const NodeId> order,
                              const LabelInputs& inputs);

// Looks up each (kind, key) in the graph; entries absent from it are
// skipped.
std::unordered_map<NodeId, double> resolve_intel(
    const ThreatGraph& graph, const std::map<EntityRef, double>& intel);

// Bootstrap priors for every entity in the ledger that is live in the
// graph and not excluded.
std::unordered_map<NodeId, double> bootstrap_priors(
    const ThreatGraph& graph, const SignalLedger& ledger,
    const BootstrapWeights& weights,
    const std::unordered_set<NodeId>& exclude = {});

// Intel file: {"SHA1": {"<key>": 0.95, ...}, "URL": {...}}.
std::map<EntityRef, double> load_intel(const std::filesystem::path& path);
std::map<EntityRef, double> parse_intel(std::string_view text);
std::string intel_to_json(const std::map<EntityRef, double>& intel);

}  // namespace repgraph

#endif  // REPGRAPH_REPUTATION_HPP_
