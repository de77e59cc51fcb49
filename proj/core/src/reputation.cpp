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

#include "repgraph/reputation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "io_util.hpp"
#include "json.hpp"
#include "repgraph/error.hpp"
#include "repgraph/verdict.hpp"

namespace repgraph {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 7> kSignalNames = {
    "orgs_true_positive", "products_flagging",  "unique_detectors",
    "alerts_linked",      "orgs_observing",     "tp_graded_alerts",
    "fp_or_bp_graded_alerts",
};

void check_score(double s, std::string_view what) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw DataError(std::string(what) + ": score outside [0, 1]");
  }
}

}  // namespace

Verdict classify(double score) {
  check_score(score, "classify");
  if (score >= kMaliciousThreshold) return Verdict::kMalicious;
  if (score <= kBenignThreshold) return Verdict::kBenign;
  return Verdict::kUnknown;
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kBenign:
      return "Benign";
    case Verdict::kUnknown:
      return "Unknown";
    case Verdict::kMalicious:
      return "Malicious";
  }
  return "Unknown";
}

LabelMatrix LabelMatrix::from_scores(std::span<const double> p_malicious) {
  LabelMatrix m;
  m.rows.reserve(p_malicious.size());
  m.mask.reserve(p_malicious.size());
  for (double s : p_malicious) {
    m.rows.push_back({1.0 - s, s});
    m.mask.push_back(classify(s) == Verdict::kUnknown ? 0 : 1);
  }
  return m;
}

std::vector<double> LabelMatrix::malicious_scores() const {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[i] = rows[i][kMaliciousColumn];
  }
  return out;
}

BootstrapWeights BootstrapWeights::from_json(std::string_view text) {
  BootstrapWeights w;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("bootstrap weights: expected an object");
    for (std::size_t i = 0; i < kSignalNames.size(); ++i) {
      const std::string name(kSignalNames[i]);
      if (doc.contains(name)) w.values[i] = doc.at(name).get<double>();
    }
    for (const auto& [name, value] : doc.items()) {
      if (std::find(kSignalNames.begin(), kSignalNames.end(), name) ==
          kSignalNames.end()) {
        throw ConfigError("bootstrap weights: unknown field '" + name + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bootstrap weights: ") + e.what());
  }
  w.validate();
  return w;
}

BootstrapWeights BootstrapWeights::load(const std::filesystem::path& path) {
  return from_json(detail::read_text_file<ConfigError>(path, "bootstrap weights"));
}

void BootstrapWeights::validate() const {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("bootstrap weights must be finite and >= 0");
    }
  }
}

double bootstrap_score(const BootstrapSignals& s, const BootstrapWeights& w) {
  const std::array<std::uint64_t, 7> x = {
      s.orgs_true_positive, s.products_flagging, s.unique_detectors,
      s.alerts_linked,      s.orgs_observing,    s.tp_graded_alerts,
      s.fp_or_bp_graded_alerts,
  };
  double z = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    z += w.values[i] * std::log1p(static_cast<double>(x[i]));
  }
  z -= w.values[6] * std::log1p(static_cast<double>(x[6]));
  return 1.0 / (1.0 + std::exp(-z));
}

std::string_view to_string(AlertGrade grade) noexcept {
  switch (grade) {
    case AlertGrade::kUngraded:
      return "Ungraded";
    case AlertGrade::kTruePositive:
      return "TruePositive";
    case AlertGrade::kFalsePositive:
      return "FalsePositive";
    case AlertGrade::kBenignPositive:
      return "BenignPositive";
  }
  return "Ungraded";
}

std::optional<AlertGrade> parse_alert_grade(std::string_view name) noexcept {
  if (name == "Ungraded" || name.empty()) return AlertGrade::kUngraded;
  if (name == "TruePositive") return AlertGrade::kTruePositive;
  if (name == "FalsePositive") return AlertGrade::kFalsePositive;
  if (name == "BenignPositive") return AlertGrade::kBenignPositive;
  return std::nullopt;
}

void SignalLedger::record(const EntityRef& entity, const Observation& obs) {
  Entry& e = entries_[entity];
  e.orgs.emplace(obs.org);
  if (obs.grade == AlertGrade::kTruePositive) e.orgs_tp.emplace(obs.org);
  if (!obs.product.empty()) e.products.emplace(obs.product);
  if (!obs.detector.empty()) e.detectors.emplace(obs.detector);
  // A later grade for the same alert replaces an earlier one.
  auto [it, inserted] = e.alerts.try_emplace(std::string(obs.alert), obs.grade);
  if (!inserted && obs.grade != AlertGrade::kUngraded) it->second = obs.grade;
}

BootstrapSignals SignalLedger::summarize(const Entry& e) {
  BootstrapSignals s;
  s.orgs_true_positive = e.orgs_tp.size();
  s.products_flagging = e.products.size();
  s.unique_detectors = e.detectors.size();
  s.alerts_linked = e.alerts.size();
  s.orgs_observing = e.orgs.size();
  for (const auto& [alert, grade] : e.alerts) {
    if (grade == AlertGrade::kTruePositive) ++s.tp_graded_alerts;
    if (grade == AlertGrade::kFalsePositive ||
        grade == AlertGrade::kBenignPositive) {
      ++s.fp_or_bp_graded_alerts;
    }
  }
  return s;
}

BootstrapSignals SignalLedger::signals(const EntityRef& entity) const {
  auto it = entries_.find(entity);
  return it == entries_.end() ? BootstrapSignals{} : summarize(it->second);
}

LabelMatrix initialize_labels(const ThreatGraph& graph,
                              std::span<const NodeId> order,
                              const LabelInputs& inputs) {
  std::unordered_map<NodeId, std::size_t> pos;
  pos.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos.emplace(order[i], i);
  for (const auto& [id, score] : inputs.intel) {
    if (!pos.contains(id)) {
      throw DataError("initialize_labels: intel for node #" +
                      std::to_string(static_cast<std::uint64_t>(id)) +
                      " which is not in the graph");
    }
    check_score(score, "initialize_labels: intel");
  }

  auto intel_of = [&](NodeId id) -> std::optional<double> {
    auto it = inputs.intel.find(id);
    if (it == inputs.intel.end()) return std::nullopt;
    return it->second;
  };
  auto alert_score = [&](NodeId id) {
    return intel_of(id).value_or(graph.node(id).reputation);
  };

  std::vector<double> scores(order.size(), kUnknownScore);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const NodeId id = order[i];
    const NodeRecord& rec = graph.node(id);
    switch (rec.layer) {
      case NodeLayer::kOrganization:
        scores[i] = intel_of(id).value_or(kUnknownScore);
        break;
      case NodeLayer::kAlert:
        scores[i] = alert_score(id);
        break;
      case NodeLayer::kIncident:
        if (auto v = intel_of(id)) {
          scores[i] = *v;
        } else {
          double best = kUnknownScore;
          bool any = false;
          for (NodeId nb : graph.neighbors(id)) {
            if (graph.node(nb).layer != NodeLayer::kAlert) continue;
            const double s = alert_score(nb);
            best = any ? std::max(best, s) : s;
            any = true;
          }
          scores[i] = best;
        }
        break;
      case NodeLayer::kEntity:
      case NodeLayer::kParentEntity:
        if (inputs.hidden.contains(id)) {
          scores[i] = kUnknownScore;
        } else if (auto v = intel_of(id)) {
          scores[i] = *v;
        } else if (auto it = inputs.bootstrap.find(id);
                   it != inputs.bootstrap.end()) {
          check_score(it->second, "initialize_labels: bootstrap");
          scores[i] = it->second;
        }
        break;
    }
  }
  return LabelMatrix::from_scores(scores);
}

std::unordered_map<NodeId, double> resolve_intel(
    const ThreatGraph& graph, const std::map<EntityRef, double>& intel) {
  std::unordered_map<NodeId, double> out;
  for (const auto& [ref, score] : intel) {
    if (auto id = graph.find(ref.kind, ref.key)) out.emplace(*id, score);
  }
  return out;
}

std::unordered_map<NodeId, double> bootstrap_priors(
    const ThreatGraph& graph, const SignalLedger& ledger,
    const BootstrapWeights& weights,
    const std::unordered_set<NodeId>& exclude) {
  std::unordered_map<NodeId, double> out;
  ledger.for_each([&](const EntityRef& ref, const BootstrapSignals& s) {
    const auto id = graph.find(ref.kind, ref.key);
    if (!id || exclude.contains(*id)) return;
    out.emplace(*id, bootstrap_score(s, weights));
  });
  return out;
}

std::map<EntityRef, double> parse_intel(std::string_view text) {
  std::map<EntityRef, double> out;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw DataError("intel: expected an object of kinds");
    for (const auto& [kind_name, entries] : doc.items()) {
      const auto kind = parse_entity_kind(kind_name);
      if (!kind) throw DataError("intel: unknown kind '" + kind_name + "'");
      for (const auto& [key, score] : entries.items()) {
        const double s = score.get<double>();
        check_score(s, "intel " + kind_name + "/" + key);
        out[EntityRef{*kind, canonical_key(key)}] = s;
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("intel: ") + e.what());
  }
  return out;
}

std::map<EntityRef, double> load_intel(const std::filesystem::path& path) {
  return parse_intel(detail::read_text_file<DataError>(path, "intel"));
}

std::string intel_to_json(const std::map<EntityRef, double>& intel) {
  json doc = json::object();
  for (const auto& [ref, score] : intel) {
    doc[std::string(to_string(ref.kind))][ref.key] = score;
  }
  return doc.dump(1);
}

}  // namespace repgraph
