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

#include "repgraph/decay.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "repgraph/error.hpp"

namespace repgraph {

using nlohmann::json;

std::string_view to_string(DecayFunction fn) noexcept {
  switch (fn) {
    case DecayFunction::kConstant:
      return "Constant";
    case DecayFunction::kLinear:
      return "Linear";
    case DecayFunction::kExponential:
      return "Exponential";
  }
  return "Constant";
}

std::optional<DecayFunction> parse_decay_function(
    std::string_view name) noexcept {
  if (name == "Constant") return DecayFunction::kConstant;
  if (name == "Linear") return DecayFunction::kLinear;
  if (name == "Exponential") return DecayFunction::kExponential;
  return std::nullopt;
}

void DecayPolicy::validate() const {
  if (!(initial_weight >= 0.0) || !std::isfinite(initial_weight)) {
    throw ConfigError("decay policy: initial_weight must be finite and >= 0");
  }
  if (!(max_alive_hours > 0.0) || !std::isfinite(max_alive_hours)) {
    throw ConfigError("decay policy: max_alive_hours must be positive");
  }
  if (function == DecayFunction::kExponential) {
    if (!(decay_rate > 0.0) || !std::isfinite(decay_rate)) {
      throw ConfigError("decay policy: Exponential requires decay_rate > 0");
    }
  } else if (decay_rate != 0.0) {
    throw ConfigError("decay policy: decay_rate applies to Exponential only");
  }
}

double weight_at(const DecayPolicy& policy, Hours age) noexcept {
  const double t = std::max(age, 0.0);
  if (t > policy.max_alive_hours) return 0.0;
  switch (policy.function) {
    case DecayFunction::kConstant:
      return policy.initial_weight;
    case DecayFunction::kLinear:
      return policy.initial_weight *
             std::max(0.0, 1.0 - t / policy.max_alive_hours);
    case DecayFunction::kExponential:
      return policy.initial_weight * std::exp(-policy.decay_rate * t);
  }
  return 0.0;
}

Hours survival_hours(const DecayPolicy& policy, double threshold) noexcept {
  const double w0 = policy.initial_weight;
  if (w0 < threshold) return 0.0;
  switch (policy.function) {
    case DecayFunction::kConstant:
      return policy.max_alive_hours;
    case DecayFunction::kLinear:
      return policy.max_alive_hours * (1.0 - threshold / w0);
    case DecayFunction::kExponential:
      if (threshold <= 0.0) return policy.max_alive_hours;
      return std::min(policy.max_alive_hours,
                      std::log(w0 / threshold) / policy.decay_rate);
  }
  return 0.0;
}

EdgePolicyTable::EdgePolicyTable(std::vector<EdgePolicy> entries)
    : entries_(std::move(entries)) {
  for (auto& row : lookup_) row.fill(-1);
  lifespan_.fill(0.0);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const EdgePolicy& e = entries_[i];
    e.decay.validate();
    const auto src_layer = static_cast<int>(layer_of(e.source));
    const auto dst_layer = static_cast<int>(layer_of(e.target));
    if (dst_layer != src_layer + 1) {
      throw ConfigError("edge policy " + std::string(to_string(e.source)) +
                        "-" + std::string(to_string(e.target)) +
                        ": target must sit one layer below source");
    }
    int& slot = lookup_[index_of(e.source)][index_of(e.target)];
    if (slot != -1) {
      throw ConfigError("edge policy " + std::string(to_string(e.source)) +
                        "-" + std::string(to_string(e.target)) +
                        " listed twice");
    }
    slot = static_cast<int>(i);
    lookup_[index_of(e.target)][index_of(e.source)] = static_cast<int>(i);
    for (EntityKind k : {e.source, e.target}) {
      lifespan_[index_of(k)] =
          std::max(lifespan_[index_of(k)], e.decay.max_alive_hours);
    }
  }
}

EdgePolicyTable EdgePolicyTable::defaults() {
  using K = EntityKind;
  using F = DecayFunction;
  auto row = [](K s, K t, F f, double w0, double rate, double alive) {
    return EdgePolicy{s, t, DecayPolicy{f, w0, rate, alive}};
  };
  return EdgePolicyTable({
      row(K::kOrgId, K::kIncidentId, F::kConstant, 0.1, 0.0, 168),
      row(K::kIncidentId, K::kAlertId, F::kConstant, 1.0, 0.0, 168),
      row(K::kAlertId, K::kSha1, F::kConstant, 1.0, 0.0, 168),
      row(K::kAlertId, K::kCampaignId, F::kConstant, 1.0, 0.0, 120),
      row(K::kAlertId, K::kSessionId, F::kConstant, 1.0, 0.0, 168),
      row(K::kAlertId, K::kEmailId, F::kConstant, 1.0, 0.0, 24),
      row(K::kAlertId, K::kAppId, F::kLinear, 1.0, 0.0, 48),
      row(K::kAlertId, K::kUrl, F::kLinear, 1.0, 0.0, 12),
      row(K::kAlertId, K::kIpAddress, F::kLinear, 1.0, 0.0, 12),
      row(K::kAlertId, K::kDeviceName, F::kExponential, 1.0, 0.19, 12),
      row(K::kAlertId, K::kResourceId, F::kExponential, 1.0, 0.24, 12),
      row(K::kAlertId, K::kRegistryKey, F::kExponential, 1.0, 0.24, 12),
      row(K::kAlertId, K::kRegistryVal, F::kExponential, 1.0, 0.24, 12),
      row(K::kSha1, K::kFileDir, F::kExponential, 1.0, 0.24, 24),
      row(K::kEmailId, K::kEmailAddress, F::kLinear, 1.0, 0.0, 12),
      row(K::kEmailId, K::kEmailCluster, F::kLinear, 0.5, 0.0, 6),
      row(K::kUrl, K::kUrlDomain, F::kLinear, 0.5, 0.0, 6),
      row(K::kIpAddress, K::kIpRange, F::kLinear, 0.5, 0.0, 12),
  });
}

EdgePolicyTable EdgePolicyTable::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("edge policy: invalid JSON: ") + e.what());
  }
  // Either a bare array or {"policies": [...]}.
  const json& rows = doc.is_object() && doc.contains("policies")
                         ? doc.at("policies")
                         : doc;
  if (!rows.is_array()) {
    throw ConfigError("edge policy: expected an array of policy rows");
  }
  std::vector<EdgePolicy> entries;
  for (const json& r : rows) {
    try {
      EdgePolicy p;
      const auto src = parse_entity_kind(r.at("source_kind").get<std::string>());
      const auto dst = parse_entity_kind(r.at("target_kind").get<std::string>());
      const auto fn = parse_decay_function(r.at("decay").get<std::string>());
      if (!src || !dst) throw ConfigError("edge policy: unknown kind in row " + r.dump());
      if (!fn) throw ConfigError("edge policy: unknown decay in row " + r.dump());
      p.source = *src;
      p.target = *dst;
      p.decay.function = *fn;
      p.decay.initial_weight = r.at("initial_weight").get<double>();
      p.decay.decay_rate =
          r.contains("decay_rate") && !r.at("decay_rate").is_null()
              ? r.at("decay_rate").get<double>()
              : 0.0;
      p.decay.max_alive_hours = r.at("max_alive_hours").get<double>();
      entries.push_back(p);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("edge policy: bad row: ") + e.what());
    }
  }
  return EdgePolicyTable(std::move(entries));
}

EdgePolicyTable EdgePolicyTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("edge policy: cannot read " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string EdgePolicyTable::to_json() const {
  json rows = json::array();
  for (const EdgePolicy& e : entries_) {
    json r;
    r["source_kind"] = to_string(e.source);
    r["target_kind"] = to_string(e.target);
    r["decay"] = to_string(e.decay.function);
    r["initial_weight"] = e.decay.initial_weight;
    if (e.decay.function == DecayFunction::kExponential) {
      r["decay_rate"] = e.decay.decay_rate;
    } else {
      r["decay_rate"] = nullptr;
    }
    r["max_alive_hours"] = e.decay.max_alive_hours;
    rows.push_back(std::move(r));
  }
  return json{{"policies", rows}}.dump(2);
}

std::optional<std::size_t> EdgePolicyTable::find(EntityKind a,
                                                  EntityKind b) const noexcept {
  if (entries_.empty()) return std::nullopt;
  const int slot = lookup_[index_of(a)][index_of(b)];
  if (slot < 0) return std::nullopt;
  return static_cast<std::size_t>(slot);
}

std::string EdgePolicyTable::pair_label(std::size_t index) const {
  const EdgePolicy& e = entries_.at(index);
  return std::string(to_string(e.source)) + "-" +
         std::string(to_string(e.target));
}

}  // namespace repgraph
