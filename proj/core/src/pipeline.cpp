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

#include "repgraph/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_set>

#include "io_util.hpp"
#include "json.hpp"
#include "repgraph/error.hpp"
#include "repgraph/report.hpp"
#include "repgraph/synth.hpp"
#include "repgraph/telemetry.hpp"
#include "repgraph/time.hpp"

namespace repgraph {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void rethrow_tagged(const Error& e, std::string_view name) {
  std::string what = "[" + std::string(name) + "] " + e.what();
  switch (e.error_class()) {
    case ErrorClass::kConfig:
      throw ConfigError(what);
    case ErrorClass::kData:
      throw DataError(what);
    case ErrorClass::kNumeric:
      throw NumericError(what);
  }
  throw Error(e.error_class(), what);
}

// Runs `fn`, prefixing any library error with the stage name.
template <typename Fn>
decltype(auto) stage(std::string_view name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    const std::string what = e.what();
    if (!what.empty() && what.front() == '[') throw;
    rethrow_tagged(e, name);
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& v) {
  std::filesystem::path p = v.get<std::string>();
  return p.is_absolute() || p.empty() ? p : base / p;
}

void require_file(const std::filesystem::path& p, std::string_view what) {
  if (!p.empty() && !std::filesystem::is_regular_file(p)) {
    throw ConfigError(std::string(what) + " not found: " + p.string());
  }
}

struct BatchSource {
  std::filesystem::path file;
  Hours start = 0.0;
  Hours end = 0.0;
};

// Batches of CSV input: records bucketed by batch_hours from the first
// timestamp.
std::vector<TelemetryBatch> bucket_csv(const RunConfig& cfg) {
  const GuideMapping mapping = GuideMapping::load(cfg.guide_mapping);
  TelemetryBatch all = parse_batch(cfg.telemetry_csv, TelemetryFormat::kGuideCsv, &mapping);
  std::vector<TelemetryBatch> out;
  if (all.records.empty()) return out;
  const Hours t0 = std::floor(all.records.front().timestamp);
  for (TelemetryRecord& r : all.records) {
    const auto b = static_cast<std::size_t>(std::floor((r.timestamp - t0) / cfg.batch_hours));
    if (out.size() <= b) {
      const std::size_t from = out.size();
      out.resize(b + 1);
      for (std::size_t k = from; k <= b; ++k) {
        out[k].batch_start = t0 + static_cast<double>(k) * cfg.batch_hours;
        out[k].batch_end = out[k].batch_start + cfg.batch_hours;
      }
    }
    out[b].records.push_back(std::move(r));
  }
  out.front().malformed = all.malformed;
  out.front().ignored = all.ignored;
  return out;
}

}  // namespace

int exit_code_for(ErrorClass error_class) noexcept {
  switch (error_class) {
    case ErrorClass::kConfig:
      return kExitConfig;
    case ErrorClass::kData:
      return kExitData;
    case ErrorClass::kNumeric:
      return kExitNumeric;
  }
  return kExitOther;
}

RunConfig RunConfig::from_json(std::string_view text,
                               const std::filesystem::path& base_dir) {
  RunConfig c;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("run config: expected a JSON object");
    for (const auto& [name, v] : doc.items()) {
      if (name == "telemetry") c.telemetry = resolve(base_dir, v);
      else if (name == "telemetry_csv") c.telemetry_csv = resolve(base_dir, v);
      else if (name == "guide_mapping") c.guide_mapping = resolve(base_dir, v);
      else if (name == "batch_hours") c.batch_hours = v.get<double>();
      else if (name == "intel") c.intel = resolve(base_dir, v);
      else if (name == "truth") c.truth = resolve(base_dir, v);
      else if (name == "reveal_fraction") c.reveal_fraction = v.get<double>();
      else if (name == "reveal_seed") c.reveal_seed = v.get<std::uint64_t>();
      else if (name == "edge_policies") c.edge_policies = resolve(base_dir, v);
      else if (name == "bootstrap_weights") c.bootstrap_weights = resolve(base_dir, v);
      else if (name == "propagation") {
        c.propagation.max_iterations = v.value("max_iterations", c.propagation.max_iterations);
        c.propagation.tolerance = v.value("tolerance", c.propagation.tolerance);
      } else if (name == "calibration") {
        c.t_min = v.value("t_min", c.t_min);
        c.t_max = v.value("t_max", c.t_max);
      } else if (name == "split_seed") c.split_seed = v.get<std::uint64_t>();
      else if (name == "split") {
        c.split.train = v.value("train", c.split.train);
        c.split.validation = v.value("validation", c.split.validation);
        c.split.test = v.value("test", c.split.test);
      } else if (name == "clock_slack_hours") c.clock_slack = v.get<double>();
      else if (name == "min_kind_support") c.min_kind_support = v.get<std::size_t>();
      else if (name == "histogram_bins") c.histogram_bins = v.get<std::size_t>();
      else if (name == "output_dir") c.output_dir = resolve(base_dir, v);
      else throw ConfigError("run config: unknown field '" + name + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  const std::string text = detail::read_text_file<ConfigError>(path, "run config");
  return from_json(text, path.parent_path());
}

void RunConfig::validate() const {
  if (telemetry.empty() == telemetry_csv.empty()) {
    throw ConfigError("run config: set exactly one of telemetry or telemetry_csv");
  }
  require_file(telemetry, "telemetry manifest");
  require_file(telemetry_csv, "telemetry csv");
  if (!telemetry_csv.empty()) {
    if (guide_mapping.empty()) throw ConfigError("run config: telemetry_csv needs guide_mapping");
    require_file(guide_mapping, "guide mapping");
  }
  if (!(batch_hours > 0.0)) throw ConfigError("run config: batch_hours must be positive");
  if (intel.empty() && truth.empty()) {
    throw ConfigError("run config: need intel or truth");
  }
  require_file(intel, "intel file");
  require_file(truth, "truth file");
  if (intel.empty() && !(reveal_fraction > 0.0 && reveal_fraction <= 1.0)) {
    throw ConfigError("run config: reveal_fraction must lie in (0, 1]");
  }
  require_file(edge_policies, "edge-policy file");
  require_file(bootstrap_weights, "bootstrap weights");
  propagation.validate();
  if (!(t_min > 0.0 && t_max >= t_min)) {
    throw ConfigError("run config: need 0 < t_min <= t_max");
  }
  split.validate();
  if (!(clock_slack >= 0.0)) throw ConfigError("run config: clock_slack_hours must be >= 0");
  if (histogram_bins == 0) throw ConfigError("run config: histogram_bins must be positive");
  if (output_dir.empty()) throw ConfigError("run config: output_dir is required");
}

RunResult run_pipeline(const RunConfig& config, const RunOptions& options) {
  stage("config", [&] { config.validate(); });

  const EdgePolicyTable policies = stage("config", [&] {
    return config.edge_policies.empty() ? EdgePolicyTable::defaults()
                                        : EdgePolicyTable::load(config.edge_policies);
  });
  const BootstrapWeights weights = stage("config", [&] {
    return config.bootstrap_weights.empty() ? BootstrapWeights{}
                                            : BootstrapWeights::load(config.bootstrap_weights);
  });

  // Known intel, ground truth and its split.
  PlantedTruth planted;
  std::map<EntityRef, double> intel;
  stage("intel", [&] {
    if (!config.truth.empty()) planted = load_truth(config.truth);
    intel = config.intel.empty()
                ? reveal_fraction(planted, config.reveal_fraction, config.reveal_seed)
                : load_intel(config.intel);
  });
  std::vector<LabeledEntity> ground_truth;
  std::map<EntityRef, double> always_known;  // intel outside the split
  for (const auto& [ref, score] : intel) {
    const Verdict v = classify(score);
    if (is_entity_layer(ref.kind) && v != Verdict::kUnknown) {
      ground_truth.push_back({ref, v == Verdict::kMalicious});
    } else {
      always_known.emplace(ref, score);
    }
  }
  const SplitAssignment assignment =
      stage("split", [&] { return split(ground_truth, config.split_seed, config.split); });
  std::map<EntityRef, double> train_intel = always_known;
  std::map<EntityRef, bool> label_of;
  for (const LabeledEntity& e : ground_truth) {
    label_of.emplace(e.ref, e.malicious);
    if (assignment.roles.at(e.ref) == SplitRole::kTrain) train_intel.emplace(e.ref, intel.at(e.ref));
  }

  // Batch sources.
  std::vector<BatchSource> sources;
  std::vector<TelemetryBatch> csv_batches;
  stage("ingest", [&] {
    if (!config.telemetry.empty()) {
      const Manifest manifest = Manifest::load(config.telemetry);
      for (const ManifestEntry& e : manifest.batches) sources.push_back({e.file, e.start, e.end});
    } else {
      csv_batches = bucket_csv(config);
    }
  });
  const std::size_t num_batches = sources.empty() ? csv_batches.size() : sources.size();

  RunResult result;
  result.split_counts = assignment.counts();
  ThreatGraph graph(policies, config.clock_slack);
  SignalLedger ledger;

  for (std::size_t b = 0; b < num_batches; ++b) {
    TelemetryBatch batch = stage("ingest", [&] {
      if (sources.empty()) return std::move(csv_batches[b]);
      TelemetryBatch parsed = parse_batch(sources[b].file, TelemetryFormat::kJsonl);
      parsed.set_window(sources[b].start, sources[b].end);
      return parsed;
    });
    stage("ingest", [&] { apply_batch(graph, batch, &ledger); });

    BatchRow row;
    row.batch = b;
    row.end = batch.batch_end;
    row.records = batch.records.size();
    row.malformed = batch.malformed;

    // Node reputations mirror the full known intel; the label matrix
    // below hides the held-out part of it.
    stage("init", [&] {
      for (const auto& [id, score] : resolve_intel(graph, intel)) graph.set_reputation(id, score);
    });
    const GraphStats stats = graph.stats();
    row.nodes = stats.num_nodes;
    row.edges = stats.num_edges;
    row.lcc = stats.lcc_size;
    const bool last = b + 1 == num_batches;
    if (graph.num_nodes() == 0) {
      result.batches.push_back(row);
      if (last) result.stats = stats;
      continue;
    }

    const SparseExport exported = graph.to_sparse(batch.batch_end);
    const CsrMatrix transition = stage("propagate", [&] {
      return degree_normalize(exported.adjacency, [&](std::size_t r) {
        const NodeRecord& n = graph.node(exported.order[r]);
        return std::string(to_string(n.kind)) + "/" + n.key;
      });
    });

    std::vector<EntityRef> refs;
    std::vector<std::optional<SplitRole>> roles;
    refs.reserve(exported.order.size());
    roles.reserve(exported.order.size());
    LabelInputs inputs;
    std::unordered_set<NodeId> known;
    for (NodeId id : exported.order) {
      const NodeRecord& n = graph.node(id);
      EntityRef ref{n.kind, n.key};
      const auto role = assignment.role_of(ref);
      if (role && *role != SplitRole::kTrain) inputs.hidden.insert(id);
      if (auto it = train_intel.find(ref); it != train_intel.end()) {
        inputs.intel.emplace(id, it->second);
      }
      if (intel.contains(ref)) known.insert(id);
      refs.push_back(std::move(ref));
      roles.push_back(role);
    }
    for (NodeId id : inputs.hidden) known.insert(id);
    inputs.bootstrap = bootstrap_priors(graph, ledger, weights, known);

    LabelMatrix initial =
        stage("init", [&] { return initialize_labels(graph, exported.order, inputs); });
    row.masked = static_cast<std::size_t>(std::count(initial.mask.begin(), initial.mask.end(), 1));
    PropagationResult propagated = stage("propagate", [&] {
      return propagate(transition, initial, config.propagation, options.observer);
    });
    row.iterations = propagated.iterations;
    row.converged = propagated.converged;
    row.final_residual = propagated.residuals.empty() ? 0.0 : propagated.residuals.back();

    // Calibration on the live validation nodes.
    std::vector<LabelRow> val_rows;
    std::vector<std::uint8_t> val_classes;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (roles[i] == SplitRole::kValidation) {
        val_rows.push_back(propagated.labels.rows[i]);
        val_classes.push_back(label_of.at(refs[i]) ? 1 : 0);
      }
    }
    const bool two_classes =
        std::count(val_classes.begin(), val_classes.end(), 1) > 0 &&
        std::count(val_classes.begin(), val_classes.end(), 0) > 0;
    std::optional<CalibrationResult> calibration;
    CalibratedLabels calibrated;
    if (two_classes) {
      calibration = stage("calibrate", [&] {
        return fit_temperature(val_rows, val_classes, config.t_min, config.t_max);
      });
      calibrated = calibrate_labels(propagated.labels, calibration->t_star);
      calibration->mean_abs_score_shift = calibrated.mean_abs_shift;
      row.t_star = calibration->t_star;
    } else {
      // Too little validation data this batch: scores pass through.
      calibrated.labels = propagated.labels;
      calibrated.shift.assign(propagated.labels.size(), 0.0);
    }

    // Scoring.
    std::vector<double> test_scores;
    std::vector<std::uint8_t> test_labels;
    std::vector<EntityKind> test_kinds;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (roles[i] == SplitRole::kTest) {
        test_scores.push_back(calibrated.labels.malicious(i));
        test_labels.push_back(label_of.at(refs[i]) ? 1 : 0);
        test_kinds.push_back(refs[i].kind);
      }
    }
    row.test_support = test_scores.size();
    std::optional<MetricsReport> metrics;
    if (!test_scores.empty()) {
      metrics = stage("evaluate", [&] { return compute_metrics(test_scores, test_labels); });
      row.f1 = metrics->f1;
      row.pr_auc = metrics->pr_auc;
    }
    result.batches.push_back(row);

    if (!last) continue;
    result.stats = stats;
    result.validation_support = val_rows.size();
    result.metrics = metrics;
    if (!test_scores.empty()) {
      result.per_kind = stage("evaluate", [&] {
        return per_kind_breakdown(test_scores, test_labels, test_kinds, config.min_kind_support);
      });
    }
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (calibrated.labels.masked(i)) continue;
      KindShift& k = result.shift_by_kind[refs[i].kind];
      ++k.nodes;
      k.mean_abs_shift += calibrated.shift[i];
    }
    for (auto& [kind, k] : result.shift_by_kind) {
      k.mean_abs_shift /= static_cast<double>(k.nodes);
    }
    if (!planted.empty()) {
      std::vector<double> s;
      std::vector<std::uint8_t> l;
      for (std::size_t i = 0; i < refs.size(); ++i) {
        if (intel.contains(refs[i])) continue;
        auto it = planted.find(refs[i]);
        if (it == planted.end()) continue;
        s.push_back(calibrated.labels.malicious(i));
        l.push_back(it->second.malicious ? 1 : 0);
      }
      if (!s.empty()) result.planted = compute_metrics(s, l);
    }
    result.nodes = std::move(refs);
    result.roles = std::move(roles);
    result.initial = std::move(initial);
    result.propagation = std::move(propagated);
    result.calibrated = std::move(calibrated);
    result.calibration = calibration;
  }

  if (options.write_outputs) {
    stage("report", [&] { emit_report(config.output_dir, result, config); });
  }
  return result;
}

SimulationSummary simulate_to(const std::filesystem::path& config_path,
                              const std::filesystem::path& out_dir,
                              std::optional<std::uint64_t> seed) {
  GeneratorConfig cfg = stage("config", [&] { return GeneratorConfig::load(config_path); });
  if (seed) cfg.seed = *seed;
  const SimulatedRegion region = stage("simulate", [&] { return generate(cfg); });
  const auto intel =
      reveal_fraction(region.truth, default_reveal_fraction(cfg.label_priors), cfg.seed);
  stage("simulate", [&] {
    write_simulation(out_dir, region, cfg);
    detail::write_text_file(out_dir / "intel.json", intel_to_json(intel) + "\n");
  });
  SimulationSummary s;
  s.batches = region.batches.size();
  for (const TelemetryBatch& b : region.batches) s.records += b.records.size();
  s.entities = region.truth.size();
  for (const auto& [ref, e] : region.truth) s.malicious += e.malicious ? 1 : 0;
  s.revealed = intel.size();
  return s;
}

EvaluationOutput evaluate_files(const std::filesystem::path& scores_path,
                                const std::filesystem::path& truth_path,
                                std::string_view role_filter, std::size_t min_support) {
  const PlantedTruth truth = stage("evaluate", [&] { return load_truth(truth_path); });
  const std::string text =
      stage("evaluate", [&] { return detail::read_text_file<DataError>(scores_path, "scores"); });
  const auto rows = stage("evaluate", [&] { return parse_csv(text); });
  if (rows.empty()) throw DataError("[evaluate] scores file is empty");

  const auto& header = rows.front();
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto c_kind = column("kind");
  const auto c_key = column("key");
  auto c_score = column("score");
  if (!c_score) c_score = column("calibrated");
  const auto c_role = column("role");
  if (!c_kind || !c_key || !c_score) {
    throw DataError("[evaluate] scores file needs kind, key and score columns");
  }
  if (!role_filter.empty() && !c_role) {
    throw DataError("[evaluate] role filter given but the scores file has no role column");
  }

  EvaluationOutput out;
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  std::vector<EntityKind> kinds;
  std::set<EntityRef> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t need = std::max({*c_kind, *c_key, *c_score});
    if (row.size() <= need) throw DataError("[evaluate] short row " + std::to_string(r + 1));
    if (!role_filter.empty() && (row.size() <= *c_role || row[*c_role] != role_filter)) continue;
    const auto kind = parse_entity_kind(row[*c_kind]);
    if (!kind) throw DataError("[evaluate] unknown kind '" + row[*c_kind] + "'");
    EntityRef ref{*kind, canonical_key(row[*c_key])};
    if (!seen.insert(ref).second) {
      throw DataError("[evaluate] duplicate key " + row[*c_kind] + "/" + ref.key);
    }
    auto it = truth.find(ref);
    if (it == truth.end()) {
      ++out.unmatched_scores;
      continue;
    }
    double score = 0.0;
    try {
      score = std::stod(row[*c_score]);
    } catch (const std::exception&) {
      throw DataError("[evaluate] bad score on row " + std::to_string(r + 1));
    }
    scores.push_back(score);
    labels.push_back(it->second.malicious ? 1 : 0);
    kinds.push_back(*kind);
  }
  out.matched = scores.size();
  if (scores.empty()) throw DataError("[evaluate] scores and truth share no keys");
  out.global = stage("evaluate", [&] { return compute_metrics(scores, labels); });
  out.per_kind = stage("evaluate", [&] {
    return per_kind_breakdown(scores, labels, kinds, min_support);
  });
  return out;
}

std::string evaluation_to_json(const EvaluationOutput& out) {
  json doc = json::parse(metrics_to_json_text(out.global));
  json kinds = json::object();
  for (const auto& [kind, m] : out.per_kind.reports) {
    kinds[std::string(to_string(kind))] = json::parse(metrics_to_json_text(m));
  }
  json skipped = json::object();
  for (const auto& [kind, n] : out.per_kind.skipped) skipped[std::string(to_string(kind))] = n;
  return json{{"matched", out.matched},
              {"unmatched_scores", out.unmatched_scores},
              {"global", doc},
              {"per_kind", kinds},
              {"skipped_kinds", skipped}}
      .dump(2);
}

}  // namespace repgraph
