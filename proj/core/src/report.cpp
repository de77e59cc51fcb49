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

#include "repgraph/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "io_util.hpp"
#include "json.hpp"
#include "repgraph/error.hpp"

namespace repgraph {

using nlohmann::ordered_json;

namespace {

ordered_json confusion_json(const Confusion& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json metrics_object(const MetricsReport& m) {
  return {{"support", m.support},
          {"positives", m.positives},
          {"threshold", m.threshold},
          {"macro_precision", m.precision},
          {"macro_recall", m.recall},
          {"macro_f1", m.f1},
          {"benign_f1", m.class_f1[0]},
          {"malicious_f1", m.class_f1[1]},
          {"malicious_recall", m.malicious_recall},
          {"confusion", confusion_json(m.at_threshold)},
          {"pr_auc", optional_json(m.pr_auc)},
          {"malicious_ap", optional_json(m.malicious_ap)},
          {"best_threshold", m.best_threshold},
          {"best_f1", m.best_f1},
          {"confusion_at_best", confusion_json(m.at_best)}};
}

ordered_json per_kind_json(const KindBreakdown& k) {
  ordered_json reports = ordered_json::object();
  for (const auto& [kind, m] : k.reports) reports[std::string(to_string(kind))] = metrics_object(m);
  ordered_json skipped = ordered_json::object();
  for (const auto& [kind, n] : k.skipped) skipped[std::string(to_string(kind))] = n;
  return {{"reports", reports}, {"skipped", skipped}};
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

void metrics_row(std::ostringstream& out, std::string_view scope, std::string_view kind,
                 const MetricsReport& m) {
  out << scope << ',' << kind << ',' << m.support << ',' << m.positives << ','
      << format_number(m.precision) << ',' << format_number(m.recall) << ','
      << format_number(m.f1) << ',' << csv_optional(m.pr_auc) << ','
      << csv_optional(m.malicious_ap) << ',' << format_number(m.best_threshold) << ','
      << format_number(m.best_f1) << ',' << m.at_threshold.tp << ',' << m.at_threshold.fp
      << ',' << m.at_threshold.tn << ',' << m.at_threshold.fn << '\n';
}

std::string metrics_csv(const RunResult& r) {
  std::ostringstream out;
  out << "scope,kind,support,positives,precision,recall,f1,pr_auc,malicious_ap,"
         "best_threshold,best_f1,tp,fp,tn,fn\n";
  if (r.metrics) metrics_row(out, "test", "", *r.metrics);
  for (const auto& [kind, m] : r.per_kind.reports) metrics_row(out, "test", to_string(kind), m);
  if (r.planted) metrics_row(out, "planted", "", *r.planted);
  return out.str();
}

std::string histograms_csv(const RunResult& r, std::size_t bins) {
  const auto initial = histogram(r.initial.malicious_scores(), bins);
  const auto propagated = histogram(r.propagation.labels.malicious_scores(), bins);
  const auto calibrated = histogram(r.calibrated.labels.malicious_scores(), bins);
  std::ostringstream out;
  out << "bin,lower,upper,initial,propagated,calibrated\n";
  const double width = 1.0 / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out << b << ',' << format_number(static_cast<double>(b) * width) << ','
        << format_number(b + 1 == bins ? 1.0 : static_cast<double>(b + 1) * width) << ','
        << initial[b] << ',' << propagated[b] << ',' << calibrated[b] << '\n';
  }
  return out.str();
}

std::string calibration_csv(const RunResult& r) {
  std::ostringstream out;
  out << "kind,nodes,mean_abs_shift_pct\n";
  for (const auto& [kind, k] : r.shift_by_kind) {
    out << to_string(kind) << ',' << k.nodes << ',' << format_number(100.0 * k.mean_abs_shift)
        << '\n';
  }
  return out.str();
}

std::string batches_csv(const RunResult& r) {
  std::ostringstream out;
  out << "batch,end,records,malformed,nodes,edges,lcc,masked,iterations,converged,"
         "final_residual,t_star,test_support,f1,pr_auc\n";
  for (const BatchRow& b : r.batches) {
    out << b.batch << ',' << format_number(b.end) << ',' << b.records << ',' << b.malformed
        << ',' << b.nodes << ',' << b.edges << ',' << b.lcc << ',' << b.masked << ','
        << b.iterations << ',' << (b.converged ? 1 : 0) << ','
        << format_number(b.final_residual) << ',' << csv_optional(b.t_star) << ','
        << b.test_support << ',' << csv_optional(b.f1) << ',' << csv_optional(b.pr_auc) << '\n';
  }
  return out.str();
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string scores_csv(const RunResult& r) {
  std::ostringstream out;
  out << "kind,key,role,initial,propagated,calibrated\n";
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    out << to_string(r.nodes[i].kind) << ',' << csv_field(r.nodes[i].key) << ','
        << (r.roles[i] ? to_string(*r.roles[i]) : std::string_view()) << ','
        << format_number(r.initial.malicious(i)) << ','
        << format_number(r.propagation.labels.malicious(i)) << ','
        << format_number(r.calibrated.labels.malicious(i)) << '\n';
  }
  return out.str();
}

const ordered_json& at(const ordered_json& doc, const char* key) {
  if (!doc.contains(key)) throw DataError(std::string("summary.json: missing '") + key + "'");
  return doc.at(key);
}

std::string text_of(const ordered_json& v) {
  if (v.is_null()) return "n/a";
  if (v.is_number_float()) {
    std::ostringstream s;
    s.precision(4);
    s << std::fixed << v.get<double>();
    return s.str();
  }
  return v.dump();
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string metrics_to_json_text(const MetricsReport& m) { return metrics_object(m).dump(2); }

std::string residuals_csv(std::span<const double> residuals) {
  std::ostringstream out;
  out << "iteration,residual\n";
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    out << i + 1 << ',' << format_number(residuals[i]) << '\n';
  }
  return out.str();
}

std::string metrics_json(const RunResult& r) {
  ordered_json doc;
  doc["test"] = r.metrics ? metrics_object(*r.metrics) : ordered_json(nullptr);
  doc["per_kind"] = per_kind_json(r.per_kind);
  doc["planted"] = r.planted ? metrics_object(*r.planted) : ordered_json(nullptr);
  return doc.dump(2);
}

std::string summary_json(const RunResult& r, const RunConfig& config) {
  const GraphStats& s = r.stats;
  ordered_json edges = ordered_json::object();
  for (const auto& [label, f] : s.edge_distribution) edges[label] = f;
  ordered_json graph{{"nodes", s.num_nodes},
                     {"edges", s.num_edges},
                     {"orgs", s.num_orgs},
                     {"incidents", s.num_incidents},
                     {"alerts", s.num_alerts},
                     {"entities", s.num_entities},
                     {"lcc", s.lcc_size},
                     {"lcc_fraction", s.num_nodes ? static_cast<double>(s.lcc_size) /
                                                        static_cast<double>(s.num_nodes)
                                                  : 0.0},
                     {"label_fractions",
                      {{"unknown", s.label_fractions.unknown},
                       {"benign", s.label_fractions.benign},
                       {"malicious", s.label_fractions.malicious}}},
                     {"edge_distribution", edges}};

  const PropagationResult& p = r.propagation;
  ordered_json propagation{{"max_iterations", config.propagation.max_iterations},
                           {"tolerance", config.propagation.tolerance},
                           {"iterations", p.iterations},
                           {"converged", p.converged},
                           {"final_residual", p.residuals.empty() ? 0.0 : p.residuals.back()},
                           {"masked_rows", static_cast<std::size_t>(std::count(
                                               r.initial.mask.begin(), r.initial.mask.end(), 1))}};

  ordered_json calibration = nullptr;
  if (r.calibration) {
    const CalibrationResult& c = *r.calibration;
    calibration = {{"t_star", c.t_star},
                   {"nll_before", c.nll_before},
                   {"nll_after", c.nll_after},
                   {"nll_unscaled", c.nll_unscaled},
                   {"mean_abs_score_shift", c.mean_abs_score_shift},
                   {"validation_support", r.validation_support}};
  }

  ordered_json doc;
  doc["batches"] = r.batches.size();
  doc["split"] = {{"seed", config.split_seed},
                  {"train", r.split_counts[0]},
                  {"validation", r.split_counts[1]},
                  {"test", r.split_counts[2]}};
  doc["graph"] = graph;
  doc["propagation"] = propagation;
  doc["calibration"] = calibration;
  doc["metrics"] = r.metrics ? metrics_object(*r.metrics) : ordered_json(nullptr);
  doc["planted"] = r.planted ? metrics_object(*r.planted) : ordered_json(nullptr);
  return doc.dump(2);
}

void emit_report(const std::filesystem::path& dir, const RunResult& result,
                 const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
  auto put = [&](const char* name, const std::string& text) {
    detail::write_text_file(dir / name, text);
  };
  put("summary.json", summary_json(result, config) + "\n");
  put("metrics.json", metrics_json(result) + "\n");
  put("metrics.csv", metrics_csv(result));
  put("residuals.csv", residuals_csv(result.propagation.residuals));
  put("histograms.csv", histograms_csv(result, config.histogram_bins));
  put("calibration.csv", calibration_csv(result));
  put("batches.csv", batches_csv(result));
  put("scores.csv", scores_csv(result));
}

std::string render_report(const std::filesystem::path& run_dir) {
  const std::string text =
      detail::read_text_file<DataError>(run_dir / "summary.json", "summary.json");
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("summary.json: ") + e.what());
  }
  std::ostringstream out;
  try {
    const auto& g = at(doc, "graph");
    out << "batches        " << text_of(at(doc, "batches")) << '\n'
        << "nodes          " << text_of(at(g, "nodes")) << " (lcc " << text_of(at(g, "lcc"))
        << ")\n"
        << "edges          " << text_of(at(g, "edges")) << '\n';
    const auto& lf = at(g, "label_fractions");
    out << "labels         unknown " << text_of(at(lf, "unknown")) << ", benign "
        << text_of(at(lf, "benign")) << ", malicious " << text_of(at(lf, "malicious")) << '\n';
    const auto& p = at(doc, "propagation");
    out << "propagation    " << text_of(at(p, "iterations")) << " iterations, residual "
        << text_of(at(p, "final_residual")) << (at(p, "converged").get<bool>() ? "" : " (not converged)")
        << '\n';
    const auto& c = at(doc, "calibration");
    if (c.is_null()) {
      out << "calibration    skipped\n";
    } else {
      out << "calibration    T* " << text_of(at(c, "t_star")) << ", nll "
          << text_of(at(c, "nll_before")) << " -> " << text_of(at(c, "nll_after")) << '\n';
    }
    for (const char* scope : {"metrics", "planted"}) {
      const auto& m = at(doc, scope);
      if (m.is_null()) continue;
      out << (std::string(scope) == "metrics" ? "test           " : "planted        ")
          << "macro-F1 " << text_of(at(m, "macro_f1")) << ", PR-AUC " << text_of(at(m, "pr_auc"))
          << ", support " << text_of(at(m, "support")) << '\n';
    }
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("summary.json: ") + e.what());
  }
  return out.str();
}

}  // namespace repgraph
