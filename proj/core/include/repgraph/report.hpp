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

#ifndef REPGRAPH_REPORT_HPP_
#define REPGRAPH_REPORT_HPP_

#include <filesystem>
#include <span>
#include <string>

#include "repgraph/evaluation.hpp"
#include "repgraph/pipeline.hpp"

namespace repgraph {

// Files written by emit_report. Every CSV starts with a header row.
//   summary.json     graph stats, propagation, calibration and metrics
//   metrics.json     metrics only
//   metrics.csv      scope,kind,support,positives,precision,recall,f1,
//                    pr_auc,malicious_ap,best_threshold,best_f1,tp,fp,tn,fn
//   residuals.csv    iteration,residual
//   histograms.csv   bin,lower,upper,initial,propagated,calibrated
//   calibration.csv  kind,nodes,mean_abs_shift_pct
//   batches.csv      one row per batch
//   scores.csv       kind,key,role,initial,propagated,calibrated
// No file holds wall-clock data, so reruns are byte-identical.
void emit_report(const std::filesystem::path& dir, const RunResult& result,
                 const RunConfig& config);

std::string summary_json(const RunResult& result, const RunConfig& config);
std::string metrics_json(const RunResult& result);
std::string residuals_csv(std::span<const double> residuals);
std::string metrics_to_json_text(const MetricsReport& m);

// Human-readable digest of a run directory's summary.json.
std::string render_report(const std::filesystem::path& run_dir);

// Shortest decimal text that round-trips the double.
std::string format_number(double v);

}  // namespace repgraph

#endif  // REPGRAPH_REPORT_HPP_
