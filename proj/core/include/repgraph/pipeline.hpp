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

#ifndef REPGRAPH_PIPELINE_HPP_
#define REPGRAPH_PIPELINE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "repgraph/calibration.hpp"
#include "repgraph/error.hpp"
#include "repgraph/evaluation.hpp"
#include "repgraph/graph.hpp"
#include "repgraph/propagation.hpp"
#include "repgraph/reputation.hpp"

namespace repgraph {

// Paths are resolved against the directory of the config file.
struct RunConfig {
  // Either a simulation manifest, or a GUIDE-style CSV plus its mapping.
  std::filesystem::path telemetry;
  std::filesystem::path telemetry_csv;
  std::filesystem::path guide_mapping;
  Hours batch_hours = 1.0;  // CSV input only; manifests carry their windows

  // Known intel. Without it, `reveal_fraction` of `truth` is revealed.
  std::filesystem::path intel;
  std::filesystem::path truth;
  double reveal_fraction = 0.61;
  std::uint64_t reveal_seed = 7;

  std::filesystem::path edge_policies;      // default table when empty
  std::filesystem::path bootstrap_weights;  // default weights when empty
  PropagationConfig propagation;
  double t_min = kMinTemperature;
  double t_max = kMaxTemperature;
  std::uint64_t split_seed = 42;
  SplitFractions split;
  Hours clock_slack = 1.0;
  std::size_t min_kind_support = kMinKindSupport;
  std::size_t histogram_bins = 20;
  std::filesystem::path output_dir;

  static RunConfig from_json(std::string_view text,
                             const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);
  // Checks ranges and that every referenced file exists.
  void validate() const;
};

// One row of the per-batch series.
struct BatchRow {
  std::size_t batch = 0;
  Hours end = 0.0;
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t lcc = 0;
  std::size_t masked = 0;
  std::size_t iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  std::optional<double> t_star;
  std::size_t test_support = 0;
  std::optional<double> f1;
  std::optional<double> pr_auc;
};

struct KindShift {
  std::size_t nodes = 0;       // unmasked nodes of the kind
  double mean_abs_shift = 0.0;  // P(malicious), in [0, 1]
};

struct RunResult {
  std::vector<BatchRow> batches;

  // Final snapshot.
  GraphStats stats;
  std::vector<EntityRef> nodes;                 // row i of every matrix
  std::vector<std::optional<SplitRole>> roles;  // ground-truth role per row
  LabelMatrix initial;
  PropagationResult propagation;
  CalibratedLabels calibrated;
  std::optional<CalibrationResult> calibration;
  std::size_t validation_support = 0;
  std::map<EntityKind, KindShift> shift_by_kind;

  std::array<std::size_t, 3> split_counts{};  // over all ground truth
  std::optional<MetricsReport> metrics;       // live test nodes
  KindBreakdown per_kind;
  // Unrevealed entities scored against the planted truth, when supplied.
  std::optional<MetricsReport> planted;
};

struct RunOptions {
  IterationObserver observer;  // called for every batch's propagation
  bool write_outputs = true;
};

// Runs the batch loop: ingest, prune, export, initialize, propagate,
// calibrate, score. Errors are rethrown with a "[stage]" prefix.
RunResult run_pipeline(const RunConfig& config, const RunOptions& options = {});

// `simulate`: generates a region into `out_dir`, plus intel.json holding
// the default reveal of its truth.
struct SimulationSummary {
  std::size_t batches = 0;
  std::size_t records = 0;
  std::size_t entities = 0;
  std::size_t malicious = 0;
  std::size_t revealed = 0;
};
SimulationSummary simulate_to(const std::filesystem::path& config_path,
                              const std::filesystem::path& out_dir,
                              std::optional<std::uint64_t> seed);

// `evaluate`: scores CSV (kind,key,score or calibrated column; optional
// role column) against a truth file. Only keys present in both count.
// Throws DataError when they share no keys.
struct EvaluationOutput {
  MetricsReport global;
  KindBreakdown per_kind;
  std::size_t matched = 0;
  std::size_t unmatched_scores = 0;
};
EvaluationOutput evaluate_files(const std::filesystem::path& scores,
                                const std::filesystem::path& truth,
                                std::string_view role_filter = {},
                                std::size_t min_support = kMinKindSupport);
std::string evaluation_to_json(const EvaluationOutput& out);

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

int exit_code_for(ErrorClass error_class) noexcept;

}  // namespace repgraph

#endif  // REPGRAPH_PIPELINE_HPP_
