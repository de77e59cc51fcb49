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

#ifndef REPGRAPH_SYNTH_HPP_
#define REPGRAPH_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repgraph/decay.hpp"
#include "repgraph/kinds.hpp"
#include "repgraph/telemetry.hpp"

namespace repgraph {

struct LabelPriors {
  double unknown = 0.39;
  double benign = 0.58;
  double malicious = 0.03;
};

// Parameters of the synthetic region. Everything not listed here (pool
// sizes, per-kind evidence rates) is derived from these values.
struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t num_orgs = 150;
  double incidents_per_org_per_batch = 3.0;
  double alerts_per_incident = 2.64;  // mean, at least one alert each
  // Mean evidence items per alert. Unset: derived from the mixture.
  std::optional<double> entities_per_alert;
  // Target share of live edges per policy row label ("AlertId-URL").
  // Normalized on load; missing rows get no edges.
  std::map<std::string, double> edge_kind_mixture = default_mixture();
  LabelPriors label_priors;
  double homophily = 0.9;
  std::size_t num_batches = 24;
  Hours batch_hours = 1.0;
  std::string start_time = "2024-01-01T00:00:00Z";
  // Share of campaign alerts that are disrupted on arrival.
  double disrupted_fraction = 0.2;
  // Share of campaign alerts graded TruePositive, and of background alerts
  // graded FalsePositive or BenignPositive.
  double tp_grade_fraction = 0.3;
  double fp_grade_fraction = 0.3;
  std::size_t campaigns = 30;
  std::size_t detectors = 300;
  std::size_t products = 8;

  // Edge-distribution column of the default policy table, in percent.
  static std::map<std::string, double> default_mixture();

  static GeneratorConfig from_json(std::string_view text);
  static GeneratorConfig load(const std::filesystem::path& path);
  std::string to_json() const;
  void validate() const;  // throws ConfigError
};

struct TruthEntry {
  bool malicious = false;
  std::string campaign;  // empty for background entities
};

using PlantedTruth = std::map<EntityRef, TruthEntry>;

struct SimulatedRegion {
  std::vector<TelemetryBatch> batches;
  PlantedTruth truth;
};

// Deterministic in config.seed. Throws ConfigError for degenerate configs.
SimulatedRegion generate(const GeneratorConfig& config);

// Default fraction of truth handed to the pipeline as known intel.
double default_reveal_fraction(const LabelPriors& priors);

inline constexpr double kRevealedMaliciousScore = 0.95;
inline constexpr double kRevealedBenignScore = 0.05;

// Reveals round(fraction * n) entities of every (kind, label) stratum,
// chosen by seeded hash, as intel scores 0.95 / 0.05. fraction must lie in
// (0, 1].
std::map<EntityRef, double> reveal_fraction(const PlantedTruth& truth,
                                            double fraction, std::uint64_t seed);

// Simulation directory layout: batch_NNNN.jsonl files, manifest.json with
// the batch windows, truth.json ({"SHA1": {"<key>": {"label": ...,
// "campaign": ...}}}).
struct ManifestEntry {
  std::filesystem::path file;
  Hours start = 0.0;
  Hours end = 0.0;
};

struct Manifest {
  Hours batch_hours = 1.0;
  std::vector<ManifestEntry> batches;

  // Relative file names resolve against the manifest's directory.
  static Manifest load(const std::filesystem::path& path);
};

void write_simulation(const std::filesystem::path& dir,
                      const SimulatedRegion& region,
                      const GeneratorConfig& config);

std::string truth_to_json(const PlantedTruth& truth);
PlantedTruth parse_truth(std::string_view text);
PlantedTruth load_truth(const std::filesystem::path& path);

}  // namespace repgraph

#endif  // REPGRAPH_SYNTH_HPP_
