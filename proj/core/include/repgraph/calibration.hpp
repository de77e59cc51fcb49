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

#ifndef REPGRAPH_CALIBRATION_HPP_
#define REPGRAPH_CALIBRATION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "repgraph/reputation.hpp"

namespace repgraph {

inline constexpr double kMinTemperature = 0.1;
inline constexpr double kMaxTemperature = 10.0;
inline constexpr double kProbabilityFloor = 1e-12;

// softmax(row / t). The row entries are used as-is, so a probability row
// [0.9, 0.1] at t = 1 becomes [e^0.9, e^0.1] / (e^0.9 + e^0.1).
// Throws ConfigError for t <= 0.
LabelRow scale(const LabelRow& row, double temperature);
std::vector<LabelRow> scale(std::span<const LabelRow> rows, double temperature);

// Mean cross-entropy of the true class; `classes[i]` is the column index
// (0 benign, 1 malicious). Probabilities are floored at 1e-12. Throws
// NumericError for an empty set.
double nll(std::span<const LabelRow> probs, std::span<const std::uint8_t> classes);

// nll(scale(rows, t), classes) without materializing the scaled rows.
double nll_at(std::span<const LabelRow> rows,
              std::span<const std::uint8_t> classes, double temperature);

struct CalibrationResult {
  double t_star = 1.0;
  double nll_before = 0.0;    // at t = 1
  double nll_after = 0.0;     // at t_star
  double nll_unscaled = 0.0;  // of the rows taken directly as probabilities
  double mean_abs_score_shift = 0.0;
};

// Minimizes nll_at over t in [t_min, t_max]. The objective is convex in
// 1/t, so a golden-section search over 1/t finds the global minimum; the
// search result is then compared against both bounds and t = 1. Throws
// NumericError when the validation set is empty or holds one class.
CalibrationResult fit_temperature(std::span<const LabelRow> rows,
                                  std::span<const std::uint8_t> classes,
                                  double t_min = kMinTemperature,
                                  double t_max = kMaxTemperature);

struct CalibratedLabels {
  LabelMatrix labels;
  std::vector<double> shift;  // |change in P(malicious)| per row, 0 if masked
  double mean_abs_shift = 0.0;  // over unmasked rows
};

// Scales every unmasked row; masked rows are ground truth and stay as-is.
CalibratedLabels calibrate_labels(const LabelMatrix& propagated, double t_star);

}  // namespace repgraph

#endif  // REPGRAPH_CALIBRATION_HPP_
