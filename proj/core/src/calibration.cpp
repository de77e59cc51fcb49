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

#include "repgraph/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repgraph/error.hpp"

namespace repgraph {
namespace {

void check_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ConfigError("calibration: temperature must be positive");
  }
}

void check_sizes(std::span<const LabelRow> rows,
                 std::span<const std::uint8_t> classes) {
  if (rows.size() != classes.size()) {
    throw DataError("calibration: " + std::to_string(rows.size()) +
                    " rows but " + std::to_string(classes.size()) + " labels");
  }
  if (rows.empty()) throw NumericError("calibration: empty validation set");
  for (std::uint8_t c : classes) {
    if (c > 1) throw DataError("calibration: class index must be 0 or 1");
  }
}

// Golden-section search for the minimum of a unimodal function on [lo, hi].
template <typename Fn>
double golden_section(Fn&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace

LabelRow scale(const LabelRow& row, double temperature) {
  check_temperature(temperature);
  // Two-class softmax reduces to a logistic of the scaled difference.
  const double z = (row[1] - row[0]) / temperature;
  const double m = 1.0 / (1.0 + std::exp(-z));
  const double b = 1.0 / (1.0 + std::exp(z));
  return {b, m};
}

std::vector<LabelRow> scale(std::span<const LabelRow> rows, double temperature) {
  check_temperature(temperature);
  std::vector<LabelRow> out;
  out.reserve(rows.size());
  for (const LabelRow& r : rows) out.push_back(scale(r, temperature));
  return out;
}

double nll(std::span<const LabelRow> probs, std::span<const std::uint8_t> classes) {
  check_sizes(probs, classes);
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    total -= std::log(std::max(probs[i][classes[i]], kProbabilityFloor));
  }
  return total / static_cast<double>(probs.size());
}

double nll_at(std::span<const LabelRow> rows,
              std::span<const std::uint8_t> classes, double temperature) {
  check_temperature(temperature);
  check_sizes(rows, classes);
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LabelRow p = scale(rows[i], temperature);
    total -= std::log(std::max(p[classes[i]], kProbabilityFloor));
  }
  return total / static_cast<double>(rows.size());
}

CalibrationResult fit_temperature(std::span<const LabelRow> rows,
                                  std::span<const std::uint8_t> classes,
                                  double t_min, double t_max) {
  check_sizes(rows, classes);
  if (!(t_min > 0.0) || !(t_max >= t_min) || !std::isfinite(t_max)) {
    throw ConfigError("calibration: need 0 < t_min <= t_max");
  }
  const auto positives = std::count(classes.begin(), classes.end(), 1);
  if (positives == 0 || static_cast<std::size_t>(positives) == classes.size()) {
    throw NumericError("calibration: validation set holds a single class");
  }

  auto objective = [&](double inv_t) { return nll_at(rows, classes, 1.0 / inv_t); };
  const double inv_t = golden_section(objective, 1.0 / t_max, 1.0 / t_min, 1e-10);

  CalibrationResult r;
  r.nll_before = nll_at(rows, classes, 1.0);
  r.nll_unscaled = nll(rows, classes);
  r.t_star = std::clamp(1.0 / inv_t, t_min, t_max);
  r.nll_after = nll_at(rows, classes, r.t_star);
  for (double candidate : {t_min, t_max, 1.0}) {
    if (candidate < t_min || candidate > t_max) continue;
    const double v = nll_at(rows, classes, candidate);
    if (v < r.nll_after) {
      r.t_star = candidate;
      r.nll_after = v;
    }
  }
  return r;
}

CalibratedLabels calibrate_labels(const LabelMatrix& propagated, double t_star) {
  check_temperature(t_star);
  CalibratedLabels out;
  out.labels = propagated;
  out.shift.assign(propagated.size(), 0.0);
  double total = 0.0;
  std::size_t scaled = 0;
  for (std::size_t i = 0; i < propagated.size(); ++i) {
    if (propagated.masked(i)) continue;
    out.labels.rows[i] = scale(propagated.rows[i], t_star);
    out.shift[i] = std::abs(out.labels.rows[i][kMaliciousColumn] -
                            propagated.rows[i][kMaliciousColumn]);
    total += out.shift[i];
    ++scaled;
  }
  out.mean_abs_shift = scaled ? total / static_cast<double>(scaled) : 0.0;
  return out;
}

}  // namespace repgraph
