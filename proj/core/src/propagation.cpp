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

#include "repgraph/propagation.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "repgraph/error.hpp"

namespace repgraph {

void PropagationConfig::validate() const {
  if (max_iterations < 1) {
    throw ConfigError("propagation: max_iterations must be >= 1");
  }
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw ConfigError("propagation: tolerance must be positive");
  }
}

CsrMatrix degree_normalize(
    const CsrMatrix& adjacency,
    const std::function<std::string(std::size_t)>& describe) {
  CsrMatrix out = adjacency;
  auto values = out.mutable_values();
  const auto row_ptr = out.row_ptr();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const double degree = adjacency.row_sum(r);
    if (!(degree > 0.0) || !std::isfinite(degree)) {
      throw NumericError("propagation: zero-degree row " +
                         (describe ? describe(r) : "#" + std::to_string(r)));
    }
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      values[k] /= degree;
    }
  }
  return out;
}

PropagationResult propagate(const CsrMatrix& transition,
                            const LabelMatrix& initial,
                            const PropagationConfig& config,
                            const IterationObserver& observer) {
  config.validate();
  const std::size_t n = initial.size();
  if (transition.rows() != n || initial.mask.size() != n) {
    throw DataError("propagation: matrix has " +
                    std::to_string(transition.rows()) + " rows but labels have " +
                    std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const LabelRow& r = initial.rows[i];
    if (!(r[0] >= 0.0 && r[1] >= 0.0 && std::abs(r[0] + r[1] - 1.0) <= 1e-9)) {
      throw DataError("propagation: initial row " + std::to_string(i) +
                      " is not a probability vector");
    }
  }

  PropagationResult result;
  result.labels = initial;
  LabelMatrix next = initial;
  std::vector<double> row_delta(n, 0.0);
  const auto row_ptr = transition.row_ptr();
  const auto cols = transition.cols();
  const auto vals = transition.values();

  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    const std::vector<LabelRow>& cur = result.labels.rows;
    std::int64_t bad_row = -1;
    const auto count = static_cast<std::int64_t>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t si = 0; si < count; ++si) {
      const auto i = static_cast<std::size_t>(si);
      LabelRow updated;
      if (initial.mask[i] != 0) {
        updated = initial.rows[i];
      } else {
        double b = 0.0;
        double m = 0.0;
        for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
          const LabelRow& src = cur[cols[k]];
          b += vals[k] * src[0];
          m += vals[k] * src[1];
        }
        const double sum = b + m;
        if (!(sum > 0.0) || !std::isfinite(sum)) {
#ifdef _OPENMP
#pragma omp critical
#endif
          bad_row = si;
          updated = cur[i];
        } else {
          updated = {b / sum, m / sum};
        }
      }
      const double d0 = updated[0] - cur[i][0];
      const double d1 = updated[1] - cur[i][1];
      row_delta[i] = d0 * d0 + d1 * d1;
      next.rows[i] = updated;
    }
    if (bad_row >= 0) {
      throw NumericError("propagation: row " + std::to_string(bad_row) +
                         " lost all mass at iteration " + std::to_string(it));
    }
    double total = 0.0;
    for (double d : row_delta) total += d;
    const double residual = std::sqrt(total);

    std::swap(result.labels.rows, next.rows);
    result.residuals.push_back(residual);
    result.iterations = it;
    if (observer) observer(it, result.labels);
    if (residual < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace repgraph
