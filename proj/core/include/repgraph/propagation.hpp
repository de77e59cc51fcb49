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

#ifndef REPGRAPH_PROPAGATION_HPP_
#define REPGRAPH_PROPAGATION_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "repgraph/reputation.hpp"
#include "repgraph/sparse.hpp"

namespace repgraph {

struct PropagationConfig {
  std::size_t max_iterations = 100;
  double tolerance = 1e-3;

  void validate() const;  // throws ConfigError
};

struct PropagationResult {
  LabelMatrix labels;
  std::vector<double> residuals;  // one Frobenius norm per iteration
  std::size_t iterations = 0;
  bool converged = false;  // last residual < tolerance
};

// Called after each iteration with its 1-based index and the current
// beliefs. Used by tests and tracing; it must not retain the reference.
using IterationObserver =
    std::function<void(std::size_t iteration, const LabelMatrix& current)>;

// Divides every row by its sum. A row without weight throws NumericError;
// `describe` turns the row index into a name for the message.
CsrMatrix degree_normalize(
    const CsrMatrix& adjacency,
    const std::function<std::string(std::size_t)>& describe = {});

// Iterates Y <- T Y over the row-stochastic transition matrix T:
//   1. multiply
//   2. restore masked rows from `initial`
//   3. divide each unmasked row by its own sum
//   4. residual = ||Y(t) - Y(t-1)||_F; stop below the tolerance
// Rows are independent within an iteration and each row sums its terms in
// column order, so the result does not depend on the thread count.
PropagationResult propagate(const CsrMatrix& transition,
                            const LabelMatrix& initial,
                            const PropagationConfig& config = {},
                            const IterationObserver& observer = {});

}  // namespace repgraph

#endif  // REPGRAPH_PROPAGATION_HPP_
