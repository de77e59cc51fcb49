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

#include "repgraph/sparse.hpp"

#include <algorithm>
#include <string>

#include "repgraph/error.hpp"

namespace repgraph {

CsrMatrix CsrMatrix::from_triplets(std::size_t n,
                                   std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row >= n || t.col >= n) {
      throw DataError("sparse: triplet index out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });

  CsrMatrix m;
  m.row_ptr_.assign(n + 1, 0);
  m.cols_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size();) {
    const Triplet& t = triplets[i];
    double sum = 0.0;
    std::size_t j = i;
    for (; j < triplets.size() && triplets[j].row == t.row &&
           triplets[j].col == t.col;
         ++j) {
      sum += triplets[j].value;
    }
    m.cols_.push_back(t.col);
    m.values_.push_back(sum);
    ++m.row_ptr_[t.row + 1];
    i = j;
  }
  for (std::size_t r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

CsrMatrix CsrMatrix::symmetric_from_edges(std::size_t n,
                                          std::span<const Triplet> edges) {
  std::vector<Triplet> both;
  both.reserve(edges.size() * 2);
  for (const Triplet& e : edges) {
    if (e.row == e.col) {
      throw DataError("sparse: self-loop at index " + std::to_string(e.row));
    }
    both.push_back(e);
    both.push_back(Triplet{e.col, e.row, e.value});
  }
  return from_triplets(n, std::move(both));
}

double CsrMatrix::row_sum(std::size_t r) const noexcept {
  double s = 0.0;
  for (double v : row_values(r)) s += v;
  return s;
}

double CsrMatrix::at(std::size_t r, std::size_t c) const noexcept {
  const auto cs = row_cols(r);
  const auto it = std::lower_bound(cs.begin(), cs.end(),
                                   static_cast<std::uint32_t>(c));
  if (it == cs.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + static_cast<std::size_t>(it - cs.begin())];
}

bool CsrMatrix::is_symmetric() const {
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto cs = row_cols(r);
    const auto vs = row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (at(cs[k], r) != vs[k]) return false;
    }
  }
  return true;
}

}  // namespace repgraph
