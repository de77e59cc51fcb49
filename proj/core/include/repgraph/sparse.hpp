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

#ifndef REPGRAPH_SPARSE_HPP_
#define REPGRAPH_SPARSE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace repgraph {

struct Triplet {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;
};

// Square compressed-sparse-row matrix. Column indices within a row are
// strictly increasing, which fixes the summation order of every row
// product.
class CsrMatrix {
 public:
  CsrMatrix() : row_ptr_(1, 0) {}

  // Duplicate coordinates are summed. Entries are sorted by (row, col).
  static CsrMatrix from_triplets(std::size_t n, std::vector<Triplet> triplets);

  // Builds the symmetric matrix holding every (i, j, w) and its mirror
  // (j, i, w). Self-pairs are rejected with DataError.
  static CsrMatrix symmetric_from_edges(std::size_t n,
                                        std::span<const Triplet> edges);

  std::size_t rows() const noexcept { return row_ptr_.size() - 1; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::uint32_t> cols() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> mutable_values() noexcept { return values_; }

  std::span<const std::uint32_t> row_cols(std::size_t r) const noexcept {
    return std::span(cols_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
  }
  std::span<const double> row_values(std::size_t r) const noexcept {
    return std::span(values_).subspan(row_ptr_[r],
                                      row_ptr_[r + 1] - row_ptr_[r]);
  }

  double row_sum(std::size_t r) const noexcept;

  // Value at (r, c), 0 if absent. Binary search within the row.
  double at(std::size_t r, std::size_t c) const noexcept;

  // Exact structural and numerical symmetry.
  bool is_symmetric() const;

  bool operator==(const CsrMatrix&) const = default;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
};

}  // namespace repgraph

#endif  // REPGRAPH_SPARSE_HPP_
