// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace polywidth {

template <class T>
struct MatrixEntry {
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  T value{};

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Square sparse matrix in compressed-row form.
///
/// Construction sorts entries by (row, col), sums duplicates and drops
/// zeros, so two matrices built from the same entry multiset compare equal
/// regardless of insertion order.
template <class T>
class BasicSparseMatrix {
 public:
  using Entry = MatrixEntry<T>;

  explicit BasicSparseMatrix(std::uint64_t dim, std::vector<Entry> entries = {});

  std::uint64_t dim() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::span<const Entry> row(std::uint64_t i) const;
  T at(std::uint64_t row, std::uint64_t col) const;

  std::vector<T> row_sums() const;
  std::vector<T> col_sums() const;
  /// Largest absolute row sum (the infinity norm).
  T max_abs_row_sum() const;
  /// Largest absolute column sum (the 1-norm).
  T max_abs_col_sum() const;
  bool is_symmetric() const;

  BasicSparseMatrix transpose() const;

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x.
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  friend BasicSparseMatrix operator+(const BasicSparseMatrix& a,
                                     const BasicSparseMatrix& b) {
    std::vector<Entry> merged = a.entries_;
    merged.insert(merged.end(), b.entries_.begin(), b.entries_.end());
    return BasicSparseMatrix(a.dim_, std::move(merged));
  }
  friend bool operator==(const BasicSparseMatrix&,
                         const BasicSparseMatrix&) = default;

 private:
  std::uint64_t dim_;
  std::vector<Entry> entries_;
  std::vector<std::uint64_t> row_offsets_;
};

using SparseMatrix = BasicSparseMatrix<std::int64_t>;
using RealSparseMatrix = BasicSparseMatrix<double>;

/// <A y, y> in exact integer arithmetic; throws std::overflow_error if the
/// result does not fit in 64 bits.
std::int64_t quadratic_form(const SparseMatrix& matrix,
                            std::span<const std::int64_t> y);

/// Header line "N nnz", then one "row col value" line per stored entry.
void write_matrix(std::ostream& out, const SparseMatrix& matrix);
SparseMatrix read_matrix(std::istream& in);

}  // namespace polywidth
