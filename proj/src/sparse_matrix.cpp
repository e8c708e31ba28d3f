// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "polywidth/error.hpp"

namespace polywidth {

__extension__ using Int128 = __int128;

template <class T>
BasicSparseMatrix<T>::BasicSparseMatrix(std::uint64_t dim,
                                        std::vector<Entry> entries)
    : dim_(dim) {
  for (const auto& e : entries) {
    if (e.row >= dim_ || e.col >= dim_) {
      throw InvalidArgument(
          "entries", fmt::format("index ({}, {}) outside dimension {}", e.row,
                                 e.col, dim_));
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (!entries_.empty() && entries_.back().row == e.row &&
        entries_.back().col == e.col) {
      entries_.back().value += e.value;
    } else {
      entries_.push_back(e);
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return e.value == T{0}; });
  row_offsets_.assign(dim_ + 1, 0);
  for (const auto& e : entries_) ++row_offsets_[e.row + 1];
  for (std::uint64_t i = 0; i < dim_; ++i) row_offsets_[i + 1] += row_offsets_[i];
}

template <class T>
std::span<const typename BasicSparseMatrix<T>::Entry> BasicSparseMatrix<T>::row(
    std::uint64_t i) const {
  return std::span<const Entry>(entries_.data() + row_offsets_[i],
                                row_offsets_[i + 1] - row_offsets_[i]);
}

template <class T>
T BasicSparseMatrix<T>::at(std::uint64_t r, std::uint64_t c) const {
  const auto cells = row(r);
  const auto it = std::lower_bound(
      cells.begin(), cells.end(), c,
      [](const Entry& e, std::uint64_t col) { return e.col < col; });
  return (it != cells.end() && it->col == c) ? it->value : T{0};
}

template <class T>
std::vector<T> BasicSparseMatrix<T>::row_sums() const {
  std::vector<T> sums(dim_, T{0});
  for (const auto& e : entries_) sums[e.row] += e.value;
  return sums;
}

template <class T>
std::vector<T> BasicSparseMatrix<T>::col_sums() const {
  std::vector<T> sums(dim_, T{0});
  for (const auto& e : entries_) sums[e.col] += e.value;
  return sums;
}

template <class T>
T BasicSparseMatrix<T>::max_abs_row_sum() const {
  std::vector<T> sums(dim_, T{0});
  for (const auto& e : entries_) sums[e.row] += e.value < T{0} ? -e.value : e.value;
  return sums.empty() ? T{0} : *std::max_element(sums.begin(), sums.end());
}

template <class T>
T BasicSparseMatrix<T>::max_abs_col_sum() const {
  std::vector<T> sums(dim_, T{0});
  for (const auto& e : entries_) sums[e.col] += e.value < T{0} ? -e.value : e.value;
  return sums.empty() ? T{0} : *std::max_element(sums.begin(), sums.end());
}

template <class T>
bool BasicSparseMatrix<T>::is_symmetric() const {
  return std::all_of(entries_.begin(), entries_.end(), [this](const Entry& e) {
    return at(e.col, e.row) == e.value;
  });
}

template <class T>
BasicSparseMatrix<T> BasicSparseMatrix<T>::transpose() const {
  std::vector<Entry> flipped;
  flipped.reserve(entries_.size());
  for (const auto& e : entries_) flipped.push_back({e.col, e.row, e.value});
  return BasicSparseMatrix(dim_, std::move(flipped));
}

template <class T>
void BasicSparseMatrix<T>::multiply(std::span<const double> x,
                                    std::span<double> y) const {
  for (std::uint64_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (const auto& e : row(i)) acc += static_cast<double>(e.value) * x[e.col];
    y[i] = acc;
  }
}

template <class T>
void BasicSparseMatrix<T>::multiply_transpose(std::span<const double> x,
                                              std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (const auto& e : entries_) y[e.col] += static_cast<double>(e.value) * x[e.row];
}

template class BasicSparseMatrix<std::int64_t>;
template class BasicSparseMatrix<double>;

std::int64_t quadratic_form(const SparseMatrix& matrix,
                            std::span<const std::int64_t> y) {
  if (y.size() != matrix.dim()) {
    throw InvalidArgument("y", "length does not match matrix dimension");
  }
  Int128 total = 0;
  for (const auto& e : matrix.entries()) {
    total += static_cast<Int128>(e.value) * y[e.row] * y[e.col];
  }
  if (total > INT64_MAX || total < INT64_MIN) {
    throw std::overflow_error("quadratic form overflowed 64 bits");
  }
  return static_cast<std::int64_t>(total);
}

void write_matrix(std::ostream& out, const SparseMatrix& matrix) {
  out << matrix.dim() << ' ' << matrix.nnz() << '\n';
  for (const auto& e : matrix.entries()) {
    out << e.row << ' ' << e.col << ' ' << e.value << '\n';
  }
}

SparseMatrix read_matrix(std::istream& in) {
  std::uint64_t dim = 0;
  std::uint64_t nnz = 0;
  if (!(in >> dim >> nnz)) throw InvalidArgument("matrix", "header must be \"N nnz\"");
  std::vector<SparseMatrix::Entry> entries(nnz);
  for (auto& e : entries) {
    if (!(in >> e.row >> e.col >> e.value)) {
      throw InvalidArgument("matrix", "truncated entry list");
    }
  }
  return SparseMatrix(dim, std::move(entries));
}

}  // namespace polywidth
