// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polywidth/hypergraph.hpp"

namespace polywidth {

/// A point of {0,1}^n.
class BitVector {
 public:
  explicit BitVector(std::vector<std::uint8_t> bits);
  /// The index-th point in lexicographic order: coordinate 0 is the most
  /// significant bit of `index`.
  static BitVector from_index(std::size_t n, std::uint64_t index);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::size_t weight() const;
  std::vector<std::int64_t> to_integers() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// A point of {-1,+1}^n.
class SignVector {
 public:
  explicit SignVector(std::vector<std::int8_t> signs);
  /// Lexicographic enumeration as for BitVector, with bit 1 mapped to -1.
  static SignVector from_index(std::size_t n, std::uint64_t index);

  std::size_t size() const { return signs_.size(); }
  std::int8_t operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<std::int8_t>& signs() const { return signs_; }
  std::vector<std::int64_t> to_integers() const;

 private:
  std::vector<std::int8_t> signs_;
};

/// p_H(x) = sum over edges e of prod_{i in e} x_i. Integer overloads are exact
/// and throw std::overflow_error rather than wrap.
std::int64_t eval_pH(const Hypergraph& graph, std::span<const std::int64_t> x);
std::int64_t eval_pH(const Hypergraph& graph, const BitVector& x);
std::int64_t eval_pH(const Hypergraph& graph, const SignVector& x);
double eval_pH(const Hypergraph& graph, std::span<const double> x);

/// Partial derivatives of p_H: coordinate i is sum over edges e containing i
/// of prod_{j in e, j != i} x_j.
std::vector<std::int64_t> gradient_pH(const Hypergraph& graph,
                                      std::span<const std::int64_t> x);
std::vector<double> gradient_pH(const Hypergraph& graph,
                                std::span<const double> x);

/// Symmetric d-linear form with diagonal p_H, for d-uniform H:
/// sum_e (1/d!) sum_{sigma in S_d} prod_j args[j][e[sigma(j)]].
double eval_multilinear_form(const Hypergraph& graph,
                             std::span<const std::vector<double>> args);

}  // namespace polywidth
