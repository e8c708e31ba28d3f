// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polywidth/hypergraph.hpp"
#include "polywidth/poly.hpp"
#include "polywidth/sparse_matrix.hpp"

namespace polywidth {

/// A map f: [m] -> [n], stored as its base-n rank (digit i is f(i)). Ranks
/// index the coordinates of the tensor power x^{(m)}.
class MapWord {
 public:
  MapWord(std::size_t m, std::size_t n, std::uint64_t rank);
  static MapWord from_values(std::size_t n, std::span<const Vertex> values);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::uint64_t rank() const { return rank_; }
  std::vector<Vertex> values() const;
  /// histogram[v] = |f^{-1}(v)|.
  std::vector<std::uint32_t> histogram() const;

  friend bool operator==(const MapWord&, const MapWord&) = default;

 private:
  std::size_t m_;
  std::size_t n_;
  std::uint64_t rank_;
};

/// n^m, or std::nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> checked_power(std::uint64_t base, std::size_t exponent);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000;

struct LiftParams {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t r = 0;
  /// Goodness threshold.
  std::uint64_t s = 0;
  /// Largest admissible n^m.
  std::uint64_t budget = kDefaultEnumerationBudget;
  unsigned threads = 1;

  /// Throws InvalidArgument unless n >= 2r, m >= r, r >= 1 and s >= 1.
  void validate() const;
  /// N = n^m; throws BudgetExceeded above `budget`.
  std::uint64_t dimension() const;
};

/// e_r(values): sum over r-subsets of the product of their entries.
std::uint64_t elementary_symmetric(std::span<const std::uint64_t> values,
                                   std::size_t r);

/// Number of r-subsets I of [m] whose image is r distinct points of S:
/// sum over r-subsets T of S of prod_{i in T} |f^{-1}(i)|.
std::uint64_t mu_S(const MapWord& f, const Edge& S, std::size_t r);
std::uint64_t mu_S(std::span<const std::uint32_t> histogram, const Edge& S,
                   std::size_t r);

/// Sum of mu_S over the edges of a 2r-matching. f is l-good iff
/// 1 <= phi(f) <= l.
std::uint64_t phi(const MapWord& f, const Hypergraph& matching, std::size_t r);
std::uint64_t phi(std::span<const std::uint32_t> histogram,
                  const Hypergraph& matching, std::size_t r);

/// Number of r-subsets J of [m] with f(J) u g(J) an edge of the matching.
std::size_t count_covering_subsets(const MapWord& f, const MapWord& g,
                                   const Hypergraph& matching, std::size_t r);

/// All g that complement f with respect to the matching, sorted by rank.
std::vector<MapWord> complements(const MapWord& f, const Hypergraph& matching,
                                 std::size_t r);

/// An ordered complementary pair (f, g) and the matching edge it covers.
struct CoveringPair {
  std::uint64_t f = 0;
  std::uint64_t g = 0;
  std::size_t cover = 0;

  friend bool operator==(const CoveringPair&, const CoveringPair&) = default;
};

/// The pairs (f, g) with f s-good and g complementing f.
struct PairSet {
  std::uint64_t dim = 0;
  /// Sorted by (f, g).
  std::vector<CoveringPair> pairs;
  /// cover_counts[j] = number of pairs covering edge j of the matching.
  std::vector<std::uint64_t> cover_counts;

  std::size_t size() const { return pairs.size(); }
  /// 0/1 matrix with a one at (f, g) for every pair.
  SparseMatrix incidence() const;
};

PairSet build_pair_set(const LiftParams& params, const Hypergraph& matching);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational reduced(std::uint64_t num, std::uint64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct MatrixLemmaReport {
  std::size_t num_colors = 0;
  std::size_t max_degree = 0;
  /// |M_i|, identical for every color since each M_i is maximal.
  std::size_t matching_size = 0;
  /// |P_i|, identical for every color.
  std::size_t pair_set_size = 0;
  /// Largest number of ones in a row / column of any P_i incidence matrix.
  std::uint64_t max_pair_row_count = 0;
  std::uint64_t max_pair_col_count = 0;
  /// Largest phi(g) over the second coordinates of all pairs.
  std::uint64_t max_partner_phi = 0;
  std::int64_t max_row_sum = 0;
  /// 2 * max_degree * s^2 * r!.
  std::int64_t norm_bound = 0;
};

struct MatrixLemma {
  SparseMatrix matrix;
  Rational cover_count;
  MatrixLemmaReport report;
};

/// Builds the symmetric nonnegative integer matrix A of dimension n^m with
/// <A x^{(m)}, x^{(m)}> = 2 * cover_count * p_H(x) for every sign vector x.
///
/// H is split into matchings by greedy edge coloring; each matching F_i is
/// completed to a maximal M_i and its pair set P_i is built; pairs covering
/// an edge of M_i \ F_i are dropped; B sums the remaining incidences and
/// A = B + B^T. cover_count = |P_i| / |M_i|.
MatrixLemma build_matrix_lemma(const Hypergraph& graph, const LiftParams& params);

/// Coordinates (prod_i x_{f(i)}) of the m-th tensor power, indexed by rank.
std::vector<std::int64_t> tensor_power(std::span<const std::int64_t> x,
                                       std::size_t m);

struct LiftVerification {
  bool holds = true;
  std::uint64_t vectors_checked = 0;
  std::optional<SignVector> counterexample;
  std::int64_t lhs = 0;
  std::int64_t rhs_times_den = 0;
};

inline constexpr std::size_t kMaxVerifyVertices = 16;

/// Checks <A x^{(m)}, x^{(m)}> * den == 2 * num * p_H(x) over all 2^n sign
/// vectors in lexicographic order; the first failure is the counterexample.
LiftVerification verify_lift_identity(const Hypergraph& graph,
                                      const SparseMatrix& matrix,
                                      const Rational& cover_count,
                                      std::size_t m, unsigned threads = 1);

/// Builds the matrix for (graph, params) and verifies it.
LiftVerification verify_lift_identity(const Hypergraph& graph,
                                      const LiftParams& params);

}  // namespace polywidth
