// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polywidth/hypergraph.hpp"
#include "polywidth/mc.hpp"
#include "polywidth/poly.hpp"
#include "polywidth/sparse_matrix.hpp"

namespace polywidth {

/// psi: R^n -> R^k with psi_i = p_{H_i}.
class PolyMap {
 public:
  PolyMap(std::size_t n, std::vector<Hypergraph> components);

  std::size_t n() const { return n_; }
  std::size_t k() const { return components_.size(); }
  const std::vector<Hypergraph>& components() const { return components_; }
  /// Largest edge size over all components.
  std::size_t degree() const;
  /// Largest vertex degree over all components.
  std::size_t multiplicity() const;

 private:
  std::size_t n_;
  std::vector<Hypergraph> components_;
};

/// psi(x) = x on {0,1}^k.
PolyMap identity_map(std::size_t k);

/// k components, each the union of t random perfect-as-possible matchings of
/// d-sets on [n], so every component has maximum degree at most t.
PolyMap random_polymap(std::size_t n, std::size_t k, std::size_t d,
                       std::size_t t, std::uint64_t seed);

inline constexpr std::size_t kMaxHypercubeVertices = 24;
/// Cap on tabulated image coordinates (2^n * k).
inline constexpr std::size_t kMaxTableEntries = std::size_t{1} << 26;

/// A finite set T in R^k: either an explicit point list or psi({0,1}^n).
class PointDomain {
 public:
  /// Tabulates psi over the hypercube in lexicographic order; n <= 24.
  static PointDomain hypercube_image(const PolyMap& map);
  static PointDomain explicit_points(std::vector<std::vector<double>> points);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return size_; }
  std::vector<double> point(std::size_t index) const;
  /// The hypercube argument of a point, when the domain is an image.
  std::optional<BitVector> argument(std::size_t index) const;
  /// Scales every point by c (used for homogeneity checks).
  PointDomain scaled(double c) const;

  struct InnerMax {
    double value = 0.0;
    std::size_t index = 0;
  };

  /// max over points of <g, point>; ties keep the first point (the
  /// lexicographically smallest x for hypercube images).
  InnerMax maximize(std::span<const double> g) const;

 private:
  PointDomain() = default;

  std::size_t dimension_ = 0;
  std::size_t size_ = 0;
  std::size_t hypercube_vertices_ = 0;
  bool is_image_ = false;
  std::vector<double> table_;  // row-major, size_ x dimension_
};

PointDomain::InnerMax gw_exact_inner(const PointDomain& domain,
                                     std::span<const double> g);

/// Monte-Carlo estimate of E sup_{t in T} <g, t> for standard Gaussian g.
McEstimate gw_estimate(const PointDomain& domain, const McOptions& options);

struct PowerIterationOptions {
  double tol = 1e-9;
  std::size_t max_iters = 10000;
  /// Start vector; empty means normalized all-ones.
  std::vector<double> start;
};

/// Power iteration on A^T A. `estimate` approaches the largest singular value
/// from below; `upper_bound` = sqrt(max abs row sum * max abs column sum),
/// which for symmetric matrices is the largest absolute row sum.
struct SpectralNormResult {
  double estimate = 0.0;
  double upper_bound = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

template <class T>
SpectralNormResult spectral_norm(const BasicSparseMatrix<T>& matrix,
                                 const PowerIterationOptions& options = {});

/// Adjacency matrix of a uniformly random perfect matching on N (even) vertices.
RealSparseMatrix random_matching_matrix(std::size_t dim, CounterStream& stream);

/// k independent random matching matrices from stream (seed, kTjMatrices, i).
std::vector<RealSparseMatrix> random_matching_family(std::size_t dim, std::size_t k,
                                                     std::uint64_t seed);

struct TjResult {
  McEstimate lhs;   ///< E || sum g_i A_i ||
  double rhs = 0.0; ///< sqrt(log N) * (sum ||A_i||^2)^(1/2)
  double ratio = 0.0;
};

/// Tomczak-Jaegermann ratio. The norms of the Gaussian sums use a fixed
/// pseudo-random start vector because all-ones can be an eigenvector of
/// signed combinations.
TjResult tj_ratio_experiment(std::span<const RealSparseMatrix> matrices,
                             const McOptions& options);

/// n t sqrt(k n^(1 - 1/ceil(d/2)) log n).
double theorem_bound(std::size_t n, std::size_t k, std::size_t d, std::size_t t);

struct LadderRow {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  std::size_t t = 0;
  McEstimate gw;
  double bound = 0.0;
  /// gw.mean / bound.
  double fitted_c = 0.0;
};

/// Gaussian width of random_polymap(n, k, d, t) for each n of the ladder.
std::vector<LadderRow> gw_bound_ladder(std::span<const std::size_t> ns,
                                       std::size_t k, std::size_t d,
                                       std::size_t t, const McOptions& options);

}  // namespace polywidth
