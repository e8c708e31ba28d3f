// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/gwidth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "polywidth/error.hpp"

namespace polywidth {

PolyMap::PolyMap(std::size_t n, std::vector<Hypergraph> components)
    : n_(n), components_(std::move(components)) {
  if (n_ == 0) throw InvalidArgument("n", "must be positive");
  for (const auto& c : components_) {
    if (c.num_vertices() != n_) {
      throw InvalidArgument("components", "all components must share n");
    }
  }
}

std::size_t PolyMap::degree() const {
  std::size_t d = 0;
  for (const auto& c : components_) d = std::max(d, c.max_edge_size());
  return d;
}

std::size_t PolyMap::multiplicity() const {
  std::size_t t = 0;
  for (const auto& c : components_) t = std::max(t, degree_profile(c).max_degree);
  return t;
}

PolyMap identity_map(std::size_t k) {
  std::vector<Hypergraph> components;
  components.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    components.emplace_back(k, std::vector<Edge>{{static_cast<Vertex>(i)}});
  }
  return PolyMap(k, std::move(components));
}

PolyMap random_polymap(std::size_t n, std::size_t k, std::size_t d,
                       std::size_t t, std::uint64_t seed) {
  if (d == 0 || d > n) throw InvalidArgument("d", "must lie in [1, n]");
  std::vector<Hypergraph> components;
  components.reserve(k);
  std::vector<Vertex> order(n);
  for (std::size_t i = 0; i < k; ++i) {
    CounterStream stream(seed, stream_tag::kPolyMap, i);
    std::vector<Edge> edges;
    for (std::size_t round = 0; round < t; ++round) {
      std::iota(order.begin(), order.end(), Vertex{0});
      for (std::size_t j = n; j > 1; --j) {
        std::swap(order[j - 1], order[stream.below(j)]);
      }
      for (std::size_t b = 0; b + d <= n; b += d) {
        edges.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(b),
                           order.begin() + static_cast<std::ptrdiff_t>(b + d));
      }
    }
    components.emplace_back(n, std::move(edges));
  }
  return PolyMap(n, std::move(components));
}

PointDomain PointDomain::hypercube_image(const PolyMap& map) {
  const std::size_t n = map.n();
  if (n > kMaxHypercubeVertices) {
    throw BudgetExceeded(fmt::format(
        "exact hypercube enumeration supports n <= {}", kMaxHypercubeVertices));
  }
  const std::size_t points = std::size_t{1} << n;
  if (map.k() > 0 && points > kMaxTableEntries / map.k()) {
    throw BudgetExceeded(fmt::format("image table of 2^{} x {} values is too large",
                                     n, map.k()));
  }
  PointDomain domain;
  domain.is_image_ = true;
  domain.hypercube_vertices_ = n;
  domain.dimension_ = map.k();
  domain.size_ = std::size_t{1} << n;
  domain.table_.assign(domain.size_ * domain.dimension_, 0.0);
  // Index bit (n-1-j) holds x_j, so edge containment is a mask test.
  for (std::size_t i = 0; i < map.k(); ++i) {
    std::vector<std::uint32_t> masks;
    for (const auto& e : map.components()[i].edges()) {
      std::uint32_t mask = 0;
      for (Vertex v : e) mask |= std::uint32_t{1} << (n - 1 - v);
      masks.push_back(mask);
    }
    for (std::size_t x = 0; x < domain.size_; ++x) {
      std::size_t count = 0;
      for (auto mask : masks) count += (x & mask) == mask;
      domain.table_[x * domain.dimension_ + i] = static_cast<double>(count);
    }
  }
  return domain;
}

PointDomain PointDomain::explicit_points(std::vector<std::vector<double>> points) {
  if (points.empty()) throw InvalidArgument("points", "domain must be nonempty");
  PointDomain domain;
  domain.dimension_ = points.front().size();
  domain.size_ = points.size();
  domain.table_.reserve(domain.size_ * domain.dimension_);
  for (const auto& p : points) {
    if (p.size() != domain.dimension_) {
      throw InvalidArgument("points", "all points must have the same dimension");
    }
    domain.table_.insert(domain.table_.end(), p.begin(), p.end());
  }
  return domain;
}

std::vector<double> PointDomain::point(std::size_t index) const {
  const auto begin = table_.begin() + static_cast<std::ptrdiff_t>(index * dimension_);
  return {begin, begin + static_cast<std::ptrdiff_t>(dimension_)};
}

std::optional<BitVector> PointDomain::argument(std::size_t index) const {
  if (!is_image_) return std::nullopt;
  return BitVector::from_index(hypercube_vertices_, index);
}

PointDomain PointDomain::scaled(double c) const {
  PointDomain out = *this;
  for (auto& v : out.table_) v *= c;
  return out;
}

PointDomain::InnerMax PointDomain::maximize(std::span<const double> g) const {
  if (g.size() != dimension_) {
    throw InvalidArgument("g", fmt::format("length {} does not match dimension {}",
                                           g.size(), dimension_));
  }
  InnerMax best{-std::numeric_limits<double>::infinity(), 0};
  const double* row = table_.data();
  for (std::size_t i = 0; i < size_; ++i, row += dimension_) {
    double value = 0.0;
    for (std::size_t j = 0; j < dimension_; ++j) value += g[j] * row[j];
    if (value > best.value) best = {value, i};
  }
  if (dimension_ == 0) best.value = 0.0;
  return best;
}

PointDomain::InnerMax gw_exact_inner(const PointDomain& domain,
                                     std::span<const double> g) {
  return domain.maximize(g);
}

McEstimate gw_estimate(const PointDomain& domain, const McOptions& options) {
  return estimate_mean(options, stream_tag::kGaussianWidth, [&](CounterStream& stream) {
    std::vector<double> g(domain.dimension());
    for (auto& v : g) v = stream.normal();
    return domain.maximize(g).value;
  });
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

template <class T>
SpectralNormResult power_iterate(const BasicSparseMatrix<T>& matrix,
                                 const PowerIterationOptions& options) {
  if (options.tol <= 0.0) throw InvalidArgument("tol", "must be positive");
  const std::size_t dim = matrix.dim();
  SpectralNormResult result;
  result.upper_bound = std::sqrt(static_cast<double>(matrix.max_abs_row_sum()) *
                                 static_cast<double>(matrix.max_abs_col_sum()));
  if (dim == 0) {
    result.converged = true;
    return result;
  }
  std::vector<double> v = options.start;
  if (v.empty()) v.assign(dim, 1.0);
  if (v.size() != dim) throw InvalidArgument("start", "length must match dimension");
  const double start_norm = norm2(v);
  if (start_norm == 0.0) throw InvalidArgument("start", "must be nonzero");
  for (auto& x : v) x /= start_norm;

  std::vector<double> w(dim);
  std::vector<double> u(dim);
  double previous = -1.0;
  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    matrix.multiply(v, w);
    const double wn = norm2(w);
    const double rayleigh = wn * wn;  // v^T A^T A v with |v| = 1
    result.iterations = it;
    result.estimate = std::sqrt(rayleigh);
    if (rayleigh == 0.0 ||
        std::abs(rayleigh - previous) < options.tol * rayleigh) {
      result.converged = true;
      break;
    }
    previous = rayleigh;
    matrix.multiply_transpose(w, u);
    const double un = norm2(u);
    if (un == 0.0) {
      result.converged = true;
      break;
    }
    for (std::size_t i = 0; i < dim; ++i) v[i] = u[i] / un;
  }
  return result;
}

}  // namespace

template <class T>
SpectralNormResult spectral_norm(const BasicSparseMatrix<T>& matrix,
                                 const PowerIterationOptions& options) {
  return power_iterate(matrix, options);
}

template SpectralNormResult spectral_norm(const SparseMatrix&,
                                          const PowerIterationOptions&);
template SpectralNormResult spectral_norm(const RealSparseMatrix&,
                                          const PowerIterationOptions&);

RealSparseMatrix random_matching_matrix(std::size_t dim, CounterStream& stream) {
  if (dim < 2 || dim % 2 != 0) throw InvalidArgument("N", "must be even and >= 2");
  std::vector<std::uint64_t> order(dim);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  for (std::size_t j = dim; j > 1; --j) std::swap(order[j - 1], order[stream.below(j)]);
  std::vector<RealSparseMatrix::Entry> entries;
  entries.reserve(dim);
  for (std::size_t i = 0; i < dim; i += 2) {
    entries.push_back({order[i], order[i + 1], 1.0});
    entries.push_back({order[i + 1], order[i], 1.0});
  }
  return RealSparseMatrix(dim, std::move(entries));
}

std::vector<RealSparseMatrix> random_matching_family(std::size_t dim, std::size_t k,
                                                     std::uint64_t seed) {
  std::vector<RealSparseMatrix> family;
  family.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    CounterStream stream(seed, stream_tag::kTjMatrices, i);
    family.push_back(random_matching_matrix(dim, stream));
  }
  return family;
}

TjResult tj_ratio_experiment(std::span<const RealSparseMatrix> matrices,
                             const McOptions& options) {
  if (matrices.empty()) throw InvalidArgument("matrices", "need at least one matrix");
  const std::uint64_t dim = matrices.front().dim();
  if (dim < 2) throw InvalidArgument("N", "dimension must be at least 2");
  for (const auto& a : matrices) {
    if (a.dim() != dim) throw InvalidArgument("matrices", "dimension mismatch");
  }

  PowerIterationOptions sum_options;
  {
    CounterStream stream(0, stream_tag::kPowerStart, dim);
    sum_options.start.resize(dim);
    for (auto& x : sum_options.start) x = stream.normal();
  }

  double squares = 0.0;
  for (const auto& a : matrices) {
    const double norm = spectral_norm(a, sum_options).estimate;
    squares += norm * norm;
  }

  TjResult result;
  result.lhs = estimate_mean(options, stream_tag::kTjCoefficients, [&](CounterStream& stream) {
    std::vector<RealSparseMatrix::Entry> entries;
    for (const auto& a : matrices) {
      const double g = stream.normal();
      for (const auto& e : a.entries()) entries.push_back({e.row, e.col, g * e.value});
    }
    return spectral_norm(RealSparseMatrix(dim, std::move(entries)), sum_options).estimate;
  });
  result.rhs = std::sqrt(std::log(static_cast<double>(dim))) * std::sqrt(squares);
  result.ratio = result.rhs > 0.0 ? result.lhs.mean / result.rhs : 0.0;
  return result;
}

double theorem_bound(std::size_t n, std::size_t k, std::size_t d, std::size_t t) {
  if (n < 2) throw InvalidArgument("n", "must be at least 2");
  if (d == 0) throw InvalidArgument("d", "must be positive");
  const double nn = static_cast<double>(n);
  const double half = static_cast<double>((d + 1) / 2);
  return nn * static_cast<double>(t) *
         std::sqrt(static_cast<double>(k) * std::pow(nn, 1.0 - 1.0 / half) * std::log(nn));
}

std::vector<LadderRow> gw_bound_ladder(std::span<const std::size_t> ns,
                                       std::size_t k, std::size_t d,
                                       std::size_t t, const McOptions& options) {
  std::vector<LadderRow> rows;
  for (std::size_t n : ns) {
    const PolyMap map = random_polymap(n, k, d, t, options.seed);
    const PointDomain domain = PointDomain::hypercube_image(map);
    LadderRow row;
    row.n = n;
    row.k = k;
    row.d = d;
    row.t = t;
    row.gw = gw_estimate(domain, options);
    row.bound = theorem_bound(n, k, d, t);
    row.fitted_c = row.gw.mean / row.bound;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace polywidth
