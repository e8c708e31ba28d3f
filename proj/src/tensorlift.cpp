// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/tensorlift.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "polywidth/error.hpp"
#include "polywidth/mc.hpp"

namespace polywidth {

namespace {

constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

// Calls fn(indices) for every r-subset of {0..size-1}, in lexicographic order.
template <class Fn>
void for_each_combination(std::size_t size, std::size_t r, Fn&& fn) {
  if (r > size) return;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (;;) {
    fn(std::span<const std::size_t>(idx));
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == size - r + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Vertex -> index of the matching edge containing it.
struct MatchingIndex {
  const Hypergraph* matching;
  std::vector<std::size_t> owner;

  explicit MatchingIndex(const Hypergraph& m)
      : matching(&m), owner(m.num_vertices(), kNoEdge) {
    for (std::size_t j = 0; j < m.num_edges(); ++j) {
      for (Vertex v : m.edge(j)) owner[v] = j;
    }
  }
};

void check_matching(const Hypergraph& matching, std::size_t r) {
  if (!matching.is_uniform(2 * r)) {
    throw InvalidArgument("matching", fmt::format("edges must have size {}", 2 * r));
  }
  if (!matching.is_matching()) {
    throw InvalidArgument("matching", "edges must be pairwise disjoint");
  }
}

std::vector<Vertex> digits_of(std::uint64_t rank, std::size_t m, std::size_t n) {
  std::vector<Vertex> values(m);
  for (std::size_t i = 0; i < m; ++i) {
    values[i] = static_cast<Vertex>(rank % n);
    rank /= n;
  }
  return values;
}

std::vector<std::uint64_t> powers_of(std::size_t n, std::size_t m) {
  std::vector<std::uint64_t> powers(m, 1);
  for (std::size_t i = 1; i < m; ++i) powers[i] = powers[i - 1] * n;
  return powers;
}

// Counts r-subsets J of [m] with f(J) u g(J) equal to a matching edge. A
// position where f and g agree contributes one value to both images, so the
// union has fewer than 2r points; only subsets of the differing positions
// can qualify.
std::size_t covering_subsets(std::span<const Vertex> f, std::span<const Vertex> g,
                             const MatchingIndex& index, std::size_t r) {
  std::vector<std::size_t> differing;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != g[i]) differing.push_back(i);
  }
  std::size_t count = 0;
  std::vector<Vertex> image;
  for_each_combination(differing.size(), r, [&](std::span<const std::size_t> j) {
    image.clear();
    for (std::size_t t : j) {
      image.push_back(f[differing[t]]);
      image.push_back(g[differing[t]]);
    }
    std::sort(image.begin(), image.end());
    if (std::adjacent_find(image.begin(), image.end()) != image.end()) return;
    const std::size_t edge = index.owner[image.front()];
    if (edge == kNoEdge) return;
    if (std::all_of(image.begin(), image.end(),
                    [&](Vertex v) { return index.owner[v] == edge; })) {
      ++count;
    }
  });
  return count;
}

// Calls emit(g_rank, cover) for every complement g of f. For each matching
// edge S and r-subset I of the positions mapped into S with r distinct
// images, the complementary half S \ f(I) is assigned to I in all r! orders.
template <class Emit>
void for_each_complement(std::span<const Vertex> f, std::uint64_t rank,
                         std::span<const std::uint64_t> powers,
                         const MatchingIndex& index, std::size_t r, Emit&& emit) {
  const Hypergraph& matching = *index.matching;
  std::vector<std::size_t> positions;
  std::vector<Vertex> half;
  std::vector<Vertex> other_half;
  std::vector<Vertex> g(f.begin(), f.end());
  for (std::size_t cover = 0; cover < matching.num_edges(); ++cover) {
    positions.clear();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (index.owner[f[i]] == cover) positions.push_back(i);
    }
    const Edge& S = matching.edge(cover);
    for_each_combination(positions.size(), r, [&](std::span<const std::size_t> pick) {
      half.clear();
      for (std::size_t t : pick) half.push_back(f[positions[t]]);
      std::sort(half.begin(), half.end());
      if (std::adjacent_find(half.begin(), half.end()) != half.end()) return;
      other_half.clear();
      std::set_difference(S.begin(), S.end(), half.begin(), half.end(),
                          std::back_inserter(other_half));
      do {
        std::uint64_t g_rank = rank;
        for (std::size_t t = 0; t < r; ++t) {
          const std::size_t pos = positions[pick[t]];
          g[pos] = other_half[t];
          // Unsigned wraparound is exact modulo 2^64 and the final rank fits.
          g_rank += (static_cast<std::uint64_t>(other_half[t]) - f[pos]) * powers[pos];
        }
        if (covering_subsets(f, g, index, r) == 1) emit(g_rank, cover);
        for (std::size_t t = 0; t < r; ++t) g[positions[pick[t]]] = f[positions[pick[t]]];
      } while (std::next_permutation(other_half.begin(), other_half.end()));
    });
  }
}

std::uint64_t factorial(std::size_t r) {
  std::uint64_t out = 1;
  for (std::size_t j = 2; j <= r; ++j) out *= j;
  return out;
}

}  // namespace

MapWord::MapWord(std::size_t m, std::size_t n, std::uint64_t rank)
    : m_(m), n_(n), rank_(rank) {
  if (m == 0) throw InvalidArgument("m", "must be positive");
  if (n == 0) throw InvalidArgument("n", "must be positive");
  const auto size = checked_power(n, m);
  if (size && rank >= *size) {
    throw InvalidArgument("rank", fmt::format("{} is not below n^m = {}", rank, *size));
  }
}

MapWord MapWord::from_values(std::size_t n, std::span<const Vertex> values) {
  std::uint64_t rank = 0;
  for (std::size_t i = values.size(); i-- > 0;) {
    if (values[i] >= n) throw InvalidArgument("values", "entry outside [0, n)");
    rank = rank * n + values[i];
  }
  return MapWord(values.size(), n, rank);
}

std::vector<Vertex> MapWord::values() const { return digits_of(rank_, m_, n_); }

std::vector<std::uint32_t> MapWord::histogram() const {
  std::vector<std::uint32_t> hist(n_, 0);
  for (Vertex v : values()) ++hist[v];
  return hist;
}

std::optional<std::uint64_t> checked_power(std::uint64_t base, std::size_t exponent) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (__builtin_mul_overflow(out, base, &out)) return std::nullopt;
  }
  return out;
}

void LiftParams::validate() const {
  if (r == 0) throw InvalidArgument("r", "must be positive");
  if (n < 2 * r) throw InvalidArgument("n", fmt::format("must be at least 2r = {}", 2 * r));
  if (m < r) throw InvalidArgument("m", fmt::format("must be at least r = {}", r));
  if (s == 0) throw InvalidArgument("s", "must be positive");
}

std::uint64_t LiftParams::dimension() const {
  const auto size = checked_power(n, m);
  if (!size || *size > budget) {
    throw BudgetExceeded(fmt::format("n^m = {}^{} exceeds the enumeration budget {}",
                                     n, m, budget));
  }
  return *size;
}

std::uint64_t elementary_symmetric(std::span<const std::uint64_t> values,
                                   std::size_t r) {
  std::vector<std::uint64_t> e(r + 1, 0);
  e[0] = 1;
  for (std::uint64_t v : values) {
    for (std::size_t j = r; j >= 1; --j) e[j] += e[j - 1] * v;
  }
  return e[r];
}

std::uint64_t mu_S(std::span<const std::uint32_t> histogram, const Edge& S,
                   std::size_t r) {
  if (S.size() != 2 * r) {
    throw InvalidArgument("S", fmt::format("must have size 2r = {}", 2 * r));
  }
  std::vector<std::uint64_t> counts;
  counts.reserve(S.size());
  for (Vertex v : S) counts.push_back(histogram[v]);
  return elementary_symmetric(counts, r);
}

std::uint64_t mu_S(const MapWord& f, const Edge& S, std::size_t r) {
  return mu_S(f.histogram(), S, r);
}

std::uint64_t phi(std::span<const std::uint32_t> histogram,
                  const Hypergraph& matching, std::size_t r) {
  std::uint64_t total = 0;
  for (const auto& S : matching.edges()) total += mu_S(histogram, S, r);
  return total;
}

std::uint64_t phi(const MapWord& f, const Hypergraph& matching, std::size_t r) {
  return phi(f.histogram(), matching, r);
}

std::size_t count_covering_subsets(const MapWord& f, const MapWord& g,
                                   const Hypergraph& matching, std::size_t r) {
  const MatchingIndex index(matching);
  const auto fv = f.values();
  const auto gv = g.values();
  return covering_subsets(fv, gv, index, r);
}

std::vector<MapWord> complements(const MapWord& f, const Hypergraph& matching,
                                 std::size_t r) {
  check_matching(matching, r);
  const MatchingIndex index(matching);
  const auto values = f.values();
  const auto powers = powers_of(f.n(), f.m());
  std::vector<std::uint64_t> ranks;
  for_each_complement(values, f.rank(), powers, index, r,
                      [&](std::uint64_t g, std::size_t) { ranks.push_back(g); });
  std::sort(ranks.begin(), ranks.end());
  std::vector<MapWord> out;
  out.reserve(ranks.size());
  for (auto g : ranks) out.emplace_back(f.m(), f.n(), g);
  return out;
}

SparseMatrix PairSet::incidence() const {
  std::vector<SparseMatrix::Entry> entries;
  entries.reserve(pairs.size());
  for (const auto& p : pairs) entries.push_back({p.f, p.g, 1});
  return SparseMatrix(dim, std::move(entries));
}

PairSet build_pair_set(const LiftParams& params, const Hypergraph& matching) {
  params.validate();
  check_matching(matching, params.r);
  if (matching.num_vertices() != params.n) {
    throw InvalidArgument("matching", "vertex count differs from n");
  }
  const std::uint64_t dim = params.dimension();
  const MatchingIndex index(matching);
  const auto powers = powers_of(params.n, params.m);

  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (dim + kBlock - 1) / kBlock;
  std::vector<std::vector<CoveringPair>> partial(blocks);
  parallel_for(blocks, params.threads, [&](std::size_t block) {
    std::vector<CoveringPair> local;
    std::vector<std::uint32_t> hist(params.n);
    const std::uint64_t end = std::min(dim, (block + 1) * kBlock);
    for (std::uint64_t f = block * kBlock; f < end; ++f) {
      const auto values = digits_of(f, params.m, params.n);
      std::fill(hist.begin(), hist.end(), 0);
      for (Vertex v : values) ++hist[v];
      const std::uint64_t phi_f = phi(hist, matching, params.r);
      if (phi_f < 1 || phi_f > params.s) continue;
      const std::size_t first = local.size();
      for_each_complement(values, f, powers, index, params.r,
                          [&](std::uint64_t g, std::size_t cover) {
                            local.push_back({f, g, cover});
                          });
      std::sort(local.begin() + static_cast<std::ptrdiff_t>(first), local.end(),
                [](const CoveringPair& a, const CoveringPair& b) { return a.g < b.g; });
    }
    partial[block] = std::move(local);
  });

  PairSet out;
  out.dim = dim;
  out.cover_counts.assign(matching.num_edges(), 0);
  for (auto& block : partial) {
    for (const auto& p : block) {
      ++out.cover_counts[p.cover];
      out.pairs.push_back(p);
    }
  }
  return out;
}

Rational Rational::reduced(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

MatrixLemma build_matrix_lemma(const Hypergraph& graph, const LiftParams& params) {
  params.validate();
  if (graph.num_vertices() != params.n) {
    throw InvalidArgument("hypergraph",
                          fmt::format("has {} vertices but n = {}",
                                      graph.num_vertices(), params.n));
  }
  if (!graph.is_uniform(2 * params.r)) {
    throw InvalidArgument("hypergraph",
                          fmt::format("must be {}-uniform", 2 * params.r));
  }
  const std::uint64_t dim = params.dimension();

  const EdgeColoring coloring = greedy_edge_coloring(graph);
  std::vector<Hypergraph> matchings = color_classes(graph, coloring);
  // With no edges there are no color classes; the cover count still comes
  // from a maximal matching.
  const bool empty = matchings.empty();
  if (empty) matchings.emplace_back(graph.num_vertices());

  MatrixLemma out{SparseMatrix(dim), Rational{}, MatrixLemmaReport{}};
  MatrixLemmaReport& report = out.report;
  report.num_colors = coloring.num_colors;
  report.max_degree = degree_profile(graph).max_degree;

  std::vector<SparseMatrix::Entry> kept;
  std::optional<Rational> cover;
  for (const Hypergraph& part : matchings) {
    const Hypergraph maximal = complete_to_maximal_matching(part, params.r);
    const PairSet pairs = build_pair_set(params, maximal);

    const auto& counts = pairs.cover_counts;
    if (!counts.empty() &&
        std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) !=
            counts.end()) {
      throw std::logic_error("pair set covers matching edges unequally");
    }
    const Rational ratio = Rational::reduced(pairs.size(), maximal.num_edges());
    if (cover && !(*cover == ratio)) {
      throw std::logic_error("maximal matchings gave different cover counts");
    }
    cover = ratio;
    report.matching_size = maximal.num_edges();
    report.pair_set_size = pairs.size();

    const SparseMatrix incidence = pairs.incidence();
    for (auto c : incidence.row_sums()) {
      report.max_pair_row_count = std::max<std::uint64_t>(report.max_pair_row_count, c);
    }
    for (auto c : incidence.col_sums()) {
      report.max_pair_col_count = std::max<std::uint64_t>(report.max_pair_col_count, c);
    }
    std::vector<std::uint32_t> hist(params.n);
    std::uint64_t last_g = std::numeric_limits<std::uint64_t>::max();
    for (const auto& e : incidence.transpose().entries()) {
      if (e.row == last_g) continue;
      last_g = e.row;
      std::fill(hist.begin(), hist.end(), 0);
      for (Vertex v : digits_of(e.row, params.m, params.n)) ++hist[v];
      report.max_partner_phi =
          std::max(report.max_partner_phi, phi(hist, maximal, params.r));
    }

    if (empty) continue;
    // Edges of `part` come first in `maximal`; pairs covering the padding
    // edges M_i \ F_i are dropped.
    for (const auto& p : pairs.pairs) {
      if (p.cover < part.num_edges()) kept.push_back({p.f, p.g, 1});
    }
  }

  const SparseMatrix half(dim, std::move(kept));
  out.matrix = half + half.transpose();
  out.cover_count = *cover;
  report.max_row_sum = out.matrix.max_abs_row_sum();
  const auto s = static_cast<std::int64_t>(params.s);
  report.norm_bound = 2 * static_cast<std::int64_t>(report.max_degree) * s * s *
                      static_cast<std::int64_t>(factorial(params.r));
  return out;
}

std::vector<std::int64_t> tensor_power(std::span<const std::int64_t> x,
                                       std::size_t m) {
  const std::size_t n = x.size();
  const auto size = checked_power(n, m);
  if (!size) throw BudgetExceeded("tensor power dimension overflows");
  std::vector<std::int64_t> power{1};
  power.reserve(*size);
  for (std::size_t i = 0; i < m; ++i) {
    // Digit i of the rank is f(i): the new coordinate a + n^i * v is
    // old coordinate a times x_v.
    const std::size_t block = power.size();
    power.resize(block * n);
    for (std::size_t v = n; v-- > 0;) {
      for (std::size_t a = 0; a < block; ++a) power[v * block + a] = power[a] * x[v];
    }
  }
  return power;
}

LiftVerification verify_lift_identity(const Hypergraph& graph,
                                      const SparseMatrix& matrix,
                                      const Rational& cover_count,
                                      std::size_t m, unsigned threads) {
  const std::size_t n = graph.num_vertices();
  if (n > kMaxVerifyVertices) {
    throw BudgetExceeded(fmt::format("exhaustive sign enumeration needs n <= {}",
                                     kMaxVerifyVertices));
  }
  const auto dim = checked_power(n, m);
  if (!dim || *dim != matrix.dim()) {
    throw InvalidArgument("matrix", "dimension must be n^m");
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  constexpr std::uint64_t kBlock = 64;
  const std::uint64_t blocks = (total + kBlock - 1) / kBlock;

  struct BlockResult {
    std::optional<std::uint64_t> failure;
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;
  };
  std::vector<BlockResult> results(blocks);
  const auto num = static_cast<std::int64_t>(cover_count.num);
  const auto den = static_cast<std::int64_t>(cover_count.den);
  parallel_for(blocks, threads, [&](std::size_t block) {
    const std::uint64_t end = std::min(total, (block + 1) * kBlock);
    for (std::uint64_t index = block * kBlock; index < end; ++index) {
      const auto x = SignVector::from_index(n, index).to_integers();
      const std::int64_t lhs = quadratic_form(matrix, tensor_power(x, m)) * den;
      const std::int64_t rhs = 2 * num * eval_pH(graph, std::span<const std::int64_t>(x));
      if (lhs != rhs) {
        results[block] = {index, lhs, rhs};
        return;
      }
    }
  });

  LiftVerification out;
  out.vectors_checked = total;
  for (const auto& r : results) {
    if (r.failure) {
      out.holds = false;
      out.counterexample = SignVector::from_index(n, *r.failure);
      out.lhs = r.lhs;
      out.rhs_times_den = r.rhs;
      out.vectors_checked = *r.failure + 1;
      break;
    }
  }
  return out;
}

LiftVerification verify_lift_identity(const Hypergraph& graph,
                                      const LiftParams& params) {
  const MatrixLemma lemma = build_matrix_lemma(graph, params);
  return verify_lift_identity(graph, lemma.matrix, lemma.cover_count, params.m,
                              params.threads);
}

}  // namespace polywidth
