// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/randsets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "polywidth/error.hpp"

namespace polywidth {

void RandomSetParams::validate() const {
  if (N < 3) throw InvalidArgument("N", "must be at least 3");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p", "must lie strictly inside (0, 1)");
}

BitVector sample_subset(std::uint64_t N, double p, CounterStream& stream) {
  std::vector<std::uint8_t> bits(N);
  for (auto& b : bits) b = stream.bernoulli(p) ? 1 : 0;
  return BitVector(std::move(bits));
}

BitVector sample_subset(const RandomSetParams& params) {
  params.validate();
  CounterStream stream(params.seed, stream_tag::kSubset, 0);
  return sample_subset(params.N, params.p, stream);
}

std::uint64_t count_Xk(const BitVector& set, std::size_t k) {
  const std::uint64_t N = set.size();
  if (k < 2) throw InvalidArgument("k", "must be at least 2");
  std::uint64_t ordered = 0;
  std::vector<std::uint64_t> terms(k);
  for (std::uint64_t b = 1; b < N; ++b) {
    for (std::uint64_t a = 0; a < N; ++a) {
      bool inside = true;
      for (std::size_t j = 0; j < k && inside; ++j) {
        terms[j] = (a + j * b) % N;
        inside = set[terms[j]];
      }
      if (!inside) continue;
      std::sort(terms.begin(), terms.end());
      ordered += std::adjacent_find(terms.begin(), terms.end()) == terms.end();
    }
  }
  // Each unordered progression is met once forward and once backward.
  return ordered / 2;
}

double expected_Xk(std::uint64_t N, double p, std::size_t k) {
  const double n = static_cast<double>(N);
  return std::pow(p, static_cast<double>(k)) * n * (n - 1.0) / 2.0;
}

double reference_rate(std::uint64_t N, double p, std::size_t k, double delta) {
  const double first = std::sqrt(delta) * std::pow(p, static_cast<double>(k) / 2.0) *
                       std::log(1.0 / p);
  const double second = delta * delta * p;
  return static_cast<double>(N) * std::min(first, second);
}

UpperTailResult upper_tail_mc(const RandomSetParams& params, const TailQuery& query,
                              std::uint64_t samples, unsigned threads) {
  params.validate();
  if (query.k < 3) throw InvalidArgument("k", "must be at least 3");
  if (!(query.delta > 0.0)) throw InvalidArgument("delta", "must be positive");
  if (samples == 0) throw InvalidArgument("samples", "must be positive");
  UpperTailResult result;
  result.threshold = (1.0 + query.delta) * expected_Xk(params.N, params.p, query.k);
  const McOptions options{samples, params.seed, threads};
  result.prob = estimate_mean(options, stream_tag::kUpperTail, [&](CounterStream& stream) {
    const BitVector set = sample_subset(params.N, params.p, stream);
    return static_cast<double>(count_Xk(set, query.k)) >= result.threshold ? 1.0 : 0.0;
  });
  result.hits = static_cast<std::uint64_t>(
      std::llround(result.prob.mean * static_cast<double>(samples)));
  if (result.hits == 0) {
    result.zero_hit_bound = 3.0 / static_cast<double>(samples);
    result.log_prob = std::log(*result.zero_hit_bound);
  } else {
    result.log_prob = std::log(result.prob.mean);
  }
  result.reference_rate = reference_rate(params.N, params.p, query.k, query.delta);
  return result;
}

std::size_t min_dense_size(std::uint64_t N, double alpha) {
  return static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(N) - 1e-9));
}

namespace {

// Vertex lists of the proper (ell+1)-term progressions with difference in D,
// each listed once.
std::vector<std::vector<std::uint32_t>> qualifying_progressions(
    std::uint64_t N, std::size_t ell, std::span<const std::uint64_t> differences) {
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint64_t d : differences) {
    if (d % N == 0) throw InvalidArgument("D", "differences must be nonzero mod N");
    for (std::uint64_t x = 0; x < N; ++x) {
      std::vector<std::uint32_t> terms(ell + 1);
      for (std::size_t j = 0; j <= ell; ++j) terms[j] = static_cast<std::uint32_t>((x + j * d) % N);
      std::sort(terms.begin(), terms.end());
      if (std::adjacent_find(terms.begin(), terms.end()) != terms.end()) continue;
      out.push_back(std::move(terms));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_intersectivity_args(std::uint64_t N, std::size_t ell, double alpha) {
  if (N < 2) throw InvalidArgument("N", "must be at least 2");
  if (ell < 1) throw InvalidArgument("ell", "must be at least 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha", "must lie in (0, 1]");
}

BitVector from_mask(std::uint64_t N, std::uint64_t mask) {
  std::vector<std::uint8_t> bits(N);
  for (std::uint64_t i = 0; i < N; ++i) bits[i] = (mask >> i) & 1u;
  return BitVector(std::move(bits));
}

IntersectivityResult exact_check(std::uint64_t N, std::size_t size,
                                 const std::vector<std::vector<std::uint32_t>>& aps,
                                 unsigned threads) {
  std::vector<std::uint32_t> masks;
  masks.reserve(aps.size());
  for (const auto& ap : aps) {
    std::uint32_t mask = 0;
    for (auto v : ap) mask |= std::uint32_t{1} << v;
    masks.push_back(mask);
  }
  auto avoids_all = [&](std::uint32_t set) {
    return std::none_of(masks.begin(), masks.end(),
                        [set](std::uint32_t m) { return (set & m) == m; });
  };

  IntersectivityResult result;
  if (size > N) return result;  // no set is large enough: vacuously intersective
  if (size == 0) {
    if (avoids_all(0)) {
      result.status = IntersectivityResult::Status::kNotIntersective;
      result.witness = from_mask(N, 0);
    }
    return result;
  }
  // Partition by smallest element; the first prefix with a witness wins, and
  // inside a prefix combinations run in lexicographic order.
  const std::size_t prefixes = N - size + 1;
  std::vector<std::optional<std::uint32_t>> found(prefixes);
  parallel_for(prefixes, threads, [&](std::size_t first) {
    const std::size_t rest = size - 1;
    const std::size_t pool = N - first - 1;
    std::vector<std::size_t> idx(rest);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (;;) {
      std::uint32_t set = std::uint32_t{1} << first;
      for (auto i : idx) set |= std::uint32_t{1} << (first + 1 + i);
      if (avoids_all(set)) {
        found[first] = set;
        return;
      }
      std::size_t i = rest;
      while (i > 0 && idx[i - 1] == pool - rest + (i - 1)) --i;
      if (i == 0) return;
      ++idx[i - 1];
      for (std::size_t j = i; j < rest; ++j) idx[j] = idx[j - 1] + 1;
    }
  });
  for (const auto& f : found) {
    if (f) {
      result.status = IntersectivityResult::Status::kNotIntersective;
      result.witness = from_mask(N, *f);
      break;
    }
  }
  return result;
}

// Annealing over sets of the target size, minimizing the number of contained
// progressions. Reaching zero yields a witness.
IntersectivityResult anneal_check(std::uint64_t N, std::size_t size,
                                  const std::vector<std::vector<std::uint32_t>>& aps,
                                  const IntersectivityOptions& options) {
  IntersectivityResult result;
  result.exact = false;
  if (size > N) return result;
  std::vector<std::vector<std::size_t>> through(N);
  for (std::size_t j = 0; j < aps.size(); ++j) {
    for (auto v : aps[j]) through[v].push_back(j);
  }
  CounterStream stream(options.seed, stream_tag::kAnnealing, N);
  std::vector<std::uint32_t> order(N);
  std::iota(order.begin(), order.end(), 0u);
  for (std::size_t j = N; j > 1; --j) std::swap(order[j - 1], order[stream.below(j)]);
  std::vector<std::uint8_t> in(N, 0);
  std::vector<std::uint32_t> members(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
  std::vector<std::uint32_t> outside(order.begin() + static_cast<std::ptrdiff_t>(size), order.end());
  for (auto v : members) in[v] = 1;
  std::vector<std::size_t> filled(aps.size(), 0);
  std::int64_t energy = 0;
  for (std::size_t j = 0; j < aps.size(); ++j) {
    for (auto v : aps[j]) filled[j] += in[v];
    energy += filled[j] == aps[j].size();
  }
  const std::size_t full = aps.empty() ? 0 : aps.front().size();
  auto delta_for = [&](std::uint32_t removed, std::uint32_t added) {
    std::int64_t delta = 0;
    for (auto j : through[removed]) delta -= filled[j] == full;
    for (auto j : through[added]) {
      const bool has_removed = std::find(aps[j].begin(), aps[j].end(), removed) != aps[j].end();
      const std::size_t after = filled[j] + 1 - (has_removed ? 1 : 0);
      delta += after == full;
    }
    return delta;
  };
  double temperature = 2.0;
  const double cooling = std::pow(1e-3 / temperature,
                                  1.0 / static_cast<double>(std::max<std::uint64_t>(options.anneal_steps, 1)));
  for (std::uint64_t step = 0; step < options.anneal_steps && energy > 0 && !outside.empty(); ++step) {
    const std::size_t i = stream.below(members.size());
    const std::size_t o = stream.below(outside.size());
    const std::uint32_t removed = members[i];
    const std::uint32_t added = outside[o];
    const std::int64_t delta = delta_for(removed, added);
    if (delta <= 0 || stream.uniform() < std::exp(-static_cast<double>(delta) / temperature)) {
      for (auto j : through[removed]) --filled[j];
      in[removed] = 0;
      for (auto j : through[added]) ++filled[j];
      in[added] = 1;
      energy += delta;
      members[i] = added;
      outside[o] = removed;
    }
    temperature *= cooling;
  }
  if (energy == 0) {
    result.status = IntersectivityResult::Status::kNotIntersective;
    std::vector<std::uint8_t> bits(in.begin(), in.end());
    result.witness = BitVector(std::move(bits));
  } else {
    result.status = IntersectivityResult::Status::kNoWitnessFound;
  }
  return result;
}

}  // namespace

bool contains_progression(const BitVector& set, std::size_t ell,
                          std::span<const std::uint64_t> differences) {
  const auto aps = qualifying_progressions(set.size(), ell, differences);
  return std::any_of(aps.begin(), aps.end(), [&](const auto& ap) {
    return std::all_of(ap.begin(), ap.end(), [&](std::uint32_t v) { return set[v]; });
  });
}

IntersectivityResult intersectivity_check(std::uint64_t N, std::size_t ell,
                                          double alpha,
                                          std::span<const std::uint64_t> differences,
                                          const IntersectivityOptions& options) {
  check_intersectivity_args(N, ell, alpha);
  const auto aps = qualifying_progressions(N, ell, differences);
  const std::size_t size = min_dense_size(N, alpha);
  if (N <= kMaxExactIntersectivity) return exact_check(N, size, aps, options.threads);
  return anneal_check(N, size, aps, options);
}

McEstimate random_intersectivity_experiment(std::uint64_t N, std::size_t ell,
                                            double alpha, const DifferenceModel& model,
                                            const McOptions& options) {
  check_intersectivity_args(N, ell, alpha);
  if (N > kMaxExactIntersectivity) {
    throw BudgetExceeded(fmt::format("exact intersectivity needs N <= {}",
                                     kMaxExactIntersectivity));
  }
  if (model.kind == DifferenceModel::Kind::kBernoulli && !(model.p >= 0.0 && model.p <= 1.0)) {
    throw InvalidArgument("p", "must lie in [0, 1]");
  }
  if (model.kind == DifferenceModel::Kind::kDraws && model.draws == 0) {
    throw InvalidArgument("draws", "must be positive");
  }
  return estimate_mean(options, stream_tag::kIntersective, [&](CounterStream& stream) {
    std::vector<std::uint64_t> differences;
    if (model.kind == DifferenceModel::Kind::kBernoulli) {
      for (std::uint64_t d = 1; d < N; ++d) {
        if (stream.uniform() < model.p) differences.push_back(d);
      }
    } else {
      for (std::size_t i = 0; i < model.draws; ++i) differences.push_back(1 + stream.below(N - 1));
      std::sort(differences.begin(), differences.end());
      differences.erase(std::unique(differences.begin(), differences.end()), differences.end());
    }
    return intersectivity_check(N, ell, alpha, differences).intersective() ? 1.0 : 0.0;
  });
}

}  // namespace polywidth
