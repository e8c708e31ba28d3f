// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/birthday.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "polywidth/error.hpp"
#include "polywidth/tensorlift.hpp"

namespace polywidth {

DefaultConstants default_constants(std::size_t r) {
  if (r == 0) throw InvalidArgument("r", "must be positive");
  const double rr = static_cast<double>(r);
  DefaultConstants c;
  c.c_r = std::pow(6.0 * std::numbers::e * rr, 1.0 / rr);
  c.s = 200;
  for (std::size_t i = 0; i < r; ++i) c.s *= 4;
  c.n0 = 4.0 * std::pow(c.c_r * rr, rr);
  return c;
}

BirthdayParams BirthdayParams::with_defaults(std::size_t r, std::size_t n) {
  const DefaultConstants c = default_constants(r);
  BirthdayParams p;
  p.r = r;
  p.n = n;
  const double rr = static_cast<double>(r);
  p.m = static_cast<std::size_t>(
      std::floor(c.c_r * std::pow(static_cast<double>(n), 1.0 - 1.0 / rr)));
  p.s = c.s;
  return p;
}

void BirthdayParams::validate() const {
  if (r == 0) throw InvalidArgument("r", "must be positive");
  if (n < 2 * r) throw InvalidArgument("n", fmt::format("must be at least 2r = {}", 2 * r));
  if (m == 0) throw InvalidArgument("m", "must be positive");
  if (s == 0) throw InvalidArgument("s", "must be positive");
}

Hypergraph greedy_maximal_matching(std::size_t n, std::size_t r) {
  return complete_to_maximal_matching(Hypergraph(n), r);
}

std::uint64_t phi_of_counts(std::span<const std::uint32_t> counts,
                            const Hypergraph& matching, std::size_t r) {
  return phi(counts, matching, r);
}

namespace {

void check_matching_size(const BirthdayParams& params, const Hypergraph& matching) {
  if (matching.num_vertices() != params.n) {
    throw InvalidArgument("matching", "vertex count differs from n");
  }
  if (!matching.is_uniform(2 * params.r) || !matching.is_matching()) {
    throw InvalidArgument("matching",
                          fmt::format("must be a matching of {}-sets", 2 * params.r));
  }
}

void throw_balls(const BirthdayParams& params, CounterStream& stream,
                 std::vector<std::uint32_t>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  for (std::size_t i = 0; i < params.m; ++i) ++counts[stream.below(params.n)];
}

// Fewer than r occupied bins inside every matching edge.
bool no_half_covered(std::span<const std::uint32_t> counts,
                     const Hypergraph& matching, std::size_t r) {
  for (const auto& S : matching.edges()) {
    std::size_t occupied = 0;
    for (Vertex v : S) occupied += counts[v] > 0;
    if (occupied >= r) return false;
  }
  return true;
}

}  // namespace

BirthdayStats birthday_statistics(const BirthdayParams& params,
                                  const Hypergraph& matching,
                                  const McOptions& options) {
  params.validate();
  check_matching_size(params, matching);
  const std::uint64_t markov = default_constants(params.r).s;
  auto acc = run_samples(
      options, stream_tag::kBirthday, 4,
      [&](CounterStream& stream, std::span<double> out) {
        std::vector<std::uint32_t> counts(params.n);
        throw_balls(params, stream, counts);
        const std::uint64_t value = phi_of_counts(counts, matching, params.r);
        out[0] = (value >= 1 && value <= params.s) ? 1.0 : 0.0;
        out[1] = static_cast<double>(value);
        out[2] = value >= 1 ? 1.0 : 0.0;
        out[3] = value > markov ? 1.0 : 0.0;
      });
  return {acc[0].estimate(options.seed), acc[1].estimate(options.seed),
          acc[2].estimate(options.seed), acc[3].estimate(options.seed)};
}

McEstimate estimate_good_probability(const BirthdayParams& params,
                                     const Hypergraph& matching,
                                     const McOptions& options) {
  return birthday_statistics(params, matching, options).p_good;
}

McEstimate mean_phi(const BirthdayParams& params, const Hypergraph& matching,
                    const McOptions& options) {
  return birthday_statistics(params, matching, options).mean_phi;
}

double poisson_density(double mu, std::uint64_t l) {
  if (mu == 0.0) return l == 0 ? 1.0 : 0.0;
  const double ll = static_cast<double>(l);
  return std::exp(-mu + ll * std::log(mu) - std::lgamma(ll + 1.0));
}

std::uint64_t sample_poisson(double mu, CounterStream& stream) {
  if (mu < 0.0) throw InvalidArgument("mu", "must be nonnegative");
  const double u = stream.uniform();
  std::uint64_t l = 0;
  double mass = std::exp(-mu);
  double cumulative = mass;
  // The cap only matters when rounding leaves cumulative a hair below u.
  const std::uint64_t cap = static_cast<std::uint64_t>(mu + 40.0 * std::sqrt(mu + 1.0) + 40.0);
  while (u >= cumulative && l < cap) {
    ++l;
    mass *= mu / static_cast<double>(l);
    cumulative += mass;
  }
  return l;
}

PoissonDominationReport poisson_domination_check(const BirthdayParams& params,
                                                 const Hypergraph& matching,
                                                 const McOptions& options) {
  params.validate();
  check_matching_size(params, matching);
  auto evaluate = [&](std::span<const std::uint32_t> counts, std::span<double> out) {
    out[0] = no_half_covered(counts, matching, params.r) ? 1.0 : 0.0;
    out[1] = static_cast<double>(phi_of_counts(counts, matching, params.r));
  };
  auto balls = run_samples(options, stream_tag::kPoissonX, 2,
                           [&](CounterStream& stream, std::span<double> out) {
                             std::vector<std::uint32_t> counts(params.n);
                             throw_balls(params, stream, counts);
                             evaluate(counts, out);
                           });
  const double rate = params.rate();
  auto poisson = run_samples(options, stream_tag::kPoissonY, 2,
                             [&](CounterStream& stream, std::span<double> out) {
                               std::vector<std::uint32_t> counts(params.n);
                               for (auto& c : counts) {
                                 c = static_cast<std::uint32_t>(sample_poisson(rate, stream));
                               }
                               evaluate(counts, out);
                             });
  auto side = [&](std::size_t j) {
    DominationSide s;
    s.lhs = balls[j].estimate(options.seed);
    s.rhs = poisson[j].estimate(options.seed);
    const double band = 3.0 * std::sqrt(s.lhs.std_error * s.lhs.std_error +
                                         4.0 * s.rhs.std_error * s.rhs.std_error);
    s.holds = s.lhs.mean <= 2.0 * s.rhs.mean + band;
    return s;
  };
  return {side(0), side(1)};
}

ChiSquareResult poisson_sum_chi_square(double mu_a, double mu_b,
                                       const McOptions& options,
                                       double significance) {
  if (mu_a <= 0.0 || mu_b <= 0.0) throw InvalidArgument("mu", "rates must be positive");
  if (options.samples < 50) throw InvalidArgument("samples", "need at least 50 samples");
  const double mu = mu_a + mu_b;
  const double total = static_cast<double>(options.samples);

  // Bin b covers values [lower[b], lower[b+1]); the last bin is open above.
  std::vector<std::uint64_t> lower{0};
  std::vector<double> expected;
  double running = 0.0;
  double remaining = 1.0;
  for (std::uint64_t l = 0; remaining * total >= 10.0; ++l) {
    const double p = poisson_density(mu, l);
    running += p;
    remaining -= p;
    if (running * total >= 5.0) {
      expected.push_back(running * total);
      lower.push_back(l + 1);
      running = 0.0;
    }
  }
  // Tail bin takes everything past the last boundary.
  expected.push_back(std::max(0.0, (running + remaining) * total));
  if (expected.back() < 5.0 && expected.size() > 1) {
    expected[expected.size() - 2] += expected.back();
    expected.pop_back();
    lower.pop_back();
  }
  const std::size_t bins = expected.size();

  const std::uint64_t chunks = (options.samples + kChunkSize - 1) / kChunkSize;
  std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(bins, 0));
  parallel_for(chunks, options.threads, [&](std::size_t chunk) {
    CounterStream stream(options.seed, stream_tag::kPoissonSum, chunk);
    const std::uint64_t end = std::min(options.samples, (chunk + 1) * kChunkSize);
    for (std::uint64_t i = chunk * kChunkSize; i < end; ++i) {
      const std::uint64_t value = sample_poisson(mu_a, stream) + sample_poisson(mu_b, stream);
      const auto bin = static_cast<std::size_t>(
          std::upper_bound(lower.begin(), lower.end(), value) - lower.begin() - 1);
      ++partial[chunk][std::min(bin, bins - 1)];
    }
  });
  std::vector<std::uint64_t> observed(bins, 0);
  for (const auto& chunk : partial) {
    for (std::size_t b = 0; b < bins; ++b) observed[b] += chunk[b];
  }

  ChiSquareResult result;
  for (std::size_t b = 0; b < bins; ++b) {
    const double diff = static_cast<double>(observed[b]) - expected[b];
    result.statistic += diff * diff / expected[b];
  }
  result.dof = bins - 1;
  if (result.dof == 0) throw InvalidArgument("samples", "too few samples to form two bins");
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(result.dof));
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  result.pass = result.p_value >= significance;
  return result;
}

}  // namespace polywidth
