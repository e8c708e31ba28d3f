// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "polywidth/apmod.hpp"
#include "polywidth/error.hpp"
#include "polywidth/randsets.hpp"

namespace polywidth {
namespace {

BitVector set_of(std::size_t N, std::initializer_list<std::size_t> members) {
  std::vector<std::uint8_t> bits(N, 0);
  for (auto m : members) bits[m] = 1;
  return BitVector(bits);
}

BitVector from_mask(std::size_t N, std::uint64_t mask) {
  std::vector<std::uint8_t> bits(N);
  for (std::size_t i = 0; i < N; ++i) bits[i] = (mask >> i) & 1u;
  return BitVector(bits);
}

// Naive oracle: scans every subset of size >= ceil(alpha N) and every
// (x, d), d in D.
bool oracle_intersective(std::size_t N, std::size_t ell, double alpha,
                         const std::vector<std::uint64_t>& D) {
  const auto size = static_cast<std::size_t>(std::ceil(alpha * N - 1e-9));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) < size) continue;
    bool found = false;
    for (std::uint64_t d : D) {
      for (std::size_t x = 0; x < N && !found; ++x) {
        std::set<std::size_t> terms;
        bool in = true;
        for (std::size_t j = 0; j <= ell; ++j) {
          const std::size_t t = (x + j * d) % N;
          terms.insert(t);
          in = in && ((mask >> t) & 1u);
        }
        found = in && terms.size() == ell + 1;
      }
    }
    if (!found) return false;
  }
  return true;
}

TEST(SampleSubset, DeterministicAndBinomialMean) {
  const RandomSetParams p{50, 0.3, 9};
  EXPECT_EQ(sample_subset(p), sample_subset(p));
  double total = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    CounterStream s(1, stream_tag::kSubset, static_cast<std::uint64_t>(i));
    total += static_cast<double>(sample_subset(50, 0.3, s).weight());
  }
  EXPECT_NEAR(total / draws, 15.0, 3 * std::sqrt(50 * 0.3 * 0.7 / draws));
  EXPECT_THROW(sample_subset(RandomSetParams{50, 1.0, 0}), InvalidArgument);
  EXPECT_THROW(sample_subset(RandomSetParams{2, 0.5, 0}), InvalidArgument);
}

// Flipping a p-set gives a (1-p)-set: compare |A| histograms by chi-square.
TEST(SampleSubset, ComplementSymmetry) {
  const std::size_t N = 20;
  const int draws = 20000;
  std::vector<double> flipped(N + 1, 0.0), direct(N + 1, 0.0);
  for (int i = 0; i < draws; ++i) {
    CounterStream a(2, stream_tag::kSubset, static_cast<std::uint64_t>(i));
    CounterStream b(3, stream_tag::kSubset, static_cast<std::uint64_t>(i));
    flipped[N - sample_subset(N, 0.3, a).weight()] += 1;
    direct[sample_subset(N, 0.7, b).weight()] += 1;
  }
  double chi2 = 0.0;
  int dof = -1;
  for (std::size_t w = 0; w <= N; ++w) {
    const double total = flipped[w] + direct[w];
    if (total < 10) continue;
    chi2 += (flipped[w] - direct[w]) * (flipped[w] - direct[w]) / total;
    ++dof;
  }
  // Two-sample chi-square; 0.999 quantile for ~12 dof is about 32.9.
  EXPECT_LT(chi2, 33.0 + 2 * (dof - 12));
}

TEST(CountXk, Examples) {
  EXPECT_EQ(count_Xk(set_of(5, {0, 1, 2, 3, 4}), 3), 10u);
  EXPECT_EQ(count_Xk(set_of(5, {0, 1, 2}), 3), 1u);
  EXPECT_EQ(count_Xk(set_of(7, {0, 3}), 3), 0u);
}

TEST(CountXk, MatchesHypergraphAndLambda) {
  std::mt19937_64 rng(50);
  for (std::uint64_t N : {5, 7, 11, 13, 17}) {
    for (std::size_t k = 3; k <= 4; ++k) {
      const Hypergraph h = ap_hypergraph({N, k});
      for (int i = 0; i < 20; ++i) {
        const BitVector A = from_mask(N, rng());
        const auto x = count_Xk(A, k);
        ASSERT_EQ(static_cast<std::int64_t>(x), eval_pH(h, A));
        ASSERT_EQ(2 * static_cast<std::int64_t>(x), lambda_k(A, k));
      }
    }
  }
}

TEST(ExpectedXk, FormulaAndMonteCarlo) {
  EXPECT_DOUBLE_EQ(expected_Xk(13, 0.5, 3), 9.75);
  EXPECT_DOUBLE_EQ(expected_Xk(7, 1.0, 3), 21.0);
  EXPECT_LT(expected_Xk(13, 0.4, 3), expected_Xk(13, 0.5, 3));
  const McEstimate mc = estimate_mean({20000, 4, 1}, stream_tag::kSubset, [](CounterStream& s) {
    return static_cast<double>(count_Xk(sample_subset(13, 0.5, s), 3));
  });
  EXPECT_NEAR(mc.mean, 9.75, 3 * mc.std_error);
}

TEST(ReferenceRate, Formula) {
  const double p = 0.1;
  EXPECT_DOUBLE_EQ(reference_rate(100, p, 3, 1.0),
                   100 * std::min(std::pow(p, 1.5) * std::log(1 / p), p));
}

TEST(UpperTail, SmallDeltaAndMonotone) {
  const RandomSetParams params{13, 0.5, 3};
  const auto tiny = upper_tail_mc(params, {3, 1e-6}, 5000);
  EXPECT_GE(tiny.prob.mean, 0.1);
  const auto one = upper_tail_mc(params, {3, 1.0}, 5000);
  const auto two = upper_tail_mc(params, {3, 2.0}, 5000);
  EXPECT_GE(tiny.prob.mean, one.prob.mean);
  EXPECT_GE(one.prob.mean, two.prob.mean);
  EXPECT_DOUBLE_EQ(one.threshold, 19.5);
  EXPECT_FALSE(one.zero_hit_bound.has_value());
  EXPECT_NEAR(one.log_prob, std::log(one.prob.mean), 1e-12);
}

TEST(UpperTail, ZeroHitsUseRuleOfThree) {
  const auto r = upper_tail_mc(RandomSetParams{13, 0.01, 1}, {3, 50.0}, 1000);
  EXPECT_EQ(r.hits, 0u);
  ASSERT_TRUE(r.zero_hit_bound.has_value());
  EXPECT_DOUBLE_EQ(*r.zero_hit_bound, 0.003);
  EXPECT_DOUBLE_EQ(r.log_prob, std::log(0.003));
}

TEST(UpperTail, Rejects) {
  EXPECT_THROW(upper_tail_mc(RandomSetParams{13, 0.5, 1}, {2, 1.0}, 10), InvalidArgument);
  EXPECT_THROW(upper_tail_mc(RandomSetParams{13, 0.5, 1}, {3, 0.0}, 10), InvalidArgument);
  EXPECT_THROW(upper_tail_mc(RandomSetParams{13, 0.5, 1}, {3, 1.0}, 0), InvalidArgument);
}

TEST(Intersectivity, Examples) {
  const std::vector<std::uint64_t> one{1};
  const auto r = intersectivity_check(5, 2, 0.6, one);
  EXPECT_FALSE(r.intersective());
  EXPECT_TRUE(r.exact);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(*r.witness, set_of(5, {0, 1, 3}));
  EXPECT_FALSE(contains_progression(*r.witness, 2, one));

  const std::vector<std::uint64_t> all{1, 2, 3, 4, 5, 6};
  EXPECT_TRUE(intersectivity_check(7, 1, 0.3, all).intersective());

  const auto empty = intersectivity_check(7, 1, 0.5, {});
  EXPECT_FALSE(empty.intersective());
  EXPECT_EQ(empty.witness->weight(), 4u);
}

TEST(Intersectivity, MinDenseSize) {
  EXPECT_EQ(min_dense_size(5, 0.6), 3u);
  EXPECT_EQ(min_dense_size(10, 0.3), 3u);
  EXPECT_EQ(min_dense_size(11, 0.5), 6u);
}

TEST(Intersectivity, AgreesWithNaiveOracle) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t N = 4 + rng() % 9;
    const std::size_t ell = 1 + rng() % 3;
    const double alpha = 0.2 + 0.7 * std::uniform_real_distribution<double>()(rng);
    std::vector<std::uint64_t> D;
    for (std::uint64_t d = 1; d < N; ++d) {
      if (rng() % 3 == 0) D.push_back(d);
    }
    const auto r = intersectivity_check(N, ell, alpha, D, {2, 0, 1000});
    ASSERT_EQ(r.intersective(), oracle_intersective(N, ell, alpha, D))
        << "N=" << N << " ell=" << ell << " alpha=" << alpha;
    if (r.witness) {
      EXPECT_EQ(r.witness->weight(), min_dense_size(N, alpha));
      EXPECT_FALSE(contains_progression(*r.witness, ell, D));
    }
  }
}

TEST(Intersectivity, HeuristicModeFindsWitness) {
  // Evens avoid every odd-difference progression with two terms when D = {1}.
  const std::vector<std::uint64_t> one{1};
  const auto r = intersectivity_check(30, 1, 0.4, one);
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(r.status, IntersectivityResult::Status::kNotIntersective);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_FALSE(contains_progression(*r.witness, 1, one));

  const std::vector<std::uint64_t> all = [] {
    std::vector<std::uint64_t> v;
    for (std::uint64_t d = 1; d < 30; ++d) v.push_back(d);
    return v;
  }();
  const auto none = intersectivity_check(30, 1, 0.4, all, {1, 0, 2000});
  EXPECT_EQ(none.status, IntersectivityResult::Status::kNoWitnessFound);
  EXPECT_FALSE(none.intersective());
}

TEST(Intersectivity, Rejects) {
  const std::vector<std::uint64_t> zero{5};
  EXPECT_THROW(intersectivity_check(5, 1, 0.5, zero), InvalidArgument);
  EXPECT_THROW(intersectivity_check(5, 0, 0.5, {}), InvalidArgument);
  EXPECT_THROW(intersectivity_check(5, 1, 0.0, {}), InvalidArgument);
}

TEST(RandomIntersectivity, Extremes) {
  const McEstimate all = random_intersectivity_experiment(
      7, 1, 0.5, {DifferenceModel::Kind::kBernoulli, 1.0, 0}, {200, 1, 1});
  EXPECT_EQ(all.mean, 1.0);
  const McEstimate none = random_intersectivity_experiment(
      7, 1, 0.5, {DifferenceModel::Kind::kBernoulli, 0.0, 0}, {200, 1, 1});
  EXPECT_EQ(none.mean, 0.0);
  EXPECT_THROW(random_intersectivity_experiment(
                   30, 1, 0.5, {DifferenceModel::Kind::kBernoulli, 0.5, 0}, {10, 1, 1}),
               BudgetExceeded);
}

TEST(RandomIntersectivity, MonotoneInPUnderCoupling) {
  double previous = 0.0;
  for (double p : {0.05, 0.1, 0.2, 0.4}) {
    const McEstimate e = random_intersectivity_experiment(
        9, 2, 0.5, {DifferenceModel::Kind::kBernoulli, p, 0}, {2000, 3, 1});
    EXPECT_GE(e.mean, previous);
    previous = e.mean;
  }
}

TEST(RandomIntersectivity, DrawsModel) {
  const McEstimate e = random_intersectivity_experiment(
      11, 1, 0.5, {DifferenceModel::Kind::kDraws, 0.0, 1}, {500, 2, 1});
  // A single nonzero difference d with ell = 1 always sits inside a 6-subset
  // of Z/11Z, since a d-avoiding set has at most 5 elements.
  EXPECT_EQ(e.mean, 1.0);
}

}  // namespace
}  // namespace polywidth
