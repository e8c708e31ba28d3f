// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polywidth/mc.hpp"
#include "polywidth/poly.hpp"
#include "polywidth/rng.hpp"

namespace polywidth {

/// The random subset of Z/NZ keeping each element with probability p.
struct RandomSetParams {
  std::uint64_t N = 0;
  double p = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TailQuery {
  std::size_t k = 3;
  double delta = 1.0;
};

BitVector sample_subset(std::uint64_t N, double p, CounterStream& stream);
/// Draws from the stream (seed, kSubset, 0).
BitVector sample_subset(const RandomSetParams& params);

/// Number of unordered proper k-term progressions contained in the set:
/// half the number of (a, b), b != 0, whose k terms are distinct and in A.
std::uint64_t count_Xk(const BitVector& set, std::size_t k);

/// p^k N (N-1) / 2.
double expected_Xk(std::uint64_t N, double p, std::size_t k);

/// N min(sqrt(delta) p^(k/2) log(1/p), delta^2 p).
double reference_rate(std::uint64_t N, double p, std::size_t k, double delta);

struct UpperTailResult {
  /// Estimate of Pr[X_k >= (1 + delta) E X_k].
  McEstimate prob;
  std::uint64_t hits = 0;
  double threshold = 0.0;
  /// Rule-of-three bound 3 / samples, set only when no sample hit.
  std::optional<double> zero_hit_bound;
  /// log of the estimate, or of the rule-of-three bound with zero hits.
  double log_prob = 0.0;
  double reference_rate = 0.0;
};

UpperTailResult upper_tail_mc(const RandomSetParams& params, const TailQuery& query,
                              std::uint64_t samples, unsigned threads = 1);

/// ceil(alpha N), guarded against rounding of alpha N just above an integer.
std::size_t min_dense_size(std::uint64_t N, double alpha);

/// True iff the set contains ell+1 distinct elements x, x+d, ..., x+ell d
/// with d in `differences`.
bool contains_progression(const BitVector& set, std::size_t ell,
                          std::span<const std::uint64_t> differences);

inline constexpr std::uint64_t kMaxExactIntersectivity = 24;

struct IntersectivityOptions {
  unsigned threads = 1;
  /// Seed and move budget for the annealing search used above
  /// kMaxExactIntersectivity.
  std::uint64_t seed = 0;
  std::uint64_t anneal_steps = 200000;
};

struct IntersectivityResult {
  enum class Status { kIntersective, kNotIntersective, kNoWitnessFound };
  Status status = Status::kIntersective;
  bool exact = true;
  /// Set of size ceil(alpha N) with no qualifying progression.
  std::optional<BitVector> witness;

  bool intersective() const { return status == Status::kIntersective; }
};

/// Decides whether every A of size >= ceil(alpha N) contains a proper
/// (ell+1)-term progression with difference in D. Supersets of a set that
/// contains a progression also contain it, so only sets of size exactly
/// ceil(alpha N) are examined, in lexicographic order; the first failure is
/// the witness. Above kMaxExactIntersectivity the search is heuristic and a
/// positive answer is reported as kNoWitnessFound.
IntersectivityResult intersectivity_check(std::uint64_t N, std::size_t ell,
                                          double alpha,
                                          std::span<const std::uint64_t> differences,
                                          const IntersectivityOptions& options = {});

/// How the random difference set is drawn.
struct DifferenceModel {
  enum class Kind { kBernoulli, kDraws };
  Kind kind = Kind::kBernoulli;
  /// Inclusion probability of each nonzero residue (kBernoulli).
  double p = 0.5;
  /// Number of uniform draws with replacement from Z/NZ \ {0} (kDraws).
  std::size_t draws = 1;
};

/// Fraction of trials in which the random difference set is
/// (ell, alpha)-intersective, decided exactly. Under kBernoulli every residue
/// uses one uniform per trial, so runs with the same seed are coupled across p.
McEstimate random_intersectivity_experiment(std::uint64_t N, std::size_t ell,
                                            double alpha, const DifferenceModel& model,
                                            const McOptions& options);

}  // namespace polywidth
