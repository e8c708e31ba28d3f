// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "polywidth/hypergraph.hpp"
#include "polywidth/mc.hpp"
#include "polywidth/rng.hpp"

namespace polywidth {

/// Constants of the generalized birthday paradox for a given r:
/// C_r = (6er)^(1/r), s = 200 * 4^r, n_0 = 4 (C_r r)^r.
struct DefaultConstants {
  double c_r = 0.0;
  std::uint64_t s = 0;
  double n0 = 0.0;
};

DefaultConstants default_constants(std::size_t r);

struct BirthdayParams {
  std::size_t r = 1;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t s = 0;

  /// m = floor(C_r n^(1 - 1/r)) and s = 200 * 4^r.
  static BirthdayParams with_defaults(std::size_t r, std::size_t n);
  void validate() const;
  /// Poisson rate per bin, m / n.
  double rate() const { return static_cast<double>(m) / static_cast<double>(n); }
};

/// Maximal 2r-matching of [n] from ascending greedy packing.
Hypergraph greedy_maximal_matching(std::size_t n, std::size_t r);

/// phi evaluated on a bin-count vector: sum over S in the matching of the
/// r-th elementary symmetric sum of the counts on S. Equals phi(h) when the
/// counts are the histogram of h.
std::uint64_t phi_of_counts(std::span<const std::uint32_t> counts,
                            const Hypergraph& matching, std::size_t r);

/// One pass of h uniform over maps [m] -> [n].
struct BirthdayStats {
  McEstimate p_good;       ///< Pr[1 <= phi(h) <= s]
  McEstimate mean_phi;     ///< E[phi(h)]
  McEstimate p_nonzero;    ///< Pr[phi(h) >= 1]
  McEstimate p_above_markov;  ///< Pr[phi(h) > 200 * 4^r]
};

BirthdayStats birthday_statistics(const BirthdayParams& params,
                                  const Hypergraph& matching,
                                  const McOptions& options);

McEstimate estimate_good_probability(const BirthdayParams& params,
                                     const Hypergraph& matching,
                                     const McOptions& options);

McEstimate mean_phi(const BirthdayParams& params, const Hypergraph& matching,
                    const McOptions& options);

/// Poisson(mu) by inversion of the cumulative density.
std::uint64_t sample_poisson(double mu, CounterStream& stream);

/// e^{-mu} mu^l / l!.
double poisson_density(double mu, std::uint64_t l);

/// Both sides of E[Phi(X)] <= 2 E[Phi(Y)] for one functional, where X is the
/// balls-in-bins histogram and Y has independent Poisson(m/n) entries.
struct DominationSide {
  McEstimate lhs;  ///< E[Phi(X)]
  McEstimate rhs;  ///< E[Phi(Y)]
  /// lhs <= 2 rhs + 3 sqrt(se_lhs^2 + 4 se_rhs^2).
  bool holds = false;
};

struct PoissonDominationReport {
  /// Indicator that phi vanishes (fewer than r occupied bins in every S).
  DominationSide psi;
  /// phi itself, i.e. sum_S e_r(counts on S).
  DominationSide chi;
};

PoissonDominationReport poisson_domination_check(const BirthdayParams& params,
                                                 const Hypergraph& matching,
                                                 const McOptions& options);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
  bool pass = false;
};

/// Samples Y_a + Y_b with Y_a ~ Poisson(mu_a), Y_b ~ Poisson(mu_b) and runs a
/// chi-square goodness-of-fit test against Poisson(mu_a + mu_b). Bins are
/// merged until each expects at least five observations; the test passes
/// when the p-value is at least `significance`.
ChiSquareResult poisson_sum_chi_square(double mu_a, double mu_b,
                                       const McOptions& options,
                                       double significance = 1e-3);

}  // namespace polywidth
