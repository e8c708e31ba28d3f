// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "polywidth/hypergraph.hpp"
#include "polywidth/poly.hpp"

namespace polywidth {

/// Progressions of length k in Z/NZ.
struct ApParams {
  std::uint64_t N = 0;
  std::size_t k = 0;
};

bool is_prime(std::uint64_t value);

/// Hypergraph of unordered proper k-term progressions in Z/NZ, N prime and
/// 3 <= k <= N. One edge per pair {(a, b), (a + (k-1)b, -b)} with b != 0,
/// listed as b = 1..(N-1)/2 then a = 0..N-1; N(N-1)/2 edges in total.
/// Coinciding vertex sets (k = N) are kept as parallel edges.
Hypergraph ap_hypergraph(const ApParams& params);

/// As ap_hypergraph for any N >= 3 and 2 <= k <= N, dropping progressions
/// whose k terms are not distinct. No exactness claims when N is composite.
Hypergraph ap_hypergraph_loose(const ApParams& params);

/// Edges {x, x+y, ..., x+(k-1)y} for x = 0..N-1. Throws if y = 0 mod N or a
/// progression repeats an element.
Hypergraph fixed_difference_hypergraph(const ApParams& params, std::uint64_t y);

/// Ordered progression count: sum over a and b != 0 of
/// 1_A(a) 1_A(a+b) ... 1_A(a+(k-1)b).
std::int64_t lambda_k(const BitVector& set, std::size_t k);

struct PairIncidence {
  std::size_t n = 0;
  /// Row-major n x n table; entry (u, v) counts edges containing both.
  std::vector<std::size_t> table;
  /// Extremes over unordered pairs u < v.
  std::size_t max = 0;
  std::size_t min = 0;

  std::size_t at(Vertex u, Vertex v) const { return table[u * n + v]; }
};

PairIncidence pair_incidence_profile(const Hypergraph& graph);

/// True iff the vertex map sends the edge multiset onto itself.
bool preserves_edges(const Hypergraph& graph, std::span<const Vertex> map);

/// Modular inverse for prime modulus.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t prime);

/// Draws random ordered pairs (a, b), (c, d) of distinct residues and checks
/// that x -> c + (d - c)(x - a)(b - a)^{-1} sends a to c, b to d and
/// preserves the edges of ap_hypergraph(params).
bool two_transitivity_check(const ApParams& params, std::size_t trials,
                            std::uint64_t seed);

/// H_i has edges e \ {i} for every edge e containing i, so that
/// p_{H_i} is the i-th partial derivative of p_H.
std::vector<Hypergraph> gradient_hypergraphs(const Hypergraph& graph);

}  // namespace polywidth
