// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/apmod.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "polywidth/error.hpp"
#include "polywidth/rng.hpp"

namespace polywidth {

__extension__ using UInt128 = unsigned __int128;

namespace {

void check_exact(const ApParams& p) {
  if (!is_prime(p.N)) throw InvalidArgument("N", fmt::format("{} is not prime", p.N));
  if (p.k < 3 || p.k > p.N) {
    throw InvalidArgument("k", fmt::format("must lie in [3, N = {}]", p.N));
  }
}

Edge progression(std::uint64_t a, std::uint64_t b, std::size_t k, std::uint64_t N) {
  Edge e(k);
  for (std::size_t j = 0; j < k; ++j) e[j] = static_cast<Vertex>((a + j * b) % N);
  return e;
}

bool distinct(Edge e) {
  std::sort(e.begin(), e.end());
  return std::adjacent_find(e.begin(), e.end()) == e.end();
}

std::vector<Edge> sorted_edges(const Hypergraph& graph) {
  std::vector<Edge> edges = graph.edges();
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace

bool is_prime(std::uint64_t value) {
  if (value < 2) return false;
  for (std::uint64_t d = 2; d * d <= value; ++d) {
    if (value % d == 0) return false;
  }
  return true;
}

Hypergraph ap_hypergraph(const ApParams& params) {
  check_exact(params);
  const std::uint64_t N = params.N;
  std::vector<Edge> edges;
  edges.reserve(N * (N - 1) / 2);
  // For odd N, b and -b are distinct, so b in [1, (N-1)/2] picks exactly one
  // of the two orderings of each progression.
  for (std::uint64_t b = 1; b <= (N - 1) / 2; ++b) {
    for (std::uint64_t a = 0; a < N; ++a) edges.push_back(progression(a, b, params.k, N));
  }
  return Hypergraph(N, std::move(edges));
}

Hypergraph ap_hypergraph_loose(const ApParams& params) {
  const std::uint64_t N = params.N;
  if (N < 3) throw InvalidArgument("N", "must be at least 3");
  if (params.k < 2 || params.k > N) {
    throw InvalidArgument("k", fmt::format("must lie in [2, N = {}]", N));
  }
  std::vector<Edge> edges;
  for (std::uint64_t b = 1; b < N; ++b) {
    for (std::uint64_t a = 0; a < N; ++a) {
      // Keep (a, b) only if it precedes its reversal (a + (k-1)b, -b).
      const std::uint64_t ra = (a + (params.k - 1) * b) % N;
      const std::uint64_t rb = N - b;
      if (std::pair(a, b) > std::pair(ra, rb)) continue;
      Edge e = progression(a, b, params.k, N);
      if (distinct(e)) edges.push_back(std::move(e));
    }
  }
  return Hypergraph(N, std::move(edges));
}

Hypergraph fixed_difference_hypergraph(const ApParams& params, std::uint64_t y) {
  const std::uint64_t N = params.N;
  if (N < 3) throw InvalidArgument("N", "must be at least 3");
  if (params.k < 2) throw InvalidArgument("k", "must be at least 2");
  if (y % N == 0) throw InvalidArgument("y", "difference must be nonzero mod N");
  std::vector<Edge> edges;
  edges.reserve(N);
  for (std::uint64_t x = 0; x < N; ++x) {
    Edge e = progression(x, y % N, params.k, N);
    if (!distinct(e)) {
      throw InvalidArgument("y", fmt::format("difference {} gives improper progressions mod {}",
                                             y, N));
    }
    edges.push_back(std::move(e));
  }
  return Hypergraph(N, std::move(edges));
}

std::int64_t lambda_k(const BitVector& set, std::size_t k) {
  const std::uint64_t N = set.size();
  std::int64_t count = 0;
  for (std::uint64_t a = 0; a < N; ++a) {
    for (std::uint64_t b = 1; b < N; ++b) {
      bool inside = true;
      for (std::size_t j = 0; j < k && inside; ++j) inside = set[(a + j * b) % N];
      count += inside;
    }
  }
  return count;
}

PairIncidence pair_incidence_profile(const Hypergraph& graph) {
  PairIncidence out;
  out.n = graph.num_vertices();
  out.table.assign(out.n * out.n, 0);
  for (const auto& e : graph.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t j = i + 1; j < e.size(); ++j) {
        ++out.table[e[i] * out.n + e[j]];
        ++out.table[e[j] * out.n + e[i]];
      }
    }
  }
  bool first = true;
  for (std::size_t u = 0; u < out.n; ++u) {
    for (std::size_t v = u + 1; v < out.n; ++v) {
      const std::size_t c = out.table[u * out.n + v];
      out.max = first ? c : std::max(out.max, c);
      out.min = first ? c : std::min(out.min, c);
      first = false;
    }
  }
  return out;
}

bool preserves_edges(const Hypergraph& graph, std::span<const Vertex> map) {
  if (map.size() != graph.num_vertices()) {
    throw InvalidArgument("map", "must assign an image to every vertex");
  }
  std::vector<Edge> images;
  images.reserve(graph.num_edges());
  for (const auto& e : graph.edges()) {
    Edge image;
    for (Vertex v : e) image.push_back(map[v]);
    std::sort(image.begin(), image.end());
    images.push_back(std::move(image));
  }
  std::sort(images.begin(), images.end());
  return images == sorted_edges(graph);
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t prime) {
  a %= prime;
  if (a == 0) throw InvalidArgument("a", "zero has no inverse");
  std::uint64_t result = 1;
  std::uint64_t base = a;
  for (std::uint64_t e = prime - 2; e > 0; e >>= 1) {
    if (e & 1) result = static_cast<std::uint64_t>(static_cast<UInt128>(result) * base % prime);
    base = static_cast<std::uint64_t>(static_cast<UInt128>(base) * base % prime);
  }
  return result;
}

bool two_transitivity_check(const ApParams& params, std::size_t trials,
                            std::uint64_t seed) {
  const Hypergraph graph = ap_hypergraph(params);
  const std::uint64_t N = params.N;
  CounterStream stream(seed, stream_tag::kTransitivity, 0);
  auto distinct_pair = [&] {
    const std::uint64_t a = stream.below(N);
    const std::uint64_t b = (a + 1 + stream.below(N - 1)) % N;
    return std::pair(a, b);
  };
  std::vector<Vertex> map(N);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [a, b] = distinct_pair();
    const auto [c, d] = distinct_pair();
    const std::uint64_t scale = (d + N - c) % N * mod_inverse((b + N - a) % N, N) % N;
    for (std::uint64_t x = 0; x < N; ++x) {
      map[x] = static_cast<Vertex>((c + scale * ((x + N - a) % N)) % N);
    }
    if (map[a] != c || map[b] != d) return false;
    if (!preserves_edges(graph, map)) return false;
  }
  return true;
}

std::vector<Hypergraph> gradient_hypergraphs(const Hypergraph& graph) {
  const std::size_t n = graph.num_vertices();
  if (graph.num_edges() > 0) {
    const std::size_t size = graph.edge(0).size();
    if (!graph.is_uniform(size)) {
      throw InvalidArgument("hypergraph", "must be uniform");
    }
    if (size < 2) throw InvalidArgument("hypergraph", "edges must have size at least 2");
  }
  std::vector<std::vector<Edge>> derived(n);
  for (const auto& e : graph.edges()) {
    for (Vertex i : e) {
      Edge rest;
      for (Vertex v : e) {
        if (v != i) rest.push_back(v);
      }
      derived[i].push_back(std::move(rest));
    }
  }
  std::vector<Hypergraph> out;
  out.reserve(n);
  for (auto& edges : derived) out.emplace_back(n, std::move(edges));
  return out;
}

}  // namespace polywidth
