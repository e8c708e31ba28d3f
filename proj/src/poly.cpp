// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/poly.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "polywidth/error.hpp"

namespace polywidth {

namespace {

void check_length(const Hypergraph& graph, std::size_t length) {
  if (length != graph.num_vertices()) {
    throw InvalidArgument("x", fmt::format("length {} does not match n = {}",
                                           length, graph.num_vertices()));
  }
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw std::overflow_error("integer polynomial evaluation overflowed");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::overflow_error("integer polynomial evaluation overflowed");
  }
  return out;
}

}  // namespace

BitVector::BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw InvalidArgument("bits", "entries must be 0 or 1");
  }
}

BitVector BitVector::from_index(std::size_t n, std::uint64_t index) {
  std::vector<std::uint8_t> bits(n);
  for (std::size_t j = 0; j < n; ++j) bits[j] = (index >> (n - 1 - j)) & 1u;
  return BitVector(std::move(bits));
}

std::size_t BitVector::weight() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<std::int64_t> BitVector::to_integers() const {
  return {bits_.begin(), bits_.end()};
}

SignVector::SignVector(std::vector<std::int8_t> signs)
    : signs_(std::move(signs)) {
  for (auto s : signs_) {
    if (s != 1 && s != -1) throw InvalidArgument("signs", "entries must be +-1");
  }
}

SignVector SignVector::from_index(std::size_t n, std::uint64_t index) {
  std::vector<std::int8_t> signs(n);
  for (std::size_t j = 0; j < n; ++j) {
    signs[j] = ((index >> (n - 1 - j)) & 1u) ? -1 : 1;
  }
  return SignVector(std::move(signs));
}

std::vector<std::int64_t> SignVector::to_integers() const {
  return {signs_.begin(), signs_.end()};
}

std::int64_t eval_pH(const Hypergraph& graph, std::span<const std::int64_t> x) {
  check_length(graph, x.size());
  std::int64_t total = 0;
  for (const auto& e : graph.edges()) {
    std::int64_t term = 1;
    for (Vertex v : e) {
      term = checked_mul(term, x[v]);
      if (term == 0) break;
    }
    total = checked_add(total, term);
  }
  return total;
}

std::int64_t eval_pH(const Hypergraph& graph, const BitVector& x) {
  check_length(graph, x.size());
  std::int64_t total = 0;
  for (const auto& e : graph.edges()) {
    total += std::all_of(e.begin(), e.end(), [&](Vertex v) { return x[v]; });
  }
  return total;
}

std::int64_t eval_pH(const Hypergraph& graph, const SignVector& x) {
  check_length(graph, x.size());
  std::int64_t total = 0;
  for (const auto& e : graph.edges()) {
    int sign = 1;
    for (Vertex v : e) sign *= x[v];
    total += sign;
  }
  return total;
}

double eval_pH(const Hypergraph& graph, std::span<const double> x) {
  check_length(graph, x.size());
  double total = 0.0;
  for (const auto& e : graph.edges()) {
    double term = 1.0;
    for (Vertex v : e) term *= x[v];
    total += term;
  }
  return total;
}

namespace {

// Adds, for every vertex i of every edge, the product of the other entries.
// Prefix/suffix products avoid dividing by x_i.
template <class T, class Mul>
std::vector<T> gradient_impl(const Hypergraph& graph, std::span<const T> x,
                             Mul mul) {
  check_length(graph, x.size());
  std::vector<T> grad(graph.num_vertices(), T{0});
  std::vector<T> prefix;
  for (const auto& e : graph.edges()) {
    const std::size_t d = e.size();
    prefix.assign(d + 1, T{1});
    for (std::size_t j = 0; j < d; ++j) prefix[j + 1] = mul(prefix[j], x[e[j]]);
    T suffix{1};
    for (std::size_t j = d; j-- > 0;) {
      grad[e[j]] += mul(prefix[j], suffix);
      suffix = mul(suffix, x[e[j]]);
    }
  }
  return grad;
}

}  // namespace

std::vector<std::int64_t> gradient_pH(const Hypergraph& graph,
                                      std::span<const std::int64_t> x) {
  return gradient_impl<std::int64_t>(graph, x, checked_mul);
}

std::vector<double> gradient_pH(const Hypergraph& graph,
                                std::span<const double> x) {
  return gradient_impl<double>(graph, x,
                               [](double a, double b) { return a * b; });
}

double eval_multilinear_form(const Hypergraph& graph,
                             std::span<const std::vector<double>> args) {
  if (graph.num_edges() == 0) return 0.0;
  const std::size_t d = graph.edge(0).size();
  if (!graph.is_uniform(d)) {
    throw InvalidArgument("hypergraph", "multilinear form needs a uniform hypergraph");
  }
  if (args.size() != d) {
    throw InvalidArgument("args", fmt::format("expected {} vectors", d));
  }
  for (const auto& a : args) check_length(graph, a.size());

  double factorial = 1.0;
  for (std::size_t j = 2; j <= d; ++j) factorial *= static_cast<double>(j);

  std::vector<std::size_t> sigma(d);
  double total = 0.0;
  for (const auto& e : graph.edges()) {
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    double edge_sum = 0.0;
    do {
      double term = 1.0;
      for (std::size_t j = 0; j < d; ++j) term *= args[j][e[sigma[j]]];
      edge_sum += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    total += edge_sum / factorial;
  }
  return total;
}

}  // namespace polywidth
