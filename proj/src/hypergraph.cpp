// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/hypergraph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "polywidth/error.hpp"

namespace polywidth {

Hypergraph::Hypergraph(std::size_t num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  if (num_vertices_ == 0) {
    throw InvalidArgument("n", "vertex count must be positive");
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    Edge& e = edges_[i];
    if (e.empty()) throw InvalidArgument("edges", fmt::format("edge {} is empty", i));
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
      throw InvalidArgument("edges",
                            fmt::format("edge {} repeats a vertex", i));
    }
    if (e.back() >= num_vertices_) {
      throw InvalidArgument(
          "edges", fmt::format("edge {} has vertex {} outside [0, {})", i,
                               e.back(), num_vertices_));
    }
  }
}

std::size_t Hypergraph::max_edge_size() const {
  std::size_t d = 0;
  for (const auto& e : edges_) d = std::max(d, e.size());
  return d;
}

bool Hypergraph::is_uniform(std::size_t size) const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [size](const Edge& e) { return e.size() == size; });
}

bool Hypergraph::is_matching() const {
  std::vector<bool> used(num_vertices_, false);
  for (const auto& e : edges_) {
    for (Vertex v : e) {
      if (used[v]) return false;
      used[v] = true;
    }
  }
  return true;
}

DegreeProfile degree_profile(const Hypergraph& graph) {
  DegreeProfile profile;
  profile.degrees.assign(graph.num_vertices(), 0);
  for (const auto& e : graph.edges()) {
    for (Vertex v : e) ++profile.degrees[v];
  }
  if (!profile.degrees.empty()) {
    profile.max_degree =
        *std::max_element(profile.degrees.begin(), profile.degrees.end());
  }
  return profile;
}

EdgeColoring greedy_edge_coloring(const Hypergraph& graph) {
  EdgeColoring coloring;
  coloring.colors.resize(graph.num_edges());
  std::vector<std::vector<std::size_t>> colors_at(graph.num_vertices());
  std::vector<bool> forbidden;
  for (std::size_t i = 0; i < graph.num_edges(); ++i) {
    forbidden.assign(coloring.num_colors + 1, false);
    for (Vertex v : graph.edge(i)) {
      for (std::size_t c : colors_at[v]) forbidden[c] = true;
    }
    const std::size_t color = static_cast<std::size_t>(
        std::find(forbidden.begin(), forbidden.end(), false) -
        forbidden.begin());
    coloring.colors[i] = color;
    coloring.num_colors = std::max(coloring.num_colors, color + 1);
    for (Vertex v : graph.edge(i)) colors_at[v].push_back(color);
  }
  return coloring;
}

bool is_proper_coloring(const Hypergraph& graph, const EdgeColoring& coloring) {
  if (coloring.colors.size() != graph.num_edges()) return false;
  for (std::size_t i = 0; i < graph.num_edges(); ++i) {
    if (coloring.colors[i] >= coloring.num_colors) return false;
    for (std::size_t j = i + 1; j < graph.num_edges(); ++j) {
      if (coloring.colors[i] != coloring.colors[j]) continue;
      const Edge& a = graph.edge(i);
      const Edge& b = graph.edge(j);
      Edge common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(common));
      if (!common.empty()) return false;
    }
  }
  return true;
}

std::vector<Hypergraph> color_classes(const Hypergraph& graph,
                                      const EdgeColoring& coloring) {
  std::vector<std::vector<Edge>> buckets(coloring.num_colors);
  for (std::size_t i = 0; i < graph.num_edges(); ++i) {
    buckets[coloring.colors[i]].push_back(graph.edge(i));
  }
  std::vector<Hypergraph> classes;
  classes.reserve(buckets.size());
  for (auto& bucket : buckets) {
    classes.emplace_back(graph.num_vertices(), std::move(bucket));
  }
  return classes;
}

Hypergraph complete_to_maximal_matching(const Hypergraph& matching,
                                        std::size_t r) {
  if (r == 0) throw InvalidArgument("r", "must be positive");
  const std::size_t block = 2 * r;
  if (matching.num_vertices() < block) {
    throw InvalidArgument("n", fmt::format("need at least {} vertices", block));
  }
  if (!matching.is_uniform(block)) {
    throw InvalidArgument("matching",
                          fmt::format("every edge must have size {}", block));
  }
  if (!matching.is_matching()) {
    throw InvalidArgument("matching", "edges must be pairwise disjoint");
  }
  std::vector<bool> used(matching.num_vertices(), false);
  for (const auto& e : matching.edges()) {
    for (Vertex v : e) used[v] = true;
  }
  std::vector<Edge> edges = matching.edges();
  Edge current;
  for (Vertex v = 0; v < matching.num_vertices(); ++v) {
    if (used[v]) continue;
    current.push_back(v);
    if (current.size() == block) {
      edges.push_back(std::move(current));
      current.clear();
    }
  }
  return Hypergraph(matching.num_vertices(), std::move(edges));
}

Homogenization homogenize(const Hypergraph& graph, std::size_t d) {
  if (d == 0) throw InvalidArgument("d", "must be positive");
  if (graph.max_edge_size() > d) {
    throw InvalidArgument(
        "d", fmt::format("an edge has size {} > {}", graph.max_edge_size(), d));
  }
  const std::size_t n = graph.num_vertices();
  const std::size_t capacity = degree_profile(graph).max_degree;
  std::vector<Edge> edges;
  std::vector<Edge> padding;
  edges.reserve(graph.num_edges());
  padding.reserve(graph.num_edges());
  for (std::size_t i = 0; i < graph.num_edges(); ++i) {
    // First-fit into buckets of equal capacity, in stored order. Every edge
    // is nonempty, so |E| <= n * max_degree and i / capacity < n.
    const std::size_t group = i / capacity;
    const Edge& e = graph.edge(i);
    Edge pad;
    for (std::size_t j = 0; j < d - e.size(); ++j) {
      pad.push_back(static_cast<Vertex>(n + group * (d - 1) + j));
    }
    Edge extended = e;
    extended.insert(extended.end(), pad.begin(), pad.end());
    edges.push_back(std::move(extended));
    padding.push_back(std::move(pad));
  }
  return {Hypergraph(d * n, std::move(edges)), std::move(padding)};
}

Hypergraph read_hypergraph(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first != std::string::npos && line[first] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw InvalidArgument("hypergraph", "missing header");
  std::istringstream header(line);
  long long n = 0;
  long long m = 0;
  if (!(header >> n >> m) || n <= 0 || m < 0) {
    throw InvalidArgument("hypergraph", "header must be \"n m\"");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_line()) {
      throw InvalidArgument("hypergraph",
                            fmt::format("expected {} edges, found {}", m, i));
    }
    std::istringstream row(line);
    Edge e;
    long long v;
    while (row >> v) {
      if (v < 0) throw InvalidArgument("hypergraph", "negative vertex index");
      e.push_back(static_cast<Vertex>(v));
    }
    if (!row.eof()) {
      throw InvalidArgument("hypergraph",
                            fmt::format("bad token on edge line {}", i + 1));
    }
    edges.push_back(std::move(e));
  }
  return Hypergraph(static_cast<std::size_t>(n), std::move(edges));
}

void write_hypergraph(std::ostream& out, const Hypergraph& graph) {
  out << graph.num_vertices() << ' ' << graph.num_edges() << '\n';
  for (const auto& e : graph.edges()) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (j) out << ' ';
      out << e[j];
    }
    out << '\n';
  }
}

Hypergraph load_hypergraph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("hypergraph",
                          fmt::format("cannot open {}", path.string()));
  }
  return read_hypergraph(in);
}

}  // namespace polywidth
