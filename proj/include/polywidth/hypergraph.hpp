// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace polywidth {

using Vertex = std::uint32_t;
/// An edge is a strictly increasing list of distinct vertices.
using Edge = std::vector<Vertex>;

/// Vertex count plus an ordered multiset of edges on vertices 0..n-1.
///
/// Edges are canonicalized (sorted) on construction; duplicate vertices inside
/// an edge, empty edges and out-of-range vertices are rejected. Parallel edges
/// are kept, in insertion order.
class Hypergraph {
 public:
  explicit Hypergraph(std::size_t num_vertices, std::vector<Edge> edges = {});

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }

  /// Largest edge size (0 for the empty hypergraph).
  std::size_t max_edge_size() const;
  bool is_uniform(std::size_t size) const;
  bool is_matching() const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::size_t num_vertices_;
  std::vector<Edge> edges_;
};

struct DegreeProfile {
  std::vector<std::size_t> degrees;
  std::size_t max_degree = 0;
};

DegreeProfile degree_profile(const Hypergraph& graph);

/// Color per edge, parallel to Hypergraph::edges(). Edges sharing a vertex get
/// different colors; num_colors is one past the largest color (0 if no edges).
struct EdgeColoring {
  std::vector<std::size_t> colors;
  std::size_t num_colors = 0;
};

/// First-fit coloring in stored edge order. Uses at most d*(max_degree-1)+1
/// colors, where d is the largest edge size.
EdgeColoring greedy_edge_coloring(const Hypergraph& graph);

bool is_proper_coloring(const Hypergraph& graph, const EdgeColoring& coloring);

/// Splits the edges into one matching per color, preserving edge order.
std::vector<Hypergraph> color_classes(const Hypergraph& graph,
                                      const EdgeColoring& coloring);

/// Extends a matching of 2r-sets to a maximal one by packing the unused
/// vertices, in ascending order, into consecutive blocks of 2r. Existing
/// edges come first in the result.
Hypergraph complete_to_maximal_matching(const Hypergraph& matching,
                                        std::size_t r);

struct Homogenization {
  /// d-uniform hypergraph on d*n vertices; edge i extends edge i of the input.
  Hypergraph hypergraph;
  /// padding[i] = (extended edge i) minus (original edge i).
  std::vector<Edge> padding;
};

/// Pads every edge to size d with fresh vertices without raising the maximum
/// degree. Edges are split in stored order into n groups of at most
/// max_degree edges; group i draws its padding from the block of d-1 new
/// vertices n + i*(d-1), ..., n + i*(d-1) + d-2.
Homogenization homogenize(const Hypergraph& graph, std::size_t d);

/// Text format: a line "n m" followed by m lines of vertex indices.
Hypergraph read_hypergraph(std::istream& in);
void write_hypergraph(std::ostream& out, const Hypergraph& graph);
Hypergraph load_hypergraph(const std::filesystem::path& path);

}  // namespace polywidth
