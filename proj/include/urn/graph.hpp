#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace urn {

using Vertex = std::size_t;
using EdgeIndex = std::size_t;

/// Undirected edge stored as (lo, hi) with lo < hi.
struct Edge {
  Vertex lo;
  Vertex hi;

  Vertex other(Vertex v) const noexcept { return v == lo ? hi : lo; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable simple connected undirected graph.
///
/// Edge indices are stable: edge k is the k-th pair passed to build_graph.
/// Vertices are 0-indexed.
class Graph {
 public:
  std::size_t n_vertices() const noexcept { return degrees_.size(); }
  std::size_t n_edges() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }

  std::size_t degree(Vertex v) const { return degrees_.at(v); }
  const std::vector<std::size_t>& degrees() const noexcept { return degrees_; }

  /// Indices of the edges incident to v, in increasing order.
  const std::vector<EdgeIndex>& incident(Vertex v) const { return incidence_.at(v); }

  bool adjacent(Vertex a, Vertex b) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.degrees_.size() == b.degrees_.size() && a.edges_ == b.edges_;
  }

 private:
  friend Graph build_graph(std::size_t, std::span<const std::pair<Vertex, Vertex>>);

  std::vector<Edge> edges_;
  std::vector<std::size_t> degrees_;
  std::vector<std::vector<EdgeIndex>> incidence_;
};

/// Validates and canonicalizes an edge list.
///
/// Throws Error with EmptyVertexSet, VertexOutOfRange, SelfLoop, DuplicateEdge
/// or Disconnected; the message names the offending vertex or pair.
Graph build_graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edge_pairs);

inline Graph build_graph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edge_pairs) {
  return build_graph(n, std::span<const std::pair<Vertex, Vertex>>(edge_pairs));
}

Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);

/// G(n, p) conditioned on connectivity: resamples from the same stream until a
/// connected draw appears, at most 1000 attempts.
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// True iff every vertex is reachable from vertex 0 along the given edges.
bool is_connected(std::size_t n, std::span<const Edge> edges);

std::vector<std::pair<Vertex, Vertex>> edge_pairs(const Graph& g);

/// FNV-1a over (n, edge list), as 16 hex digits.
std::string graph_hash(const Graph& g);

}  // namespace urn
