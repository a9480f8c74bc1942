#include "urn/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "urn/error.hpp"
#include "urn/rng.hpp"

namespace urn {

namespace {

std::string pair_name(Vertex a, Vertex b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

// Returns the first vertex not reachable from 0, or n if connected.
Vertex first_unreachable(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::vector<Vertex>> adj(n);
  for (const Edge& e : edges) {
    adj[e.lo].push_back(e.hi);
    adj[e.hi].push_back(e.lo);
  }
  std::vector<bool> seen(n, false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  const auto it = std::find(seen.begin(), seen.end(), false);
  return static_cast<Vertex>(it - seen.begin());
}

}  // namespace

bool Graph::adjacent(Vertex a, Vertex b) const {
  for (EdgeIndex e : incidence_.at(a)) {
    if (edges_[e].other(a) == b) return true;
  }
  return false;
}

bool is_connected(std::size_t n, std::span<const Edge> edges) {
  return n > 0 && first_unreachable(n, edges) == n;
}

Graph build_graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edge_pairs) {
  if (n == 0) throw Error(Errc::EmptyVertexSet, "graph must have at least one vertex");

  Graph g;
  g.degrees_.assign(n, 0);
  g.incidence_.assign(n, {});
  g.edges_.reserve(edge_pairs.size());

  std::set<std::pair<Vertex, Vertex>> seen;
  for (const auto& [a, b] : edge_pairs) {
    if (a >= n || b >= n) {
      throw Error(Errc::VertexOutOfRange,
                  "edge " + pair_name(a, b) + " has a vertex outside [0, " + std::to_string(n) + ")");
    }
    if (a == b) throw Error(Errc::SelfLoop, "edge " + pair_name(a, b) + " is a self-loop");
    const Edge e{std::min(a, b), std::max(a, b)};
    if (!seen.insert({e.lo, e.hi}).second) {
      throw Error(Errc::DuplicateEdge, "edge " + pair_name(e.lo, e.hi) + " appears more than once");
    }
    const EdgeIndex idx = g.edges_.size();
    g.edges_.push_back(e);
    ++g.degrees_[e.lo];
    ++g.degrees_[e.hi];
    g.incidence_[e.lo].push_back(idx);
    g.incidence_[e.hi].push_back(idx);
  }

  const Vertex missing = first_unreachable(n, g.edges_);
  if (missing != n) {
    throw Error(Errc::Disconnected, "vertex " + std::to_string(missing) + " is not reachable from vertex 0");
  }
  return g;
}

Graph path_graph(std::size_t n) {
  if (n < 2) throw Error(Errc::TooSmall, "path graph needs n >= 2, got " + std::to_string(n));
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return build_graph(n, pairs);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw Error(Errc::TooSmall, "cycle graph needs n >= 3, got " + std::to_string(n));
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex i = 0; i < n; ++i) pairs.emplace_back(i, (i + 1) % n);
  return build_graph(n, pairs);
}

Graph complete_graph(std::size_t n) {
  if (n < 2) throw Error(Errc::TooSmall, "complete graph needs n >= 2, got " + std::to_string(n));
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return build_graph(n, pairs);
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw Error(Errc::TooSmall, "G(n, p) needs n >= 2, got " + std::to_string(n));
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error(Errc::DomainError, "G(n, p) edge probability must lie in (0, 1], got " + std::to_string(p));
  }
  constexpr int kMaxAttempts = 1000;
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    edges.clear();
    for (Vertex i = 0; i < n; ++i) {
      for (Vertex j = i + 1; j < n; ++j) {
        if (rng.uniform() < p) edges.push_back({i, j});
      }
    }
    if (is_connected(n, edges)) {
      std::vector<std::pair<Vertex, Vertex>> pairs;
      pairs.reserve(edges.size());
      for (const Edge& e : edges) pairs.emplace_back(e.lo, e.hi);
      return build_graph(n, pairs);
    }
  }
  throw Error(Errc::ConnectivityRetryExhausted,
              "no connected G(" + std::to_string(n) + ", " + std::to_string(p) + ") draw in " +
                  std::to_string(kMaxAttempts) + " attempts");
}

std::vector<std::pair<Vertex, Vertex>> edge_pairs(const Graph& g) {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(g.n_edges());
  for (const Edge& e : g.edges()) out.emplace_back(e.lo, e.hi);
  return out;
}

std::string graph_hash(const Graph& g) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (word >> (8 * byte)) & 0xFFU;
      h *= 0x100000001B3ULL;
    }
  };
  feed(g.n_vertices());
  for (const Edge& e : g.edges()) {
    feed(e.lo);
    feed(e.hi);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace urn
