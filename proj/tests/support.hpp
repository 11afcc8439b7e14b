#pragma once

// Test-side reference implementations. They share no code with the library
// beyond its data types: plain BFS, subset enumeration and permutations.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dsn/graph.hpp"

namespace dsn::testing {

inline std::vector<std::string> vertex_names(std::size_t n, const std::string& prefix = "v") {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

/// Simple random digraph on v0..v{n-1} with exactly m arcs (capped at n(n-1)).
inline WeightedDigraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t m, Cost max_cost,
                                    double zero_share = 0.0) {
  auto names = vertex_names(n);
  m = std::min(m, n * (n - 1));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<WeightedDigraph::NamedEdge> edges;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<Cost> cost(0, max_cost);
  std::bernoulli_distribution zero(zero_share);
  while (seen.size() < m) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a == b || !seen.insert({a, b}).second) continue;
    edges.emplace_back(names[a], names[b], zero(rng) ? 0 : cost(rng));
  }
  return WeightedDigraph(names, edges);
}

/// Vertices reachable from s using only the arcs (a, b) with use[i] set.
inline std::vector<bool> bfs(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& arcs,
                             const std::vector<bool>& use, std::size_t s) {
  std::vector<bool> seen(n, false);
  seen[s] = true;
  std::queue<std::size_t> q;
  q.push(s);
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop();
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (use[i] && arcs[i].first == v && !seen[arcs[i].second]) {
        seen[arcs[i].second] = true;
        q.push(arcs[i].second);
      }
    }
  }
  return seen;
}

inline std::vector<std::pair<std::size_t, std::size_t>> arcs_of(const WeightedDigraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (const Edge& e : g.edges()) arcs.emplace_back(e.tail, e.head);
  return arcs;
}

inline std::vector<std::pair<std::size_t, std::size_t>> demand_ids(const WeightedDigraph& g, const Pattern& h) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [s, t] : h.demands()) {
    out.emplace_back(*g.find(h.terminal(s)), *g.find(h.terminal(t)));
  }
  return out;
}

inline bool naive_feasible(const WeightedDigraph& g, const std::vector<bool>& use, const Pattern& h) {
  auto arcs = arcs_of(g);
  for (const auto& [s, t] : demand_ids(g, h)) {
    if (!bfs(g.num_vertices(), arcs, use, s)[t]) return false;
  }
  return true;
}

inline std::vector<bool> edge_mask(const WeightedDigraph& g, const std::vector<EdgeId>& edges) {
  std::vector<bool> use(g.num_edges(), false);
  for (EdgeId e : edges) use[e] = true;
  return use;
}

/// Minimum cost over all edge subsets; only for small graphs.
inline std::optional<Cost> exhaustive_optimum(const WeightedDigraph& g, const Pattern& h) {
  const std::size_t m = g.num_edges();
  std::optional<Cost> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Cost c = 0;
    std::vector<bool> use(m, false);
    for (std::size_t e = 0; e < m; ++e) {
      if (mask >> e & 1) {
        use[e] = true;
        c += g.edge(static_cast<EdgeId>(e)).cost;
      }
    }
    if (best && c >= *best) continue;
    if (naive_feasible(g, use, h)) best = c;
  }
  return best;
}

/// Cheapest edge set in which the given vertices are pairwise reachable.
inline std::optional<Cost> exhaustive_scss(const WeightedDigraph& g, const std::vector<std::string>& terminals) {
  const std::size_t m = g.num_edges();
  auto arcs = arcs_of(g);
  std::optional<Cost> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Cost c = 0;
    std::vector<bool> use(m, false);
    for (std::size_t e = 0; e < m; ++e) {
      if (mask >> e & 1) {
        use[e] = true;
        c += g.edge(static_cast<EdgeId>(e)).cost;
      }
    }
    if (best && c >= *best) continue;
    bool ok = true;
    for (const auto& a : terminals) {
      auto r = bfs(g.num_vertices(), arcs, use, *g.find(a));
      for (const auto& b : terminals) ok = ok && r[*g.find(b)];
    }
    if (ok) best = c;
  }
  return best;
}

inline std::size_t naive_layout_width(const Digraph& d, const std::vector<VertexId>& order) {
  std::vector<std::size_t> pos(d.n);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::size_t best = 0;
  for (std::size_t cut = 0; cut + 1 < d.n; ++cut) {
    std::size_t crossing = 0;
    for (const auto& [a, b] : d.arcs) crossing += (pos[a] <= cut) != (pos[b] <= cut);
    best = std::max(best, crossing);
  }
  return best;
}

/// Minimum over all n! layouts.
inline std::size_t naive_cutwidth(const Digraph& d) {
  std::vector<VertexId> order(d.n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::size_t best = SIZE_MAX;
  do {
    best = std::min(best, naive_layout_width(d, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return d.n == 0 ? 0 : best;
}

/// Minimum over all elimination orders of the largest neighbourhood eliminated.
inline std::size_t naive_treewidth(const Digraph& d) {
  if (d.n == 0) return 0;
  std::vector<VertexId> order(d.n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::size_t best = SIZE_MAX;
  do {
    std::vector<std::set<VertexId>> adj(d.n);
    for (const auto& [a, b] : d.arcs) {
      if (a == b) continue;
      adj[a].insert(b);
      adj[b].insert(a);
    }
    std::vector<bool> gone(d.n, false);
    std::size_t width = 0;
    for (VertexId v : order) {
      std::vector<VertexId> nb;
      for (VertexId u : adj[v]) {
        if (!gone[u]) nb.push_back(u);
      }
      width = std::max(width, nb.size());
      for (VertexId a : nb) {
        for (VertexId b : nb) {
          if (a != b) adj[a].insert(b);
        }
      }
      gone[v] = true;
    }
    best = std::min(best, width);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

/// Reachability relation of a pattern by Floyd-Warshall; r[s][t] for s != t.
inline std::vector<std::vector<bool>> naive_closure(const Pattern& h) {
  const std::size_t n = h.num_terminals();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (const auto& [s, t] : h.demands()) r[s][t] = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (r[i][k] && r[k][j]) r[i][j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) r[i][i] = false;
  return r;
}

/// Random pattern on the first k host vertices of a random permutation.
inline Pattern random_pattern(std::mt19937_64& rng, const std::vector<std::string>& names, std::size_t k,
                              std::size_t demands) {
  std::vector<std::string> pool = names;
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(k);
  demands = std::min(demands, k * (k - 1));
  std::set<std::pair<std::size_t, std::size_t>> d;
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  while (d.size() < demands) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a != b) d.insert({a, b});
  }
  std::vector<std::pair<std::string, std::string>> named;
  for (auto [a, b] : d) named.emplace_back(pool[a], pool[b]);
  return Pattern(pool, named);
}

}  // namespace dsn::testing
