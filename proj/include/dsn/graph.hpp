#pragma once

// Core data model for directed Steiner network instances: the weighted host
// graph, the unweighted demand pattern, sub-networks of the host and the
// primitive reachability / condensation / minimality algorithms.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dsn/error.hpp"

namespace dsn {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Cost = std::int64_t;

inline constexpr Cost kMaxEdgeCost = Cost{1} << 40;
inline constexpr std::size_t kDefaultPatternGuard = 12;

struct Edge {
  VertexId tail;
  VertexId head;
  Cost cost;
};

/// Host graph with nonnegative integer arc costs. Edge ids are assigned in
/// ascending (tail-id, head-id) order, so comparing edge ids compares edges
/// lexicographically by their endpoints.
class WeightedDigraph {
 public:
  using NamedEdge = std::tuple<std::string, std::string, Cost>;

  WeightedDigraph() = default;

  /// Parallel edges keep the cheapest copy and record a warning; self-loops,
  /// unknown endpoints, duplicate vertex names and out-of-range costs throw.
  WeightedDigraph(std::vector<std::string> vertices, const std::vector<NamedEdge>& edges,
                  std::vector<std::string>* warnings = nullptr);

  std::size_t num_vertices() const noexcept { return names_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  const std::string& name(VertexId v) const { return names_.at(v); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<VertexId> find(std::string_view name) const;
  VertexId id(std::string_view name) const;

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const EdgeId> out_edges(VertexId v) const { return out_.at(v); }
  std::span<const EdgeId> in_edges(VertexId v) const { return in_.at(v); }
  std::optional<EdgeId> find_edge(VertexId tail, VertexId head) const;

  /// Same vertex set, every edge reversed.
  WeightedDigraph reversed() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

/// Unweighted demand graph on the terminal set. Terminals keep their input
/// order; demands are stored as index pairs sorted ascending.
class Pattern {
 public:
  using Demand = std::pair<std::size_t, std::size_t>;

  Pattern() = default;

  /// Terminals that appear in no demand are dropped (with a warning).
  Pattern(std::vector<std::string> terminals,
          const std::vector<std::pair<std::string, std::string>>& demands,
          std::vector<std::string>* warnings = nullptr);

  static Pattern from_indices(std::vector<std::string> terminals, const std::vector<Demand>& demands,
                              std::vector<std::string>* warnings = nullptr);

  std::size_t num_terminals() const noexcept { return terminals_.size(); }
  std::size_t num_demands() const noexcept { return demands_.size(); }
  bool empty() const noexcept { return demands_.empty(); }

  const std::vector<std::string>& terminals() const noexcept { return terminals_; }
  const std::string& terminal(std::size_t i) const { return terminals_.at(i); }
  const std::vector<Demand>& demands() const noexcept { return demands_; }
  std::optional<std::size_t> find(std::string_view name) const;
  bool has_demand(std::size_t s, std::size_t t) const;

  /// Out-neighbour bitmasks; requires at most 64 terminals.
  std::vector<std::uint64_t> adjacency() const;

  Pattern reversed() const;

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.terminals_ == b.terminals_ && a.demands_ == b.demands_;
  }

 private:
  std::vector<std::string> terminals_;
  std::vector<Demand> demands_;
};

/// Subset of host edges, optionally with extra isolated host vertices.
class SolutionNetwork {
 public:
  SolutionNetwork() = default;
  SolutionNetwork(const WeightedDigraph& host, std::vector<EdgeId> edges,
                  std::vector<VertexId> extra_vertices = {});

  const WeightedDigraph& host() const { return *host_; }
  const std::vector<EdgeId>& edges() const noexcept { return edges_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  Cost cost() const;
  bool contains(EdgeId e) const;
  /// Endpoints of member edges plus the extra vertices, sorted.
  std::vector<VertexId> vertices() const;
  SolutionNetwork without(EdgeId e) const;

 private:
  const WeightedDigraph* host_ = nullptr;
  std::vector<EdgeId> edges_;
  std::vector<VertexId> extra_;
};

/// Vertex ordering; order[p] is the vertex at position p.
struct Layout {
  std::vector<VertexId> order;

  /// position[v] for every vertex; throws if the layout is not a bijection on 0..n-1.
  std::vector<std::size_t> positions(std::size_t n) const;
};

/// Plain directed multigraph on vertices 0..n-1.
struct Digraph {
  std::size_t n = 0;
  std::vector<std::pair<VertexId, VertexId>> arcs;

  std::vector<std::vector<VertexId>> successors() const;
};

/// Network (or whole host) relabelled onto 0..m-1 for structural algorithms.
struct LocalGraph {
  Digraph graph;
  std::vector<VertexId> host_vertex;  // local -> host
  std::vector<EdgeId> host_edge;      // arc index -> host edge id
};

LocalGraph local_view(const SolutionNetwork& network);
LocalGraph local_view(const WeightedDigraph& graph);

struct Condensation {
  Digraph dag;                                    // arcs keep multiplicity
  std::vector<std::size_t> component_of;          // vertex -> component
  std::vector<std::vector<VertexId>> components;  // numbered in topological order
};

// --- operations -----------------------------------------------------------

std::vector<VertexId> reachable(const WeightedDigraph& graph, VertexId source);
std::vector<VertexId> reachable(const SolutionNetwork& network, VertexId source);

Condensation scc_condensation(const Digraph& graph);
Condensation scc_condensation(const WeightedDigraph& graph);

bool is_acyclic(const Digraph& graph);
/// Topological order (smallest id first among ready vertices); throws on cycles.
std::vector<VertexId> topological_order(const Digraph& graph);

Pattern transitive_closure(const Pattern& pattern);

/// Isomorphism of transitive closures; both patterns must fit the size guard.
bool transitively_equivalent(const Pattern& a, const Pattern& b,
                             std::size_t guard = kDefaultPatternGuard);

/// Exact isomorphism test on adjacency bitmasks (brute force with degree pruning).
bool isomorphic(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

/// Closure of an adjacency bitmask relation (no self-loops).
std::vector<std::uint64_t> closure_masks(const std::vector<std::uint64_t>& adjacency);

/// Demands mapped to host vertex ids; throws if a terminal is not a host vertex.
std::vector<std::pair<VertexId, VertexId>> bind_demands(const WeightedDigraph& host,
                                                        const Pattern& pattern);

bool feasible(const SolutionNetwork& network, const Pattern& pattern);
bool feasible(const WeightedDigraph& host, const std::vector<EdgeId>& edges,
              const std::vector<std::pair<VertexId, VertexId>>& demands);

/// Removes edges in decreasing cost order (ties by ascending tail/head) while
/// the network stays feasible.
SolutionNetwork minimalize(const SolutionNetwork& network, const Pattern& pattern);
SolutionNetwork minimalize(const SolutionNetwork& network,
                           const std::vector<std::pair<VertexId, VertexId>>& demands);

bool is_minimal(const SolutionNetwork& network, const Pattern& pattern);

}  // namespace dsn
