#pragma once

// Dynamic program over separator bags that finds an optimum among all
// solutions of treewidth at most omega.

#include <cstddef>
#include <optional>
#include <vector>

#include "dsn/classify.hpp"
#include "dsn/graph.hpp"
#include "dsn/oracle.hpp"

namespace dsn {

/// Table index (i, Q, U, I, B, A) in host vertex / edge ids.
struct DpEntryKey {
  std::size_t i = 0;
  std::vector<VertexId> q;
  std::vector<VertexId> u;
  std::vector<EdgeId> induced;
  std::vector<std::pair<VertexId, VertexId>> b;
  std::vector<std::vector<VertexId>> a;  // one set per star, star order of the decomposition
};

/// Properties (i)-(iv) of a table entry for network n.
bool check_entry(const SolutionNetwork& n, const Pattern& h, const DpEntryKey& key, const StarDecomposition& stars);

/// Entry key that n satisfies for separator u: B holds every realised pair of
/// its domain, A_j the separator vertices that reach unresolved leaves of star j.
/// Empty when some leaf can no longer be reached through u.
std::optional<DpEntryKey> derive_entry_key(const SolutionNetwork& n, const Pattern& h, const std::vector<VertexId>& u,
                                           const StarDecomposition& stars);

struct DpOptions {
  std::size_t max_vertices = 64;
  std::size_t max_edges = 256;
  std::size_t max_bags = 1u << 20;           // separators of size omega+1
  std::size_t max_records = 1u << 22;        // table entries held at once
  std::size_t max_steps = std::size_t{1} << 30;  // base records plus combinations
};

struct DpStats {
  std::size_t base_records = 0;
  std::size_t stored_records = 0;
  std::size_t combinations = 0;
  std::size_t caps_respected = 0;  // records whose induced graph obeys |I| <= c*omega
};

struct DpResult {
  SolutionNetwork network;
  Cost cost = 0;
  std::size_t omega = 0;
};

/// Minimum-cost solution among those of treewidth at most omega; empty when
/// no such solution exists.
std::optional<DpResult> solve_dp(const WeightedDigraph& g, const Pattern& h, std::size_t omega,
                                 const DpOptions& options = {}, DpStats* stats = nullptr);

/// The treewidth budget 7(1+lambda)(lambda+delta) capped at n-1 (at least 1).
std::size_t default_omega(std::size_t lambda, std::size_t delta, std::size_t n);

struct PathFamily {
  std::vector<std::vector<VertexId>> paths;  // one vertex sequence per demand, demand order
  bool covers_network = false;
};

/// Lexicographically least shortest path in m for every demand.
PathFamily fixed_path_family(const SolutionNetwork& m, const Pattern& h);

/// Pairs (u, v) of u joined by a subpath of some family path lying in n with
/// no internal vertex in u.
std::vector<std::pair<VertexId, VertexId>> u_projection(const SolutionNetwork& n, const std::vector<VertexId>& u,
                                                        const std::vector<std::vector<VertexId>>& paths);

}  // namespace dsn
