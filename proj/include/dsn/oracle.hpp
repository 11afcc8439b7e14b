#pragma once

#include <cstddef>
#include <optional>

#include "dsn/graph.hpp"

namespace dsn {

inline constexpr std::size_t kDefaultOracleEdgeGuard = 25;

struct SolveResult {
  SolutionNetwork network;
  Cost cost = 0;
};

struct OracleOptions {
  std::size_t max_edges = kDefaultOracleEdgeGuard;
};

struct OracleStats {
  std::size_t nodes = 0;
};

/// Exact optimum by branch and bound over edge decisions. Among minimal
/// optimal networks the one with the lexicographically smallest sorted edge
/// list is returned.
std::optional<SolveResult> brute_force_solve(const WeightedDigraph& graph, const Pattern& pattern,
                                             const OracleOptions& options = {}, OracleStats* stats = nullptr);

}  // namespace dsn
