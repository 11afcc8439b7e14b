#pragma once

// Instance generators: clique reductions onto diamond patterns, strongly
// connected terminal sets as cycle patterns, lifts of identified patterns and
// subdivided bidirected cubic graphs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsn/classify.hpp"
#include "dsn/graph.hpp"

namespace dsn {

/// Multicoloured clique instance; vertices are 0..n-1 split into parts.
struct MccInstance {
  std::vector<std::vector<std::size_t>> parts;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t k() const { return parts.size(); }
  std::size_t num_vertices() const;
  /// Throws unless the parts partition 0..n-1, k >= 2 and edges join distinct parts.
  void validate() const;
};

enum class ReductionKind { pure_diamond, flawed_diamond, cycle, closure_lift };

const char* to_string(ReductionKind k);

struct ReductionOutput {
  WeightedDigraph graph;
  Pattern pattern;
  std::optional<Cost> target_cost;
  ReductionKind kind = ReductionKind::cycle;
  Orientation orientation = Orientation::out;
};

inline Cost pure_diamond_target(std::size_t k) {
  return static_cast<Cost>(4 * k * k - 2 * k);
}

ReductionOutput mcc_to_pure_diamond(const MccInstance& mcc, Orientation orientation);
ReductionOutput mcc_to_flawed_diamond(const MccInstance& mcc, Orientation orientation);

/// Exhaustive search over one vertex per part (k <= 6).
bool has_multicoloured_clique(const MccInstance& mcc);

/// Parts of 1..max_part vertices; each cross pair is an edge with the given probability.
MccInstance random_mcc(std::size_t k, std::size_t max_part, double edge_probability, std::uint64_t seed);

/// Directed cycle through the terminals in the given order.
ReductionOutput cycle_pattern_instance(const WeightedDigraph& g, const std::vector<std::string>& terminals);

/// Lifts an instance for `coarse` to one for `fine`, where identification[i]
/// names the coarse terminal that fine terminal i is merged into. The first
/// member of each class becomes the coarse terminal itself; the others are new
/// vertices on a zero-cost cycle with it.
ReductionOutput closure_lift(const WeightedDigraph& g, const Pattern& coarse, const Pattern& fine,
                             const std::vector<std::string>& identification);

/// Random connected cubic graph on d vertices, bidirected, every arc
/// subdivided by a terminal; the pattern is a cycle on those terminals.
ReductionOutput expander_like_instance(std::size_t d, std::uint64_t seed);

}  // namespace dsn
