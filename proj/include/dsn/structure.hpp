#pragma once

// Exact cutwidth and treewidth for small graphs, layouts built from the
// condensation, and the structural decompositions of minimal solutions.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsn/classify.hpp"
#include "dsn/graph.hpp"

namespace dsn {

inline constexpr std::size_t kCutwidthGuard = 16;
inline constexpr std::size_t kTreewidthGuard = 14;

struct CutwidthResult {
  std::size_t value = 0;
  Layout layout;
  bool exact = false;
};

/// Largest number of arcs crossing a prefix cut; arcs are counted with
/// multiplicity and regardless of direction.
std::size_t cutwidth_of_layout(const Digraph& g, const Layout& layout);

CutwidthResult cutwidth_exact(const Digraph& g, std::size_t guard = kCutwidthGuard);

/// Topological order of the condensation with every component laid out by an
/// optimal layout of its own.
Layout composed_layout(const Digraph& g);

/// Cutwidth of the topological layout of the condensation multigraph.
std::size_t condensation_cutwidth(const Digraph& g);

struct TreeDecomposition {
  std::vector<std::vector<VertexId>> bags;                 // sorted
  std::vector<std::pair<std::size_t, std::size_t>> tree;  // edges between bag indices

  std::size_t width() const;
};

struct TreewidthResult {
  std::size_t width = 0;
  TreeDecomposition decomposition;
};

/// Treewidth of the underlying undirected graph.
TreewidthResult treewidth_exact(const Digraph& g, std::size_t guard = kTreewidthGuard);

bool validate_tree_decomposition(const Digraph& g, const TreeDecomposition& d, std::string* why = nullptr);

/// Every bag of size width+1 and adjacent bags sharing exactly width vertices.
/// Needs at least width+1 vertices.
TreeDecomposition make_smooth(const TreeDecomposition& d, std::size_t num_vertices);

bool is_smooth(const TreeDecomposition& d);

/// cutwidth_exact(m) <= 7 |E(h)|.
bool verify_cutwidth_bound(const SolutionNetwork& m, const Pattern& h);

// --- strongly connected components of minimal solutions -----------------------

struct SccPattern {
  SolutionNetwork component;                            // edges of one SCC
  std::vector<std::pair<VertexId, VertexId>> demands;   // first/last vertex of each demand path in it
};

/// One entry per SCC with at least two vertices.
std::vector<SccPattern> scc_patterns(const SolutionNetwork& m, const Pattern& h);

struct SccReversal {
  VertexId root = 0;
  SolutionNetwork a_in, a_out;
  bool covers_component = false;  // a_in and a_out together use every edge
  bool acyclic = false;           // a_out plus the reversed a_in-only edges
  Layout layout;                  // topological order of that graph when acyclic (local ids)
  LocalGraph local;               // the component relabelled
};

/// Reverses the in-arborescence edges that are not in the out-arborescence;
/// the root is the terminal with the smallest name.
SccReversal scc_reversal(const SccPattern& scc);

// --- almost-caterpillar patterns ---------------------------------------------

/// Edges of m whose removal disconnects the spine vertex i from a leaf of its
/// star, per leaf (terminal indices).
std::map<std::size_t, std::vector<EdgeId>> necessary_edges(const SolutionNetwork& m, const Pattern& h,
                                                           const CaterpillarCertificate& cert, std::size_t i);

struct WitnessCheck {
  std::vector<EdgeId> edges;           // i-necessary edges off the path with head on it
  std::optional<std::size_t> leaf;     // a leaf for which all of them are necessary
  bool holds() const { return edges.empty() || leaf.has_value(); }
};

WitnessCheck witness_leaf(const SolutionNetwork& m, const Pattern& h, const CaterpillarCertificate& cert,
                          std::size_t i, const std::vector<EdgeId>& path);

struct Arborescence {
  VertexId root = 0;
  std::vector<EdgeId> edges;
};

struct CoreDecomposition {
  SolutionNetwork core;
  Pattern core_pattern;
  std::vector<Arborescence> forest;
  Orientation orientation = Orientation::out;
};

/// Needs the certificate's caterpillar plus extra edges to be exactly the
/// demands of h, and m minimal for h.
CoreDecomposition core_decomposition(const SolutionNetwork& m, const Pattern& h, const CaterpillarCertificate& cert);

bool validate_core_decomposition(const SolutionNetwork& m, const CoreDecomposition& cd, std::size_t lambda,
                                 std::size_t delta, std::string* why = nullptr);

/// Vertices with two or more entering edges in m have all of them in the
/// core (leaving edges for in-caterpillars).
bool same_head_property(const SolutionNetwork& m, const CoreDecomposition& cd);

}  // namespace dsn
