#pragma once

// Caterpillar membership, certificates and cycle/diamond obstructions for
// pattern graphs.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsn/graph.hpp"

namespace dsn {

enum class Orientation { out, in };

const char* to_string(Orientation o);

/// Witness that a pattern is (transitively equivalent to) a caterpillar with
/// at most a bounded number of extra edges. Vertex indices refer to the
/// terminal list of `equivalent_pattern`, which always has the same terminal
/// list as the certified pattern.
struct CaterpillarCertificate {
  Orientation orientation = Orientation::out;
  std::vector<std::size_t> spine;               // v_1 .. v_lambda0
  std::vector<std::vector<std::size_t>> stars;  // W_i, sorted, contains spine[i]
  std::vector<Pattern::Demand> extra_edges;     // F, sorted
  Pattern equivalent_pattern;

  std::size_t lambda0() const { return spine.size(); }
  /// Spine arcs and star arcs, sorted.
  std::vector<Pattern::Demand> caterpillar_edges() const;
};

struct StarDecomposition {
  struct Star {
    std::size_t root;
    std::vector<std::size_t> leaves;
    Orientation orientation;
  };
  std::vector<Star> stars;
  std::vector<std::size_t> vertex_cover;  // X
  std::size_t tau = 0;
};

enum class ObstructionKind { cycle, pure_out_diamond, pure_in_diamond, flawed_out_diamond, flawed_in_diamond };

const char* to_string(ObstructionKind k);

/// The star pair and vertex partition used to carve a diamond out of a pattern.
struct DiamondWitness {
  std::size_t r1 = 0, r2 = 0;
  std::vector<std::size_t> s, t;  // aligned leaf lists of the two stars
  std::vector<std::size_t> w1, w2, w, u;
  std::optional<std::size_t> x;  // apex representative when flawed
};

struct Obstruction {
  ObstructionKind kind = ObstructionKind::cycle;
  std::size_t alpha = 0;
  std::vector<std::vector<std::size_t>> partition;  // classes over V(H)
  std::vector<Pattern::Demand> matching;            // cycles from a matching
  std::optional<DiamondWitness> diamond;
};

using Classification = std::variant<CaterpillarCertificate, Obstruction>;

// --- pattern families -------------------------------------------------------

Pattern directed_cycle_pattern(std::size_t length);
Pattern out_star_pattern(std::size_t leaves);
Pattern in_star_pattern(std::size_t leaves);
/// Out-star with `leaves` leaves whose first `bidirected` edges go both ways.
Pattern rst_pattern(std::size_t leaves, std::size_t bidirected);
Pattern diamond_pattern(std::size_t alpha, Orientation orientation, bool flawed);

// --- operations -------------------------------------------------------------

/// Caterpillar with no extra edges and at most `lambda` spine vertices.
std::optional<CaterpillarCertificate> is_caterpillar(const Pattern& h, std::size_t lambda,
                                                     std::size_t guard = kDefaultPatternGuard);

/// Member of C_{lambda,delta}; the certificate has minimum |F|.
std::optional<CaterpillarCertificate> in_C_lambda_delta(const Pattern& h, std::size_t lambda, std::size_t delta,
                                                        std::size_t guard = kDefaultPatternGuard);

/// Member of C*_{lambda,delta}: some pattern with the same transitive closure
/// lies in C_{lambda,delta}.
std::optional<CaterpillarCertificate> in_C_star(const Pattern& h, std::size_t lambda, std::size_t delta,
                                                std::size_t guard = kDefaultPatternGuard);

struct VertexCover {
  std::size_t tau = 0;
  std::vector<std::size_t> cover;
};

/// Minimum vertex cover, lexicographically smallest among minimum ones.
VertexCover vertex_cover_number(const Pattern& h);

StarDecomposition star_decomposition(const Pattern& h);

/// Collapses each class to its first member; loops, duplicates and isolated
/// vertices disappear.
Pattern identify_terminals(const Pattern& h, const std::vector<std::vector<std::size_t>>& partition);

struct Matching {
  std::size_t size = 0;
  std::vector<Pattern::Demand> edges;
};

/// Maximum matching of the underlying undirected graph (exact).
Matching max_matching(const Pattern& h);

/// Hamiltonian path of a semicomplete digraph by insertion; throws otherwise.
std::vector<VertexId> hamiltonian_path_semicomplete(const Digraph& d);

/// Either a certificate for C*_{2a, 4a^3+6a^2} or an obstruction of size a.
Classification decompose_or_obstruct(const Pattern& h, std::size_t alpha);

inline std::size_t decompose_lambda(std::size_t alpha) { return 2 * alpha; }
inline std::size_t decompose_delta(std::size_t alpha) { return 4 * alpha * alpha * alpha + 6 * alpha * alpha; }

// --- independent checkers ---------------------------------------------------

bool validate_certificate(const Pattern& h, const CaterpillarCertificate& cert, std::size_t lambda,
                          std::size_t delta, std::string* why = nullptr);

bool validate_obstruction(const Pattern& h, const Obstruction& obs, std::string* why = nullptr);

}  // namespace dsn
