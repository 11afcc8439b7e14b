#include <doctest.h>

#include <functional>
#include <map>

#include "dsn/classify.hpp"
#include "support.hpp"

using namespace dsn;
using dsn::testing::naive_closure;

namespace {

using Edges = std::set<std::pair<std::size_t, std::size_t>>;

Edges edge_set(const Pattern& h) { return Edges(h.demands().begin(), h.demands().end()); }

// Smallest |F| leaving a caterpillar with spine length <= lambda, by trying
// every spine sequence and both orientations.
std::size_t naive_min_extra(const Pattern& h, std::size_t lambda) {
  const std::size_t n = h.num_terminals();
  Edges e = edge_set(h);
  std::size_t best = e.size();  // the empty caterpillar
  std::vector<std::size_t> spine;
  std::function<void()> grow = [&] {
    if (!spine.empty()) {
      bool arcs = true;
      for (std::size_t i = 0; i + 1 < spine.size(); ++i) arcs = arcs && e.count({spine[i], spine[i + 1]});
      if (arcs) {
        for (bool out : {true, false}) {
          std::vector<int> pos(n, -1);
          for (std::size_t i = 0; i < spine.size(); ++i) pos[spine[i]] = static_cast<int>(i);
          std::size_t extra = 0;
          std::map<std::size_t, std::size_t> roots;  // leaf -> star edges reaching it
          for (auto [s, t] : e) {
            if (pos[s] >= 0 && pos[t] == pos[s] + 1) continue;
            std::size_t root = out ? s : t, leaf = out ? t : s;
            if (pos[root] >= 0 && pos[leaf] < 0) {
              ++roots[leaf];
            } else {
              ++extra;
            }
          }
          for (auto [leaf, c] : roots) extra += c - 1;
          best = std::min(best, extra);
        }
      }
    }
    if (spine.size() == lambda) return;
    for (std::size_t v = 0; v < n; ++v) {
      if (std::find(spine.begin(), spine.end(), v) != spine.end()) continue;
      spine.push_back(v);
      grow();
      spine.pop_back();
    }
  };
  grow();
  return best;
}

// Certificate shape checked from its fields only.
void check_shape(const Pattern& h, const CaterpillarCertificate& c, std::size_t lambda, std::size_t delta,
                 bool star) {
  const Pattern& p = c.equivalent_pattern;
  CHECK(p.terminals() == h.terminals());
  if (star) {
    CHECK(naive_closure(p) == naive_closure(h));
  } else {
    CHECK(p == h);
  }
  CHECK(c.spine.size() <= lambda);
  CHECK(c.extra_edges.size() <= delta);
  REQUIRE(c.stars.size() == c.spine.size());
  Edges covered(c.extra_edges.begin(), c.extra_edges.end());
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < c.spine.size(); ++i) {
    if (i + 1 < c.spine.size()) covered.insert({c.spine[i], c.spine[i + 1]});
    CHECK(std::count(c.stars[i].begin(), c.stars[i].end(), c.spine[i]) == 1);
    for (std::size_t v : c.stars[i]) {
      CHECK(used.insert(v).second);
      if (v == c.spine[i]) continue;
      covered.insert(c.orientation == Orientation::out ? std::pair(c.spine[i], v) : std::pair(v, c.spine[i]));
    }
  }
  CHECK(covered == edge_set(p));
}

std::vector<std::vector<bool>> permute(const std::vector<std::vector<bool>>& r, const std::vector<std::size_t>& perm) {
  std::vector<std::vector<bool>> out(r.size(), std::vector<bool>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) out[perm[i]][perm[j]] = r[i][j];
  }
  return out;
}

bool naive_isomorphic(const std::vector<std::vector<bool>>& a, const std::vector<std::vector<bool>>& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (permute(a, perm) == b) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Collapses the partition by hand and compares closures with the claimed shape.
bool naive_obstruction_ok(const Pattern& h, const Obstruction& obs) {
  std::vector<std::size_t> cls(h.num_terminals(), SIZE_MAX);
  for (std::size_t c = 0; c < obs.partition.size(); ++c) {
    for (std::size_t v : obs.partition[c]) {
      if (cls[v] != SIZE_MAX) return false;
      cls[v] = c;
    }
  }
  if (std::count(cls.begin(), cls.end(), SIZE_MAX)) return false;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < obs.partition.size(); ++c) names.push_back("q" + std::to_string(c));
  std::vector<Pattern::Demand> d;
  for (auto [s, t] : h.demands()) {
    if (cls[s] != cls[t]) d.emplace_back(cls[s], cls[t]);
  }
  Pattern collapsed = Pattern::from_indices(names, d);
  Pattern expected;
  bool flawed = obs.kind == ObstructionKind::flawed_out_diamond || obs.kind == ObstructionKind::flawed_in_diamond;
  bool in = obs.kind == ObstructionKind::pure_in_diamond || obs.kind == ObstructionKind::flawed_in_diamond;
  expected = obs.kind == ObstructionKind::cycle ? directed_cycle_pattern(obs.alpha)
                                                : diamond_pattern(obs.alpha, in ? Orientation::in : Orientation::out, flawed);
  return naive_isomorphic(naive_closure(collapsed), naive_closure(expected));
}

Pattern two_stars_joined() {
  return Pattern({"c1", "a", "b", "c2", "x", "y"},
                 {{"c1", "a"}, {"c1", "b"}, {"c2", "x"}, {"c2", "y"}, {"c1", "c2"}});
}

Pattern bidirected_k3() {
  return Pattern({"a", "b", "c"}, {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}, {"a", "c"}, {"c", "a"}});
}

}  // namespace

TEST_CASE("is_caterpillar") {
  auto star = is_caterpillar(out_star_pattern(4), 1);
  REQUIRE(star);
  CHECK(star->lambda0() == 1);
  CHECK(star->equivalent_pattern.terminal(star->spine[0]) == "r");
  auto empty = is_caterpillar(Pattern(), 0);
  REQUIRE(empty);
  CHECK(empty->lambda0() == 0);
  for (std::size_t lambda = 0; lambda <= 3; ++lambda) CHECK_FALSE(is_caterpillar(directed_cycle_pattern(3), lambda));
  CHECK(is_caterpillar(two_stars_joined(), 2));
  CHECK_FALSE(is_caterpillar(two_stars_joined(), 1));
  CHECK_THROWS_AS(is_caterpillar(directed_cycle_pattern(13), 2), Error);
}

TEST_CASE("in_C_lambda_delta") {
  auto c3 = in_C_lambda_delta(directed_cycle_pattern(3), 0, 3);
  REQUIRE(c3);
  CHECK(c3->extra_edges.size() == 3);
  CHECK_FALSE(in_C_lambda_delta(directed_cycle_pattern(3), 1, 1));
  for (std::size_t q = 1; q <= 4; ++q) {
    auto c = in_C_lambda_delta(rst_pattern(4, q - 1), 1, q - 1);
    REQUIRE(c);
    check_shape(rst_pattern(4, q - 1), *c, 1, q - 1, false);
  }
}

TEST_CASE("minimum extra edges agree with exhaustive spine search") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 150; ++it) {
    std::size_t k = 2 + it % 5;
    Pattern h = dsn::testing::random_pattern(rng, dsn::testing::vertex_names(k, "t"), k, 1 + it % 8);
    for (std::size_t lambda = 0; lambda <= 3; ++lambda) {
      std::size_t need = naive_min_extra(h, lambda);
      auto c = in_C_lambda_delta(h, lambda, h.num_demands());
      REQUIRE(c);
      CHECK(c->extra_edges.size() == need);
      check_shape(h, *c, lambda, need, false);
      if (need > 0) CHECK_FALSE(in_C_lambda_delta(h, lambda, need - 1));
    }
  }
}

TEST_CASE("in_C_star") {
  auto k3 = in_C_star(bidirected_k3(), 0, 4);
  REQUIRE(k3);
  check_shape(bidirected_k3(), *k3, 0, 4, true);
  for (std::size_t lambda = 0; lambda <= 4; ++lambda) {
    for (std::size_t delta = 0; 2 * delta + lambda < 5; ++delta) {
      CHECK_FALSE(in_C_star(directed_cycle_pattern(5), lambda, delta));
    }
  }
  auto joined = in_C_star(two_stars_joined(), 2, 0);
  REQUIRE(joined);
  check_shape(two_stars_joined(), *joined, 2, 0, true);
  // a path is transitively a spine plus nothing, but its closure is not
  Pattern closed = transitive_closure(Pattern({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}}));
  CHECK_FALSE(in_C_lambda_delta(closed, 4, 0));
  CHECK(in_C_star(closed, 4, 0));
}

TEST_CASE("C is contained in C* and certificates validate") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 120; ++it) {
    std::size_t k = 2 + it % 5;
    Pattern h = dsn::testing::random_pattern(rng, dsn::testing::vertex_names(k, "t"), k, 1 + it % 7);
    std::size_t lambda = it % 3, delta = it % 4;
    auto c = in_C_lambda_delta(h, lambda, delta);
    auto s = in_C_star(h, lambda, delta);
    if (c) {
      CHECK(s);
      CHECK(validate_certificate(h, *c, lambda, delta));
    }
    if (s) {
      check_shape(h, *s, lambda, delta, true);
      CHECK(validate_certificate(h, *s, lambda, delta));
      // identical input, identical certificate
      auto again = in_C_star(h, lambda, delta);
      REQUIRE(again);
      CHECK(again->spine == s->spine);
      CHECK(again->extra_edges == s->extra_edges);
      CHECK(again->equivalent_pattern == s->equivalent_pattern);
    }
  }
}

TEST_CASE("certificate checker rejects tampering") {
  auto c = in_C_lambda_delta(rst_pattern(3, 1), 1, 1);
  REQUIRE(c);
  CHECK(validate_certificate(rst_pattern(3, 1), *c, 1, 1));
  CHECK_FALSE(validate_certificate(rst_pattern(3, 1), *c, 1, 0));
  auto broken = *c;
  broken.extra_edges.clear();
  CHECK_FALSE(validate_certificate(rst_pattern(3, 1), broken, 1, 1));
}

TEST_CASE("vertex cover number") {
  CHECK(vertex_cover_number(out_star_pattern(5)).tau == 1);
  CHECK(vertex_cover_number(in_star_pattern(2)).tau == 1);
  VertexCover d = vertex_cover_number(diamond_pattern(3, Orientation::out, false));
  CHECK(d.tau == 2);
  CHECK(d.cover == std::vector<std::size_t>{0, 1});
  CHECK(vertex_cover_number(bidirected_k3()).tau == 2);
}

TEST_CASE("vertex cover is minimum on random patterns") {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 80; ++it) {
    std::size_t k = 2 + it % 7;
    Pattern h = dsn::testing::random_pattern(rng, dsn::testing::vertex_names(k, "t"), k, 1 + it % 10);
    const std::size_t n = h.num_terminals();
    std::size_t best = n;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      bool ok = true;
      for (auto [s, t] : h.demands()) ok = ok && ((m >> s & 1) || (m >> t & 1));
      if (ok) best = std::min<std::size_t>(best, static_cast<std::size_t>(std::popcount(m)));
    }
    VertexCover vc = vertex_cover_number(h);
    CHECK(vc.tau == best);
    CHECK(vc.cover.size() == best);
  }
}

TEST_CASE("star decomposition") {
  CHECK(star_decomposition(out_star_pattern(4)).stars.size() == 1);
  StarDecomposition d = star_decomposition(diamond_pattern(3, Orientation::in, false));
  CHECK(d.stars.size() == 2);
  for (const auto& s : d.stars) CHECK(s.orientation == Orientation::in);

  std::mt19937_64 rng(31);
  std::vector<Pattern> corpus{bidirected_k3()};
  for (int it = 0; it < 60; ++it) {
    std::size_t k = 2 + it % 7;
    corpus.push_back(dsn::testing::random_pattern(rng, dsn::testing::vertex_names(k, "t"), k, 1 + it % 12));
  }
  for (const Pattern& h : corpus) {
    StarDecomposition sd = star_decomposition(h);
    CHECK(sd.stars.size() <= 2 * sd.tau);
    std::multiset<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& s : sd.stars) {
      CHECK(!s.leaves.empty());
      for (std::size_t l : s.leaves) seen.insert(s.orientation == Orientation::out ? std::pair(s.root, l) : std::pair(l, s.root));
    }
    CHECK(seen == std::multiset<std::pair<std::size_t, std::size_t>>(h.demands().begin(), h.demands().end()));
  }
}

TEST_CASE("identify terminals") {
  Pattern h = out_star_pattern(3);
  CHECK(identify_terminals(h, {{0}, {1}, {2}, {3}}) == h);
  Pattern m({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
  Pattern two = identify_terminals(m, {{1, 2}, {3, 0}});
  CHECK(two.num_terminals() == 2);
  CHECK(two.num_demands() == 2);
  CHECK(two.has_demand(0, 1));
  CHECK(two.has_demand(1, 0));
  CHECK(identify_terminals(h, {{0, 1, 2, 3}}).empty());
  CHECK_THROWS_AS(identify_terminals(h, {{0, 1}, {2}}), Error);
  CHECK_THROWS_AS(identify_terminals(h, {{0, 1}, {1, 2, 3}}), Error);
}

TEST_CASE("maximum matching") {
  CHECK(max_matching(Pattern({"a", "b"}, {{"a", "b"}})).size == 1);
  for (std::size_t a = 1; a <= 5; ++a) CHECK(max_matching(directed_cycle_pattern(2 * a)).size == a);
  CHECK(max_matching(out_star_pattern(6)).size == 1);

  std::mt19937_64 rng(37);
  for (int it = 0; it < 80; ++it) {
    std::size_t k = 2 + it % 8;
    Pattern h = dsn::testing::random_pattern(rng, dsn::testing::vertex_names(k, "t"), k, 1 + it % 10);
    const auto& d = h.demands();
    std::size_t best = 0;
    for (std::uint32_t m = 0; m < (1u << d.size()); ++m) {
      std::uint32_t used = 0;
      bool ok = true;
      for (std::size_t i = 0; i < d.size() && ok; ++i) {
        if (!(m >> i & 1)) continue;
        std::uint32_t ends = (1u << d[i].first) | (1u << d[i].second);
        ok = !(used & ends);
        used |= ends;
      }
      if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(m)));
    }
    Matching mm = max_matching(h);
    CHECK(mm.size == best);
    CHECK(mm.edges.size() == best);
  }
}

TEST_CASE("hamiltonian path in semicomplete digraphs") {
  CHECK(hamiltonian_path_semicomplete(Digraph{3, {{0, 1}, {1, 2}, {0, 2}}}) == std::vector<VertexId>{0, 1, 2});
  auto check_path = [](const Digraph& d) {
    auto p = hamiltonian_path_semicomplete(d);
    REQUIRE(p.size() == d.n);
    CHECK(std::set<VertexId>(p.begin(), p.end()).size() == d.n);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      CHECK(std::count(d.arcs.begin(), d.arcs.end(), std::pair(p[i], p[i + 1])) >= 1);
    }
  };
  check_path(Digraph{3, {{0, 1}, {1, 2}, {2, 0}}});
  std::mt19937_64 rng(41);
  for (int it = 0; it < 40; ++it) {
    Digraph d{6, {}};
    for (VertexId a = 0; a < 6; ++a) {
      for (VertexId b = a + 1; b < 6; ++b) {
        int r = static_cast<int>(rng() % 3);
        if (r != 1) d.arcs.emplace_back(a, b);
        if (r != 0) d.arcs.emplace_back(b, a);
      }
    }
    check_path(d);
  }
  CHECK_THROWS_AS(hamiltonian_path_semicomplete(Digraph{3, {{0, 1}}}), Error);
}

TEST_CASE("decompose_or_obstruct examples") {
  auto r = decompose_or_obstruct(out_star_pattern(3), 2);
  REQUIRE(std::holds_alternative<CaterpillarCertificate>(r));
  CHECK(validate_certificate(out_star_pattern(3), std::get<CaterpillarCertificate>(r), 4, 56));
  CHECK(decompose_lambda(2) == 4);
  CHECK(decompose_delta(2) == 56);

  for (std::size_t a = 2; a <= 4; ++a) {
    Pattern h = directed_cycle_pattern(2 * a);
    auto o = decompose_or_obstruct(h, a);
    REQUIRE(std::holds_alternative<Obstruction>(o));
    const auto& obs = std::get<Obstruction>(o);
    CHECK(obs.kind == ObstructionKind::cycle);
    CHECK(obs.alpha == a);
    CHECK(validate_obstruction(h, obs));
    CHECK(naive_obstruction_ok(h, obs));
  }
  for (Orientation o : {Orientation::out, Orientation::in}) {
    for (bool flawed : {false, true}) {
      Pattern h = diamond_pattern(3, o, flawed);
      auto res = decompose_or_obstruct(h, 3);
      REQUIRE(std::holds_alternative<Obstruction>(res));
      const auto& obs = std::get<Obstruction>(res);
      CHECK(obs.alpha == 3);
      CHECK(obs.kind != ObstructionKind::cycle);
      CHECK(validate_obstruction(h, obs));
      CHECK(naive_obstruction_ok(h, obs));
    }
  }
  CHECK_THROWS_AS(decompose_or_obstruct(out_star_pattern(2), 0), Error);
}

TEST_CASE("obstruction checker rejects wrong claims") {
  Pattern h = directed_cycle_pattern(4);
  auto o = std::get<Obstruction>(decompose_or_obstruct(h, 2));
  o.alpha = 3;
  CHECK_FALSE(validate_obstruction(h, o));
}

TEST_CASE("decompose_or_obstruct never gives both and stays consistent") {
  std::mt19937_64 rng(43);
  for (int it = 0; it < 100; ++it) {
    std::size_t k = 3 + it % 6;
    Pattern h = dsn::testing::random_pattern(rng, dsn::testing::vertex_names(k, "t"), k, 2 + it % 12);
    std::size_t alpha = 1 + it % 3;
    auto r = decompose_or_obstruct(h, alpha);
    if (auto* c = std::get_if<CaterpillarCertificate>(&r)) {
      CHECK(validate_certificate(h, *c, decompose_lambda(alpha), decompose_delta(alpha)));
      check_shape(h, *c, decompose_lambda(alpha), decompose_delta(alpha), true);
    } else {
      const auto& obs = std::get<Obstruction>(r);
      CHECK(obs.alpha == alpha);
      CHECK(validate_obstruction(h, obs));
      if (h.num_terminals() <= 8) CHECK(naive_obstruction_ok(h, obs));
    }
  }
}

TEST_CASE("certified patterns have no long cycle obstruction") {
  std::mt19937_64 rng(47);
  int certified = 0;
  for (int it = 0; it < 100; ++it) {
    std::size_t k = 3 + it % 5;
    Pattern h = dsn::testing::random_pattern(rng, dsn::testing::vertex_names(k, "t"), k, 2 + it % 8);
    std::size_t lambda = 1 + it % 2, delta = it % 3;
    if (!in_C_star(h, lambda, delta)) continue;
    ++certified;
    for (std::size_t alpha = 2 * delta + lambda + 1; alpha <= 2 * delta + lambda + 2; ++alpha) {
      auto r = decompose_or_obstruct(h, alpha);
      if (auto* obs = std::get_if<Obstruction>(&r)) CHECK(obs->kind != ObstructionKind::cycle);
    }
  }
  CHECK(certified > 10);
}
