#include <doctest.h>

#include <map>

#include "dsn/classify.hpp"
#include "dsn/graph.hpp"
#include "support.hpp"

using namespace dsn;
using dsn::testing::vertex_names;

namespace {

WeightedDigraph path_sat() { return WeightedDigraph({"s", "a", "t"}, {{"s", "a", 1}, {"a", "t", 1}}); }

std::vector<std::string> names_of(const WeightedDigraph& g, const std::vector<VertexId>& vs) {
  std::vector<std::string> out;
  for (VertexId v : vs) out.push_back(g.name(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("edges are ordered by endpoint ids") {
  WeightedDigraph g({"c", "a", "b"}, {{"b", "a", 1}, {"c", "b", 2}, {"c", "a", 3}, {"a", "b", 4}});
  REQUIRE(g.num_edges() == 4);
  for (EdgeId e = 1; e < g.num_edges(); ++e) {
    auto prev = std::pair(g.edge(e - 1).tail, g.edge(e - 1).head);
    CHECK(prev < std::pair(g.edge(e).tail, g.edge(e).head));
  }
  CHECK(g.edge(*g.find_edge(g.id("c"), g.id("a"))).cost == 3);
}

TEST_CASE("graph construction rejects bad input") {
  CHECK_THROWS_AS(WeightedDigraph({"a", "a"}, {}), Error);
  CHECK_THROWS_AS(WeightedDigraph({"a"}, {{"a", "a", 1}}), Error);
  CHECK_THROWS_AS(WeightedDigraph({"a", "b"}, {{"a", "c", 1}}), Error);
  CHECK_THROWS_AS(WeightedDigraph({"a", "b"}, {{"a", "b", -1}}), Error);
  CHECK_THROWS_AS(WeightedDigraph({"a", "b"}, {{"a", "b", kMaxEdgeCost + 1}}), Error);
  CHECK_NOTHROW(WeightedDigraph({"a", "b"}, {{"a", "b", kMaxEdgeCost}}));
}

TEST_CASE("parallel edges keep the cheapest copy") {
  std::vector<std::string> warnings;
  WeightedDigraph g({"a", "b"}, {{"a", "b", 5}, {"a", "b", 2}, {"a", "b", 7}}, &warnings);
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edge(0).cost == 2);
  CHECK(!warnings.empty());
}

TEST_CASE("pattern strips isolated terminals") {
  std::vector<std::string> warnings;
  Pattern h({"a", "b", "c"}, {{"a", "b"}}, &warnings);
  CHECK(h.terminals() == std::vector<std::string>{"a", "b"});
  CHECK(warnings.size() == 1);
  CHECK_THROWS_AS(Pattern({"a"}, {{"a", "a"}}), Error);
  CHECK_THROWS_AS(Pattern({"a", "b"}, {{"a", "x"}}), Error);
}

TEST_CASE("reachable") {
  WeightedDigraph p = path_sat();
  CHECK(names_of(p, reachable(p, p.id("s"))) == std::vector<std::string>{"a", "s", "t"});
  WeightedDigraph iso({"v", "w"}, {{"w", "v", 1}});
  CHECK(names_of(iso, reachable(iso, iso.id("v"))) == std::vector<std::string>{"v"});
  WeightedDigraph cyc({"a", "b", "c"}, {{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}});
  for (VertexId v = 0; v < 3; ++v) CHECK(reachable(cyc, v).size() == 3);
  CHECK_THROWS_AS(reachable(cyc, 7), Error);
}

TEST_CASE("condensation") {
  SUBCASE("a DAG is its own condensation") {
    Digraph d{4, {{0, 1}, {1, 2}, {0, 3}}};
    Condensation c = scc_condensation(d);
    CHECK(c.components.size() == 4);
    CHECK(c.dag.arcs.size() == 3);
  }
  SUBCASE("a 3-cycle collapses") {
    Condensation c = scc_condensation(Digraph{3, {{0, 1}, {1, 2}, {2, 0}}});
    CHECK(c.components.size() == 1);
    CHECK(c.dag.arcs.empty());
  }
  SUBCASE("two 2-cycles joined twice keep multiplicity") {
    Condensation c = scc_condensation(Digraph{4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {0, 2}, {1, 3}}});
    REQUIRE(c.components.size() == 2);
    REQUIRE(c.dag.arcs.size() == 2);
    CHECK(c.dag.arcs[0] == c.dag.arcs[1]);
    CHECK(c.dag.arcs[0].first != c.dag.arcs[0].second);
  }
}

TEST_CASE("condensation is acyclic and consistent on random graphs") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 100; ++it) {
    WeightedDigraph g = dsn::testing::random_graph(rng, 3 + it % 8, 4 + it % 20, 5);
    Condensation c = scc_condensation(g);
    CHECK(is_acyclic(c.dag));
    auto arcs = dsn::testing::arcs_of(g);
    std::vector<bool> all(arcs.size(), true);
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      auto ru = dsn::testing::bfs(g.num_vertices(), arcs, all, u);
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        bool same = ru[v] && dsn::testing::bfs(g.num_vertices(), arcs, all, v)[u];
        CHECK(same == (c.component_of[u] == c.component_of[v]));
      }
    }
    // topological numbering of components
    for (const auto& [a, b] : c.dag.arcs) CHECK(a < b);
  }
}

TEST_CASE("transitive closure") {
  Pattern star({"r", "a", "b"}, {{"r", "a"}, {"r", "b"}});
  CHECK(transitive_closure(star) == star);
  Pattern path({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  CHECK(transitive_closure(path).has_demand(0, 2));
  CHECK(transitive_closure(path).num_demands() == 3);
  CHECK(transitive_closure(directed_cycle_pattern(3)).num_demands() == 6);
}

TEST_CASE("closure matches Floyd-Warshall and reachability") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 60; ++it) {
    std::size_t k = 2 + it % 7;
    Pattern h = dsn::testing::random_pattern(rng, vertex_names(k), k, 1 + it % 9);
    Pattern c = transitive_closure(h);
    auto r = dsn::testing::naive_closure(h);
    std::size_t count = 0;
    for (std::size_t s = 0; s < h.num_terminals(); ++s) {
      for (std::size_t t = 0; t < h.num_terminals(); ++t) {
        CHECK(c.has_demand(s, t) == r[s][t]);
        count += r[s][t];
      }
    }
    CHECK(c.num_demands() == count);
  }
}

TEST_CASE("transitive equivalence") {
  Pattern k3({"a", "b", "c"}, {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}, {"a", "c"}, {"c", "a"}});
  CHECK(transitively_equivalent(directed_cycle_pattern(3), k3));
  CHECK_FALSE(transitively_equivalent(out_star_pattern(3), in_star_pattern(3)));
  CHECK(transitively_equivalent(k3, rst_pattern(2, 2)));
  CHECK_THROWS_AS(transitively_equivalent(directed_cycle_pattern(13), directed_cycle_pattern(13)), Error);
}

TEST_CASE("feasibility") {
  WeightedDigraph g = path_sat();
  Pattern h({"s", "t"}, {{"s", "t"}});
  CHECK(feasible(SolutionNetwork(g, {0, 1}), h));
  CHECK_FALSE(feasible(SolutionNetwork(g, {}), h));
  // s->a is a cut edge
  CHECK_FALSE(feasible(SolutionNetwork(g, {1}), h));
  Pattern foreign({"s", "x"}, {{"s", "x"}});
  CHECK_THROWS_AS(feasible(SolutionNetwork(g, {0, 1}), foreign), Error);
}

TEST_CASE("minimalize removes expensive edges first") {
  WeightedDigraph g({"s", "a", "t"}, {{"s", "t", 5}, {"s", "a", 1}, {"a", "t", 1}});
  Pattern h({"s", "t"}, {{"s", "t"}});
  SolutionNetwork all(g, {0, 1, 2});
  SolutionNetwork m = minimalize(all, h);
  CHECK(m.cost() == 2);
  CHECK(m.num_edges() == 2);
  CHECK(minimalize(m, h).edges() == m.edges());
  CHECK_THROWS_AS(minimalize(SolutionNetwork(g, {}), h), Error);
}

TEST_CASE("minimalize output is feasible and minimal") {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int it = 0; it < 150; ++it) {
    std::size_t n = 3 + it % 7;
    WeightedDigraph g = dsn::testing::random_graph(rng, n, 2 * n + it % 9, 9);
    Pattern h = dsn::testing::random_pattern(rng, g.names(), 2 + it % (n - 1), 1 + it % 4);
    std::vector<EdgeId> every(g.num_edges());
    std::iota(every.begin(), every.end(), EdgeId{0});
    SolutionNetwork all(g, every);
    if (!dsn::testing::naive_feasible(g, std::vector<bool>(g.num_edges(), true), h)) continue;
    SolutionNetwork m = minimalize(all, h);
    CHECK(dsn::testing::naive_feasible(g, dsn::testing::edge_mask(g, m.edges()), h));
    for (EdgeId e : m.edges()) {
      auto mask = dsn::testing::edge_mask(g, m.edges());
      mask[e] = false;
      CHECK_FALSE(dsn::testing::naive_feasible(g, mask, h));
    }
    CHECK(is_minimal(m, h));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("minimal solutions of star patterns are arborescences") {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int it = 0; checked < 50 && it < 400; ++it) {
    std::size_t n = 5 + it % 5;
    WeightedDigraph g = dsn::testing::random_graph(rng, n, 3 * n, 9);
    bool in = it % 2 == 1;
    std::vector<std::string> pool = g.names();
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::pair<std::string, std::string>> d;
    for (std::size_t i = 1; i < 4; ++i) d.push_back(in ? std::pair(pool[i], pool[0]) : std::pair(pool[0], pool[i]));
    Pattern h(std::vector<std::string>(pool.begin(), pool.begin() + 4), d);
    std::vector<EdgeId> every(g.num_edges());
    std::iota(every.begin(), every.end(), EdgeId{0});
    SolutionNetwork all(g, every);
    if (!feasible(all, h)) continue;
    ++checked;
    SolutionNetwork m = minimalize(all, h);
    VertexId root = g.id(pool[0]);
    std::map<VertexId, int> indeg, outdeg;
    for (EdgeId e : m.edges()) {
      ++outdeg[g.edge(e).tail];
      ++indeg[g.edge(e).head];
    }
    for (VertexId v : m.vertices()) {
      int toward = in ? outdeg[v] : indeg[v];
      int away = in ? indeg[v] : outdeg[v];
      CHECK(toward == (v == root ? 0 : 1));
      // leaves of the arborescence are terminals
      if (away == 0 && v != root) CHECK(h.find(g.name(v)).has_value());
    }
  }
  CHECK(checked == 50);
}

TEST_CASE("layout positions") {
  Layout l{{2, 0, 1}};
  CHECK(l.positions(3) == std::vector<std::size_t>{1, 2, 0});
  CHECK_THROWS_AS((Layout{{0, 0, 1}}.positions(3)), Error);
  CHECK_THROWS_AS((Layout{{0, 1}}.positions(3)), Error);
}

TEST_CASE("topological order") {
  CHECK(topological_order(Digraph{3, {{2, 1}, {1, 0}}}) == std::vector<VertexId>{2, 1, 0});
  CHECK_THROWS_AS(topological_order(Digraph{2, {{0, 1}, {1, 0}}}), Error);
}
