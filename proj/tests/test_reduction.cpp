#include <doctest.h>

#include <map>

#include "dsn/oracle.hpp"
#include "dsn/reduction.hpp"
#include "support.hpp"

using namespace dsn;

namespace {

constexpr OracleOptions kWide{1000};

MccInstance singletons(std::size_t k) {
  MccInstance mcc;
  for (std::size_t i = 0; i < k; ++i) mcc.parts.push_back({i});
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) mcc.edges.emplace_back(i, j);
  }
  return mcc;
}

std::optional<Cost> optimum(const ReductionOutput& r) {
  auto s = brute_force_solve(r.graph, r.pattern, kWide);
  if (!s) return std::nullopt;
  return s->cost;
}

// Two roots sharing one leaf set, every leaf demanded from both, plus the apex
// x pointing at both roots when flawed (directions flipped for in-diamonds).
void check_diamond_shape(const Pattern& h, std::size_t leaves, Orientation o, bool flawed) {
  std::map<std::string, std::set<std::string>> from;
  for (auto [s, t] : h.demands()) {
    if (o == Orientation::in) std::swap(s, t);
    from[h.terminal(s)].insert(h.terminal(t));
  }
  REQUIRE(from.count("r1"));
  REQUIRE(from.count("r2"));
  CHECK(from["r1"] == from["r2"]);
  CHECK(from["r1"].size() == leaves);
  CHECK(h.num_terminals() == leaves + 2 + (flawed ? 1 : 0));
  if (flawed) CHECK(from["x"] == std::set<std::string>{"r1", "r2"});
  CHECK(from.size() == (flawed ? 3u : 2u));
}

bool simple(const WeightedDigraph& g) {
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const Edge& e : g.edges()) {
    if (e.tail == e.head || !seen.emplace(e.tail, e.head).second) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("clique instance with singleton parts") {
  for (Orientation o : {Orientation::out, Orientation::in}) {
    ReductionOutput r = mcc_to_pure_diamond(singletons(3), o);
    CHECK(r.graph.num_vertices() == 26);
    CHECK(r.graph.num_edges() == 30);
    CHECK(r.target_cost == 30);
    CHECK(simple(r.graph));
    check_diamond_shape(r.pattern, 6, o, false);
    CHECK(isomorphic(r.pattern.adjacency(), diamond_pattern(6, o, false).adjacency()));
    CHECK(optimum(r) == 30);
  }
  CHECK(pure_diamond_target(3) == 30);
  CHECK(pure_diamond_target(4) == 56);
}

TEST_CASE("a missing part pair makes the instance infeasible") {
  MccInstance mcc = singletons(3);
  mcc.edges = {{0, 2}, {1, 2}};
  CHECK_FALSE(optimum(mcc_to_pure_diamond(mcc, Orientation::out)));
  CHECK_FALSE(optimum(mcc_to_pure_diamond(mcc, Orientation::in)));
}

TEST_CASE("two-vertex parts with a single triangle") {
  MccInstance mcc{{{0, 1}, {2, 3}, {4, 5}}, {{0, 2}, {0, 4}, {2, 4}, {1, 3}, {1, 5}, {3, 4}}};
  REQUIRE(has_multicoloured_clique(mcc));
  CHECK(optimum(mcc_to_pure_diamond(mcc, Orientation::out)) == 30);
  // breaking any triangle edge leaves no clique and pushes the cost past the target
  for (std::size_t drop : {0u, 1u, 2u}) {
    MccInstance broken = mcc;
    broken.edges.erase(broken.edges.begin() + drop);
    CHECK_FALSE(has_multicoloured_clique(broken));
    auto c = optimum(mcc_to_pure_diamond(broken, Orientation::out));
    CHECK((!c || *c > 30));
  }
}

TEST_CASE("flawed variant") {
  for (Orientation o : {Orientation::out, Orientation::in}) {
    ReductionOutput r = mcc_to_flawed_diamond(singletons(3), o);
    CHECK(r.target_cost == 32);
    check_diamond_shape(r.pattern, 6, o, true);
    auto s = brute_force_solve(r.graph, r.pattern, kWide);
    REQUIRE(s);
    CHECK(s->cost == 32);
    VertexId x = r.graph.id("x");
    for (const char* root : {"r1", "r2"}) {
      VertexId v = r.graph.id(root);
      auto e = o == Orientation::out ? r.graph.find_edge(x, v) : r.graph.find_edge(v, x);
      REQUIRE(e);
      CHECK(s->network.contains(*e));
    }
  }
}

TEST_CASE("clique presence decides the target on random instances") {
  int yes = 0, no = 0;
  for (std::uint64_t seed = 1; seed <= 16; ++seed) {
    MccInstance mcc = random_mcc(3, 2, 0.5, seed);
    bool clique = has_multicoloured_clique(mcc);
    auto c = optimum(mcc_to_pure_diamond(mcc, seed % 2 ? Orientation::out : Orientation::in));
    if (clique) {
      ++yes;
      CHECK(c == 30);
    } else {
      ++no;
      CHECK((!c || *c > 30));
    }
  }
  CHECK(yes > 0);
  CHECK(no > 0);
}

TEST_CASE("random clique instances are deterministic and well formed") {
  MccInstance a = random_mcc(4, 3, 0.4, 9), b = random_mcc(4, 3, 0.4, 9);
  CHECK(a.parts == b.parts);
  CHECK(a.edges == b.edges);
  CHECK_NOTHROW(a.validate());
  CHECK(simple(mcc_to_pure_diamond(a, Orientation::out).graph));
  CHECK(simple(mcc_to_flawed_diamond(a, Orientation::in).graph));
  CHECK_THROWS_AS(random_mcc(1, 2, 0.5, 1), Error);
  MccInstance bad{{{0, 1}, {1, 2}}, {}};
  CHECK_THROWS_AS(bad.validate(), Error);
  MccInstance inside{{{0, 1}, {2}}, {{0, 1}}};
  CHECK_THROWS_AS(inside.validate(), Error);
}

TEST_CASE("cycle patterns match a strongly connected subgraph search") {
  std::mt19937_64 rng(73);
  int compared = 0;
  for (int it = 0; it < 50; ++it) {
    std::size_t n = 4 + it % 3;
    WeightedDigraph g = dsn::testing::random_graph(rng, n, 2 * n + it % 4, 9);
    auto names = g.names();
    std::shuffle(names.begin(), names.end(), rng);
    names.resize(2 + it % (n - 1));
    ReductionOutput r = cycle_pattern_instance(g, names);
    CHECK(r.pattern.num_demands() == names.size());
    auto want = dsn::testing::exhaustive_scss(g, names);
    auto got = optimum(r);
    REQUIRE(want.has_value() == got.has_value());
    if (!got) continue;
    ++compared;
    CHECK(*got == *want);
    std::shuffle(names.begin(), names.end(), rng);
    CHECK(optimum(cycle_pattern_instance(g, names)) == got);
  }
  CHECK(compared > 10);
  WeightedDigraph g({"a", "b"}, {{"a", "b", 1}});
  CHECK_THROWS_AS(cycle_pattern_instance(g, {"a"}), Error);
  CHECK_THROWS_AS(cycle_pattern_instance(g, {"a", "a"}), Error);
  CHECK_THROWS_AS(cycle_pattern_instance(g, {"a", "c"}), Error);
}

TEST_CASE("closure lift examples") {
  WeightedDigraph g({"s", "t"}, {{"s", "t", 4}});
  Pattern coarse({"s", "t"}, {{"s", "t"}});
  Pattern fine({"s", "s2", "t"}, {{"s", "t"}, {"s2", "t"}});
  ReductionOutput r = closure_lift(g, coarse, fine, {"s", "s", "t"});
  CHECK(r.graph.num_vertices() == 3);
  CHECK(r.graph.num_edges() == 3);
  auto cyc = r.graph.find_edge(r.graph.id("s"), r.graph.id("s2"));
  REQUIRE(cyc);
  CHECK(r.graph.edge(*cyc).cost == 0);
  CHECK(optimum(r) == 4);

  // fine demands that merge into something the coarse pattern does not imply
  Pattern wrong({"s", "t", "t2"}, {{"t", "s"}, {"s", "t2"}});
  CHECK_THROWS_AS(closure_lift(g, coarse, wrong, {"s", "t", "t"}), Error);
  CHECK_THROWS_AS(closure_lift(g, coarse, fine, {"s", "t"}), Error);
}

TEST_CASE("closure lifts keep the optimum") {
  std::mt19937_64 rng(79);
  int compared = 0;
  for (int it = 0; it < 40; ++it) {
    std::size_t n = 5;
    WeightedDigraph g = dsn::testing::random_graph(rng, n, 9, 9);
    Pattern coarse = dsn::testing::random_pattern(rng, g.names(), 3, 2 + it % 2);
    // split every coarse terminal into itself plus up to one copy
    std::vector<std::string> fine_names, ident;
    std::map<std::string, std::vector<std::string>> copies;
    for (const auto& t : coarse.terminals()) {
      fine_names.push_back(t);
      ident.push_back(t);
      copies[t].push_back(t);
      if (rng() % 2) {
        fine_names.push_back(t + "_c");
        ident.push_back(t);
        copies[t].push_back(t + "_c");
      }
    }
    std::vector<std::pair<std::string, std::string>> demands;
    for (const auto& [s, t] : coarse.demands()) {
      for (const auto& a : copies[coarse.terminal(s)]) demands.emplace_back(a, coarse.terminal(t));
      for (const auto& b : copies[coarse.terminal(t)]) demands.emplace_back(coarse.terminal(s), b);
    }
    Pattern fine(fine_names, demands);
    ReductionOutput r = closure_lift(g, coarse, fine, ident);
    auto want = dsn::testing::exhaustive_optimum(g, coarse);
    auto got = optimum(r);
    REQUIRE(want.has_value() == got.has_value());
    if (!got) continue;
    ++compared;
    CHECK(*got == *want);
  }
  CHECK(compared > 10);
}

TEST_CASE("expander instances need every edge") {
  ReductionOutput r = expander_like_instance(4, 3);
  CHECK(r.graph.num_vertices() == 4 + 12);
  CHECK(r.graph.num_edges() == 24);
  CHECK(r.pattern.num_demands() == 12);
  CHECK(simple(r.graph));
  std::vector<EdgeId> all(r.graph.num_edges());
  std::iota(all.begin(), all.end(), EdgeId{0});
  SolutionNetwork whole(r.graph, all);
  CHECK(feasible(whole, r.pattern));
  CHECK(minimalize(whole, r.pattern).edges() == all);

  ReductionOutput big = expander_like_instance(10, 5);
  CHECK(big.graph.num_edges() == 60);
  CHECK(simple(big.graph));
  CHECK_THROWS_AS(expander_like_instance(5, 1), Error);
  CHECK_THROWS_AS(expander_like_instance(2, 1), Error);
}
