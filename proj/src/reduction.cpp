#include "dsn/reduction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace dsn {

const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::pure_diamond:
      return "pure-diamond";
    case ReductionKind::flawed_diamond:
      return "flawed-diamond";
    case ReductionKind::cycle:
      return "cycle";
    case ReductionKind::closure_lift:
      return "closure-lift";
  }
  return "?";
}

std::size_t MccInstance::num_vertices() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.size();
  return n;
}

void MccInstance::validate() const {
  if (parts.size() < 2) fail(ErrorKind::invalid_argument, "multicoloured clique needs k >= 2 parts");
  const std::size_t n = num_vertices();
  std::vector<std::size_t> part_of(n, parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t v : parts[i]) {
      if (v >= n || part_of[v] != parts.size()) fail(ErrorKind::invalid_argument, "parts must partition 0..n-1");
      part_of[v] = i;
    }
  }
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) fail(ErrorKind::invalid_argument, "edge endpoint out of range");
    if (part_of[u] == part_of[v]) fail(ErrorKind::invalid_argument, "edge inside a part");
  }
}

namespace {

std::vector<std::size_t> part_index(const MccInstance& mcc) {
  std::vector<std::size_t> part_of(mcc.num_vertices());
  for (std::size_t i = 0; i < mcc.parts.size(); ++i) {
    for (std::size_t v : mcc.parts[i]) part_of[v] = i;
  }
  return part_of;
}

std::string idx(std::size_t i) { return std::to_string(i + 1); }

std::string leaf_name(std::size_t i, std::size_t j) { return "l" + idx(i) + "_" + idx(j); }
std::string copy_name(std::size_t w, std::size_t j) { return "w" + std::to_string(w) + "_" + std::to_string(j); }

ReductionOutput build_diamond(const MccInstance& mcc, Orientation orientation, bool flawed) {
  mcc.validate();
  const std::size_t k = mcc.k();
  auto part_of = part_index(mcc);
  std::vector<std::string> vertices{"r1", "r2"};
  std::vector<std::string> terminals{"r1", "r2"};
  std::vector<std::pair<std::string, std::string>> demands;
  std::vector<WeightedDigraph::NamedEdge> edges;
  auto add = [&](const std::string& a, const std::string& b) { edges.emplace_back(a, b, 1); };

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      vertices.push_back(leaf_name(i, j));
      terminals.push_back(leaf_name(i, j));
      demands.emplace_back("r1", leaf_name(i, j));
      demands.emplace_back("r2", leaf_name(i, j));
    }
  }
  // vertex side: r1 -> y_i -> w_0 -> w_j -> l_ij
  for (std::size_t i = 0; i < k; ++i) {
    std::string y = "y" + idx(i);
    vertices.push_back(y);
    add("r1", y);
    for (std::size_t w : mcc.parts[i]) {
      vertices.push_back(copy_name(w, 0));
      add(y, copy_name(w, 0));
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        // copy j points at leaf l_ij; copies are numbered 1..k like the parts
        vertices.push_back(copy_name(w, j + 1));
        add(copy_name(w, 0), copy_name(w, j + 1));
        add(copy_name(w, j + 1), leaf_name(i, j));
      }
    }
  }
  // edge side: r2 -> z_ij -> z_e -> copies of both endpoints
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> by_pair;
  for (auto [u, v] : mcc.edges) {
    if (part_of[u] > part_of[v]) std::swap(u, v);
    by_pair[{part_of[u], part_of[v]}].emplace_back(u, v);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      std::string z = "z" + idx(i) + "_" + idx(j);
      vertices.push_back(z);
      add("r2", z);
      auto& list = by_pair[{i, j}];
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      for (const auto& [u, v] : list) {
        std::string ze = "e" + std::to_string(u) + "_" + std::to_string(v);
        vertices.push_back(ze);
        add(z, ze);
        add(ze, copy_name(u, j + 1));
        add(ze, copy_name(v, i + 1));
      }
    }
  }
  if (flawed) {
    vertices.push_back("x");
    terminals.push_back("x");
    add("x", "r1");
    add("x", "r2");
    demands.emplace_back("x", "r1");
    demands.emplace_back("x", "r2");
  }
  ReductionOutput out;
  out.kind = flawed ? ReductionKind::flawed_diamond : ReductionKind::pure_diamond;
  out.orientation = orientation;
  out.target_cost = pure_diamond_target(k) + (flawed ? 2 : 0);
  out.graph = WeightedDigraph(vertices, edges);
  out.pattern = Pattern(terminals, demands);
  if (orientation == Orientation::in) {
    out.graph = out.graph.reversed();
    out.pattern = out.pattern.reversed();
  }
  return out;
}

}  // namespace

ReductionOutput mcc_to_pure_diamond(const MccInstance& mcc, Orientation orientation) {
  return build_diamond(mcc, orientation, false);
}

ReductionOutput mcc_to_flawed_diamond(const MccInstance& mcc, Orientation orientation) {
  return build_diamond(mcc, orientation, true);
}

bool has_multicoloured_clique(const MccInstance& mcc) {
  mcc.validate();
  if (mcc.k() > 6) fail(ErrorKind::size_guard, "clique search limited to k <= 6");
  std::set<std::pair<std::size_t, std::size_t>> adjacent;
  for (const auto& [u, v] : mcc.edges) {
    adjacent.emplace(u, v);
    adjacent.emplace(v, u);
  }
  std::vector<std::size_t> chosen;
  auto extend = [&](auto&& self, std::size_t part) -> bool {
    if (part == mcc.k()) return true;
    for (std::size_t v : mcc.parts[part]) {
      bool ok = std::all_of(chosen.begin(), chosen.end(), [&](std::size_t u) { return adjacent.count({u, v}) > 0; });
      if (!ok) continue;
      chosen.push_back(v);
      if (self(self, part + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return extend(extend, 0);
}

MccInstance random_mcc(std::size_t k, std::size_t max_part, double edge_probability, std::uint64_t seed) {
  if (k < 2 || max_part < 1) fail(ErrorKind::invalid_argument, "need k >= 2 and parts of at least one vertex");
  std::mt19937_64 rng(seed);
  MccInstance mcc;
  std::size_t next = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t size = 1 + std::uniform_int_distribution<std::size_t>(0, max_part - 1)(rng);
    std::vector<std::size_t> part(size);
    std::iota(part.begin(), part.end(), next);
    next += size;
    mcc.parts.push_back(std::move(part));
  }
  std::bernoulli_distribution coin(edge_probability);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t u : mcc.parts[i]) {
        for (std::size_t v : mcc.parts[j]) {
          if (coin(rng)) mcc.edges.emplace_back(u, v);
        }
      }
    }
  }
  return mcc;
}

ReductionOutput cycle_pattern_instance(const WeightedDigraph& g, const std::vector<std::string>& terminals) {
  if (terminals.size() < 2) fail(ErrorKind::invalid_argument, "cycle pattern needs at least two terminals");
  std::set<std::string> seen;
  for (const auto& t : terminals) {
    if (!g.find(t)) fail(ErrorKind::invalid_argument, "terminal " + t + " is not a graph vertex");
    if (!seen.insert(t).second) fail(ErrorKind::invalid_argument, "terminal " + t + " listed twice");
  }
  std::vector<std::pair<std::string, std::string>> demands;
  for (std::size_t i = 0; i < terminals.size(); ++i) demands.emplace_back(terminals[i], terminals[(i + 1) % terminals.size()]);
  ReductionOutput out;
  out.graph = g;
  out.pattern = Pattern(terminals, demands);
  out.kind = ReductionKind::cycle;
  return out;
}

ReductionOutput closure_lift(const WeightedDigraph& g, const Pattern& coarse, const Pattern& fine,
                             const std::vector<std::string>& identification) {
  if (identification.size() != fine.num_terminals()) {
    fail(ErrorKind::invalid_argument, "identification must name a coarse terminal for every fine terminal");
  }
  std::map<std::string, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < identification.size(); ++i) {
    if (!coarse.find(identification[i])) {
      fail(ErrorKind::invalid_argument, identification[i] + " is not a terminal of the coarse pattern");
    }
    classes[identification[i]].push_back(i);
  }
  // identified pattern must have the same closure as the coarse one
  std::set<std::pair<std::string, std::string>> merged;
  for (const auto& [s, t] : fine.demands()) {
    if (identification[s] != identification[t]) merged.emplace(identification[s], identification[t]);
  }
  std::vector<std::string> names(coarse.terminals());
  for (const auto& [s, t] : merged) {
    if (!coarse.find(s) || !coarse.find(t)) fail(ErrorKind::invalid_argument, "identification leaves the coarse pattern");
  }
  Pattern identified(names, std::vector<std::pair<std::string, std::string>>(merged.begin(), merged.end()));
  auto closure_pairs = [](const Pattern& p) {
    std::set<std::pair<std::string, std::string>> pairs;
    Pattern c = transitive_closure(p);
    for (const auto& [s, t] : c.demands()) pairs.emplace(c.terminal(s), c.terminal(t));
    return pairs;
  };
  if (closure_pairs(identified) != closure_pairs(coarse)) {
    fail(ErrorKind::invalid_argument, "identified pattern is not transitively equivalent to the coarse pattern");
  }

  std::vector<std::string> vertices(g.names());
  std::vector<WeightedDigraph::NamedEdge> edges;
  for (const Edge& e : g.edges()) edges.emplace_back(g.name(e.tail), g.name(e.head), e.cost);
  std::vector<std::string> fine_names(fine.num_terminals());
  for (const auto& [t, members] : classes) {
    if (!g.find(t)) fail(ErrorKind::invalid_argument, "coarse terminal " + t + " is not a graph vertex");
    std::vector<std::string> cycle{t};
    fine_names[members.front()] = t;
    for (std::size_t i = 1; i < members.size(); ++i) {
      const std::string& name = fine.terminal(members[i]);
      if (g.find(name) || std::find(vertices.begin(), vertices.end(), name) != vertices.end()) {
        fail(ErrorKind::invalid_argument, "lifted terminal " + name + " clashes with an existing vertex");
      }
      vertices.push_back(name);
      fine_names[members[i]] = name;
      cycle.push_back(name);
    }
    if (cycle.size() > 1) {
      for (std::size_t i = 0; i < cycle.size(); ++i) edges.emplace_back(cycle[i], cycle[(i + 1) % cycle.size()], 0);
    }
  }
  std::vector<std::pair<std::string, std::string>> demands;
  for (const auto& [s, t] : fine.demands()) demands.emplace_back(fine_names[s], fine_names[t]);
  ReductionOutput out;
  out.graph = WeightedDigraph(vertices, edges);
  out.pattern = Pattern(fine_names, demands);
  out.kind = ReductionKind::closure_lift;
  return out;
}

ReductionOutput expander_like_instance(std::size_t d, std::uint64_t seed) {
  if (d < 4 || d % 2 != 0) fail(ErrorKind::invalid_argument, "cubic graph needs an even number of vertices >= 4");
  if (d > 64) fail(ErrorKind::size_guard, "cubic graph limited to 64 vertices");
  std::mt19937_64 rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> edges;
  // pairing model, retried until simple and connected
  for (;;) {
    std::vector<std::size_t> points;
    for (std::size_t v = 0; v < d; ++v) points.insert(points.end(), 3, v);
    std::shuffle(points.begin(), points.end(), rng);
    edges.clear();
    bool simple = true;
    for (std::size_t i = 0; i < points.size() && simple; i += 2) {
      auto [a, b] = std::minmax(points[i], points[i + 1]);
      simple = a != b && edges.emplace(a, b).second;
    }
    if (!simple) continue;
    std::vector<std::size_t> parent(d);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    std::size_t comps = d;
    for (const auto& [a, b] : edges) {
      if (find(a) != find(b)) {
        parent[find(a)] = find(b);
        --comps;
      }
    }
    if (comps == 1) break;
  }
  std::vector<std::string> vertices;
  for (std::size_t v = 0; v < d; ++v) vertices.push_back("v" + std::to_string(v));
  std::vector<WeightedDigraph::NamedEdge> arcs;
  std::vector<std::string> terminals;
  for (const auto& [a, b] : edges) {
    for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}}) {
      std::string t = "t" + std::to_string(u) + "_" + std::to_string(v);
      vertices.push_back(t);
      terminals.push_back(t);
      arcs.emplace_back(vertices[u], t, 1);
      arcs.emplace_back(t, vertices[v], 1);
    }
  }
  std::vector<std::pair<std::string, std::string>> demands;
  for (std::size_t i = 0; i < terminals.size(); ++i) demands.emplace_back(terminals[i], terminals[(i + 1) % terminals.size()]);
  ReductionOutput out;
  out.graph = WeightedDigraph(vertices, arcs);
  out.pattern = Pattern(terminals, demands);
  out.kind = ReductionKind::cycle;
  return out;
}

}  // namespace dsn
