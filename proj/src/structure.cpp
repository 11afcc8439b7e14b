#include "dsn/structure.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>

namespace dsn {

namespace {

using Mask = std::uint32_t;

void check_size(std::size_t n, std::size_t guard, const char* what) {
  if (n > guard) {
    fail(ErrorKind::size_guard, std::string(what) + " limited to " + std::to_string(guard) + " vertices, graph has " +
                                    std::to_string(n));
  }
}

Digraph induced(const Digraph& g, const std::vector<VertexId>& vertices) {
  std::vector<std::size_t> index(g.n, g.n);
  for (std::size_t i = 0; i < vertices.size(); ++i) index[vertices[i]] = i;
  Digraph sub;
  sub.n = vertices.size();
  for (const auto& [u, v] : g.arcs) {
    if (index[u] < g.n && index[v] < g.n) sub.arcs.emplace_back(index[u], index[v]);
  }
  return sub;
}

// Edge list of a path from s to t using `edges`, fewest arcs, ties to smaller ids.
std::optional<std::vector<EdgeId>> find_path(const WeightedDigraph& g, const std::vector<EdgeId>& edges, VertexId s,
                                             VertexId t, std::optional<EdgeId> skip = std::nullopt) {
  std::vector<std::vector<EdgeId>> out(g.num_vertices());
  for (EdgeId e : edges) {
    if (e != skip) out[g.edge(e).tail].push_back(e);
  }
  constexpr EdgeId none = static_cast<EdgeId>(-1);
  std::vector<EdgeId> via(g.num_vertices(), none);
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<VertexId> queue{s};
  seen[s] = 1;
  for (std::size_t i = 0; i < queue.size() && !seen[t]; ++i) {
    for (EdgeId e : out[queue[i]]) {
      VertexId w = g.edge(e).head;
      if (!seen[w]) {
        seen[w] = 1;
        via[w] = e;
        queue.push_back(w);
      }
    }
  }
  if (!seen[t]) return std::nullopt;
  std::vector<EdgeId> path;
  for (VertexId v = t; v != s; v = g.edge(via[v]).tail) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

bool connects(const WeightedDigraph& g, const std::vector<EdgeId>& edges, VertexId s, VertexId t,
              std::optional<EdgeId> skip = std::nullopt) {
  return find_path(g, edges, s, t, skip).has_value();
}

}  // namespace

// --- cutwidth ------------------------------------------------------------------

std::size_t cutwidth_of_layout(const Digraph& g, const Layout& layout) {
  auto pos = layout.positions(g.n);
  if (g.n < 2) return 0;
  // arcs crossing the cut after position p are those spanning it
  std::vector<long> delta(g.n + 1, 0);
  for (const auto& [u, v] : g.arcs) {
    auto a = std::min(pos[u], pos[v]);
    auto b = std::max(pos[u], pos[v]);
    if (a == b) continue;
    ++delta[a];
    --delta[b];
  }
  long running = 0, best = 0;
  for (std::size_t p = 0; p + 1 < g.n; ++p) {
    running += delta[p];
    best = std::max(best, running);
  }
  return static_cast<std::size_t>(best);
}

namespace {

// Subset DP over prefixes. enter[v] arcs reach v from before the graph and
// leave[v] arcs go from v to after it; both count while they span a cut.
CutwidthResult layout_dp(const Digraph& g, const std::vector<std::size_t>& enter,
                         const std::vector<std::size_t>& leave) {
  const std::size_t n = g.n;
  CutwidthResult result;
  result.exact = true;
  if (n == 0) return result;
  std::vector<std::size_t> degree(n, 0);
  std::vector<std::vector<std::size_t>> between(n, std::vector<std::size_t>(n, 0));
  for (const auto& [u, v] : g.arcs) {
    if (u == v) continue;
    ++degree[u];
    ++degree[v];
    ++between[u][v];
    ++between[v][u];
  }
  std::size_t entering = std::accumulate(enter.begin(), enter.end(), std::size_t{0});
  const Mask full = static_cast<Mask>((std::uint64_t{1} << n) - 1);
  std::vector<std::size_t> cut(std::size_t{full} + 1, 0), best(std::size_t{full} + 1, 0);
  std::vector<std::uint8_t> last(std::size_t{full} + 1, 0);
  cut[0] = entering;
  best[0] = 0;
  for (Mask s = 1; s != 0 && s <= full; ++s) {
    auto low = static_cast<std::size_t>(std::countr_zero(s));
    Mask rest = s & (s - 1);
    std::size_t inside = 0;
    for (Mask r = rest; r; r &= r - 1) inside += between[low][static_cast<std::size_t>(std::countr_zero(r))];
    cut[s] = cut[rest] + degree[low] - 2 * inside - enter[low] + leave[low];
    std::size_t here = s == full ? 0 : cut[s];
    std::size_t value = static_cast<std::size_t>(-1);
    for (Mask r = s; r; r &= r - 1) {
      auto v = static_cast<std::size_t>(std::countr_zero(r));
      std::size_t candidate = std::max(best[s & ~(Mask{1} << v)], here);
      if (candidate < value) {
        value = candidate;
        last[s] = static_cast<std::uint8_t>(v);
      }
    }
    best[s] = value;
    if (s == full) break;
  }
  result.value = best[full];
  std::vector<VertexId> order;
  for (Mask s = full; s; s &= ~(Mask{1} << last[s])) order.push_back(last[s]);
  std::reverse(order.begin(), order.end());
  result.layout.order = std::move(order);
  return result;
}

}  // namespace

CutwidthResult cutwidth_exact(const Digraph& g, std::size_t guard) {
  check_size(g.n, std::min<std::size_t>(guard, 24), "cutwidth_exact");
  return layout_dp(g, std::vector<std::size_t>(g.n, 0), std::vector<std::size_t>(g.n, 0));
}

Layout composed_layout(const Digraph& g) {
  Condensation c = scc_condensation(g);
  Layout layout;
  for (std::size_t k = 0; k < c.components.size(); ++k) {
    std::vector<VertexId> members = c.components[k];
    std::sort(members.begin(), members.end());
    if (members.size() == 1) {
      layout.order.push_back(members.front());
      continue;
    }
    check_size(members.size(), kCutwidthGuard, "composed_layout component");
    // among layouts of the component prefer one that keeps the arcs entering
    // and leaving it from piling up on the same cut
    std::vector<std::size_t> enter(members.size(), 0), leave(members.size(), 0);
    for (const auto& [u, v] : g.arcs) {
      std::size_t cu = c.component_of[u], cv = c.component_of[v];
      if (cv == k && cu != k) ++enter[static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), v) - members.begin())];
      if (cu == k && cv != k) ++leave[static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), u) - members.begin())];
    }
    CutwidthResult inner = layout_dp(induced(g, members), enter, leave);
    for (VertexId local : inner.layout.order) layout.order.push_back(members[local]);
  }
  return layout;
}

std::size_t condensation_cutwidth(const Digraph& g) {
  Condensation c = scc_condensation(g);
  Layout layout;
  layout.order.resize(c.components.size());
  std::iota(layout.order.begin(), layout.order.end(), VertexId{0});
  return cutwidth_of_layout(c.dag, layout);
}

// --- treewidth -----------------------------------------------------------------

std::size_t TreeDecomposition::width() const {
  std::size_t w = 0;
  for (const auto& b : bags) w = std::max(w, b.size());
  return w == 0 ? 0 : w - 1;
}

TreewidthResult treewidth_exact(const Digraph& g, std::size_t guard) {
  check_size(g.n, std::min<std::size_t>(guard, 20), "treewidth_exact");
  const std::size_t n = g.n;
  TreewidthResult result;
  if (n == 0) return result;
  std::vector<Mask> adj(n, 0);
  for (const auto& [u, v] : g.arcs) {
    if (u == v) continue;
    adj[u] |= Mask{1} << v;
    adj[v] |= Mask{1} << u;
  }
  const Mask full = static_cast<Mask>((std::uint64_t{1} << n) - 1);
  // vertices outside s + v reachable from v through s
  auto q_size = [&](Mask s, std::size_t v) {
    Mask seen = Mask{1} << v, frontier = Mask{1} << v, found = 0;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
      next &= ~seen;
      seen |= next;
      found |= next & ~s;
      frontier = next & s;
    }
    return static_cast<std::size_t>(std::popcount(found));
  };
  std::vector<std::uint8_t> tw(std::size_t{full} + 1, 0), last(std::size_t{full} + 1, 0);
  for (Mask s = 1; s != 0 && s <= full; ++s) {
    std::size_t best = static_cast<std::size_t>(-1);
    for (Mask r = s; r; r &= r - 1) {
      auto v = static_cast<std::size_t>(std::countr_zero(r));
      Mask rest = s & ~(Mask{1} << v);
      std::size_t candidate = std::max<std::size_t>(tw[rest], q_size(rest, v));
      if (candidate < best) {
        best = candidate;
        last[s] = static_cast<std::uint8_t>(v);
      }
    }
    tw[s] = static_cast<std::uint8_t>(best);
    if (s == full) break;
  }
  result.width = tw[full];

  // elimination order: vertices eliminated first come first
  std::vector<std::size_t> order;
  for (Mask s = full; s; s &= ~(Mask{1} << last[s])) order.push_back(last[s]);
  std::reverse(order.begin(), order.end());
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;
  std::vector<Mask> fill = adj;
  TreeDecomposition& d = result.decomposition;
  std::vector<std::size_t> parent_vertex(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = order[i];
    Mask later = 0;
    for (Mask r = fill[v]; r; r &= r - 1) {
      auto w = static_cast<std::size_t>(std::countr_zero(r));
      if (rank[w] > i) later |= Mask{1} << w;
    }
    for (Mask r = later; r; r &= r - 1) fill[static_cast<std::size_t>(std::countr_zero(r))] |= later;
    std::vector<VertexId> bag{static_cast<VertexId>(v)};
    std::size_t first = n;
    for (Mask r = later; r; r &= r - 1) {
      auto w = static_cast<std::size_t>(std::countr_zero(r));
      bag.push_back(static_cast<VertexId>(w));
      if (first == n || rank[w] < rank[first]) first = w;
    }
    std::sort(bag.begin(), bag.end());
    d.bags.push_back(std::move(bag));
    parent_vertex[v] = first;
  }
  // bag i belongs to order[i]; attach it to the bag of its earliest later neighbour
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t p = parent_vertex[order[i]];
    if (p == n) {
      if (i + 1 < n) d.tree.emplace_back(i, n - 1);  // component roots hang off the last bag
    } else {
      d.tree.emplace_back(i, rank[p]);
    }
  }
  return result;
}

bool validate_tree_decomposition(const Digraph& g, const TreeDecomposition& d, std::string* why) {
  auto reject = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const std::size_t k = d.bags.size();
  if (k == 0) return g.n == 0 ? true : reject("no bags");
  if (d.tree.size() + 1 != k) return reject("tree must have one edge fewer than bags");
  std::vector<std::vector<std::size_t>> nb(k);
  for (const auto& [a, b] : d.tree) {
    if (a >= k || b >= k || a == b) return reject("bad tree edge");
    nb[a].push_back(b);
    nb[b].push_back(a);
  }
  std::vector<char> seen(k, 0);
  std::vector<std::size_t> queue{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (std::size_t w : nb[queue[i]]) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  if (queue.size() != k) return reject("decomposition tree is disconnected");
  std::vector<std::vector<char>> holds(g.n, std::vector<char>(k, 0));
  for (std::size_t b = 0; b < k; ++b) {
    for (VertexId v : d.bags[b]) {
      if (v >= g.n) return reject("bag holds an unknown vertex");
      holds[v][b] = 1;
    }
  }
  for (const auto& [u, v] : g.arcs) {
    bool covered = false;
    for (std::size_t b = 0; b < k && !covered; ++b) covered = holds[u][b] && holds[v][b];
    if (!covered) return reject("arc " + std::to_string(u) + "->" + std::to_string(v) + " in no bag");
  }
  for (VertexId v = 0; v < g.n; ++v) {
    std::vector<std::size_t> nodes;
    for (std::size_t b = 0; b < k; ++b) {
      if (holds[v][b]) nodes.push_back(b);
    }
    if (nodes.empty()) return reject("vertex " + std::to_string(v) + " in no bag");
    std::vector<char> reached(k, 0);
    std::vector<std::size_t> q{nodes.front()};
    reached[nodes.front()] = 1;
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (std::size_t w : nb[q[i]]) {
        if (holds[v][w] && !reached[w]) {
          reached[w] = 1;
          q.push_back(w);
        }
      }
    }
    if (q.size() != nodes.size()) return reject("bags of vertex " + std::to_string(v) + " are not connected");
  }
  return true;
}

TreeDecomposition make_smooth(const TreeDecomposition& d, std::size_t num_vertices) {
  const std::size_t w = d.width();
  if (num_vertices < w + 1) fail(ErrorKind::invalid_argument, "smooth decomposition needs at least width+1 vertices");
  // adjacency sets over live nodes
  std::vector<std::set<VertexId>> bags;
  for (const auto& b : d.bags) bags.emplace_back(b.begin(), b.end());
  std::vector<std::set<std::size_t>> nb(bags.size());
  for (const auto& [a, b] : d.tree) {
    nb[a].insert(b);
    nb[b].insert(a);
  }
  std::vector<char> alive(bags.size(), 1);
  auto contract = [&](std::size_t gone, std::size_t into) {
    for (std::size_t x : nb[gone]) {
      nb[x].erase(gone);
      if (x != into) {
        nb[x].insert(into);
        nb[into].insert(x);
      }
    }
    nb[gone].clear();
    alive[gone] = 0;
  };
  auto subset = [](const std::set<VertexId>& a, const std::set<VertexId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  // grow small bags from a neighbour, merging bags that become contained
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t x = 0; x < bags.size(); ++x) {
      if (!alive[x]) continue;
      for (std::size_t y : std::set<std::size_t>(nb[x])) {
        if (subset(bags[x], bags[y])) {
          contract(x, y);
          changed = true;
          break;
        }
        if (subset(bags[y], bags[x])) {
          contract(y, x);
          changed = true;
        }
      }
      if (!alive[x] || bags[x].size() >= w + 1) continue;
      if (nb[x].empty()) {
        for (VertexId v = 0; v < num_vertices && bags[x].size() < w + 1; ++v) bags[x].insert(v);
        changed = true;
        continue;
      }
      for (std::size_t y : nb[x]) {
        auto it = std::find_if(bags[y].begin(), bags[y].end(), [&](VertexId v) { return !bags[x].count(v); });
        if (it != bags[y].end()) {
          bags[x].insert(*it);
          changed = true;
          break;
        }
      }
    }
  }
  // replace each edge with a path whose consecutive bags differ by one swap
  TreeDecomposition out;
  std::vector<std::size_t> index(bags.size(), 0);
  for (std::size_t x = 0; x < bags.size(); ++x) {
    if (!alive[x]) continue;
    index[x] = out.bags.size();
    out.bags.emplace_back(bags[x].begin(), bags[x].end());
  }
  for (std::size_t x = 0; x < bags.size(); ++x) {
    if (!alive[x]) continue;
    for (std::size_t y : nb[x]) {
      if (y < x) continue;
      std::vector<VertexId> drop, add;
      std::set_difference(bags[x].begin(), bags[x].end(), bags[y].begin(), bags[y].end(), std::back_inserter(drop));
      std::set_difference(bags[y].begin(), bags[y].end(), bags[x].begin(), bags[x].end(), std::back_inserter(add));
      std::set<VertexId> cur = bags[x];
      std::size_t prev = index[x];
      for (std::size_t i = 0; i + 1 < drop.size(); ++i) {
        cur.erase(drop[i]);
        cur.insert(add[i]);
        out.bags.emplace_back(cur.begin(), cur.end());
        out.tree.emplace_back(prev, out.bags.size() - 1);
        prev = out.bags.size() - 1;
      }
      out.tree.emplace_back(prev, index[y]);
    }
  }
  return out;
}

bool is_smooth(const TreeDecomposition& d) {
  const std::size_t w = d.width();
  for (const auto& b : d.bags) {
    if (b.size() != w + 1) return false;
  }
  for (const auto& [a, b] : d.tree) {
    std::vector<VertexId> common;
    std::set_intersection(d.bags[a].begin(), d.bags[a].end(), d.bags[b].begin(), d.bags[b].end(),
                          std::back_inserter(common));
    if (common.size() != w) return false;
  }
  return true;
}

bool verify_cutwidth_bound(const SolutionNetwork& m, const Pattern& h) {
  return cutwidth_exact(local_view(m).graph).value <= 7 * h.num_demands();
}

// --- SCCs of minimal solutions -------------------------------------------------

std::vector<SccPattern> scc_patterns(const SolutionNetwork& m, const Pattern& h) {
  const WeightedDigraph& g = m.host();
  LocalGraph local = local_view(m);
  Condensation c = scc_condensation(local.graph);
  std::vector<std::vector<std::pair<VertexId, VertexId>>> demands(c.components.size());
  std::vector<std::vector<EdgeId>> edges(c.components.size());
  for (std::size_t a = 0; a < local.graph.arcs.size(); ++a) {
    const auto& [u, v] = local.graph.arcs[a];
    if (c.component_of[u] == c.component_of[v]) edges[c.component_of[u]].push_back(local.host_edge[a]);
  }
  std::vector<std::size_t> local_of(g.num_vertices(), 0);
  for (std::size_t i = 0; i < local.host_vertex.size(); ++i) local_of[local.host_vertex[i]] = i;
  for (const auto& [s, t] : bind_demands(g, h)) {
    auto path = find_path(g, m.edges(), s, t);
    if (!path) fail(ErrorKind::infeasible, "network does not satisfy demand " + g.name(s) + "->" + g.name(t));
    std::vector<VertexId> walk{s};
    for (EdgeId e : *path) walk.push_back(g.edge(e).head);
    // a path enters and leaves each component once
    std::map<std::size_t, std::pair<VertexId, VertexId>> span;
    for (VertexId v : walk) {
      std::size_t comp = c.component_of[local_of[v]];
      auto it = span.find(comp);
      if (it == span.end()) {
        span.emplace(comp, std::pair{v, v});
      } else {
        it->second.second = v;
      }
    }
    for (const auto& [comp, ends] : span) {
      if (ends.first != ends.second) demands[comp].push_back(ends);
    }
  }
  std::vector<SccPattern> out;
  for (std::size_t comp = 0; comp < c.components.size(); ++comp) {
    if (c.components[comp].size() < 2) continue;
    auto& d = demands[comp];
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    out.push_back(SccPattern{SolutionNetwork(g, edges[comp]), d});
  }
  return out;
}

SccReversal scc_reversal(const SccPattern& scc) {
  const WeightedDigraph& g = scc.component.host();
  std::vector<VertexId> terminals;
  for (const auto& [s, t] : scc.demands) {
    terminals.push_back(s);
    terminals.push_back(t);
  }
  if (terminals.empty()) fail(ErrorKind::invalid_argument, "component pattern has no demands");
  std::sort(terminals.begin(), terminals.end());
  terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
  SccReversal r;
  r.root = *std::min_element(terminals.begin(), terminals.end(),
                             [&](VertexId a, VertexId b) { return g.name(a) < g.name(b); });
  std::vector<std::pair<VertexId, VertexId>> in_star, out_star;
  for (VertexId v : terminals) {
    if (v == r.root) continue;
    in_star.emplace_back(v, r.root);
    out_star.emplace_back(r.root, v);
  }
  r.a_in = minimalize(scc.component, in_star);
  r.a_out = minimalize(scc.component, out_star);
  std::vector<EdgeId> both;
  std::set_union(r.a_in.edges().begin(), r.a_in.edges().end(), r.a_out.edges().begin(), r.a_out.edges().end(),
                 std::back_inserter(both));
  r.covers_component = both == scc.component.edges();
  r.local = local_view(scc.component);
  Digraph reoriented;
  reoriented.n = r.local.graph.n;
  for (std::size_t a = 0; a < r.local.graph.arcs.size(); ++a) {
    EdgeId e = r.local.host_edge[a];
    auto [u, v] = r.local.graph.arcs[a];
    if (r.a_out.contains(e)) {
      reoriented.arcs.emplace_back(u, v);
    } else if (r.a_in.contains(e)) {
      reoriented.arcs.emplace_back(v, u);
    }
  }
  r.acyclic = is_acyclic(reoriented);
  if (r.acyclic) r.layout.order = topological_order(reoriented);
  return r;
}

// --- almost-caterpillar structure ---------------------------------------------

namespace {

struct Oriented {
  WeightedDigraph host;  // reversed host when the caterpillar is an in-caterpillar
  std::vector<EdgeId> m;
  Pattern h;
  CaterpillarCertificate cert;
};

std::vector<Pattern::Demand> reverse_demands(const std::vector<Pattern::Demand>& d) {
  std::vector<Pattern::Demand> out;
  for (const auto& [s, t] : d) out.emplace_back(t, s);
  std::sort(out.begin(), out.end());
  return out;
}

EdgeId reverse_edge(const WeightedDigraph& from, const WeightedDigraph& to, EdgeId e) {
  return *to.find_edge(from.edge(e).head, from.edge(e).tail);
}

Oriented orient(const SolutionNetwork& m, const Pattern& h, const CaterpillarCertificate& cert) {
  Oriented o;
  if (cert.orientation == Orientation::out) {
    o.host = m.host();
    o.m = m.edges();
    o.h = h;
    o.cert = cert;
    return o;
  }
  o.host = m.host().reversed();
  for (EdgeId e : m.edges()) o.m.push_back(reverse_edge(m.host(), o.host, e));
  std::sort(o.m.begin(), o.m.end());
  o.h = h.reversed();
  o.cert = cert;
  o.cert.orientation = Orientation::out;
  std::reverse(o.cert.spine.begin(), o.cert.spine.end());
  std::reverse(o.cert.stars.begin(), o.cert.stars.end());
  o.cert.extra_edges = reverse_demands(cert.extra_edges);
  return o;
}

void check_certificate(const Pattern& h, const CaterpillarCertificate& cert) {
  if (cert.spine.empty() || cert.stars.size() != cert.spine.size()) {
    fail(ErrorKind::invalid_argument, "certificate has no spine or mismatched stars");
  }
  auto edges = cert.caterpillar_edges();
  edges.insert(edges.end(), cert.extra_edges.begin(), cert.extra_edges.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  auto demands = h.demands();
  std::sort(demands.begin(), demands.end());
  if (edges != demands) fail(ErrorKind::invalid_argument, "certificate does not describe the pattern's demands");
}

std::map<std::size_t, std::vector<EdgeId>> necessary_out(const WeightedDigraph& g, const std::vector<EdgeId>& m,
                                                         const Pattern& h, const CaterpillarCertificate& cert,
                                                         std::size_t i) {
  if (i >= cert.spine.size()) fail(ErrorKind::invalid_argument, "spine index out of range");
  VertexId root = g.id(h.terminal(cert.spine[i]));
  std::map<std::size_t, std::vector<EdgeId>> out;
  for (std::size_t leaf : cert.stars[i]) {
    if (leaf == cert.spine[i]) continue;
    VertexId l = g.id(h.terminal(leaf));
    auto& list = out[leaf];
    // only edges on one fixed path can be necessary
    auto path = find_path(g, m, root, l);
    if (!path) fail(ErrorKind::infeasible, "network does not connect the star root to a leaf");
    for (EdgeId e : *path) {
      if (!connects(g, m, root, l, e)) list.push_back(e);
    }
    std::sort(list.begin(), list.end());
  }
  return out;
}

bool is_i_necessary(const std::map<std::size_t, std::vector<EdgeId>>& nec, EdgeId e) {
  for (const auto& [leaf, list] : nec) {
    if (std::binary_search(list.begin(), list.end(), e)) return true;
  }
  return false;
}

WitnessCheck witness_out(const WeightedDigraph& g, const std::vector<EdgeId>& m,
                         const std::map<std::size_t, std::vector<EdgeId>>& nec, const std::vector<EdgeId>& path) {
  std::set<VertexId> on_path;
  for (EdgeId e : path) {
    on_path.insert(g.edge(e).tail);
    on_path.insert(g.edge(e).head);
  }
  WitnessCheck check;
  for (EdgeId f : m) {
    if (std::find(path.begin(), path.end(), f) != path.end()) continue;
    if (!on_path.count(g.edge(f).head)) continue;
    if (is_i_necessary(nec, f)) check.edges.push_back(f);
  }
  if (check.edges.empty()) return check;
  for (const auto& [leaf, list] : nec) {
    bool all = std::all_of(check.edges.begin(), check.edges.end(),
                           [&](EdgeId f) { return std::binary_search(list.begin(), list.end(), f); });
    if (all) {
      check.leaf = leaf;
      break;
    }
  }
  return check;
}

}  // namespace

std::map<std::size_t, std::vector<EdgeId>> necessary_edges(const SolutionNetwork& m, const Pattern& h,
                                                           const CaterpillarCertificate& cert, std::size_t i) {
  if (i >= cert.spine.size()) fail(ErrorKind::invalid_argument, "spine index out of range");
  Oriented o = orient(m, h, cert);
  std::size_t oi = cert.orientation == Orientation::out ? i : cert.spine.size() - 1 - i;
  auto nec = necessary_out(o.host, o.m, o.h, o.cert, oi);
  if (cert.orientation == Orientation::out) return nec;
  for (auto& [leaf, list] : nec) {
    for (EdgeId& e : list) e = reverse_edge(o.host, m.host(), e);
    std::sort(list.begin(), list.end());
  }
  return nec;
}

WitnessCheck witness_leaf(const SolutionNetwork& m, const Pattern& h, const CaterpillarCertificate& cert,
                          std::size_t i, const std::vector<EdgeId>& path) {
  if (cert.orientation == Orientation::out) {
    return witness_out(m.host(), m.edges(), necessary_out(m.host(), m.edges(), h, cert, i), path);
  }
  Oriented o = orient(m, h, cert);
  std::vector<EdgeId> rpath;
  for (EdgeId e : path) rpath.push_back(reverse_edge(m.host(), o.host, e));
  auto check = witness_out(o.host, o.m, necessary_out(o.host, o.m, o.h, o.cert, cert.spine.size() - 1 - i), rpath);
  for (EdgeId& e : check.edges) e = reverse_edge(o.host, m.host(), e);
  std::sort(check.edges.begin(), check.edges.end());
  return check;
}

CoreDecomposition core_decomposition(const SolutionNetwork& m, const Pattern& h, const CaterpillarCertificate& cert) {
  check_certificate(h, cert);
  if (!is_minimal(m, h)) fail(ErrorKind::invalid_argument, "network is not a minimal solution");
  Oriented o = orient(m, h, cert);
  const WeightedDigraph& g = o.host;
  const std::size_t lambda0 = o.cert.spine.size();

  std::set<Pattern::Demand> star_edges;
  for (std::size_t i = 0; i < lambda0; ++i) {
    for (std::size_t l : o.cert.stars[i]) {
      if (l != o.cert.spine[i]) star_edges.emplace(o.cert.spine[i], l);
    }
  }
  std::vector<std::pair<VertexId, VertexId>> rest;  // I, host ids
  for (const auto& [s, t] : o.h.demands()) {
    if (!star_edges.count({s, t})) rest.emplace_back(g.id(o.h.terminal(s)), g.id(o.h.terminal(t)));
  }
  std::sort(rest.begin(), rest.end());

  std::vector<std::map<std::size_t, std::vector<EdgeId>>> nec;
  for (std::size_t i = 0; i < lambda0; ++i) nec.push_back(necessary_out(g, o.m, o.h, o.cert, i));

  std::vector<EdgeId> core;
  std::vector<std::pair<VertexId, VertexId>> core_demands = rest;
  if (!rest.empty()) {
    SolutionNetwork m_i = minimalize(SolutionNetwork(g, o.m), rest);
    core = m_i.edges();
    for (const auto& [s, t] : rest) {
      auto p = find_path(g, m_i.edges(), s, t);
      for (std::size_t i = 0; i < lambda0; ++i) {
        WitnessCheck w = witness_out(g, o.m, nec[i], *p);
        if (w.edges.empty()) continue;
        if (!w.leaf) fail(ErrorKind::invalid_argument, "internal: necessary edges share no leaf");
        VertexId root = g.id(o.h.terminal(o.cert.spine[i]));
        VertexId leaf = g.id(o.h.terminal(*w.leaf));
        auto q = find_path(g, o.m, root, leaf);
        core.insert(core.end(), q->begin(), q->end());
        core_demands.emplace_back(root, leaf);
      }
    }
    std::sort(core_demands.begin(), core_demands.end());
    core_demands.erase(std::unique(core_demands.begin(), core_demands.end()), core_demands.end());
    core = minimalize(SolutionNetwork(g, core), core_demands).edges();
  }

  // map back to the caller's orientation
  const bool flip = cert.orientation == Orientation::in;
  auto back = [&](EdgeId e) { return flip ? reverse_edge(g, m.host(), e) : e; };
  CoreDecomposition cd;
  cd.orientation = cert.orientation;
  std::vector<EdgeId> core_host;
  for (EdgeId e : core) core_host.push_back(back(e));
  cd.core = SolutionNetwork(m.host(), core_host);
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> named;
  for (auto [s, t] : core_demands) {
    if (flip) std::swap(s, t);
    names.push_back(g.name(s));
    names.push_back(g.name(t));
    named.emplace_back(g.name(s), g.name(t));
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (!named.empty()) cd.core_pattern = Pattern(names, named);

  // weakly connected pieces of the remainder
  std::vector<EdgeId> remainder;
  std::set_difference(m.edges().begin(), m.edges().end(), cd.core.edges().begin(), cd.core.edges().end(),
                      std::back_inserter(remainder));
  const WeightedDigraph& host = m.host();
  std::vector<VertexId> parent(host.num_vertices());
  std::iota(parent.begin(), parent.end(), VertexId{0});
  auto find = [&](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (EdgeId e : remainder) parent[find(host.edge(e).tail)] = find(host.edge(e).head);
  std::map<VertexId, std::vector<EdgeId>> pieces;
  for (EdgeId e : remainder) pieces[find(host.edge(e).tail)].push_back(e);
  for (auto& [rep, edges] : pieces) {
    // the root has no entering (leaving, for in-trees) edge in the piece
    std::set<VertexId> ends, starts;
    for (EdgeId e : edges) {
      VertexId from = flip ? host.edge(e).head : host.edge(e).tail;
      VertexId to = flip ? host.edge(e).tail : host.edge(e).head;
      starts.insert(from);
      ends.insert(to);
    }
    Arborescence a;
    a.edges = edges;
    a.root = *starts.begin();
    for (VertexId v : starts) {
      if (!ends.count(v)) {
        a.root = v;
        break;
      }
    }
    cd.forest.push_back(std::move(a));
  }
  return cd;
}

bool validate_core_decomposition(const SolutionNetwork& m, const CoreDecomposition& cd, std::size_t lambda,
                                 std::size_t delta, std::string* why) {
  auto reject = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const WeightedDigraph& host = m.host();
  if (cd.core_pattern.empty()) {
    if (cd.core.num_edges() != 0) return reject("core without a pattern must be empty");
  } else {
    if (!feasible(cd.core, cd.core_pattern)) return reject("core does not satisfy the core pattern");
    if (!is_minimal(cd.core, cd.core_pattern)) return reject("core is not minimal for the core pattern");
  }
  if (cd.core_pattern.num_demands() > (1 + lambda) * (lambda + delta)) {
    return reject("core pattern has " + std::to_string(cd.core_pattern.num_demands()) + " edges");
  }
  std::vector<EdgeId> all = cd.core.edges();
  for (const auto& a : cd.forest) all.insert(all.end(), a.edges.begin(), a.edges.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end() || all != m.edges()) {
    return reject("core and forest do not partition the network");
  }
  auto core_vertices = cd.core.vertices();
  const bool flip = cd.orientation == Orientation::in;
  for (const auto& a : cd.forest) {
    // every non-root vertex entered exactly once, root never, all reached from the root
    std::map<VertexId, std::size_t> entered;
    std::map<VertexId, std::vector<VertexId>> next;
    std::set<VertexId> vertices;
    for (EdgeId e : a.edges) {
      VertexId from = flip ? host.edge(e).head : host.edge(e).tail;
      VertexId to = flip ? host.edge(e).tail : host.edge(e).head;
      ++entered[to];
      next[from].push_back(to);
      vertices.insert(from);
      vertices.insert(to);
    }
    if (entered.count(a.root)) return reject("arborescence root has an entering edge");
    for (const auto& [v, k] : entered) {
      if (k != 1) return reject("arborescence vertex entered twice");
    }
    std::set<VertexId> seen{a.root};
    std::vector<VertexId> queue{a.root};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (VertexId w : next[queue[i]]) {
        if (seen.insert(w).second) queue.push_back(w);
      }
    }
    if (seen != vertices) return reject("arborescence not spanned from its root");
    for (VertexId v : vertices) {
      if (v != a.root && std::binary_search(core_vertices.begin(), core_vertices.end(), v)) {
        return reject("arborescence meets the core away from its root");
      }
    }
  }
  return true;
}

bool same_head_property(const SolutionNetwork& m, const CoreDecomposition& cd) {
  const WeightedDigraph& host = m.host();
  const bool flip = cd.orientation == Orientation::in;
  std::map<VertexId, std::vector<EdgeId>> entering;
  for (EdgeId e : m.edges()) entering[flip ? host.edge(e).tail : host.edge(e).head].push_back(e);
  for (const auto& [v, edges] : entering) {
    if (edges.size() < 2) continue;
    for (EdgeId e : edges) {
      if (!cd.core.contains(e)) return false;
    }
  }
  return true;
}

}  // namespace dsn
