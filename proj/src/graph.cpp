#include "dsn/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

namespace dsn {

// --- WeightedDigraph --------------------------------------------------------

WeightedDigraph::WeightedDigraph(std::vector<std::string> vertices, const std::vector<NamedEdge>& edges,
                                 std::vector<std::string>* warnings)
    : names_(std::move(vertices)) {
  for (VertexId v = 0; v < names_.size(); ++v) {
    if (!index_.emplace(names_[v], v).second) {
      fail(ErrorKind::invalid_argument, "duplicate vertex name '" + names_[v] + "'");
    }
  }
  std::vector<Edge> raw;
  raw.reserve(edges.size());
  for (const auto& [tail, head, cost] : edges) {
    auto t = find(tail);
    auto h = find(head);
    if (!t) fail(ErrorKind::invalid_argument, "edge tail '" + tail + "' is not a vertex");
    if (!h) fail(ErrorKind::invalid_argument, "edge head '" + head + "' is not a vertex");
    if (*t == *h) fail(ErrorKind::invalid_argument, "self-loop on vertex '" + tail + "'");
    if (cost < 0) fail(ErrorKind::invalid_argument, "negative cost on edge " + tail + "->" + head);
    if (cost > kMaxEdgeCost) fail(ErrorKind::invalid_argument, "cost above 2^40 on edge " + tail + "->" + head);
    raw.push_back({*t, *h, cost});
  }
  std::sort(raw.begin(), raw.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.tail, a.head, a.cost) < std::tie(b.tail, b.head, b.cost);
  });
  for (const Edge& e : raw) {
    if (!edges_.empty() && edges_.back().tail == e.tail && edges_.back().head == e.head) {
      if (warnings) {
        warnings->push_back("parallel edge " + names_[e.tail] + "->" + names_[e.head] +
                            " dropped; kept cost " + std::to_string(edges_.back().cost));
      }
      continue;
    }
    edges_.push_back(e);
  }
  out_.assign(names_.size(), {});
  in_.assign(names_.size(), {});
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    out_[edges_[e].tail].push_back(e);
    in_[edges_[e].head].push_back(e);
  }
}

std::optional<VertexId> WeightedDigraph::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId WeightedDigraph::id(std::string_view name) const {
  auto v = find(name);
  if (!v) fail(ErrorKind::invalid_argument, "unknown vertex '" + std::string(name) + "'");
  return *v;
}

std::optional<EdgeId> WeightedDigraph::find_edge(VertexId tail, VertexId head) const {
  for (EdgeId e : out_.at(tail)) {
    if (edges_[e].head == head) return e;
  }
  return std::nullopt;
}

WeightedDigraph WeightedDigraph::reversed() const {
  std::vector<NamedEdge> rev;
  rev.reserve(edges_.size());
  for (const Edge& e : edges_) rev.emplace_back(names_[e.head], names_[e.tail], e.cost);
  return WeightedDigraph(names_, rev);
}

// --- Pattern ----------------------------------------------------------------

Pattern::Pattern(std::vector<std::string> terminals,
                 const std::vector<std::pair<std::string, std::string>>& demands,
                 std::vector<std::string>* warnings) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (!index.emplace(terminals[i], i).second) {
      fail(ErrorKind::invalid_argument, "duplicate terminal '" + terminals[i] + "'");
    }
  }
  std::vector<Demand> pairs;
  for (const auto& [s, t] : demands) {
    auto is = index.find(s);
    auto it = index.find(t);
    if (is == index.end()) fail(ErrorKind::invalid_argument, "demand endpoint '" + s + "' is not a terminal");
    if (it == index.end()) fail(ErrorKind::invalid_argument, "demand endpoint '" + t + "' is not a terminal");
    pairs.emplace_back(is->second, it->second);
  }
  *this = from_indices(std::move(terminals), pairs, warnings);
}

Pattern Pattern::from_indices(std::vector<std::string> terminals, const std::vector<Demand>& demands,
                              std::vector<std::string>* warnings) {
  std::vector<bool> used(terminals.size(), false);
  std::set<Demand> unique;
  for (const auto& [s, t] : demands) {
    if (s >= terminals.size() || t >= terminals.size()) {
      fail(ErrorKind::invalid_argument, "demand index out of range");
    }
    if (s == t) fail(ErrorKind::invalid_argument, "self-loop demand on '" + terminals[s] + "'");
    if (!unique.insert({s, t}).second) {
      if (warnings) warnings->push_back("duplicate demand " + terminals[s] + "->" + terminals[t] + " dropped");
      continue;
    }
    used[s] = used[t] = true;
  }
  std::vector<std::size_t> remap(terminals.size(), 0);
  Pattern p;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (!used[i]) {
      if (warnings) warnings->push_back("isolated terminal '" + terminals[i] + "' removed");
      continue;
    }
    remap[i] = p.terminals_.size();
    p.terminals_.push_back(std::move(terminals[i]));
  }
  std::set<std::string> seen(p.terminals_.begin(), p.terminals_.end());
  if (seen.size() != p.terminals_.size()) fail(ErrorKind::invalid_argument, "duplicate terminal name");
  for (const auto& [s, t] : unique) p.demands_.emplace_back(remap[s], remap[t]);
  std::sort(p.demands_.begin(), p.demands_.end());
  return p;
}

std::optional<std::size_t> Pattern::find(std::string_view name) const {
  for (std::size_t i = 0; i < terminals_.size(); ++i) {
    if (terminals_[i] == name) return i;
  }
  return std::nullopt;
}

bool Pattern::has_demand(std::size_t s, std::size_t t) const {
  return std::binary_search(demands_.begin(), demands_.end(), Demand{s, t});
}

std::vector<std::uint64_t> Pattern::adjacency() const {
  if (terminals_.size() > 64) fail(ErrorKind::size_guard, "pattern has more than 64 terminals");
  std::vector<std::uint64_t> adj(terminals_.size(), 0);
  for (const auto& [s, t] : demands_) adj[s] |= std::uint64_t{1} << t;
  return adj;
}

Pattern Pattern::reversed() const {
  std::vector<Demand> rev;
  for (const auto& [s, t] : demands_) rev.emplace_back(t, s);
  return from_indices(terminals_, rev);
}

// --- SolutionNetwork --------------------------------------------------------

SolutionNetwork::SolutionNetwork(const WeightedDigraph& host, std::vector<EdgeId> edges,
                                 std::vector<VertexId> extra_vertices)
    : host_(&host), edges_(std::move(edges)), extra_(std::move(extra_vertices)) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (EdgeId e : edges_) {
    if (e >= host.num_edges()) fail(ErrorKind::invalid_argument, "network edge id out of range");
  }
  std::sort(extra_.begin(), extra_.end());
  extra_.erase(std::unique(extra_.begin(), extra_.end()), extra_.end());
  for (VertexId v : extra_) {
    if (v >= host.num_vertices()) fail(ErrorKind::invalid_argument, "network vertex id out of range");
  }
}

Cost SolutionNetwork::cost() const {
  Cost total = 0;
  for (EdgeId e : edges_) total += host_->edge(e).cost;
  return total;
}

bool SolutionNetwork::contains(EdgeId e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

std::vector<VertexId> SolutionNetwork::vertices() const {
  std::vector<VertexId> vs = extra_;
  for (EdgeId e : edges_) {
    vs.push_back(host_->edge(e).tail);
    vs.push_back(host_->edge(e).head);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

SolutionNetwork SolutionNetwork::without(EdgeId e) const {
  std::vector<EdgeId> rest;
  rest.reserve(edges_.size());
  for (EdgeId f : edges_) {
    if (f != e) rest.push_back(f);
  }
  return SolutionNetwork(*host_, std::move(rest), extra_);
}

// --- Layout / Digraph -------------------------------------------------------

std::vector<std::size_t> Layout::positions(std::size_t n) const {
  if (order.size() != n) fail(ErrorKind::invalid_argument, "layout size does not match vertex count");
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pos(n, unset);
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (order[p] >= n || pos[order[p]] != unset) fail(ErrorKind::invalid_argument, "layout is not a bijection");
    pos[order[p]] = p;
  }
  return pos;
}

std::vector<std::vector<VertexId>> Digraph::successors() const {
  std::vector<std::vector<VertexId>> succ(n);
  for (const auto& [u, v] : arcs) succ[u].push_back(v);
  return succ;
}

LocalGraph local_view(const SolutionNetwork& network) {
  LocalGraph local;
  local.host_vertex = network.vertices();
  local.graph.n = local.host_vertex.size();
  auto index_of = [&](VertexId v) {
    return static_cast<VertexId>(std::lower_bound(local.host_vertex.begin(), local.host_vertex.end(), v) -
                                 local.host_vertex.begin());
  };
  for (EdgeId e : network.edges()) {
    const Edge& edge = network.host().edge(e);
    local.graph.arcs.emplace_back(index_of(edge.tail), index_of(edge.head));
    local.host_edge.push_back(e);
  }
  return local;
}

LocalGraph local_view(const WeightedDigraph& graph) {
  LocalGraph local;
  local.graph.n = graph.num_vertices();
  local.host_vertex.resize(graph.num_vertices());
  std::iota(local.host_vertex.begin(), local.host_vertex.end(), VertexId{0});
  for (EdgeId e = 0; e < graph.num_edges(); ++e) {
    local.graph.arcs.emplace_back(graph.edge(e).tail, graph.edge(e).head);
    local.host_edge.push_back(e);
  }
  return local;
}

// --- reachability -----------------------------------------------------------

namespace {

std::vector<VertexId> bfs(std::size_t n, VertexId source,
                          const std::vector<std::vector<VertexId>>& succ) {
  std::vector<bool> seen(n, false);
  std::vector<VertexId> queue{source};
  seen[source] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (VertexId w : succ[queue[i]]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

}  // namespace

std::vector<VertexId> reachable(const WeightedDigraph& graph, VertexId source) {
  if (source >= graph.num_vertices()) fail(ErrorKind::invalid_argument, "unknown vertex id");
  std::vector<bool> seen(graph.num_vertices(), false);
  std::vector<VertexId> queue{source};
  seen[source] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (EdgeId e : graph.out_edges(queue[i])) {
      VertexId w = graph.edge(e).head;
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

std::vector<VertexId> reachable(const SolutionNetwork& network, VertexId source) {
  const WeightedDigraph& host = network.host();
  if (source >= host.num_vertices()) fail(ErrorKind::invalid_argument, "unknown vertex id");
  std::vector<std::vector<VertexId>> succ(host.num_vertices());
  for (EdgeId e : network.edges()) succ[host.edge(e).tail].push_back(host.edge(e).head);
  return bfs(host.num_vertices(), source, succ);
}

// --- SCCs -------------------------------------------------------------------

Condensation scc_condensation(const Digraph& graph) {
  const std::size_t n = graph.n;
  auto succ = graph.successors();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<bool> on_stack(n, false);
  std::vector<VertexId> stack;
  std::vector<std::vector<VertexId>> found;  // reverse topological order
  std::size_t counter = 0;

  struct Frame {
    VertexId v;
    std::size_t next;
  };
  for (VertexId root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < succ[f.v].size()) {
        VertexId w = succ[f.v][f.next++];
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      VertexId v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<VertexId> component;
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        found.push_back(std::move(component));
      }
    }
  }
  Condensation result;
  result.components.assign(found.rbegin(), found.rend());
  result.component_of.assign(n, 0);
  for (std::size_t c = 0; c < result.components.size(); ++c) {
    for (VertexId v : result.components[c]) result.component_of[v] = c;
  }
  result.dag.n = result.components.size();
  for (const auto& [u, v] : graph.arcs) {
    auto cu = result.component_of[u];
    auto cv = result.component_of[v];
    if (cu != cv) result.dag.arcs.emplace_back(static_cast<VertexId>(cu), static_cast<VertexId>(cv));
  }
  std::sort(result.dag.arcs.begin(), result.dag.arcs.end());
  return result;
}

Condensation scc_condensation(const WeightedDigraph& graph) { return scc_condensation(local_view(graph).graph); }

std::vector<VertexId> topological_order(const Digraph& graph) {
  std::vector<std::size_t> indeg(graph.n, 0);
  for (const auto& arc : graph.arcs) ++indeg[arc.second];
  auto succ = graph.successors();
  std::set<VertexId> ready;
  for (VertexId v = 0; v < graph.n; ++v) {
    if (indeg[v] == 0) ready.insert(v);
  }
  std::vector<VertexId> order;
  while (!ready.empty()) {
    VertexId v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (VertexId w : succ[v]) {
      if (--indeg[w] == 0) ready.insert(w);
    }
  }
  if (order.size() != graph.n) fail(ErrorKind::invalid_argument, "graph has a directed cycle");
  return order;
}

bool is_acyclic(const Digraph& graph) {
  for (const auto& [u, v] : graph.arcs) {
    if (u == v) return false;
  }
  return scc_condensation(graph).components.size() == graph.n;
}

// --- closure and isomorphism --------------------------------------------------

std::vector<std::uint64_t> closure_masks(const std::vector<std::uint64_t>& adjacency) {
  std::vector<std::uint64_t> c = adjacency;
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((c[i] >> k) & 1U) c[i] |= c[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) c[i] &= ~(std::uint64_t{1} << i);
  return c;
}

Pattern transitive_closure(const Pattern& pattern) {
  auto c = closure_masks(pattern.adjacency());
  std::vector<Pattern::Demand> demands;
  for (std::size_t s = 0; s < c.size(); ++s) {
    for (std::size_t t = 0; t < c.size(); ++t) {
      if ((c[s] >> t) & 1U) demands.emplace_back(s, t);
    }
  }
  return Pattern::from_indices(pattern.terminals(), demands);
}

namespace {

struct IsoSearch {
  const std::vector<std::uint64_t>& a;
  const std::vector<std::uint64_t>& b;
  std::vector<std::uint64_t> a_in, b_in;
  std::vector<std::size_t> order;          // a-vertices in assignment order
  std::vector<std::int64_t> map_ab;        // a -> b
  std::vector<bool> used;
  std::vector<std::uint64_t> sig_a, sig_b;

  bool consistent(std::size_t depth, std::size_t u, std::size_t x) const {
    for (std::size_t i = 0; i < depth; ++i) {
      std::size_t w = order[i];
      auto y = static_cast<std::size_t>(map_ab[w]);
      if (((a[u] >> w) & 1U) != ((b[x] >> y) & 1U)) return false;
      if (((a[w] >> u) & 1U) != ((b[y] >> x) & 1U)) return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order.size()) return true;
    std::size_t u = order[depth];
    for (std::size_t x = 0; x < b.size(); ++x) {
      if (used[x] || sig_a[u] != sig_b[x] || !consistent(depth, u, x)) continue;
      used[x] = true;
      map_ab[u] = static_cast<std::int64_t>(x);
      if (extend(depth + 1)) return true;
      used[x] = false;
    }
    return false;
  }
};

std::vector<std::uint64_t> in_masks(const std::vector<std::uint64_t>& adj) {
  std::vector<std::uint64_t> in(adj.size(), 0);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (std::size_t v = 0; v < adj.size(); ++v) {
      if ((adj[u] >> v) & 1U) in[v] |= std::uint64_t{1} << u;
    }
  }
  return in;
}

}  // namespace

bool isomorphic(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size()) return false;
  IsoSearch s{a, b, in_masks(a), in_masks(b), {}, std::vector<std::int64_t>(a.size(), -1),
              std::vector<bool>(a.size(), false), {}, {}};
  auto signature = [](std::uint64_t out, std::uint64_t in) {
    auto o = static_cast<std::uint64_t>(std::popcount(out));
    auto i = static_cast<std::uint64_t>(std::popcount(in));
    auto both = static_cast<std::uint64_t>(std::popcount(out & in));
    return (o << 16) | (i << 8) | both;
  };
  for (std::size_t v = 0; v < a.size(); ++v) {
    s.sig_a.push_back(signature(a[v], s.a_in[v]));
    s.sig_b.push_back(signature(b[v], s.b_in[v]));
  }
  auto sa = s.sig_a, sb = s.sig_b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;
  // rarest signatures first
  s.order.resize(a.size());
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  auto freq = [&](std::size_t v) { return std::count(sa.begin(), sa.end(), s.sig_a[v]); };
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](std::size_t x, std::size_t y) { return freq(x) < freq(y); });
  return s.extend(0);
}

bool transitively_equivalent(const Pattern& a, const Pattern& b, std::size_t guard) {
  if (a.num_terminals() > guard || b.num_terminals() > guard) {
    fail(ErrorKind::size_guard, "transitive equivalence test limited to " + std::to_string(guard) + " vertices");
  }
  if (a.num_terminals() != b.num_terminals()) return false;
  return isomorphic(closure_masks(a.adjacency()), closure_masks(b.adjacency()));
}

// --- feasibility and minimality --------------------------------------------

std::vector<std::pair<VertexId, VertexId>> bind_demands(const WeightedDigraph& host, const Pattern& pattern) {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(pattern.num_demands());
  for (const auto& [s, t] : pattern.demands()) {
    auto hs = host.find(pattern.terminal(s));
    auto ht = host.find(pattern.terminal(t));
    if (!hs) fail(ErrorKind::invalid_argument, "terminal '" + pattern.terminal(s) + "' is not in the host graph");
    if (!ht) fail(ErrorKind::invalid_argument, "terminal '" + pattern.terminal(t) + "' is not in the host graph");
    out.emplace_back(*hs, *ht);
  }
  return out;
}

bool feasible(const WeightedDigraph& host, const std::vector<EdgeId>& edges,
              const std::vector<std::pair<VertexId, VertexId>>& demands) {
  std::vector<std::vector<VertexId>> succ(host.num_vertices());
  for (EdgeId e : edges) succ[host.edge(e).tail].push_back(host.edge(e).head);
  std::vector<char> seen(host.num_vertices());
  std::vector<VertexId> queue;
  VertexId last_source = static_cast<VertexId>(-1);
  for (const auto& [s, t] : demands) {
    if (s != last_source) {
      std::fill(seen.begin(), seen.end(), 0);
      queue.assign(1, s);
      seen[s] = 1;
      for (std::size_t i = 0; i < queue.size(); ++i) {
        for (VertexId w : succ[queue[i]]) {
          if (!seen[w]) {
            seen[w] = 1;
            queue.push_back(w);
          }
        }
      }
      last_source = s;
    }
    if (!seen[t]) return false;
  }
  return true;
}

namespace {

std::vector<std::pair<VertexId, VertexId>> sorted_by_source(std::vector<std::pair<VertexId, VertexId>> d) {
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

bool feasible(const SolutionNetwork& network, const Pattern& pattern) {
  return feasible(network.host(), network.edges(), sorted_by_source(bind_demands(network.host(), pattern)));
}

SolutionNetwork minimalize(const SolutionNetwork& network,
                           const std::vector<std::pair<VertexId, VertexId>>& demands) {
  const WeightedDigraph& host = network.host();
  auto d = sorted_by_source(demands);
  if (!feasible(host, network.edges(), d)) fail(ErrorKind::infeasible, "cannot minimalize an infeasible network");
  std::vector<EdgeId> order = network.edges();
  std::stable_sort(order.begin(), order.end(),
                   [&](EdgeId a, EdgeId b) { return host.edge(a).cost > host.edge(b).cost; });
  std::vector<EdgeId> current = network.edges();
  for (EdgeId e : order) {
    std::vector<EdgeId> trial;
    trial.reserve(current.size());
    for (EdgeId f : current) {
      if (f != e) trial.push_back(f);
    }
    if (feasible(host, trial, d)) current = std::move(trial);
  }
  return SolutionNetwork(host, std::move(current));
}

SolutionNetwork minimalize(const SolutionNetwork& network, const Pattern& pattern) {
  return minimalize(network, bind_demands(network.host(), pattern));
}

bool is_minimal(const SolutionNetwork& network, const Pattern& pattern) {
  auto d = sorted_by_source(bind_demands(network.host(), pattern));
  if (!feasible(network.host(), network.edges(), d)) return false;
  for (EdgeId e : network.edges()) {
    if (feasible(network.host(), network.without(e).edges(), d)) return false;
  }
  return true;
}

}  // namespace dsn
