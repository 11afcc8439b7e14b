#include "dsn/dp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <unordered_map>

namespace dsn {

namespace {

using Mask = std::uint64_t;
using Bits = std::vector<std::uint64_t>;
using KeyWords = std::vector<std::uint64_t>;

constexpr Mask bit(std::size_t i) { return Mask{1} << i; }
constexpr Mask kResolved = ~Mask{0};

struct WordsHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint64_t x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

struct HostStar {
  VertexId root;
  std::vector<VertexId> leaves;
  Orientation orientation;
};

std::vector<HostStar> host_stars(const WeightedDigraph& g, const Pattern& h, const StarDecomposition& sd) {
  std::vector<HostStar> out;
  for (const auto& star : sd.stars) {
    HostStar hs{g.id(h.terminal(star.root)), {}, star.orientation};
    for (std::size_t l : star.leaves) hs.leaves.push_back(g.id(h.terminal(l)));
    out.push_back(std::move(hs));
  }
  return out;
}

struct Record {
  Bits edges;
  Mask verts = 0;
  Mask u = 0;
  Cost cost = 0;
  bool complete = false;
};

std::vector<EdgeId> edge_list(const Bits& bits) {
  std::vector<EdgeId> out;
  for (std::size_t w = 0; w < bits.size(); ++w) {
    for (std::uint64_t m = bits[w]; m; m &= m - 1) out.push_back(static_cast<EdgeId>(w * 64 + std::countr_zero(m)));
  }
  return out;
}

bool better(const Record& a, const Record& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return edge_list(a.edges) < edge_list(b.edges);
}

class Table {
 public:
  Table(const WeightedDigraph& g, const Pattern& h, std::vector<HostStar> stars)
      : g_(g), words_((g.num_edges() + 63) / 64), stars_(std::move(stars)) {
    for (const auto& t : h.terminals()) terminals_ |= bit(g.id(t));
    for (const auto& s : stars_) (s.orientation == Orientation::out ? r_out_ : r_in_) |= bit(s.root);
  }

  std::size_t words() const { return words_; }

  const Bits& induced(Mask s) {
    auto it = induced_.find(s);
    if (it != induced_.end()) return it->second;
    Bits b(words_, 0);
    for (EdgeId e = 0; e < g_.num_edges(); ++e) {
      const Edge& edge = g_.edge(e);
      if ((s & bit(edge.tail)) && (s & bit(edge.head))) b[e / 64] |= std::uint64_t{1} << (e % 64);
    }
    return induced_.emplace(s, std::move(b)).first->second;
  }

  Cost cost_of(const Bits& bits) const {
    Cost c = 0;
    for (std::size_t w = 0; w < bits.size(); ++w) {
      for (std::uint64_t m = bits[w]; m; m &= m - 1) c += g_.edge(static_cast<EdgeId>(w * 64 + std::countr_zero(m))).cost;
    }
    return c;
  }

  // Canonical type of a network for separator rec.u at the given level; empty when invalid.
  std::optional<KeyWords> key_of(std::size_t level, Record& rec) {
    std::array<Mask, 64> reach{};
    for (std::size_t w = 0; w < words_; ++w) {
      for (std::uint64_t m = rec.edges[w]; m; m &= m - 1) {
        const Edge& e = g_.edge(static_cast<EdgeId>(w * 64 + std::countr_zero(m)));
        reach[e.tail] |= bit(e.head);
      }
    }
    for (Mask m = rec.verts; m; m &= m - 1) reach[static_cast<std::size_t>(std::countr_zero(m))] |= m & (~m + 1);
    for (Mask mk = rec.verts; mk; mk &= mk - 1) {
      auto k = static_cast<std::size_t>(std::countr_zero(mk));
      for (Mask mi = rec.verts; mi; mi &= mi - 1) {
        auto i = static_cast<std::size_t>(std::countr_zero(mi));
        if (reach[i] & bit(k)) reach[i] |= reach[k];
      }
    }
    KeyWords key;
    key.reserve(8 + words_ + 16);
    Mask q = rec.verts & terminals_;
    key.push_back(level);
    key.push_back(rec.u);
    key.push_back(q);
    const Bits& ind = induced(rec.u);
    for (std::size_t w = 0; w < words_; ++w) key.push_back(rec.edges[w] & ind[w]);
    for (Mask m = rec.u; m; m &= m - 1) key.push_back(reach[static_cast<std::size_t>(std::countr_zero(m))] & (rec.u | r_in_));
    for (Mask m = r_out_ & rec.verts & ~rec.u; m; m &= m - 1) {
      key.push_back(reach[static_cast<std::size_t>(std::countr_zero(m))] & rec.u);
    }
    bool complete = q == terminals_;
    for (const auto& star : stars_) {
      for (VertexId l : star.leaves) {
        if (!(rec.verts & bit(l))) continue;
        Mask entry = 0;
        if (star.orientation == Orientation::out) {
          if ((rec.verts & bit(star.root)) && (reach[star.root] & bit(l))) {
            entry = kResolved;
          } else {
            for (Mask m = rec.u; m; m &= m - 1) {
              auto w = static_cast<std::size_t>(std::countr_zero(m));
              if (reach[w] & bit(l)) entry |= bit(w);
            }
          }
        } else {
          entry = (reach[l] & bit(star.root)) ? kResolved : (reach[l] & rec.u);
        }
        if (entry == 0) return std::nullopt;
        if (entry != kResolved) complete = false;
        key.push_back(entry);
      }
    }
    rec.complete = complete;
    return key;
  }

 private:
  const WeightedDigraph& g_;
  std::size_t words_;
  std::vector<HostStar> stars_;
  Mask terminals_ = 0, r_in_ = 0, r_out_ = 0;
  std::unordered_map<Mask, Bits> induced_;
};

std::vector<Mask> combinations(std::size_t n, std::size_t size) {
  std::vector<Mask> out;
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    Mask m = 0;
    for (std::size_t i : idx) m |= bit(i);
    out.push_back(m);
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

std::size_t default_omega(std::size_t lambda, std::size_t delta, std::size_t n) {
  std::size_t bound = 7 * (1 + lambda) * (lambda + delta);
  std::size_t cap = n > 1 ? n - 1 : 1;
  return std::max<std::size_t>(1, std::min(bound, cap));
}

namespace {

// Width of the min-degree elimination order of the underlying undirected graph.
std::size_t elimination_width(const SolutionNetwork& n) {
  auto local = local_view(n);
  const std::size_t m = local.graph.n;
  std::vector<Mask> adj(m, 0);
  for (const auto& [u, v] : local.graph.arcs) {
    adj[u] |= bit(v);
    adj[v] |= bit(u);
  }
  Mask alive = m == 64 ? ~Mask{0} : bit(m) - 1;
  std::size_t width = 0;
  while (alive) {
    std::size_t best = m;
    int best_deg = 65;
    for (Mask a = alive; a; a &= a - 1) {
      auto v = static_cast<std::size_t>(std::countr_zero(a));
      int d = std::popcount(adj[v] & alive);
      if (d < best_deg) {
        best_deg = d;
        best = v;
      }
    }
    width = std::max(width, static_cast<std::size_t>(best_deg));
    Mask nb = adj[best] & alive;
    for (Mask a = nb; a; a &= a - 1) adj[static_cast<std::size_t>(std::countr_zero(a))] |= nb & ~(a & (~a + 1));
    alive &= ~bit(best);
  }
  return width;
}

// Union of cheapest paths, minimalized: a quick feasible solution.
std::optional<SolutionNetwork> path_union(const WeightedDigraph& g, const std::vector<std::pair<VertexId, VertexId>>& demands) {
  std::vector<EdgeId> chosen;
  for (const auto& [s, t] : demands) {
    constexpr Cost inf = std::numeric_limits<Cost>::max() / 4;
    std::vector<Cost> dist(g.num_vertices(), inf);
    std::vector<EdgeId> parent(g.num_vertices(), 0);
    dist[s] = 0;
    std::vector<bool> done(g.num_vertices(), false);
    for (std::size_t round = 0; round < g.num_vertices(); ++round) {
      VertexId u = 0;
      Cost du = inf;
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (!done[v] && dist[v] < du) {
          du = dist[v];
          u = v;
        }
      }
      if (du == inf) break;
      done[u] = true;
      for (EdgeId e : g.out_edges(u)) {
        VertexId v = g.edge(e).head;
        if (du + g.edge(e).cost < dist[v]) {
          dist[v] = du + g.edge(e).cost;
          parent[v] = e;
        }
      }
    }
    if (dist[t] == inf) return std::nullopt;
    for (VertexId v = t; v != s; v = g.edge(parent[v]).tail) chosen.push_back(parent[v]);
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  return minimalize(SolutionNetwork(g, chosen), demands);
}

std::optional<std::vector<EdgeId>> run_table(const WeightedDigraph& g, const Pattern& h, std::size_t omega,
                                             std::optional<Cost> upper, const DpOptions& options, DpStats& st) {
  const std::size_t n = g.num_vertices();
  StarDecomposition sd = star_decomposition(h);
  Table table(g, h, host_stars(g, h, sd));
  const std::size_t bag = std::min(omega + 1, n);
  const std::size_t cap = sd.stars.size() * omega;
  std::vector<std::unordered_map<KeyWords, Record, WordsHash>> levels(n + 1);
  std::optional<Record> best;
  std::size_t held = 0, steps = 0;
  auto step = [&] {
    if (++steps > options.max_steps) fail(ErrorKind::size_guard, "dynamic program exceeded its step budget");
  };

  auto bound_ok = [&](Cost c) { return (!upper || c <= *upper) && (!best || c <= best->cost); };
  auto store = [&](std::size_t level, Record rec) {
    if (!bound_ok(rec.cost)) return;
    auto key = table.key_of(level, rec);
    if (!key) return;
    if (rec.complete && (!best || better(rec, *best))) best = rec;
    auto& slot = levels[level];
    auto it = slot.find(*key);
    if (it == slot.end()) {
      if (++held > options.max_records) fail(ErrorKind::size_guard, "dynamic program exceeded its table budget");
      slot.emplace(std::move(*key), std::move(rec));
    } else if (better(rec, it->second)) {
      it->second = std::move(rec);
    }
  };

  double bags = 1;
  for (std::size_t i = 0; i < bag; ++i) bags = bags * static_cast<double>(n - i) / static_cast<double>(i + 1);
  if (bags > static_cast<double>(options.max_bags)) {
    fail(ErrorKind::size_guard, "dynamic program limited to " + std::to_string(options.max_bags) + " separators");
  }
  for (Mask u : combinations(n, bag)) {
    std::vector<EdgeId> inside = edge_list(table.induced(u));
    if (inside.size() > 24) fail(ErrorKind::size_guard, "a bag induces more than 24 edges");
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << inside.size()); ++pick) {
      if (static_cast<std::size_t>(std::popcount(pick)) > cap) continue;
      Record rec;
      rec.edges.assign(table.words(), 0);
      rec.u = u;
      rec.verts = u;
      for (std::size_t i = 0; i < inside.size(); ++i) {
        if (pick & (std::uint64_t{1} << i)) rec.edges[inside[i] / 64] |= std::uint64_t{1} << (inside[i] % 64);
      }
      rec.cost = table.cost_of(rec.edges);
      ++st.base_records;
      step();
      store(bag, std::move(rec));
    }
  }

  // records grouped by separator, per level
  std::vector<std::unordered_map<Mask, std::vector<const Record*>>> by_bag(n + 1);
  auto index_level = [&](std::size_t level) {
    for (const auto& [key, rec] : levels[level]) {
      if (bound_ok(rec.cost)) by_bag[level][rec.u].push_back(&rec);
    }
  };
  index_level(bag);
  for (std::size_t level = bag + 1; level <= n; ++level) {
    for (std::size_t l1 = bag; l1 < level; ++l1) {
      std::size_t l2 = level + bag - 1 - l1;
      if (l2 < bag || l2 >= level) continue;
      for (const auto& [u1, list1] : by_bag[l1]) {
        for (Mask out = u1; out; out &= out - 1) {
          Mask drop = out & (~out + 1);
          for (std::size_t add = 0; add < n; ++add) {
            if (u1 & bit(add)) continue;
            Mask u2 = (u1 & ~drop) | bit(add);
            auto it = by_bag[l2].find(u2);
            if (it == by_bag[l2].end()) continue;
            const Bits& shared = table.induced(u1 & u2);
            for (const Record* r1 : list1) {
              if (!bound_ok(r1->cost)) continue;
              for (const Record* r2 : it->second) {
                if (!bound_ok(std::max(r1->cost, r2->cost))) continue;
                bool consistent = true;
                for (std::size_t w = 0; w < table.words() && consistent; ++w) {
                  consistent = (r1->edges[w] & shared[w]) == (r2->edges[w] & shared[w]);
                }
                if (!consistent) continue;
                ++st.combinations;
                step();
                Record rec;
                rec.edges.resize(table.words());
                for (std::size_t w = 0; w < table.words(); ++w) rec.edges[w] = r1->edges[w] | r2->edges[w];
                rec.u = u1;
                rec.verts = r1->verts | r2->verts;
                rec.cost = table.cost_of(rec.edges);
                store(level, std::move(rec));
              }
            }
          }
        }
      }
    }
    index_level(level);
  }

  for (const auto& level : levels) {
    for (const auto& [key, rec] : level) {
      ++st.stored_records;
      std::size_t induced_edges = 0;
      for (std::size_t w = 0; w < table.words(); ++w) induced_edges += static_cast<std::size_t>(std::popcount(key[3 + w]));
      if (induced_edges <= cap) ++st.caps_respected;
    }
  }
  if (!best) return std::nullopt;
  return edge_list(best->edges);
}

}  // namespace

std::optional<DpResult> solve_dp(const WeightedDigraph& g, const Pattern& h, std::size_t omega,
                                 const DpOptions& options, DpStats* stats) {
  if (omega < 1) fail(ErrorKind::invalid_argument, "treewidth budget must be at least 1");
  if (h.empty()) fail(ErrorKind::invalid_argument, "pattern has no demands");
  if (g.num_edges() > options.max_edges) {
    fail(ErrorKind::size_guard, "dynamic program limited to " + std::to_string(options.max_edges) + " edges");
  }
  auto demands = bind_demands(g, h);
  DpStats local;
  DpStats& st = stats ? *stats : local;

  // only edges on some demand path can appear in an optimum
  std::vector<std::vector<VertexId>> from(demands.size()), to(demands.size());
  for (std::size_t i = 0; i < demands.size(); ++i) from[i] = reachable(g, demands[i].first);
  WeightedDigraph rev = g.reversed();
  for (std::size_t i = 0; i < demands.size(); ++i) to[i] = reachable(rev, demands[i].second);
  std::vector<bool> keep_vertex(g.num_vertices(), false);
  for (const auto& t : h.terminals()) keep_vertex[g.id(t)] = true;
  std::vector<WeightedDigraph::NamedEdge> kept;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    bool useful = false;
    for (std::size_t i = 0; i < demands.size() && !useful; ++i) {
      useful = std::binary_search(from[i].begin(), from[i].end(), edge.tail) &&
               std::binary_search(to[i].begin(), to[i].end(), edge.head);
    }
    if (!useful) continue;
    keep_vertex[edge.tail] = keep_vertex[edge.head] = true;
    kept.emplace_back(g.name(edge.tail), g.name(edge.head), edge.cost);
  }
  std::vector<std::string> names;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (keep_vertex[v]) names.push_back(g.name(v));
  }
  if (names.size() > std::min<std::size_t>(options.max_vertices, 64)) {
    fail(ErrorKind::size_guard, "dynamic program limited to " + std::to_string(options.max_vertices) + " vertices");
  }
  WeightedDigraph sub(names, kept);
  auto sub_demands = bind_demands(sub, h);
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const auto& [s, t] = sub_demands[i];
    auto r = reachable(sub, s);
    if (!std::binary_search(r.begin(), r.end(), t)) return std::nullopt;
  }

  std::optional<Cost> upper;
  if (auto heuristic = path_union(sub, sub_demands)) {
    if (omega + 1 >= sub.num_vertices() || elimination_width(*heuristic) <= omega) upper = heuristic->cost();
  }
  auto edges = run_table(sub, h, omega, upper, options, st);
  if (!edges) return std::nullopt;
  std::vector<EdgeId> host_edges;
  for (EdgeId e : *edges) host_edges.push_back(*g.find_edge(g.id(sub.name(sub.edge(e).tail)), g.id(sub.name(sub.edge(e).head))));
  SolutionNetwork network(g, host_edges);
  if (!feasible(network, h)) fail(ErrorKind::invalid_argument, "internal: dynamic program produced an infeasible network");
  network = minimalize(network, h);
  return DpResult{network, network.cost(), omega};
}

// --- entry keys --------------------------------------------------------------

namespace {

bool in_sorted(const std::vector<VertexId>& v, VertexId x) { return std::binary_search(v.begin(), v.end(), x); }

}  // namespace

std::optional<DpEntryKey> derive_entry_key(const SolutionNetwork& n, const Pattern& h, const std::vector<VertexId>& u,
                                           const StarDecomposition& stars) {
  const WeightedDigraph& g = n.host();
  auto verts = n.vertices();
  std::vector<VertexId> us = u;
  std::sort(us.begin(), us.end());
  for (VertexId x : us) {
    if (!in_sorted(verts, x)) return std::nullopt;
  }
  auto hs = host_stars(g, h, stars);
  std::vector<VertexId> r_in, r_out;
  for (const auto& s : hs) (s.orientation == Orientation::out ? r_out : r_in).push_back(s.root);
  std::sort(r_in.begin(), r_in.end());
  std::sort(r_out.begin(), r_out.end());

  DpEntryKey key;
  key.i = verts.size();
  key.u = us;
  for (const auto& t : h.terminals()) {
    VertexId v = g.id(t);
    if (in_sorted(verts, v)) key.q.push_back(v);
  }
  std::sort(key.q.begin(), key.q.end());
  for (EdgeId e : n.edges()) {
    if (in_sorted(us, g.edge(e).tail) && in_sorted(us, g.edge(e).head)) key.induced.push_back(e);
  }
  std::unordered_map<VertexId, std::vector<VertexId>> reach;
  auto reach_of = [&](VertexId v) -> const std::vector<VertexId>& {
    auto it = reach.find(v);
    if (it == reach.end()) it = reach.emplace(v, reachable(n, v)).first;
    return it->second;
  };
  for (VertexId a : us) {
    for (VertexId b : reach_of(a)) {
      if (a == b) continue;
      if (in_sorted(us, b) || in_sorted(r_in, b)) key.b.emplace_back(a, b);
    }
  }
  for (VertexId r : r_out) {
    if (!in_sorted(verts, r)) continue;
    for (VertexId b : reach_of(r)) {
      if (b != r && in_sorted(us, b)) key.b.emplace_back(r, b);
    }
  }
  std::sort(key.b.begin(), key.b.end());
  key.b.erase(std::unique(key.b.begin(), key.b.end()), key.b.end());
  for (const auto& s : hs) {
    std::vector<VertexId> a;
    for (VertexId l : s.leaves) {
      if (!in_sorted(verts, l)) continue;
      bool resolved = s.orientation == Orientation::out
                          ? (in_sorted(verts, s.root) && in_sorted(reach_of(s.root), l))
                          : in_sorted(reach_of(l), s.root);
      if (resolved) continue;
      bool any = false;
      for (VertexId w : us) {
        bool joined = s.orientation == Orientation::out ? in_sorted(reach_of(w), l) : in_sorted(reach_of(l), w);
        if (joined) {
          a.push_back(w);
          any = true;
        }
      }
      if (!any) return std::nullopt;
    }
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    key.a.push_back(std::move(a));
  }
  return key;
}

bool check_entry(const SolutionNetwork& n, const Pattern& h, const DpEntryKey& key, const StarDecomposition& stars) {
  const WeightedDigraph& g = n.host();
  auto verts = n.vertices();
  // (i)
  if (verts.size() > key.i) return false;
  for (VertexId x : key.u) {
    if (!in_sorted(verts, x)) return false;
  }
  std::vector<VertexId> q;
  for (const auto& t : h.terminals()) {
    VertexId v = g.id(t);
    if (in_sorted(verts, v)) q.push_back(v);
  }
  std::sort(q.begin(), q.end());
  std::vector<VertexId> kq = key.q;
  std::sort(kq.begin(), kq.end());
  if (q != kq) return false;
  // (ii)
  std::vector<VertexId> us = key.u;
  std::sort(us.begin(), us.end());
  std::vector<EdgeId> induced;
  for (EdgeId e : n.edges()) {
    if (in_sorted(us, g.edge(e).tail) && in_sorted(us, g.edge(e).head)) induced.push_back(e);
  }
  std::vector<EdgeId> ki = key.induced;
  std::sort(ki.begin(), ki.end());
  if (induced != ki) return false;
  // (iii)
  for (const auto& [a, b] : key.b) {
    if (a >= g.num_vertices() || b >= g.num_vertices()) return false;
    if (!in_sorted(reachable(n, a), b)) return false;
  }
  // (iv)
  auto hs = host_stars(g, h, stars);
  if (key.a.size() != hs.size()) return false;
  for (std::size_t j = 0; j < hs.size(); ++j) {
    std::vector<VertexId> sources = key.a[j];
    if (in_sorted(verts, hs[j].root)) sources.push_back(hs[j].root);
    for (VertexId l : hs[j].leaves) {
      if (!in_sorted(verts, l)) continue;
      bool ok = false;
      for (VertexId w : sources) {
        ok = hs[j].orientation == Orientation::out ? in_sorted(reachable(n, w), l) : in_sorted(reachable(n, l), w);
        if (ok) break;
      }
      if (!ok) return false;
    }
  }
  return true;
}

// --- path families -------------------------------------------------------------

PathFamily fixed_path_family(const SolutionNetwork& m, const Pattern& h) {
  const WeightedDigraph& g = m.host();
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<VertexId>> succ(n), pred(n);
  for (EdgeId e : m.edges()) {
    succ[g.edge(e).tail].push_back(g.edge(e).head);
    pred[g.edge(e).head].push_back(g.edge(e).tail);
  }
  for (auto& s : succ) std::sort(s.begin(), s.end());
  PathFamily family;
  std::vector<char> used(g.num_edges(), 0);
  for (const auto& [s, t] : bind_demands(g, h)) {
    constexpr std::size_t inf = static_cast<std::size_t>(-1);
    std::vector<std::size_t> to_t(n, inf);
    std::vector<VertexId> queue{t};
    to_t[t] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (VertexId w : pred[queue[i]]) {
        if (to_t[w] == inf) {
          to_t[w] = to_t[queue[i]] + 1;
          queue.push_back(w);
        }
      }
    }
    if (to_t[s] == inf) fail(ErrorKind::infeasible, "network does not satisfy demand " + g.name(s) + "->" + g.name(t));
    std::vector<VertexId> path{s};
    for (VertexId cur = s; cur != t;) {
      for (VertexId w : succ[cur]) {
        if (to_t[w] + 1 == to_t[cur]) {
          used[*g.find_edge(cur, w)] = 1;
          cur = w;
          break;
        }
      }
      path.push_back(cur);
    }
    family.paths.push_back(std::move(path));
  }
  family.covers_network = std::all_of(m.edges().begin(), m.edges().end(), [&](EdgeId e) { return used[e] != 0; });
  return family;
}

std::vector<std::pair<VertexId, VertexId>> u_projection(const SolutionNetwork& n, const std::vector<VertexId>& u,
                                                        const std::vector<std::vector<VertexId>>& paths) {
  const WeightedDigraph& g = n.host();
  std::vector<VertexId> us = u;
  std::sort(us.begin(), us.end());
  auto in_n = [&](VertexId a, VertexId b) {
    auto e = g.find_edge(a, b);
    return e && n.contains(*e);
  };
  std::vector<std::pair<VertexId, VertexId>> out;
  for (const auto& p : paths) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!in_sorted(us, p[i])) continue;
      for (std::size_t j = i + 1; j < p.size() && in_n(p[j - 1], p[j]); ++j) {
        if (in_sorted(us, p[j])) {
          out.emplace_back(p[i], p[j]);
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dsn
