#include "dsn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <limits>
#include <queue>
#include <span>

namespace dsn {

namespace {

constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;

enum : char { undecided = 0, included = 1, excluded = 2 };

class BranchAndBound {
 public:
  BranchAndBound(const WeightedDigraph& g, std::vector<std::pair<VertexId, VertexId>> demands, OracleStats* stats)
      : g_(g), demands_(std::move(demands)), stats_(stats) {
    is_source_.assign(g_.num_vertices(), 0);
    is_target_.assign(g_.num_vertices(), 0);
    for (const auto& [s, t] : demands_) {
      is_source_[s] = 1;
      is_target_[t] = 1;
    }
    source_index_.assign(g_.num_vertices(), -1);
    target_index_.assign(g_.num_vertices(), -1);
    for (VertexId v = 0; v < g_.num_vertices(); ++v) {
      if (is_source_[v]) {
        source_index_[v] = static_cast<int>(sources_.size());
        sources_.push_back(v);
      }
      if (is_target_[v]) {
        target_index_[v] = static_cast<int>(targets_.size());
        targets_.push_back(v);
      }
    }
  }

  std::optional<std::vector<EdgeId>> run() {
    seed_upper_bound();
    std::vector<char> status(g_.num_edges(), undecided);
    search(std::move(status));
    return best_;
  }

  Cost best_cost() const { return best_cost_; }

  // A minimal solution of cost at most `cap` that agrees with `status`, if any.
  std::optional<std::vector<EdgeId>> minimal_within(std::vector<char> status, Cost cap) {
    best_.reset();
    best_cost_ = cap + 1;
    want_minimal_ = true;
    search(std::move(status));
    want_minimal_ = false;
    return best_;
  }

 private:
  const WeightedDigraph& g_;
  std::vector<std::pair<VertexId, VertexId>> demands_;
  OracleStats* stats_;
  std::vector<char> is_source_, is_target_;
  std::vector<VertexId> sources_, targets_;
  std::vector<int> source_index_, target_index_;

  // Ends beyond the 64th are ignored, which only weakens the bound.
  static std::uint64_t end_bit(int index) {
    return index >= 0 && index < 64 ? std::uint64_t{1} << index : 0;
  }
  std::optional<std::vector<EdgeId>> best_;
  Cost best_cost_ = kInf;
  bool want_minimal_ = false;

  // BFS over edges whose status passes `usable`, optionally skipping one edge.
  template <class Usable>
  std::vector<char> forward(VertexId s, Usable usable, EdgeId skip = static_cast<EdgeId>(-1)) const {
    std::vector<char> seen(g_.num_vertices(), 0);
    std::vector<VertexId> queue{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (EdgeId e : g_.out_edges(queue[i])) {
        if (e == skip || !usable(e)) continue;
        VertexId w = g_.edge(e).head;
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    return seen;
  }

  template <class Usable>
  std::vector<char> backward(VertexId t, Usable usable) const {
    std::vector<char> seen(g_.num_vertices(), 0);
    std::vector<VertexId> queue{t};
    seen[t] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (EdgeId e : g_.in_edges(queue[i])) {
        if (!usable(e)) continue;
        VertexId w = g_.edge(e).tail;
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    return seen;
  }

  // Shortest s->t distance where edges in `zero` cost nothing.
  std::vector<Cost> dijkstra(VertexId s, const std::vector<char>& status, std::vector<EdgeId>* parent) const {
    std::vector<Cost> dist(g_.num_vertices(), kInf);
    if (parent) parent->assign(g_.num_vertices(), static_cast<EdgeId>(-1));
    using Item = std::pair<Cost, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0;
    pq.emplace(0, s);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != dist[u]) continue;
      for (EdgeId e : g_.out_edges(u)) {
        if (status[e] == excluded) continue;
        Cost w = status[e] == included ? 0 : g_.edge(e).cost;
        VertexId v = g_.edge(e).head;
        if (d + w < dist[v]) {
          dist[v] = d + w;
          if (parent) (*parent)[v] = e;
          pq.emplace(dist[v], v);
        }
      }
    }
    return dist;
  }

  void seed_upper_bound() {
    std::vector<char> status(g_.num_edges(), undecided);
    std::vector<char> chosen(g_.num_edges(), 0);
    for (const auto& [s, t] : demands_) {
      std::vector<EdgeId> parent;
      auto dist = dijkstra(s, status, &parent);
      if (dist[t] >= kInf) return;
      for (VertexId v = t; v != s; v = g_.edge(parent[v]).tail) {
        chosen[parent[v]] = 1;
        status[parent[v]] = included;
      }
    }
    std::vector<EdgeId> edges;
    for (EdgeId e = 0; e < g_.num_edges(); ++e) {
      if (chosen[e]) edges.push_back(e);
    }
    SolutionNetwork n = minimalize(SolutionNetwork(g_, edges), demands_);
    best_ = n.edges();
    best_cost_ = n.cost();
  }

  // Applies forced inclusions/exclusions; returns false if the branch is infeasible.
  bool propagate(std::vector<char>& status) const {
    auto available = [&](EdgeId e) { return status[e] != excluded; };
    auto chosen = [&](EdgeId e) { return status[e] == included; };
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::vector<char>> fwd(demands_.size()), bwd(demands_.size());
      for (std::size_t i = 0; i < demands_.size(); ++i) {
        const auto& [s, t] = demands_[i];
        fwd[i] = (i > 0 && demands_[i - 1].first == s) ? fwd[i - 1] : forward(s, available);
        if (!fwd[i][t]) return false;
        bwd[i] = backward(t, available);
      }
      for (EdgeId e = 0; e < g_.num_edges(); ++e) {
        if (status[e] != undecided) continue;
        const Edge& edge = g_.edge(e);
        bool useful = false;
        for (std::size_t i = 0; i < demands_.size() && !useful; ++i) {
          useful = fwd[i][edge.tail] && bwd[i][edge.head];
        }
        if (!useful) status[e] = excluded;
      }
      // bridges of unsatisfied demands must be included
      for (const auto& [s, t] : demands_) {
        if (forward(s, chosen)[t]) continue;
        std::vector<EdgeId> parent;
        auto dist = dijkstra(s, status, &parent);
        for (VertexId v = t; v != s; v = g_.edge(parent[v]).tail) {
          EdgeId e = parent[v];
          if (status[e] != undecided) continue;
          if (!forward(s, available, e)[t]) {
            status[e] = included;
            changed = true;
          }
        }
        (void)dist;
      }
      // a present vertex with a single way in (or out) must use it
      std::vector<char> present;
      if (mark_present(status, present) >= kInf) return false;
      for (VertexId v = 0; v < g_.num_vertices(); ++v) {
        if (!present[v]) continue;
        for (int side = 0; side < 2; ++side) {
          if (side == 0 ? !needs_in(v) : !needs_out(v)) continue;
          std::size_t count = 0;
          EdgeId only = 0;
          Cost c = cheapest(side == 0 ? g_.in_edges(v) : g_.out_edges(v), status, &count, &only);
          if (c >= kInf) return false;
          if (count == 1) {
            status[only] = included;
            changed = true;
          }
        }
      }
    }
    return true;
  }

  // Some optimum is minimal, and in a minimal solution every vertex other
  // than a source is entered and every vertex other than a target is left.
  // Vertices known to be in it: terminals, endpoints of included edges and
  // vertices separating an unsatisfied demand. Returns the largest shortest
  // unsatisfied-demand distance, or kInf when some demand is cut off.
  Cost mark_present(const std::vector<char>& status, std::vector<char>& present,
                    std::vector<std::uint64_t>* from = nullptr, std::vector<std::uint64_t>* to = nullptr) const {
    auto chosen = [&](EdgeId e) { return status[e] == included; };
    auto available = [&](EdgeId e) { return status[e] != excluded; };
    present.assign(g_.num_vertices(), 0);
    for (VertexId v : sources_) present[v] = 1;
    for (VertexId v : targets_) present[v] = 1;
    if (from) from->assign(g_.num_vertices(), 0);
    if (to) to->assign(g_.num_vertices(), 0);
    for (const auto& [s, t] : demands_) {
      if (from) (*from)[t] |= end_bit(source_index_[s]);
      if (to) (*to)[s] |= end_bit(target_index_[t]);
    }
    for (EdgeId e = 0; e < g_.num_edges(); ++e) {
      if (status[e] == included) present[g_.edge(e).tail] = present[g_.edge(e).head] = 1;
    }
    Cost path_bound = 0;
    for (const auto& [s, t] : demands_) {
      if (forward(s, chosen)[t]) continue;
      std::vector<EdgeId> parent;
      auto dist = dijkstra(s, status, &parent);
      if (dist[t] >= kInf) return kInf;
      path_bound = std::max(path_bound, dist[t]);
      // separators lie on every path, in particular on this one
      for (VertexId v = g_.edge(parent[t]).tail; v != s; v = g_.edge(parent[v]).tail) {
        if (present[v] && !from && !to) continue;
        auto avoid = [&](EdgeId e) { return available(e) && g_.edge(e).head != v; };
        if (forward(s, avoid)[t]) continue;
        present[v] = 1;
        if (from) (*from)[v] |= end_bit(source_index_[s]);
        if (to) (*to)[v] |= end_bit(target_index_[t]);
      }
    }
    return path_bound;
  }

  bool needs_in(VertexId v) const { return !is_source_[v] || is_target_[v]; }
  bool needs_out(VertexId v) const { return !is_target_[v] || is_source_[v]; }

  // Cheapest undecided edge among `edges`; 0 (and no candidates) when one is
  // already included, kInf when none is left.
  Cost cheapest(std::span<const EdgeId> edges, const std::vector<char>& status, std::size_t* candidates = nullptr,
                EdgeId* only = nullptr) const {
    Cost best = kInf;
    std::size_t count = 0;
    for (EdgeId e : edges) {
      if (status[e] == included) {
        if (candidates) *candidates = 0;
        return 0;
      }
      if (status[e] == undecided) {
        ++count;
        if (only) *only = e;
        best = std::min(best, g_.edge(e).cost);
      }
    }
    if (candidates) *candidates = count;
    return best;
  }

  // Cover bound for one side. On the entering side every present vertex v
  // needs entering edges whose tails together are reachable from each source
  // v depends on; a tail outside the present set must in turn be entered, and
  // that cost is split evenly over its available leaving edges. In a minimal
  // solution every edge is charged at most once in total. The leaving side
  // mirrors this with targets.
  class CoverBound {
   public:
    CoverBound(const BranchAndBound& bb, const std::vector<char>& status, const std::vector<char>& present,
               bool entering)
        : bb_(bb), status_(status), present_(present), entering_(entering) {
      const auto& g = bb.g_;
      const auto& ends = entering ? bb.sources_ : bb.targets_;
      reach_.assign(g.num_vertices(), 0);
      auto available = [&](EdgeId e) { return status[e] != excluded; };
      for (std::size_t i = 0; i < ends.size() && i < 64; ++i) {
        auto seen = entering ? bb.forward(ends[i], available) : bb.backward(ends[i], available);
        for (VertexId v = 0; v < g.num_vertices(); ++v) {
          if (seen[v]) reach_[v] |= std::uint64_t{1} << i;
        }
      }
      fan_.assign(g.num_vertices(), 0);
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        if (status[e] != excluded) ++fan_[entering ? g.edge(e).tail : g.edge(e).head];
      }
    }

    double charge(VertexId v, std::uint64_t need, int depth) {
      const auto& bb = bb_;
      int own = entering_ ? bb.source_index_[v] : bb.target_index_[v];
      need &= ~end_bit(own);
      bool any = entering_ ? !bb.is_source_[v] : !bb.is_target_[v];
      if (need == 0 && !any) return 0;
      auto key = std::tuple{v, need, depth};
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
      auto edges = entering_ ? bb.g_.in_edges(v) : bb.g_.out_edges(v);
      auto other = [&](EdgeId e) { return entering_ ? bb.g_.edge(e).tail : bb.g_.edge(e).head; };
      auto weight = [&](EdgeId e, std::uint64_t part) {
        if (status_[e] == included) return 0.0;
        double w = static_cast<double>(bb.g_.edge(e).cost);
        VertexId u = other(e);
        if (depth > 0 && !present_[u]) w += charge(u, part, depth - 1) / static_cast<double>(fan_[u]);
        return w;
      };
      double result = kHuge;
      if (need == 0) {
        for (EdgeId e : edges) {
          if (status_[e] != excluded) result = std::min(result, weight(e, 0));
        }
      } else {
        // cover the needed ends by blocks, each routed through one edge
        std::vector<std::uint64_t> bits;
        for (std::uint64_t m = need; m && bits.size() < 6; m &= m - 1) bits.push_back(m & (~m + 1));
        const std::size_t k = bits.size();
        auto to_mask = [&](std::size_t local) {
          std::uint64_t m = 0;
          for (std::size_t i = 0; i < k; ++i) {
            if (local >> i & 1U) m |= bits[i];
          }
          return m;
        };
        std::vector<double> best(std::size_t{1} << k, kHuge);
        best[0] = 0;
        for (std::size_t t = 1; t < best.size(); ++t) {
          // blocks containing the lowest element of t
          std::size_t low = t & (~t + 1);
          std::size_t rest = t ^ low;
          for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
            std::size_t block = sub | low;
            std::uint64_t part = to_mask(block);
            for (EdgeId e : edges) {
              if (status_[e] == excluded || (reach_[other(e)] & part) != part) continue;
              double w = weight(e, part) + best[t ^ block];
              best[t] = std::min(best[t], w);
            }
            if (sub == 0) break;
          }
        }
        result = best.back();
      }
      memo_.emplace(key, result);
      return result;
    }

    static constexpr double kHuge = 1e18;

   private:
    const BranchAndBound& bb_;
    const std::vector<char>& status_;
    const std::vector<char>& present_;
    bool entering_;
    std::vector<std::uint64_t> reach_;
    std::vector<std::size_t> fan_;
    std::map<std::tuple<VertexId, std::uint64_t, int>, double> memo_;
  };

  static constexpr int kCoverDepth = 3;

  Cost lower_bound(const std::vector<char>& status, Cost base) const {
    std::vector<char> present;
    std::vector<std::uint64_t> from, to;
    Cost path_bound = mark_present(status, present, &from, &to);
    if (path_bound >= kInf) return kInf;
    double bound = static_cast<double>(path_bound);
    for (bool entering : {true, false}) {
      CoverBound cover(*this, status, present, entering);
      double total = 0;
      for (VertexId v = 0; v < g_.num_vertices(); ++v) {
        if (present[v]) total += cover.charge(v, entering ? from[v] : to[v], kCoverDepth);
      }
      if (total >= CoverBound::kHuge / 2) return kInf;
      bound = std::max(bound, total);
    }
    // solution costs are integers
    return base + static_cast<Cost>(std::ceil(bound - 1e-6));
  }

  void search(std::vector<char> status) {
    if (want_minimal_ && best_) return;
    if (stats_) ++stats_->nodes;
    if (!propagate(status)) return;
    Cost base = 0;
    for (EdgeId e = 0; e < g_.num_edges(); ++e) {
      if (status[e] == included) base += g_.edge(e).cost;
    }
    if (base >= best_cost_) return;
    auto chosen = [&](EdgeId e) { return status[e] == included; };
    auto available = [&](EdgeId e) { return status[e] != excluded; };

    // pick the unsatisfied demand with the fewest frontier edges
    std::vector<EdgeId> branch;
    bool all_satisfied = true;
    for (const auto& [s, t] : demands_) {
      auto reached = forward(s, chosen);
      if (reached[t]) continue;
      all_satisfied = false;
      auto to_t = backward(t, available);
      std::vector<EdgeId> frontier;
      for (VertexId u = 0; u < g_.num_vertices(); ++u) {
        if (!reached[u]) continue;
        for (EdgeId e : g_.out_edges(u)) {
          if (status[e] == undecided && !reached[g_.edge(e).head] && to_t[g_.edge(e).head]) frontier.push_back(e);
        }
      }
      if (branch.empty() || frontier.size() < branch.size()) branch = std::move(frontier);
    }
    if (all_satisfied) {
      std::vector<EdgeId> edges;
      for (EdgeId e = 0; e < g_.num_edges(); ++e) {
        if (status[e] == included) edges.push_back(e);
      }
      if (want_minimal_ && minimalize(SolutionNetwork(g_, edges), demands_).num_edges() != edges.size()) return;
      best_ = std::move(edges);
      best_cost_ = base;
      return;
    }
    if (lower_bound(status, base) >= best_cost_) return;
    std::stable_sort(branch.begin(), branch.end(),
                     [&](EdgeId a, EdgeId b) { return g_.edge(a).cost < g_.edge(b).cost; });
    for (std::size_t i = 0; i < branch.size(); ++i) {
      std::vector<char> child = status;
      for (std::size_t j = 0; j < i; ++j) child[branch[j]] = excluded;
      child[branch[i]] = included;
      search(std::move(child));
    }
  }
};

}  // namespace

std::optional<SolveResult> brute_force_solve(const WeightedDigraph& graph, const Pattern& pattern,
                                             const OracleOptions& options, OracleStats* stats) {
  if (graph.num_edges() > options.max_edges) {
    fail(ErrorKind::size_guard, "oracle limited to " + std::to_string(options.max_edges) + " edges, graph has " +
                                    std::to_string(graph.num_edges()));
  }
  auto demands = bind_demands(graph, pattern);
  std::sort(demands.begin(), demands.end());
  BranchAndBound bb(graph, demands, stats);
  auto edges = bb.run();
  if (!edges) return std::nullopt;
  SolutionNetwork network = minimalize(SolutionNetwork(graph, *edges), demands);
  const Cost optimum = network.cost();

  // Lexicographically smallest minimal optimum: extend a prefix edge by edge,
  // asking whether some smaller next edge than the current witness still works.
  std::vector<EdgeId> witness = network.edges();
  std::vector<EdgeId> prefix;
  while (prefix.size() < witness.size()) {
    EdgeId next = witness[prefix.size()];
    EdgeId first = prefix.empty() ? 0 : prefix.back() + 1;
    for (EdgeId e = first; e < next; ++e) {
      std::vector<char> status(graph.num_edges(), undecided);
      for (EdgeId f = 0; f < e; ++f) status[f] = excluded;
      for (EdgeId f : prefix) status[f] = included;
      status[e] = included;
      if (auto found = bb.minimal_within(std::move(status), optimum)) {
        witness = std::move(*found);
        break;
      }
    }
    prefix.push_back(witness[prefix.size()]);
  }
  SolutionNetwork best(graph, witness);
  return SolveResult{best, best.cost()};
}

}  // namespace dsn
