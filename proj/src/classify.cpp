#include "dsn/classify.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace dsn {

namespace {

using Mask = std::uint64_t;

constexpr Mask bit(std::size_t i) { return Mask{1} << i; }

std::vector<Mask> reverse_masks(const std::vector<Mask>& adj) {
  std::vector<Mask> rev(adj.size(), 0);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (Mask m = adj[u]; m; m &= m - 1) rev[static_cast<std::size_t>(std::countr_zero(m))] |= bit(u);
  }
  return rev;
}

std::vector<Pattern::Demand> mask_edges(const std::vector<Mask>& adj) {
  std::vector<Pattern::Demand> edges;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (Mask m = adj[u]; m; m &= m - 1) edges.emplace_back(u, static_cast<std::size_t>(std::countr_zero(m)));
  }
  return edges;
}

Pattern pattern_from_masks(const std::vector<std::string>& terminals, const std::vector<Mask>& adj) {
  return Pattern::from_indices(terminals, mask_edges(adj));
}

void check_guard(const Pattern& h, std::size_t guard) {
  if (h.num_terminals() > guard) {
    fail(ErrorKind::size_guard, "pattern has " + std::to_string(h.num_terminals()) +
                                    " vertices, classification guard is " + std::to_string(guard));
  }
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t count, std::size_t first = 1) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) names.push_back(prefix + std::to_string(first + i));
  return names;
}

// Certificate from a spine and a leaf -> spine-position assignment on pattern p.
CaterpillarCertificate make_certificate(Orientation orientation, std::vector<std::size_t> spine,
                                        const std::map<std::size_t, std::size_t>& leaf_to_spine, Pattern p) {
  CaterpillarCertificate cert;
  cert.orientation = orientation;
  cert.spine = std::move(spine);
  cert.stars.resize(cert.spine.size());
  for (std::size_t i = 0; i < cert.spine.size(); ++i) cert.stars[i].push_back(cert.spine[i]);
  for (const auto& [leaf, pos] : leaf_to_spine) cert.stars[pos].push_back(leaf);
  for (auto& star : cert.stars) std::sort(star.begin(), star.end());
  cert.equivalent_pattern = std::move(p);
  auto covered = cert.caterpillar_edges();
  for (const auto& e : cert.equivalent_pattern.demands()) {
    if (!std::binary_search(covered.begin(), covered.end(), e)) cert.extra_edges.push_back(e);
  }
  return cert;
}

// Assigns every non-spine vertex with an arc from the spine to the first such spine vertex.
std::map<std::size_t, std::size_t> greedy_leaves(const std::vector<Mask>& oriented, const std::vector<std::size_t>& spine) {
  Mask on_spine = 0;
  for (std::size_t v : spine) on_spine |= bit(v);
  std::map<std::size_t, std::size_t> assignment;
  for (std::size_t i = 0; i < spine.size(); ++i) {
    for (Mask m = oriented[spine[i]] & ~on_spine; m; m &= m - 1) {
      assignment.emplace(static_cast<std::size_t>(std::countr_zero(m)), i);
    }
  }
  return assignment;
}

struct SpineChoice {
  std::size_t covered = 0;
  std::vector<std::size_t> spine;
};

// Vertex set of at most lambda vertices carrying a Hamiltonian path that
// maximises the number of caterpillar edges (spine arcs plus one arc per leaf).
SpineChoice best_spine(const std::vector<Mask>& adj, std::size_t lambda) {
  const std::size_t n = adj.size();
  SpineChoice best;
  if (lambda == 0 || n == 0) return best;
  std::vector<Mask> ends(std::size_t{1} << n, 0);
  for (std::size_t v = 0; v < n; ++v) ends[bit(v)] = bit(v);
  std::size_t best_size = 0;
  Mask best_set = 0;
  for (Mask s = 1; s < ends.size(); ++s) {
    if (!ends[s]) continue;
    auto size = static_cast<std::size_t>(std::popcount(s));
    if (size < lambda) {
      for (Mask e = ends[s]; e; e &= e - 1) {
        for (Mask w = adj[static_cast<std::size_t>(std::countr_zero(e))] & ~s; w; w &= w - 1) {
          Mask next = w & (~w + 1);
          ends[s | next] |= next;
        }
      }
    }
    Mask out = 0;
    for (Mask m = s; m; m &= m - 1) out |= adj[static_cast<std::size_t>(std::countr_zero(m))];
    std::size_t covered = size - 1 + static_cast<std::size_t>(std::popcount(out & ~s));
    if (covered > best.covered || (covered == best.covered && best_set != 0 && size < best_size)) {
      best.covered = covered;
      best_size = size;
      best_set = s;
    }
  }
  if (best_set == 0) return best;
  // walk the path backwards from its lowest possible end vertex
  std::vector<std::size_t> path;
  Mask cur = best_set;
  auto last = static_cast<std::size_t>(std::countr_zero(ends[cur]));
  path.push_back(last);
  while (std::popcount(cur) > 1) {
    Mask rest = cur & ~bit(last);
    for (Mask e = ends[rest]; e; e &= e - 1) {
      auto u = static_cast<std::size_t>(std::countr_zero(e));
      if (adj[u] & bit(last)) {
        last = u;
        break;
      }
    }
    path.push_back(last);
    cur = rest;
  }
  std::reverse(path.begin(), path.end());
  best.spine = std::move(path);
  return best;
}

// --- closure-preserving augmentation ------------------------------------------

struct ClosureShape {
  std::vector<Mask> closure;
  std::vector<Mask> components;  // strongly connected classes of the closure
  std::vector<std::pair<Mask, Mask>> cover_arcs;  // transitive reduction of the condensation
};

ClosureShape closure_shape(const std::vector<Mask>& adj) {
  ClosureShape shape;
  shape.closure = closure_masks(adj);
  const std::size_t n = adj.size();
  Mask assigned = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (assigned & bit(v)) continue;
    Mask comp = bit(v);
    for (std::size_t u = 0; u < n; ++u) {
      if ((shape.closure[v] & bit(u)) && (shape.closure[u] & bit(v))) comp |= bit(u);
    }
    assigned |= comp;
    shape.components.push_back(comp);
  }
  auto reaches = [&](Mask a, Mask b) {
    auto v = static_cast<std::size_t>(std::countr_zero(a));
    return (shape.closure[v] & b) != 0;
  };
  for (Mask a : shape.components) {
    for (Mask b : shape.components) {
      if (a == b || !reaches(a, b)) continue;
      bool direct = true;
      for (Mask c : shape.components) {
        if (c != a && c != b && reaches(a, c) && reaches(c, b)) direct = false;
      }
      if (direct) shape.cover_arcs.emplace_back(a, b);
    }
  }
  return shape;
}

// Minimum number of arcs inside `within` that make adj[within] strongly connected.
std::size_t strong_augmentation(const std::vector<Mask>& adj, Mask within) {
  if (std::popcount(within) < 2) return 0;
  std::vector<std::size_t> verts;
  for (Mask m = within; m; m &= m - 1) verts.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  std::vector<Mask> local(adj.size(), 0);
  for (std::size_t v : verts) local[v] = adj[v] & within;
  auto reach = closure_masks(local);
  std::vector<Mask> comps;
  Mask seen = 0;
  for (std::size_t v : verts) {
    if (seen & bit(v)) continue;
    Mask comp = bit(v);
    for (std::size_t u : verts) {
      if ((reach[v] & bit(u)) && (reach[u] & bit(v))) comp |= bit(u);
    }
    seen |= comp;
    comps.push_back(comp);
  }
  if (comps.size() == 1) return 0;
  std::size_t sources = 0, sinks = 0, isolated = 0;
  for (Mask c : comps) {
    bool has_out = false, has_in = false;
    for (std::size_t v : verts) {
      if (c & bit(v)) {
        if (local[v] & ~c) has_out = true;
      } else if (local[v] & c) {
        has_in = true;
      }
    }
    if (!has_in && !has_out) {
      ++isolated;
    } else if (!has_in) {
      ++sources;
    } else if (!has_out) {
      ++sinks;
    }
  }
  return std::max(sources + isolated, sinks + isolated);
}

std::size_t augmentation_size(const ClosureShape& shape, const std::vector<Mask>& c) {
  std::size_t total = 0;
  for (const auto& [a, b] : shape.cover_arcs) {
    bool met = false;
    for (Mask m = a; m && !met; m &= m - 1) met = (c[static_cast<std::size_t>(std::countr_zero(m))] & b) != 0;
    if (!met) ++total;
  }
  for (Mask comp : shape.components) total += strong_augmentation(c, comp);
  return total;
}

// Adds a minimum set of closure arcs so that c has the prescribed closure.
std::vector<Mask> augment(const ClosureShape& shape, std::vector<Mask> c) {
  for (const auto& [a, b] : shape.cover_arcs) {
    bool met = false;
    for (Mask m = a; m && !met; m &= m - 1) met = (c[static_cast<std::size_t>(std::countr_zero(m))] & b) != 0;
    if (!met) c[static_cast<std::size_t>(std::countr_zero(a))] |= b & (~b + 1);
  }
  for (Mask comp : shape.components) {
    std::size_t need = strong_augmentation(c, comp);
    while (need > 0) {
      bool added = false;
      for (Mask mu = comp; mu && !added; mu &= mu - 1) {
        auto u = static_cast<std::size_t>(std::countr_zero(mu));
        for (Mask mv = comp & ~bit(u) & ~c[u]; mv && !added; mv &= mv - 1) {
          c[u] |= mv & (~mv + 1);
          std::size_t after = strong_augmentation(c, comp);
          if (after < need) {
            need = after;
            added = true;
          } else {
            c[u] &= ~(mv & (~mv + 1));
          }
        }
      }
      if (!added) fail(ErrorKind::invalid_argument, "internal: strong augmentation stalled");
    }
  }
  return c;
}

// --- matching-based and diamond-based obstructions ----------------------------

Obstruction cycle_from_matching(std::size_t n, const std::vector<Pattern::Demand>& edges, std::size_t alpha) {
  Obstruction obs;
  obs.kind = ObstructionKind::cycle;
  obs.alpha = alpha;
  obs.matching.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(alpha));
  std::vector<std::vector<std::size_t>> classes(alpha);
  std::vector<bool> placed(n, false);
  for (std::size_t i = 0; i < alpha; ++i) {
    std::size_t head = obs.matching[i].second;
    std::size_t next_tail = obs.matching[(i + 1) % alpha].first;
    classes[i].push_back(head);
    placed[head] = true;
    if (!placed[next_tail]) {
      classes[i].push_back(next_tail);
      placed[next_tail] = true;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!placed[v]) classes[0].push_back(v);
  }
  for (auto& c : classes) std::sort(c.begin(), c.end());
  obs.partition = std::move(classes);
  return obs;
}

Obstruction cycle_from_stars(std::size_t n, std::size_t in_root, std::vector<std::size_t> in_leaves,
                             std::size_t out_root, std::vector<std::size_t> out_leaves, std::size_t alpha) {
  // align shared leaves to equal positions
  std::vector<std::size_t> s, t;
  for (std::size_t v : in_leaves) {
    if (std::find(out_leaves.begin(), out_leaves.end(), v) != out_leaves.end()) {
      s.push_back(v);
      t.push_back(v);
    }
  }
  for (std::size_t v : in_leaves) {
    if (std::find(t.begin(), t.end(), v) == t.end()) s.push_back(v);
  }
  for (std::size_t v : out_leaves) {
    if (std::find(s.begin(), s.end(), v) == s.end()) t.push_back(v);
  }
  Obstruction obs;
  obs.kind = ObstructionKind::cycle;
  obs.alpha = alpha;
  std::vector<bool> placed(n, false);
  std::vector<std::vector<std::size_t>> classes(1);
  for (std::size_t i = 0; i + 1 < alpha; ++i) {
    std::vector<std::size_t> c{s[i]};
    if (t[i] != s[i]) c.push_back(t[i]);
    for (std::size_t v : c) placed[v] = true;
    classes.push_back(std::move(c));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!placed[v]) classes[0].push_back(v);
  }
  (void)in_root;
  (void)out_root;
  for (auto& c : classes) std::sort(c.begin(), c.end());
  obs.partition = std::move(classes);
  return obs;
}

std::vector<std::size_t> mask_list(Mask m) {
  std::vector<std::size_t> out;
  for (; m; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  return out;
}

Obstruction diamond_from_stars(const std::vector<Mask>& adj, std::size_t r1, Mask leaves1, std::size_t r2,
                               Mask leaves2, std::size_t alpha, Orientation orientation) {
  const std::size_t n = adj.size();
  Mask shared = leaves1 & leaves2;
  DiamondWitness dw;
  dw.r1 = r1;
  dw.r2 = r2;
  for (std::size_t v : mask_list(shared)) {
    if (dw.s.size() == alpha) break;
    dw.s.push_back(v);
    dw.t.push_back(v);
  }
  for (std::size_t v : mask_list(leaves1 & ~shared)) {
    if (dw.s.size() < alpha) dw.s.push_back(v);
  }
  for (std::size_t v : mask_list(leaves2 & ~shared)) {
    if (dw.t.size() < alpha) dw.t.push_back(v);
  }
  Mask stars = bit(r1) | bit(r2);
  for (std::size_t i = 0; i < alpha; ++i) stars |= bit(dw.s[i]) | bit(dw.t[i]);
  auto reach = closure_masks(adj);
  Mask y1 = reach[r1] & ~stars;
  Mask y2 = reach[r2] & ~stars;
  Mask all = n == 64 ? ~Mask{0} : bit(n) - 1;
  Mask w1 = y1 & ~y2, w2 = y2 & ~y1, w = y1 & y2, u = all & ~(stars | y1 | y2);
  dw.w1 = mask_list(w1);
  dw.w2 = mask_list(w2);
  dw.w = mask_list(w);
  dw.u = mask_list(u);
  std::optional<std::size_t> to1, to2;
  for (std::size_t v : dw.u) {
    if (!to1 && (reach[v] & (w1 | bit(r1)))) to1 = v;
    if (!to2 && (reach[v] & (w2 | bit(r2)))) to2 = v;
  }
  std::vector<std::size_t> c1{r1}, c2{r2}, cl{dw.s[0]};
  if (dw.t[0] != dw.s[0]) cl.push_back(dw.t[0]);
  c1.insert(c1.end(), dw.w1.begin(), dw.w1.end());
  c2.insert(c2.end(), dw.w2.begin(), dw.w2.end());
  cl.insert(cl.end(), dw.w.begin(), dw.w.end());
  bool flawed = to1 && to2;
  std::vector<std::size_t> cu;
  if (flawed) {
    dw.x = to1;
    cu = dw.u;
  } else if (to1) {
    c1.insert(c1.end(), dw.u.begin(), dw.u.end());
  } else {
    c2.insert(c2.end(), dw.u.begin(), dw.u.end());
  }
  Obstruction obs;
  obs.alpha = alpha;
  if (orientation == Orientation::out) {
    obs.kind = flawed ? ObstructionKind::flawed_out_diamond : ObstructionKind::pure_out_diamond;
  } else {
    obs.kind = flawed ? ObstructionKind::flawed_in_diamond : ObstructionKind::pure_in_diamond;
  }
  obs.partition = {c1, c2, cl};
  for (std::size_t i = 1; i < alpha; ++i) {
    std::vector<std::size_t> c{dw.s[i]};
    if (dw.t[i] != dw.s[i]) c.push_back(dw.t[i]);
    obs.partition.push_back(std::move(c));
  }
  if (!cu.empty()) obs.partition.push_back(std::move(cu));
  for (auto& c : obs.partition) std::sort(c.begin(), c.end());
  obs.diamond = std::move(dw);
  return obs;
}

// The out-oriented core of the decomposition: adj has few E_I arcs into X.
Classification decompose_out(const std::vector<Mask>& adj, Mask x_set, std::size_t alpha, Orientation orientation,
                             const std::vector<std::string>& terminals) {
  const std::size_t n = adj.size();
  auto rev = reverse_masks(adj);
  // leaves with an arc into X are charged to F together with all their arcs
  Mask bad = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!(x_set & bit(v)) && (adj[v] & x_set)) bad |= bit(v);
  }
  std::vector<Mask> star(n, 0);
  std::vector<std::size_t> big;
  for (std::size_t v : mask_list(x_set)) {
    star[v] = adj[v] & ~x_set & ~bad;
    if (static_cast<std::size_t>(std::popcount(star[v])) >= alpha) big.push_back(v);
  }
  for (std::size_t i = 0; i < big.size(); ++i) {
    for (std::size_t j = i + 1; j < big.size(); ++j) {
      std::size_t a = big[i], b = big[j];
      if (!(adj[a] & bit(b)) && !(adj[b] & bit(a))) {
        return diamond_from_stars(adj, a, star[a], b, star[b], alpha, orientation);
      }
    }
  }
  Digraph semi;
  semi.n = big.size();
  for (std::size_t i = 0; i < big.size(); ++i) {
    for (std::size_t j = 0; j < big.size(); ++j) {
      if (i != j && (adj[big[i]] & bit(big[j]))) semi.arcs.emplace_back(i, j);
    }
  }
  std::vector<std::size_t> spine;
  for (VertexId i : hamiltonian_path_semicomplete(semi)) spine.push_back(big[i]);
  std::map<std::size_t, std::size_t> leaves;
  for (std::size_t i = 0; i < spine.size(); ++i) {
    for (std::size_t l : mask_list(star[spine[i]])) leaves.emplace(l, i);
  }
  (void)rev;
  if (orientation == Orientation::out) {
    return make_certificate(Orientation::out, spine, leaves, pattern_from_masks(terminals, adj));
  }
  std::reverse(spine.begin(), spine.end());
  for (auto& [leaf, pos] : leaves) pos = spine.size() - 1 - pos;
  return make_certificate(Orientation::in, spine, leaves, pattern_from_masks(terminals, reverse_masks(adj)));
}

}  // namespace

const char* to_string(Orientation o) { return o == Orientation::out ? "out" : "in"; }

const char* to_string(ObstructionKind k) {
  switch (k) {
    case ObstructionKind::cycle: return "cycle";
    case ObstructionKind::pure_out_diamond: return "pure-out-diamond";
    case ObstructionKind::pure_in_diamond: return "pure-in-diamond";
    case ObstructionKind::flawed_out_diamond: return "flawed-out-diamond";
    case ObstructionKind::flawed_in_diamond: return "flawed-in-diamond";
  }
  return "?";
}

std::vector<Pattern::Demand> CaterpillarCertificate::caterpillar_edges() const {
  std::vector<Pattern::Demand> edges;
  for (std::size_t i = 0; i + 1 < spine.size(); ++i) edges.emplace_back(spine[i], spine[i + 1]);
  for (std::size_t i = 0; i < spine.size() && i < stars.size(); ++i) {
    for (std::size_t l : stars[i]) {
      if (l == spine[i]) continue;
      if (orientation == Orientation::out) {
        edges.emplace_back(spine[i], l);
      } else {
        edges.emplace_back(l, spine[i]);
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

// --- families -----------------------------------------------------------------

Pattern directed_cycle_pattern(std::size_t length) {
  std::vector<Pattern::Demand> d;
  if (length >= 2) {
    for (std::size_t i = 0; i < length; ++i) d.emplace_back(i, (i + 1) % length);
  }
  return Pattern::from_indices(numbered("c", length, 0), d);
}

Pattern out_star_pattern(std::size_t leaves) { return rst_pattern(leaves, 0); }

Pattern in_star_pattern(std::size_t leaves) { return out_star_pattern(leaves).reversed(); }

Pattern rst_pattern(std::size_t leaves, std::size_t bidirected) {
  std::vector<std::string> names{"r"};
  auto ls = numbered("l", leaves);
  names.insert(names.end(), ls.begin(), ls.end());
  std::vector<Pattern::Demand> d;
  for (std::size_t i = 1; i <= leaves; ++i) {
    d.emplace_back(0, i);
    if (i <= bidirected) d.emplace_back(i, 0);
  }
  return Pattern::from_indices(names, d);
}

Pattern diamond_pattern(std::size_t alpha, Orientation orientation, bool flawed) {
  std::vector<std::string> names{"r1", "r2"};
  auto ls = numbered("l", alpha);
  names.insert(names.end(), ls.begin(), ls.end());
  std::vector<Pattern::Demand> d;
  for (std::size_t i = 0; i < alpha; ++i) {
    d.emplace_back(0, 2 + i);
    d.emplace_back(1, 2 + i);
  }
  if (flawed) {
    names.push_back("x");
    d.emplace_back(names.size() - 1, 0);
    d.emplace_back(names.size() - 1, 1);
  }
  Pattern p = Pattern::from_indices(names, d);
  return orientation == Orientation::out ? p : p.reversed();
}

// --- membership -----------------------------------------------------------------

std::optional<CaterpillarCertificate> is_caterpillar(const Pattern& h, std::size_t lambda, std::size_t guard) {
  return in_C_lambda_delta(h, lambda, 0, guard);
}

std::optional<CaterpillarCertificate> in_C_lambda_delta(const Pattern& h, std::size_t lambda, std::size_t delta,
                                                        std::size_t guard) {
  check_guard(h, guard);
  auto adj = h.adjacency();
  auto rev = reverse_masks(adj);
  SpineChoice out = best_spine(adj, lambda);
  SpineChoice in = best_spine(rev, lambda);
  std::optional<CaterpillarCertificate> cert;
  if (in.covered > out.covered) {
    std::vector<std::size_t> spine(in.spine.rbegin(), in.spine.rend());
    cert = make_certificate(Orientation::in, spine, greedy_leaves(rev, spine), h);
  } else {
    cert = make_certificate(Orientation::out, out.spine, greedy_leaves(adj, out.spine), h);
  }
  if (cert->extra_edges.size() > delta) return std::nullopt;
  return cert;
}

std::optional<CaterpillarCertificate> in_C_star(const Pattern& h, std::size_t lambda, std::size_t delta,
                                                std::size_t guard) {
  if (auto direct = in_C_lambda_delta(h, lambda, delta, guard)) return direct;
  const std::size_t n = h.num_terminals();
  ClosureShape shape = closure_shape(h.adjacency());
  std::optional<CaterpillarCertificate> found;

  for (Orientation orientation : {Orientation::out, Orientation::in}) {
    const std::vector<Mask> oriented =
        orientation == Orientation::out ? shape.closure : reverse_masks(shape.closure);
    std::vector<std::size_t> path;
    Mask used = 0;

    // every maximal leaf assignment for the current spine
    auto try_spine = [&]() -> bool {
      std::vector<std::size_t> leaves;
      std::vector<std::vector<std::size_t>> options;
      for (std::size_t l = 0; l < n; ++l) {
        if (used & bit(l)) continue;
        std::vector<std::size_t> opts;
        for (std::size_t i = 0; i < path.size(); ++i) {
          if (oriented[path[i]] & bit(l)) opts.push_back(i);
        }
        if (!opts.empty()) {
          leaves.push_back(l);
          options.push_back(std::move(opts));
        }
      }
      std::vector<std::size_t> pick(leaves.size(), 0);
      while (true) {
        std::vector<Mask> c(n, 0);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) c[path[i]] |= bit(path[i + 1]);
        for (std::size_t j = 0; j < leaves.size(); ++j) c[path[options[j][pick[j]]]] |= bit(leaves[j]);
        std::vector<Mask> c_orig = orientation == Orientation::out ? c : reverse_masks(c);
        if (augmentation_size(shape, c_orig) <= delta) {
          auto full = augment(shape, c_orig);
          std::map<std::size_t, std::size_t> assignment;
          std::vector<std::size_t> spine = path;
          for (std::size_t j = 0; j < leaves.size(); ++j) assignment.emplace(leaves[j], options[j][pick[j]]);
          if (orientation == Orientation::in) {
            std::reverse(spine.begin(), spine.end());
            for (auto& [leaf, pos] : assignment) pos = spine.size() - 1 - pos;
          }
          found = make_certificate(orientation, spine, assignment, pattern_from_masks(h.terminals(), full));
          return true;
        }
        std::size_t j = 0;
        while (j < pick.size() && ++pick[j] == options[j].size()) pick[j++] = 0;
        if (j == pick.size()) return false;
      }
    };

    if (orientation == Orientation::out && try_spine()) return found;
    std::function<bool()> extend = [&]() -> bool {
      if (!path.empty() && try_spine()) return true;
      if (path.size() == lambda) return false;
      Mask next = path.empty() ? (n == 64 ? ~Mask{0} : bit(n) - 1) : oriented[path.back()];
      for (Mask m = next & ~used; m; m &= m - 1) {
        auto v = static_cast<std::size_t>(std::countr_zero(m));
        path.push_back(v);
        used |= bit(v);
        if (extend()) return true;
        used &= ~bit(v);
        path.pop_back();
      }
      return false;
    };
    if (extend()) return found;
  }
  return std::nullopt;
}

// --- covers, stars, identification -------------------------------------------------

VertexCover vertex_cover_number(const Pattern& h) {
  const std::size_t n = h.num_terminals();
  auto covers = [&](const std::vector<std::size_t>& set) {
    std::vector<bool> in(n, false);
    for (std::size_t v : set) in[v] = true;
    for (const auto& [s, t] : h.demands()) {
      if (!in[s] && !in[t]) return false;
    }
    return true;
  };
  for (std::size_t size = 0; size <= n; ++size) {
    std::vector<std::size_t> set(size);
    std::iota(set.begin(), set.end(), std::size_t{0});
    while (true) {
      if (covers(set)) return {size, set};
      // next combination in lexicographic order
      std::size_t i = size;
      while (i > 0 && set[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++set[i - 1];
      for (std::size_t j = i; j < size; ++j) set[j] = set[j - 1] + 1;
    }
  }
  return {n, {}};
}

StarDecomposition star_decomposition(const Pattern& h) {
  StarDecomposition sd;
  VertexCover vc = vertex_cover_number(h);
  sd.vertex_cover = vc.cover;
  sd.tau = vc.tau;
  const std::size_t n = h.num_terminals();
  std::vector<std::size_t> rank(n, n);
  for (std::size_t i = 0; i < vc.cover.size(); ++i) rank[vc.cover[i]] = i;
  std::vector<std::vector<std::size_t>> out(vc.cover.size()), in(vc.cover.size());
  for (const auto& [s, t] : h.demands()) {
    if (rank[s] < n && (rank[t] == n || rank[s] < rank[t])) {
      out[rank[s]].push_back(t);
    } else {
      in[rank[t]].push_back(s);
    }
  }
  for (std::size_t i = 0; i < vc.cover.size(); ++i) {
    if (!out[i].empty()) sd.stars.push_back({vc.cover[i], out[i], Orientation::out});
    if (!in[i].empty()) sd.stars.push_back({vc.cover[i], in[i], Orientation::in});
  }
  for (auto& star : sd.stars) std::sort(star.leaves.begin(), star.leaves.end());
  return sd;
}

Pattern identify_terminals(const Pattern& h, const std::vector<std::vector<std::size_t>>& partition) {
  const std::size_t n = h.num_terminals();
  std::vector<std::size_t> class_of(n, n);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < partition.size(); ++c) {
    if (partition[c].empty()) fail(ErrorKind::invalid_argument, "empty class in identification partition");
    for (std::size_t v : partition[c]) {
      if (v >= n) fail(ErrorKind::invalid_argument, "identification partition names an unknown vertex");
      if (class_of[v] != n) fail(ErrorKind::invalid_argument, "vertex '" + h.terminal(v) + "' appears in two classes");
      class_of[v] = c;
    }
    names.push_back(h.terminal(partition[c].front()));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (class_of[v] == n) fail(ErrorKind::invalid_argument, "vertex '" + h.terminal(v) + "' is not in any class");
  }
  std::vector<Pattern::Demand> d;
  for (const auto& [s, t] : h.demands()) {
    if (class_of[s] != class_of[t]) d.emplace_back(class_of[s], class_of[t]);
  }
  return Pattern::from_indices(names, d);
}

Matching max_matching(const Pattern& h) {
  const std::size_t n = h.num_terminals();
  if (n > 64) fail(ErrorKind::size_guard, "matching limited to 64 vertices");
  // first demand for each undirected pair
  std::map<std::pair<std::size_t, std::size_t>, Pattern::Demand> pairs;
  std::vector<Mask> nb(n, 0);
  for (const auto& e : h.demands()) {
    pairs.emplace(std::minmax(e.first, e.second), e);
    nb[e.first] |= bit(e.second);
    nb[e.second] |= bit(e.first);
  }
  std::unordered_map<Mask, std::size_t> memo;
  std::function<std::size_t(Mask)> best = [&](Mask used) -> std::size_t {
    auto it = memo.find(used);
    if (it != memo.end()) return it->second;
    std::size_t v = n;
    for (std::size_t u = 0; u < n; ++u) {
      if (!(used & bit(u)) && (nb[u] & ~used)) {
        v = u;
        break;
      }
    }
    std::size_t value = 0;
    if (v < n) {
      value = best(used | bit(v));
      for (Mask m = nb[v] & ~used; m; m &= m - 1) {
        value = std::max(value, 1 + best(used | bit(v) | (m & (~m + 1))));
      }
    }
    memo.emplace(used, value);
    return value;
  };
  Matching result;
  result.size = best(0);
  Mask used = 0;
  for (std::size_t remaining = result.size; remaining > 0;) {
    std::size_t v = n;
    for (std::size_t u = 0; u < n; ++u) {
      if (!(used & bit(u)) && (nb[u] & ~used)) {
        v = u;
        break;
      }
    }
    bool matched = false;
    for (Mask m = nb[v] & ~used; m && !matched; m &= m - 1) {
      Mask w = m & (~m + 1);
      if (1 + best(used | bit(v) | w) == remaining) {
        auto wi = static_cast<std::size_t>(std::countr_zero(w));
        result.edges.push_back(pairs.at(std::minmax(v, wi)));
        used |= bit(v) | w;
        --remaining;
        matched = true;
      }
    }
    if (!matched) used |= bit(v);
  }
  std::sort(result.edges.begin(), result.edges.end());
  return result;
}

std::vector<VertexId> hamiltonian_path_semicomplete(const Digraph& d) {
  std::set<std::pair<VertexId, VertexId>> arcs(d.arcs.begin(), d.arcs.end());
  auto has = [&](VertexId u, VertexId v) { return arcs.count({u, v}) > 0; };
  for (VertexId u = 0; u < d.n; ++u) {
    for (VertexId v = u + 1; v < d.n; ++v) {
      if (!has(u, v) && !has(v, u)) {
        fail(ErrorKind::invalid_argument,
             "digraph is not semicomplete: no arc between " + std::to_string(u) + " and " + std::to_string(v));
      }
    }
  }
  std::vector<VertexId> path;
  for (VertexId v = 0; v < d.n; ++v) {
    if (path.empty() || has(v, path.front())) {
      path.insert(path.begin(), v);
    } else if (has(path.back(), v)) {
      path.push_back(v);
    } else {
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (has(path[i], v) && has(v, path[i + 1])) {
          path.insert(path.begin() + static_cast<std::ptrdiff_t>(i) + 1, v);
          break;
        }
      }
    }
  }
  return path;
}

// --- decomposition ---------------------------------------------------------------

Classification decompose_or_obstruct(const Pattern& h, std::size_t alpha) {
  if (alpha < 1) fail(ErrorKind::invalid_argument, "alpha must be at least 1");
  const std::size_t n = h.num_terminals();
  Matching m = max_matching(h);
  if (m.size >= alpha) return cycle_from_matching(n, m.edges, alpha);

  VertexCover vc = vertex_cover_number(h);
  Mask x_set = 0;
  for (std::size_t v : vc.cover) x_set |= bit(v);
  auto adj = h.adjacency();
  auto closure = closure_masks(adj);
  std::vector<Mask> hp(n, 0);
  for (std::size_t u : vc.cover) hp[u] = closure[u] & x_set;
  for (const auto& [s, t] : h.demands()) {
    if (!(x_set & bit(s)) || !(x_set & bit(t))) hp[s] |= bit(t);
  }
  // drop transitively redundant arcs that touch I, in ascending (tail, head) order
  for (const auto& [s, t] : h.demands()) {
    if ((x_set & bit(s)) && (x_set & bit(t))) continue;
    hp[s] &= ~bit(t);
    if (!(closure_masks(hp)[s] & bit(t))) hp[s] |= bit(t);
  }

  std::optional<std::size_t> big_in, big_out;
  if (alpha >= 2) {
    for (std::size_t x : vc.cover) {
      std::size_t in = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (!(x_set & bit(v)) && (hp[v] & bit(x))) ++in;
      }
      std::size_t out = static_cast<std::size_t>(std::popcount(hp[x] & ~x_set));
      if (!big_in && in >= alpha - 1) big_in = x;
      if (!big_out && out >= alpha - 1) big_out = x;
    }
  }
  if (big_in && big_out) {
    std::vector<std::size_t> in_leaves, out_leaves;
    for (std::size_t v = 0; v < n && in_leaves.size() < alpha - 1; ++v) {
      if (!(x_set & bit(v)) && (hp[v] & bit(*big_in))) in_leaves.push_back(v);
    }
    for (std::size_t v = 0; v < n && out_leaves.size() < alpha - 1; ++v) {
      if (!(x_set & bit(v)) && (hp[*big_out] & bit(v))) out_leaves.push_back(v);
    }
    return cycle_from_stars(n, *big_in, in_leaves, *big_out, out_leaves, alpha);
  }
  if (big_in) return decompose_out(reverse_masks(hp), x_set, alpha, Orientation::in, h.terminals());
  return decompose_out(hp, x_set, alpha, Orientation::out, h.terminals());
}

// --- checkers ------------------------------------------------------------------------

bool validate_certificate(const Pattern& h, const CaterpillarCertificate& cert, std::size_t lambda,
                          std::size_t delta, std::string* why) {
  auto reject = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  const Pattern& p = cert.equivalent_pattern;
  const std::size_t n = p.num_terminals();
  if (cert.spine.size() > lambda) return reject("spine longer than lambda");
  if (cert.stars.size() != cert.spine.size()) return reject("one star per spine vertex required");
  if (cert.extra_edges.size() > delta) return reject("more than delta extra edges");
  std::vector<bool> taken(n, false);
  for (std::size_t i = 0; i < cert.spine.size(); ++i) {
    if (cert.spine[i] >= n) return reject("spine vertex out of range");
    if (std::find(cert.stars[i].begin(), cert.stars[i].end(), cert.spine[i]) == cert.stars[i].end()) {
      return reject("star does not contain its spine vertex");
    }
    for (std::size_t v : cert.stars[i]) {
      if (v >= n || taken[v]) return reject("stars are not pairwise disjoint");
      taken[v] = true;
    }
  }
  auto cat = cert.caterpillar_edges();
  for (std::size_t i = 1; i < cat.size(); ++i) {
    if (cat[i] == cat[i - 1]) return reject("duplicate caterpillar edge");
  }
  for (const auto& e : cat) {
    if (!p.has_demand(e.first, e.second)) return reject("caterpillar edge missing from the pattern");
  }
  std::vector<Pattern::Demand> f = cert.extra_edges;
  std::sort(f.begin(), f.end());
  std::vector<Pattern::Demand> joined;
  std::merge(cat.begin(), cat.end(), f.begin(), f.end(), std::back_inserter(joined));
  if (joined != p.demands()) return reject("caterpillar edges and F do not partition the pattern edges");
  if (p.terminals() == h.terminals()) {
    if (closure_masks(p.adjacency()) != closure_masks(h.adjacency())) {
      return reject("equivalent pattern has a different transitive closure");
    }
  } else if (!isomorphic(closure_masks(p.adjacency()), closure_masks(h.adjacency()))) {
    return reject("equivalent pattern is not transitively equivalent");
  }
  return true;
}

bool validate_obstruction(const Pattern& h, const Obstruction& obs, std::string* why) {
  auto reject = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  Pattern expected;
  switch (obs.kind) {
    case ObstructionKind::cycle: expected = directed_cycle_pattern(obs.alpha); break;
    case ObstructionKind::pure_out_diamond: expected = diamond_pattern(obs.alpha, Orientation::out, false); break;
    case ObstructionKind::pure_in_diamond: expected = diamond_pattern(obs.alpha, Orientation::in, false); break;
    case ObstructionKind::flawed_out_diamond: expected = diamond_pattern(obs.alpha, Orientation::out, true); break;
    case ObstructionKind::flawed_in_diamond: expected = diamond_pattern(obs.alpha, Orientation::in, true); break;
  }
  Pattern collapsed;
  try {
    collapsed = identify_terminals(h, obs.partition);
  } catch (const Error& e) {
    return reject(e.what());
  }
  if (!isomorphic(closure_masks(collapsed.adjacency()), closure_masks(expected.adjacency()))) {
    return reject("identified pattern is not transitively equivalent to the claimed obstruction");
  }
  return true;
}

}  // namespace dsn
