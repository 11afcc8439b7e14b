#include "dsn/cli.hpp"

#include <algorithm>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include <CLI11.hpp>

#include "dsn/classify.hpp"
#include "dsn/dp.hpp"
#include "dsn/io.hpp"
#include "dsn/oracle.hpp"
#include "dsn/reduction.hpp"
#include "dsn/structure.hpp"

namespace dsn {

namespace {

struct ClassChoice {
  std::size_t lambda = 0, delta = 0;
  CaterpillarCertificate cert;
};

// Smallest (1+lambda)(lambda+delta) over the C_{lambda,delta} memberships of
// h; ties go to fewer extra edges.
std::optional<ClassChoice> smallest_class(const Pattern& h) {
  std::optional<ClassChoice> best;
  auto score = [](const ClassChoice& c) { return (1 + c.lambda) * (c.lambda + c.delta); };
  try {
    for (std::size_t lambda = 0; lambda <= h.num_terminals(); ++lambda) {
      auto cert = in_C_lambda_delta(h, lambda, h.num_demands());
      if (!cert) continue;
      ClassChoice c{lambda, cert->extra_edges.size(), *cert};
      if (!best || score(c) < score(*best) || (score(c) == score(*best) && c.delta < best->delta)) best = c;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::size_guard) throw;
  }
  return best;
}

InstanceDocument load_instance(const std::string& path, std::ostream& err) {
  InstanceDocument doc = instance_from_json(read_json_file(path));
  for (const auto& w : doc.warnings) err << "warning: " << w << "\n";
  return doc;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

int cmd_classify(const std::string& file, std::size_t lambda, std::size_t delta, bool star, std::ostream& out,
                 std::ostream& err) {
  InstanceDocument doc = load_instance(file, err);
  const Pattern& h = doc.pattern;
  auto cert = star ? in_C_star(h, lambda, delta) : in_C_lambda_delta(h, lambda, delta);
  if (cert) {
    emit(out, Json{{"member", true}, {"certificate", certificate_to_json(*cert)}});
    return 0;
  }
  Json j{{"member", false}};
  std::string cls = std::string(star ? "C*" : "C") + "_{" + std::to_string(lambda) + "," + std::to_string(delta) + "}";
  j["reason"] = "no caterpillar with spine length at most " + std::to_string(lambda) + " and at most " +
                std::to_string(delta) + " extra edges " + (star ? "is transitively equivalent to" : "equals") +
                " the pattern (not in " + cls + ")";
  emit(out, j);
  return 1;
}

Json solution_json(const std::optional<SolutionNetwork>& n) {
  if (!n) return Json{{"cost", nullptr}, {"edges", Json::array()}};
  return Json{{"cost", n->cost()}, {"edges", edges_to_json(*n)}};
}

int cmd_solve(const std::string& file, std::optional<std::size_t> treewidth, std::ostream& out, std::ostream& err) {
  InstanceDocument doc = load_instance(file, err);
  std::size_t n = doc.graph.num_vertices();
  std::size_t omega;
  if (treewidth) {
    omega = *treewidth;
  } else if (auto c = smallest_class(doc.pattern)) {
    omega = default_omega(c->lambda, c->delta, n);
  } else {
    fail(ErrorKind::invalid_argument, "pattern too large to classify; pass --treewidth");
  }
  auto r = solve_dp(doc.graph, doc.pattern, omega);
  Json j = solution_json(r ? std::optional(r->network) : std::nullopt);
  j["omega_used"] = omega;
  emit(out, j);
  return r ? 0 : 1;
}

int cmd_oracle(const std::string& file, std::size_t max_edges, std::ostream& out, std::ostream& err) {
  InstanceDocument doc = load_instance(file, err);
  auto r = brute_force_solve(doc.graph, doc.pattern, OracleOptions{max_edges});
  emit(out, solution_json(r ? std::optional(r->network) : std::nullopt));
  return r ? 0 : 1;
}

int cmd_analyze(const std::string& file, const std::string& solution_file, std::optional<std::size_t> lambda,
                std::optional<std::size_t> delta, std::size_t max_edges, std::ostream& out, std::ostream& err) {
  if (lambda.has_value() != delta.has_value()) fail(ErrorKind::invalid_argument, "give both --lambda and --delta");
  InstanceDocument doc = load_instance(file, err);
  const Pattern& h = doc.pattern;
  SolutionNetwork given;
  if (!solution_file.empty()) {
    given = solution_from_json(read_json_file(solution_file), doc.graph);
    if (!feasible(given, h)) fail(ErrorKind::infeasible, "the solution does not satisfy every demand");
  } else {
    auto r = brute_force_solve(doc.graph, h, OracleOptions{max_edges});
    if (!r) fail(ErrorKind::infeasible, "the instance has no feasible solution");
    given = r->network;
  }
  SolutionNetwork m = minimalize(given, h);
  LocalGraph local = local_view(m);

  Json j;
  j["solution"] = edges_to_json(m);
  j["minimalized"] = m.num_edges() != given.num_edges();
  j["demands"] = h.num_demands();
  CutwidthResult cw = cutwidth_exact(local.graph);
  TreewidthResult tw = treewidth_exact(local.graph);
  j["cutwidth"] = cw.value;
  j["treewidth"] = tw.width;

  std::optional<ClassChoice> cls;
  if (lambda) {
    if (auto cert = in_C_lambda_delta(h, *lambda, *delta)) cls = ClassChoice{*lambda, *delta, *cert};
  } else {
    cls = smallest_class(h);
  }
  Json bounds{{"cw_7d", cw.value <= 7 * h.num_demands() ? "pass" : "fail"}};
  if (cls) {
    std::size_t bound = 7 * (1 + cls->lambda) * (cls->lambda + cls->delta);
    j["class"] = Json{{"lambda", cls->lambda}, {"delta", cls->delta}};
    bounds["tw_bound"] = tw.width <= bound ? "pass" : "fail";
  } else {
    j["class"] = nullptr;
    bounds["tw_bound"] = "skipped";
  }
  j["bounds"] = bounds;

  j["core"] = nullptr;
  if (cls && cls->lambda > 0 && !m.edges().empty()) {
    try {
      CoreDecomposition cd = core_decomposition(m, h, cls->cert);
      std::string why;
      bool valid = validate_core_decomposition(m, cd, cls->lambda, cls->delta, &why);
      const auto& g = doc.graph;
      Json forest = Json::array();
      for (const auto& a : cd.forest) {
        forest.push_back({{"root", g.name(a.root)}, {"edges", edges_to_json(SolutionNetwork(g, a.edges))}});
      }
      Json core{{"orientation", to_string(cd.orientation)},
                {"edges", edges_to_json(cd.core)},
                {"pattern", pattern_to_json(cd.core_pattern)},
                {"forest", forest},
                {"pattern_edge_bound", (1 + cls->lambda) * (cls->lambda + cls->delta)},
                {"valid", valid},
                {"same_head", same_head_property(m, cd)}};
      if (!valid) core["why"] = why;
      j["core"] = core;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::size_guard) throw;
      err << "warning: no core decomposition: " << e.what() << "\n";
    }
  }
  emit(out, j);
  return 0;
}

WeightedDigraph random_strong_host(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<std::size_t> cycle(n);
  for (std::size_t i = 0; i < n; ++i) cycle[i] = i;
  std::shuffle(cycle.begin(), cycle.end(), rng);
  std::set<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t i = 0; i < n; ++i) arcs.insert({cycle[i], cycle[(i + 1) % n]});
  std::bernoulli_distribution coin(p);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && coin(rng)) arcs.insert({a, b});
    }
  }
  std::uniform_int_distribution<Cost> cost(1, 10);
  std::vector<WeightedDigraph::NamedEdge> edges;
  for (auto [a, b] : arcs) edges.emplace_back(names[a], names[b], cost(rng));
  return WeightedDigraph(names, edges);
}

int cmd_generate(const std::string& kind, std::size_t k, std::uint64_t seed, std::size_t max_part, double p,
                 const std::string& orientation, std::ostream& out, std::ostream& err) {
  Orientation o = orientation == "in" ? Orientation::in : Orientation::out;
  ReductionOutput r;
  if (kind == "pure-diamond" || kind == "flawed-diamond") {
    MccInstance mcc = random_mcc(k, max_part, p, seed);
    r = kind == "pure-diamond" ? mcc_to_pure_diamond(mcc, o) : mcc_to_flawed_diamond(mcc, o);
    if (k <= 6) {
      err << "note: clique " << (has_multicoloured_clique(mcc) ? "present" : "absent") << ", target cost "
          << *r.target_cost << "\n";
    }
  } else if (kind == "cycle") {
    if (k < 2) fail(ErrorKind::invalid_argument, "cycle needs --k at least 2");
    WeightedDigraph g = random_strong_host(2 * k, p, seed);
    std::vector<std::string> terminals(g.names().begin(), g.names().begin() + static_cast<std::ptrdiff_t>(k));
    r = cycle_pattern_instance(g, terminals);
  } else {
    r = expander_like_instance(k, seed);
  }
  emit(out, instance_to_json(r.graph, r.pattern));
  return 0;
}

int cmd_verify(const std::string& instance, const std::string& solution, std::ostream& out, std::ostream& err) {
  InstanceDocument doc = load_instance(instance, err);
  SolutionNetwork n = solution_from_json(read_json_file(solution), doc.graph);
  bool ok = feasible(n, doc.pattern);
  emit(out, Json{{"feasible", ok}, {"minimal", ok && is_minimal(n, doc.pattern)}, {"cost", n.cost()}});
  return ok ? 0 : 1;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::infeasible:
      return 1;
    case ErrorKind::parse:
      return 2;
    case ErrorKind::invalid_argument:
      return 3;
    case ErrorKind::size_guard:
      return 4;
  }
  return 3;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directed Steiner network solver and pattern analysis", "dsn"};
  app.require_subcommand(1);

  std::string file, file2, solution_file, kind, orientation = "out";
  std::size_t lambda = 0, delta = 0, k = 0, max_part = 3, max_edges = kDefaultOracleEdgeGuard;
  std::optional<std::size_t> treewidth, opt_lambda, opt_delta;
  std::uint64_t seed = 0;
  double p = 0.5;
  bool star = false;

  auto* classify = app.add_subcommand("classify", "Test membership in C_{lambda,delta} or C*_{lambda,delta}");
  classify->add_option("file", file, "Instance JSON")->required();
  classify->add_option("--lambda", lambda, "Spine length bound")->required();
  classify->add_option("--delta", delta, "Extra edge bound")->required();
  classify->add_flag("--star", star, "Allow transitively equivalent patterns");

  auto* solve = app.add_subcommand("solve", "Optimum over solutions of bounded treewidth");
  solve->add_option("file", file, "Instance JSON")->required();
  solve->add_option("--treewidth", treewidth, "Treewidth budget (default from the pattern class)");

  auto* oracle = app.add_subcommand("oracle", "Exact optimum by branch and bound");
  oracle->add_option("file", file, "Instance JSON")->required();
  oracle->add_option("--max-edges", max_edges, "Edge guard")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Cutwidth, treewidth and core of a minimal solution");
  analyze->add_option("file", file, "Instance JSON")->required();
  analyze->add_option("--solution", solution_file, "Solution JSON (default: oracle optimum)");
  analyze->add_option("--lambda", opt_lambda, "Spine length of the class to check");
  analyze->add_option("--delta", opt_delta, "Extra edges of the class to check");
  analyze->add_option("--max-edges", max_edges, "Oracle edge guard")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "Emit a generated instance");
  generate->add_option("kind", kind, "Instance family")
      ->required()
      ->check(CLI::IsMember({"pure-diamond", "flawed-diamond", "cycle", "expander"}));
  generate->add_option("--k", k, "Clique size, cycle length or cubic graph order")->required();
  generate->add_option("--seed", seed, "Random seed")->capture_default_str();
  generate->add_option("--max-part", max_part, "Largest colour class")->capture_default_str();
  generate->add_option("--edge-probability", p, "Edge probability")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  generate->add_option("--orientation", orientation, "Diamond orientation")
      ->capture_default_str()
      ->check(CLI::IsMember({"out", "in"}));

  auto* verify = app.add_subcommand("verify", "Check a solution for feasibility and minimality");
  verify->add_option("instance", file, "Instance JSON")->required();
  verify->add_option("solution", file2, "Solution JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }

  try {
    if (classify->parsed()) return cmd_classify(file, lambda, delta, star, out, err);
    if (solve->parsed()) return cmd_solve(file, treewidth, out, err);
    if (oracle->parsed()) return cmd_oracle(file, max_edges, out, err);
    if (analyze->parsed()) return cmd_analyze(file, solution_file, opt_lambda, opt_delta, max_edges, out, err);
    if (generate->parsed()) return cmd_generate(kind, k, seed, max_part, p, orientation, out, err);
    if (verify->parsed()) return cmd_verify(file, file2, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

}  // namespace dsn
