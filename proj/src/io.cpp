#include "dsn/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace dsn {

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& msg) {
  fail(ErrorKind::parse, path.empty() ? msg : path + ": " + msg);
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void expect_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) parse_fail(path, "expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!obj.contains(k)) parse_fail(path, std::string("missing key \"") + k + "\"");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) parse_fail(path, "unknown key \"" + key + "\"");
  }
}

const Json& array_at(const Json& obj, const char* key, const std::string& path) {
  const Json& a = obj.at(key);
  if (!a.is_array()) parse_fail(path + "." + key, "expected an array");
  return a;
}

std::string string_at(const Json& v, const std::string& path) {
  if (!v.is_string()) parse_fail(path, "expected a string");
  return v.get<std::string>();
}

std::pair<std::string, std::string> name_pair(const Json& v, const std::string& path, std::size_t size = 2) {
  if (!v.is_array() || v.size() != size) {
    parse_fail(path, "expected an array of " + std::to_string(size) + " elements");
  }
  return {string_at(v[0], path + "[0]"), string_at(v[1], path + "[1]")};
}

Cost cost_at(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) {
    auto c = v.get<std::uint64_t>();
    if (c > static_cast<std::uint64_t>(kMaxEdgeCost)) parse_fail(path, "cost exceeds 2^40");
    return static_cast<Cost>(c);
  }
  if (v.is_number_integer()) parse_fail(path, "negative cost " + std::to_string(v.get<std::int64_t>()));
  parse_fail(path, "cost must be a nonnegative integer");
}

template <class F>
auto rethrow_as_parse(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::invalid_argument) throw;
    parse_fail(path, e.what());
  }
}

Json names(const Pattern& h, const std::vector<std::size_t>& idx) {
  Json a = Json::array();
  for (std::size_t i : idx) a.push_back(h.terminal(i));
  return a;
}

Json name_pairs(const Pattern& h, const std::vector<Pattern::Demand>& pairs) {
  Json a = Json::array();
  for (const auto& [s, t] : pairs) a.push_back({h.terminal(s), h.terminal(t)});
  return a;
}

}  // namespace

Json parse_json_text(std::string_view text) {
  // one key set per open object, to catch duplicates the library would merge
  std::vector<std::set<std::string>> open;
  Json::parser_callback_t cb = [&](int, Json::parse_event_t event, Json& parsed) {
    switch (event) {
      case Json::parse_event_t::object_start:
        open.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        open.pop_back();
        break;
      case Json::parse_event_t::key: {
        auto key = parsed.get<std::string>();
        if (!open.back().insert(key).second) fail(ErrorKind::parse, "duplicate key \"" + key + "\"");
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return Json::parse(text.begin(), text.end(), cb);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    auto pos = msg.find(": ", msg.find("parse error"));
    if (pos != std::string::npos) msg = msg.substr(pos + 2);
    fail(ErrorKind::parse, "malformed JSON at " + line_col(text, e.byte) + ": " + msg);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parse, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json_text(buf.str());
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

InstanceDocument instance_from_json(const Json& doc) {
  expect_keys(doc, "", {"graph", "pattern"});
  const Json& g = doc.at("graph");
  expect_keys(g, "graph", {"vertices", "edges"});
  std::vector<std::string> vertices;
  std::set<std::string> seen;
  const Json& vs = array_at(g, "vertices", "graph");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string path = "graph.vertices[" + std::to_string(i) + "]";
    vertices.push_back(string_at(vs[i], path));
    if (!seen.insert(vertices.back()).second) parse_fail(path, "duplicate vertex name '" + vertices.back() + "'");
  }
  std::vector<WeightedDigraph::NamedEdge> edges;
  const Json& es = array_at(g, "edges", "graph");
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::string path = "graph.edges[" + std::to_string(i) + "]";
    auto [t, h] = name_pair(es[i], path, 3);
    if (!seen.count(t)) parse_fail(path + "[0]", "unknown vertex '" + t + "'");
    if (!seen.count(h)) parse_fail(path + "[1]", "unknown vertex '" + h + "'");
    if (t == h) parse_fail(path, "self-loop on '" + t + "'");
    edges.emplace_back(t, h, cost_at(es[i][2], path + "[2]"));
  }

  const Json& p = doc.at("pattern");
  expect_keys(p, "pattern", {"terminals", "demands"});
  std::vector<std::string> terminals;
  const Json& ts = array_at(p, "terminals", "pattern");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::string path = "pattern.terminals[" + std::to_string(i) + "]";
    terminals.push_back(string_at(ts[i], path));
    if (!seen.count(terminals.back())) parse_fail(path, "terminal '" + terminals.back() + "' is not a graph vertex");
  }
  std::vector<std::pair<std::string, std::string>> demands;
  const Json& ds = array_at(p, "demands", "pattern");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    demands.push_back(name_pair(ds[i], "pattern.demands[" + std::to_string(i) + "]"));
  }

  InstanceDocument out;
  out.graph = rethrow_as_parse("graph", [&] { return WeightedDigraph(vertices, edges, &out.warnings); });
  out.pattern = rethrow_as_parse("pattern", [&] { return Pattern(terminals, demands, &out.warnings); });
  return out;
}

Json instance_to_json(const WeightedDigraph& graph, const Pattern& pattern) {
  Json edges = Json::array();
  for (const Edge& e : graph.edges()) edges.push_back({graph.name(e.tail), graph.name(e.head), e.cost});
  return Json{{"graph", {{"vertices", graph.names()}, {"edges", edges}}}, {"pattern", pattern_to_json(pattern)}};
}

SolutionNetwork solution_from_json(const Json& doc, const WeightedDigraph& host) {
  expect_keys(doc, "", {"edges"}, {"cost", "omega_used"});
  std::vector<EdgeId> ids;
  const Json& es = array_at(doc, "edges", "");
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::string path = "edges[" + std::to_string(i) + "]";
    auto [t, h] = name_pair(es[i], path);
    auto tv = host.find(t);
    auto hv = host.find(h);
    if (!tv) parse_fail(path + "[0]", "unknown vertex '" + t + "'");
    if (!hv) parse_fail(path + "[1]", "unknown vertex '" + h + "'");
    auto e = host.find_edge(*tv, *hv);
    if (!e) parse_fail(path, "no edge " + t + "->" + h + " in the graph");
    ids.push_back(*e);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) parse_fail("edges", "an edge is listed twice");
  SolutionNetwork n(host, ids);
  if (doc.contains("cost") && !doc.at("cost").is_null()) {
    Cost c = cost_at(doc.at("cost"), "cost");
    if (c != n.cost()) {
      parse_fail("cost", "stated cost " + std::to_string(c) + " but the edges cost " + std::to_string(n.cost()));
    }
  }
  return n;
}

Json edges_to_json(const SolutionNetwork& network) {
  Json a = Json::array();
  const auto& g = network.host();
  for (EdgeId e : network.edges()) a.push_back({g.name(g.edge(e).tail), g.name(g.edge(e).head)});
  return a;
}

Json pattern_to_json(const Pattern& pattern) {
  return Json{{"terminals", pattern.terminals()}, {"demands", name_pairs(pattern, pattern.demands())}};
}

Json certificate_to_json(const CaterpillarCertificate& cert) {
  const Pattern& p = cert.equivalent_pattern;
  Json stars = Json::array();
  for (std::size_t i = 0; i < cert.spine.size(); ++i) {
    std::vector<std::size_t> leaves;
    for (std::size_t v : cert.stars[i]) {
      if (v != cert.spine[i]) leaves.push_back(v);
    }
    stars.push_back({{"root", p.terminal(cert.spine[i])}, {"leaves", names(p, leaves)}});
  }
  return Json{{"orientation", to_string(cert.orientation)},
              {"spine", names(p, cert.spine)},
              {"stars", stars},
              {"extra_edges", name_pairs(p, cert.extra_edges)},
              {"equivalent_pattern", pattern_to_json(p)}};
}

Json obstruction_to_json(const Pattern& h, const Obstruction& obs) {
  Json partition = Json::array();
  for (const auto& cls : obs.partition) partition.push_back(names(h, cls));
  Json out{{"kind", to_string(obs.kind)},
           {"alpha", obs.alpha},
           {"partition", partition},
           {"matching", name_pairs(h, obs.matching)}};
  if (obs.diamond) {
    const DiamondWitness& d = *obs.diamond;
    Json w{{"r1", h.terminal(d.r1)}, {"r2", h.terminal(d.r2)}, {"s", names(h, d.s)},  {"t", names(h, d.t)},
           {"w1", names(h, d.w1)},   {"w2", names(h, d.w2)},   {"w", names(h, d.w)},  {"u", names(h, d.u)}};
    w["x"] = d.x ? Json(h.terminal(*d.x)) : Json(nullptr);
    out["diamond"] = w;
  }
  return out;
}

}  // namespace dsn
