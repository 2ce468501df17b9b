// SPDX-License-Identifier: Apache-2.0
#include "lllkit/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "lllkit/errors.hpp"
#include "lllkit/io.hpp"
#include "lllkit/log_star.hpp"
#include "lllkit/subshift.hpp"

namespace lllkit {

namespace {

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << bytes;
  if (!out) throw InputError("cannot write " + path);
}

std::uint64_t parse_u64(const std::string& what, const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw InputError(what + " must be a nonnegative integer");
  }
  if (pos != s.size() || (!s.empty() && s[0] == '-'))
    throw InputError(what + " must be a nonnegative integer");
  return v;
}

std::uint64_t env_budget(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  const auto x = parse_u64(name, v);
  if (x == 0) throw InputError(std::string(name) + " must be positive");
  return x;
}

// Inline JSON, or @path for a file.
Json json_param(const std::string& raw) {
  if (!raw.empty() && raw[0] == '@') return read_json_file(raw.substr(1));
  return parse_json(raw);
}

const std::string& need(const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw InputError("--" + key + " is required");
  return it->second;
}

std::string opt(const std::map<std::string, std::string>& m, const std::string& key,
                const std::string& fallback = {}) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

std::string input_digest(const RunConfig& c) {
  std::string blob = c.subcommand + "\n";
  for (const auto& [role, path] : c.inputs) {
    const auto bytes = read_bytes(path);
    blob += role + ":" + std::to_string(bytes.size()) + "\n" + bytes;
  }
  for (const auto& [k, v] : c.params) blob += k + "=" + v + "\n";
  return sha256_hex(blob);
}

Json stamp(const RunConfig& c, const std::string& digest) {
  return Json{{"subcommand", c.subcommand}, {"input_sha256", digest}, {"seed", c.seed}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_preamble(const std::string& digest, std::uint64_t seed) {
  return "# input_sha256=" + digest + " seed=" + std::to_string(seed) + "\n";
}

Json metrics_json(const ConditionReport& r) {
  return Json{{"p", to_string(r.metrics.p)},
              {"d", r.metrics.d},
              {"vdeg", r.metrics.vdeg},
              {"ord", r.metrics.ord},
              {"p_vdeg_ord", to_string(r.p_vdeg_ord)},
              {"classic_lll", r.classic_lll},
              {"continuous_lll", r.continuous_lll},
              {"good", r.good}};
}

Json trace_json(const SolveTrace& t) {
  Json j{{"vdeg", t.vdeg}, {"k", t.k}, {"classes", t.classes}};
  j["stages"] = Json::array();
  for (const auto& s : t.stages)
    j["stages"].push_back({{"points", s.points},
                           {"max_ratio", to_string(s.max_ratio)},
                           {"argmax", s.argmax ? Json(*s.argmax) : Json(nullptr)},
                           {"strict", s.strict}});
  j["choices"] = Json::array();
  for (const auto& [x, a] : t.choices) j["choices"].push_back({x, a});
  return j;
}

std::string status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found:
      return "found";
    case SearchStatus::Unsat:
      return "unsat";
    case SearchStatus::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

SearchLimits limits_of(const Budgets& b, std::uint64_t seed) {
  SearchLimits l;
  l.time_limit = b.time;
  l.seed = seed == 0 ? 1 : seed;
  return l;
}

std::vector<std::uint64_t> parse_sizes(const std::string& raw) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(raw);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(parse_u64("--sizes", tok));
  if (out.empty()) throw InputError("--sizes is empty");
  return out;
}

// Tile colorings reused across sizes whose tile graphs coincide.
struct TileColoringCache {
  std::map<std::string, std::pair<Color, std::vector<Color>>> entries;
};

std::string tile_signature(const TileGraph& h) {
  std::string blob = std::to_string(h.space.arity()) + "/" + std::to_string(h.n) + ";";
  for (std::uint32_t u = 0; u < h.graph.vertex_count(); ++u)
    for (const Arc& a : h.graph.arcs(u))
      blob += std::to_string(u) + ">" + std::to_string(a.to) + ":" + std::to_string(a.label) + ",";
  return sha256_hex(blob);
}

LocalColoringResult run_avoid(const NetworkGraph& net, const FiniteSubset& d, std::size_t m,
                              const std::optional<PatternSet>& given, const Budgets& b,
                              std::uint64_t seed, TileColoringCache* cache, Color& k_out) {
  const auto h = build_tile_graph(net.group, d, m, net.s, b.vertices);
  std::vector<Color> coloring;
  PatternSet ps;
  const std::string sig = tile_signature(h);
  if (given) {
    auto r = find_avoiding_coloring(net.group, h.graph, *given, net.s, limits_of(b, seed));
    if (r.status == SearchStatus::Unsat) throw GateRejected(0, "no P-avoiding coloring of H_{D,m}");
    if (r.status != SearchStatus::Found)
      throw BudgetExceeded("tile coloring search hit its limits");
    coloring = std::move(r.coloring);
    ps = *given;
  } else {
    auto hit = cache ? cache->entries.find(sig) : decltype(cache->entries)::iterator{};
    if (cache && hit != cache->entries.end()) {
      k_out = hit->second.first;
      coloring = hit->second.second;
    } else {
      SearchLimits per_k = limits_of(b, seed);
      per_k.time_limit = std::max(std::chrono::milliseconds(1), b.time / 10);
      auto asc = ascending_avoiding_coloring(
          net.group, h.graph, net.s,
          [&](Color k) { return proper_coloring_patterns(net.group, k, net.s); }, 2,
          static_cast<Color>(m), per_k);
      if (asc.k == 0) throw BudgetExceeded("no tile coloring found within the time budget");
      k_out = asc.k;
      coloring = std::move(asc.coloring);
      if (cache) cache->entries[sig] = {k_out, coloring};
    }
    ps = proper_coloring_patterns(net.group, k_out, net.s);
  }
  if (given) k_out = given->k;
  return distributed_avoiding_coloring(net, d, m, coloring, ps, seed);
}

std::string ledger_csv(const RoundLedger& l, const std::string& digest, std::uint64_t seed) {
  std::string s = csv_preamble(digest, seed) + "phase,rounds,n,d\n";
  for (const auto& p : l.phases)
    s += p.name + "," + std::to_string(p.rounds) + "," + std::to_string(l.n) + "," +
         std::to_string(l.d) + "\n";
  s += "total," + std::to_string(l.total()) + "," + std::to_string(l.n) + "," +
       std::to_string(l.d) + "\n";
  return s;
}

int cmd_solve_csp(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const auto& path = need(c.inputs, "csp");
  const Csp csp = csp_from_json(read_json_file(path));
  const auto report = check_conditions(csp);
  Json j = stamp(c, digest);
  j["metrics"] = metrics_json(report);
  out << "metrics: p=" << to_string(report.metrics.p) << " d=" << report.metrics.d
      << " vdeg=" << report.metrics.vdeg << " ord=" << report.metrics.ord
      << " p*vdeg^ord=" << to_string(report.p_vdeg_ord) << "\n";
  std::string default_out = std::filesystem::path(path).stem().string() + ".solution.json";
  const auto out_path = opt(c.outputs, "out", default_out);
  int code = kExitOk;
  try {
    auto sol = solve(csp);
    const auto check = check_solution(csp, sol.coloring);
    if (!check.ok) throw InvariantError("solver output violates a constraint");
    j["status"] = "solved";
    j["coloring"] = assignment_to_json(sol.coloring);
    if (c.oracle) {
      auto bf = brute_force_solve(csp, c.budgets.enumeration);
      if (!bf) throw InvariantError("exhaustive search finds no solution but solve did");
      j["oracle"] = {{"solvable", true}, {"agrees", true}};
    }
    if (c.outputs.count("trace")) {
      Json t = stamp(c, digest);
      t["trace"] = trace_json(sol.trace);
      write_bytes(c.outputs.at("trace"), dump(t));
    }
    out << "solved; solution written to " << out_path << "\n";
  } catch (const GateRejected& e) {
    j["status"] = "gate-rejected";
    j["witness"] = e.witness();
    if (c.oracle) {
      auto bf = brute_force_solve(csp, c.budgets.enumeration);
      j["oracle"] = {{"solvable", bf.has_value()}};
    }
    out << "gate rejected at constraint " << e.witness() << "\n";
    code = kExitRejected;
  }
  write_bytes(out_path, dump(j));
  return code;
}

int cmd_build_tiles(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const Group g = group_from_json(read_json_file(need(c.inputs, "group")));
  const FiniteSubset d = subset_from_json(g, json_param(need(c.params, "D")));
  const auto n = parse_u64("--n", need(c.params, "n"));
  const FiniteSubset s =
      c.params.count("S") ? subset_from_json(g, json_param(c.params.at("S"))) : g.generators();
  const auto h = build_tile_graph(g, d, n, s, c.budgets.vertices);
  std::ostringstream os;
  write_tiles(os, g, h, digest, c.seed);
  write_bytes(need(c.outputs, "out"), os.str());
  out << "H_{D,n}: " << h.graph.vertex_count() << " vertices, " << h.graph.edge_count()
      << " edges\n";
  return kExitOk;
}

int cmd_find_avoiding(const RunConfig& c, const std::string& digest, std::ostream& out) {
  std::ifstream in(need(c.inputs, "tiles"), std::ios::binary);
  if (!in) throw InputError("cannot open " + c.inputs.at("tiles"));
  const TileFile tf = read_tiles(in);
  const PatternSet ps = patterns_from_json(tf.group, read_json_file(need(c.inputs, "patterns")));
  const auto r = find_avoiding_coloring(tf.group, tf.tiles.graph, ps, tf.tiles.s,
                                        limits_of(c.budgets, c.seed));
  Json j = stamp(c, digest);
  j["status"] = status_name(r.status);
  j["k"] = ps.k;
  j["nodes"] = r.nodes;
  j["nogoods"] = r.nogoods;
  if (r.status == SearchStatus::Found) j["coloring"] = r.coloring;
  if (c.outputs.count("out")) write_bytes(c.outputs.at("out"), dump(j));
  out << "search " << status_name(r.status) << " after " << r.nodes << " nodes\n";
  switch (r.status) {
    case SearchStatus::Found:
      return kExitOk;
    case SearchStatus::Unsat:
      return kExitRejected;
    case SearchStatus::Indeterminate:
      return kExitBudget;
  }
  return kExitInternal;
}

int cmd_run_local(const RunConfig& c, const std::string& digest, std::ostream& out) {
  auto spec = network_from_json(read_json_file(need(c.inputs, "graph")));
  std::vector<std::uint64_t> ids;
  if (c.inputs.count("ids")) {
    const auto j = read_json_file(c.inputs.at("ids"));
    try {
      ids = j.get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception&) {
      throw InputError("ids must be an array of integers");
    }
  } else if (c.seed != 0) {
    ids = random_ids(spec.vertices.size(), c.seed);
  }
  const NetworkGraph net = make_network(spec.group, spec.vertices, spec.s, ids);
  const auto algo = need(c.params, "algo");
  Json j = stamp(c, digest);
  j["algo"] = algo;
  j["n"] = net.size();
  RoundLedger ledger;
  if (algo == "gps") {
    const std::size_t d = c.params.count("d") ? parse_u64("--d", c.params.at("d"))
                                              : cayley_degree(net.group, net.s);
    const auto r = gps_coloring(net.graph.underlying(), net.ids, d, c.seed);
    ledger.n = net.size();
    ledger.d = d;
    ledger.add("linial", r.schedule.steps.size());
    ledger.add("elimination", r.schedule.elimination_rounds);
    j["coloring"] = r.colors;
  } else if (algo == "hom" || algo == "avoid") {
    const FiniteSubset d = c.params.count("D")
                               ? subset_from_json(net.group, json_param(c.params.at("D")))
                               : with_identity(net.group, net.s);
    const std::size_t m =
        c.params.count("m") ? parse_u64("--m", c.params.at("m"))
                            : static_cast<std::size_t>(d.size() * d.size() * d.size() + 1);
    if (algo == "hom") {
      auto r = distributed_homomorphism(net, d, m, c.seed);
      ledger = r.ledger;
      j["q"] = r.q;
      j["stages"] = r.stages;
    } else {
      std::optional<PatternSet> ps;
      if (c.inputs.count("patterns"))
        ps = patterns_from_json(net.group, read_json_file(c.inputs.at("patterns")));
      Color k = 0;
      auto r = run_avoid(net, d, m, ps, c.budgets, c.seed, nullptr, k);
      ledger = r.ledger;
      j["k"] = k;
      j["coloring"] = r.coloring;
    }
  } else {
    throw InputError("--algo must be gps, hom or avoid");
  }
  j["rounds"] = ledger.total();
  if (c.outputs.count("ledger"))
    write_bytes(c.outputs.at("ledger"), ledger_csv(ledger, digest, c.seed));
  if (c.outputs.count("out")) write_bytes(c.outputs.at("out"), dump(j));
  out << algo << ": n=" << net.size() << " rounds=" << ledger.total() << "\n";
  return kExitOk;
}

int cmd_benchmark(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const auto pipeline = need(c.params, "pipeline");
  const auto rows = benchmark_rounds(parse_sizes(opt(c.params, "sizes", "256,4096,65536")),
                                     pipeline, opt(c.params, "family", "cycle"), c.seed,
                                     c.budgets);
  const auto csv = csv_preamble(digest, c.seed) + benchmark_csv(rows, pipeline);
  if (c.outputs.count("out"))
    write_bytes(c.outputs.at("out"), csv);
  else
    out << csv;
  return kExitOk;
}

int cmd_subshift_demo(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const Group g = group_from_json(read_json_file(need(c.inputs, "group")));
  const FiniteSubset h0 = subset_from_json(g, json_param(need(c.params, "H0")));
  const Json gj = json_param(need(c.params, "gammas"));
  if (!gj.is_array()) throw InputError("--gammas must be an array");
  std::vector<Element> gammas;
  for (const auto& e : gj) gammas.push_back(element_from_json(g, e));
  const auto depth = parse_u64("--depth", need(c.params, "depth"));
  const auto demo = subshift_depth_demo(g, h0, gammas, depth);
  Json j = stamp(c, digest);
  j["completed"] = demo.completed;
  j["refusal"] = demo.refusal;
  j["wraparound_note"] =
      "all sets embed in the torus without wrap-around; similarities created by the "
      "quotient itself are not excluded";
  j["levels"] = Json::array();
  for (const auto& l : demo.levels) {
    j["levels"].push_back({{"level", l.level},
                           {"h_size", l.h_size},
                           {"f_size", l.f_size},
                           {"s_size", l.s_size},
                           {"m", l.m},
                           {"c_points", l.c_points},
                           {"u_points", l.u_points},
                           {"z_points", l.z_points},
                           {"gate", l.gate},
                           {"not_similar", l.not_similar},
                           {"note", l.note}});
    out << "level " << l.level << ": m=" << l.m << " gate=" << l.gate
        << " not_similar=" << l.not_similar << "\n";
  }
  Json bits = Json::array();
  for (const auto& b : demo.coloring) bits.push_back(b ? Json(*b) : Json(nullptr));
  j["coloring"] = bits;
  if (c.outputs.count("report")) write_bytes(c.outputs.at("report"), dump(j));
  if (demo.completed) return kExitOk;
  out << "refused: " << demo.refusal << "\n";
  return demo.torus_too_small ? kExitInput : kExitRejected;
}

int cmd_check_patterns(const RunConfig& c, const std::string& digest, std::ostream& out) {
  const Group g = group_from_json(read_json_file(need(c.inputs, "group")));
  const PatternSet ps = patterns_from_json(g, read_json_file(need(c.inputs, "patterns")));
  const FiniteSubset s =
      c.params.count("S") ? subset_from_json(g, json_param(c.params.at("S"))) : g.generators();
  Json j = stamp(c, digest);
  j["patterns"] = Json::array();
  bool all_connected = true;
  for (const auto& p : ps.patterns) {
    const bool conn = is_s_connected(g, p, s);
    all_connected = all_connected && conn;
    const auto nrm = normalize(g, p);
    j["patterns"].push_back({{"s_connected", conn},
                             {"normalized_dom", subset_to_json(g, nrm.dom)},
                             {"normalized_values", nrm.values}});
  }
  int code = kExitOk;
  if (c.inputs.count("coloring")) {
    if (g.kind() != GroupKind::Torus) throw InputError("colorings are checked on a torus");
    if (!all_connected) throw InputError("every pattern must be S-connected");
    const FiniteSubset points = torus_points(g);
    std::vector<Color> f;
    try {
      f = read_json_file(c.inputs.at("coloring")).get<std::vector<Color>>();
    } catch (const nlohmann::json::exception&) {
      throw InputError("the coloring must be an array of colors");
    }
    if (f.size() != points.size()) throw InputError("one color per torus point is required");
    const auto rep = is_avoiding(g, f, cayley_subgraph(g, points, s), ps, s);
    j["avoiding"] = rep.avoiding;
    j["violations"] = Json::array();
    for (const auto& [i, w] : rep.violations) j["violations"].push_back({{"pattern", i}, {"at", w}});
    out << (rep.avoiding ? "avoiding" : "pattern occurs") << "\n";
    code = rep.avoiding ? kExitOk : kExitRejected;
  }
  if (c.outputs.count("out")) write_bytes(c.outputs.at("out"), dump(j));
  return code;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw InvariantError("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

Budgets budgets_from_env(Budgets base) {
  base.enumeration = env_budget("LLLKIT_BUDGET_ENUM", base.enumeration);
  base.vertices = env_budget("LLLKIT_BUDGET_VERTICES", base.vertices);
  base.time = std::chrono::milliseconds(
      env_budget("LLLKIT_TIME_LIMIT_MS", static_cast<std::uint64_t>(base.time.count())));
  return base;
}

NetworkGraph family_network(const std::string& family, std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw InputError("sizes must be positive");
  auto ids = seed != 0 ? random_ids(n, seed) : std::vector<std::uint64_t>{};
  const auto path = [&] {
    const Group g = Group::lattice_standard(1);
    return make_network(g, coordinate_box(g, {0}, {static_cast<int>(n) - 1}), g.generators(),
                        ids);
  };
  if (n > (std::uint64_t{1} << 30)) throw InputError("size too large");
  if (family == "path") return path();
  if (family == "cycle") {
    if (n < 4) return path();
    const Group g = Group::torus_standard(1, static_cast<int>(n));
    return make_network(g, torus_points(g), g.generators(), ids);
  }
  if (family == "torus2") {
    const auto side = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (side * side != n) throw InputError("torus2 sizes must be perfect squares");
    if (side < 2) {
      const Group g = Group::lattice_standard(2);
      return make_network(g, coordinate_box(g, {0, 0}, {0, 0}), g.generators(), ids);
    }
    const Group g = Group::torus_standard(2, static_cast<int>(side));
    return make_network(g, torus_points(g), g.generators(), ids);
  }
  throw InputError("unknown family \"" + family + "\"");
}

std::vector<std::string> benchmark_phase_names(const std::string& pipeline) {
  if (pipeline == "gps") return {"linial", "elimination"};
  if (pipeline == "hom" || pipeline == "avoid") return {"aux-discovery", "gps-on-aux", "stages"};
  throw InputError("pipeline must be gps, hom or avoid");
}

std::vector<BenchmarkRow> benchmark_rounds(const std::vector<std::uint64_t>& sizes,
                                           const std::string& pipeline,
                                           const std::string& family, std::uint64_t seed,
                                           const Budgets& budgets) {
  benchmark_phase_names(pipeline);
  std::vector<BenchmarkRow> rows;
  TileColoringCache cache;
  for (auto n : sizes) {
    const NetworkGraph net = family_network(family, n, seed);
    BenchmarkRow row;
    row.n = n;
    row.log_star_n = log_star(n);
    if (pipeline == "gps") {
      const std::size_t d = cayley_degree(net.group, net.s);
      const auto r = gps_coloring(net.graph.underlying(), net.ids, d, seed);
      row.phases = {{"linial", r.schedule.steps.size()},
                    {"elimination", r.schedule.elimination_rounds}};
    } else {
      const FiniteSubset d = with_identity(net.group, net.s);
      const std::size_t m = d.size() * d.size() * d.size() + 1;
      if (pipeline == "hom") {
        row.phases = distributed_homomorphism(net, d, m, seed).ledger.phases;
      } else {
        Color k = 0;
        row.phases = run_avoid(net, d, m, std::nullopt, budgets, seed, &cache, k).ledger.phases;
      }
    }
    for (const auto& p : row.phases) row.rounds += p.rounds;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::string& pipeline) {
  std::string s = "n,rounds,log_star_n";
  for (const auto& p : benchmark_phase_names(pipeline)) s += "," + p;
  s += "\n";
  for (const auto& r : rows) {
    s += std::to_string(r.n) + "," + std::to_string(r.rounds) + "," +
         std::to_string(r.log_star_n);
    for (const auto& p : r.phases) s += "," + std::to_string(p.rounds);
    s += "\n";
  }
  return s;
}

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out,
                        std::ostream& err) {
  CLI::App app{"lllkit: constructive local lemma, tile graphs and LOCAL simulations"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  std::map<std::string, std::string> in, par, outp;
  std::optional<std::uint64_t> b_enum, b_vert, b_time;
  app.add_option("--seed", cfg.seed, "Seed for id permutations and randomized search");
  app.add_option("--budget-enum", b_enum,
                 "Enumeration budget (env LLLKIT_BUDGET_ENUM, default 2^24)");
  app.add_option("--budget-vertices", b_vert,
                 "Tile-graph vertex budget (env LLLKIT_BUDGET_VERTICES, default 2^22)");
  app.add_option("--time-limit-ms", b_time,
                 "Search time budget in ms (env LLLKIT_TIME_LIMIT_MS, default 60000)");

  auto bind = [](CLI::App* sub, std::map<std::string, std::string>& m, const std::string& name,
                 const std::string& key, const std::string& help, bool required) {
    auto* o = sub->add_option_function<std::string>(
        name, [&m, key](const std::string& v) { m[key] = v; }, help);
    if (required) o->required();
    return o;
  };

  auto* solve_cmd = app.add_subcommand("solve-csp", "Check the goodness gate and solve a CSP");
  bind(solve_cmd, in, "csp", "csp", "CSP JSON file", true);
  bind(solve_cmd, outp, "--out", "out", "Solution JSON (default <stem>.solution.json)", false);
  bind(solve_cmd, outp, "--trace", "trace", "Write the stage certificates as JSON", false);
  solve_cmd->add_flag("--oracle", cfg.oracle, "Cross-check with exhaustive search");

  auto* tiles_cmd = app.add_subcommand("build-tiles", "Materialize H_{D,n} in binary form");
  bind(tiles_cmd, in, "--group", "group", "Group JSON file", true);
  bind(tiles_cmd, par, "--D", "D", "D as JSON array (or @file)", true);
  bind(tiles_cmd, par, "--n", "n", "Number of colors n", true);
  bind(tiles_cmd, par, "--S", "S", "S as JSON array (default: group generators)", false);
  bind(tiles_cmd, outp, "--out", "out", "Output tile file", true);

  auto* avoid_cmd = app.add_subcommand("find-avoiding", "Search a P-avoiding coloring of a tile graph");
  bind(avoid_cmd, in, "--tiles", "tiles", "Tile file from build-tiles", true);
  bind(avoid_cmd, in, "--patterns", "patterns", "Pattern set JSON file", true);
  bind(avoid_cmd, outp, "--out", "out", "Result JSON", false);

  auto* local_cmd = app.add_subcommand("run-local", "Run a LOCAL algorithm and record its rounds");
  bind(local_cmd, in, "--graph", "graph", "Network JSON file", true);
  bind(local_cmd, par, "--algo", "algo", "gps, hom or avoid", true)
      ->check(CLI::IsMember({"gps", "hom", "avoid"}));
  bind(local_cmd, par, "--D", "D", "D as JSON array (default S u S^-1 u {1})", false);
  bind(local_cmd, par, "--m", "m", "Range m of the tile graph (default |D|^3 + 1)", false);
  bind(local_cmd, par, "--d", "d", "Degree bound for gps (default |S u S^-1 \\ {1}|)", false);
  bind(local_cmd, in, "--ids", "ids", "JSON array with a permutation of 1..n", false);
  bind(local_cmd, in, "--patterns", "patterns", "Pattern set for avoid (default proper coloring)", false);
  bind(local_cmd, outp, "--ledger", "ledger", "Round ledger CSV (phase,rounds,n,d)", false);
  bind(local_cmd, outp, "--out", "out", "Result JSON", false);

  auto* bench_cmd = app.add_subcommand("benchmark", "Round counts over a list of sizes");
  bind(bench_cmd, par, "--pipeline", "pipeline", "gps, hom or avoid", true)
      ->check(CLI::IsMember({"gps", "hom", "avoid"}));
  bind(bench_cmd, par, "--family", "family", "cycle, path or torus2 (default cycle)", false);
  bind(bench_cmd, par, "--sizes", "sizes", "Comma separated sizes (default 256,4096,65536)", false);
  bind(bench_cmd, outp, "--out", "out", "CSV output (default stdout)", false);

  auto* sub_cmd = app.add_subcommand("subshift-demo", "Finite-depth similarity-CSP iteration");
  bind(sub_cmd, in, "--group", "group", "One-dimensional torus JSON file", true);
  bind(sub_cmd, par, "--H0", "H0", "H_0 as JSON array", true);
  bind(sub_cmd, par, "--gammas", "gammas", "gamma_0, gamma_1, ... as JSON array", true);
  bind(sub_cmd, par, "--depth", "depth", "Number of levels", true);
  bind(sub_cmd, outp, "--report", "report", "Report JSON", false);

  auto* pat_cmd = app.add_subcommand("check-patterns", "Validate patterns and check a coloring");
  bind(pat_cmd, in, "--group", "group", "Group JSON file", true);
  bind(pat_cmd, in, "--patterns", "patterns", "Pattern set JSON file", true);
  bind(pat_cmd, in, "--coloring", "coloring", "Torus coloring JSON array", false);
  bind(pat_cmd, par, "--S", "S", "S as JSON array (default: group generators)", false);
  bind(pat_cmd, outp, "--out", "out", "Report JSON", false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kExitOk : kExitInput};
  }
  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  cfg.inputs = std::move(in);
  cfg.params = std::move(par);
  cfg.outputs = std::move(outp);
  try {
    cfg.budgets = budgets_from_env();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return {std::nullopt, kExitInput};
  }
  if (b_enum) cfg.budgets.enumeration = *b_enum;
  if (b_vert) cfg.budgets.vertices = *b_vert;
  if (b_time) cfg.budgets.time = std::chrono::milliseconds(*b_time);
  if (cfg.budgets.enumeration == 0 || cfg.budgets.vertices == 0 || cfg.budgets.time.count() <= 0) {
    err << "error: budgets must be positive\n";
    return {std::nullopt, kExitInput};
  }
  return {std::move(cfg), kExitOk};
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const std::string digest = input_digest(c);
    if (c.subcommand == "solve-csp") return cmd_solve_csp(c, digest, out);
    if (c.subcommand == "build-tiles") return cmd_build_tiles(c, digest, out);
    if (c.subcommand == "find-avoiding") return cmd_find_avoiding(c, digest, out);
    if (c.subcommand == "run-local") return cmd_run_local(c, digest, out);
    if (c.subcommand == "benchmark") return cmd_benchmark(c, digest, out);
    if (c.subcommand == "subshift-demo") return cmd_subshift_demo(c, digest, out);
    if (c.subcommand == "check-patterns") return cmd_check_patterns(c, digest, out);
    throw InputError("unknown subcommand \"" + c.subcommand + "\"");
  } catch (const GateRejected& e) {
    err << "rejected: " << e.what() << "\n";
    return kExitRejected;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InvariantError& e) {
    err << "internal check failed: " << e.what() << "\n";
    return kExitInternal;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto parsed = parse_args(argc, argv, out, err);
  if (!parsed.config) return parsed.exit_code;
  return dispatch(*parsed.config, out, err);
}

}  // namespace lllkit
