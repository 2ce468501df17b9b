// SPDX-License-Identifier: Apache-2.0
#include "lllkit/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lllkit/errors.hpp"

namespace lllkit {

namespace {

constexpr char kTileMagic[8] = {'L', 'L', 'L', 'T', 'I', 'L', 'E', '1'};

template <class T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("field \"") + key + "\" has the wrong type");
  }
}

template <class T>
void put(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>(static_cast<std::uint64_t>(v) >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T take(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
    throw InputError("truncated tile file");
  std::uint64_t v = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) v = (v << 8) | buf[i];
  return static_cast<T>(v);
}

void put_element(std::ostream& out, const Element& e) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(e.data.size()));
  for (auto x : e.data) put<std::uint32_t>(out, static_cast<std::uint32_t>(x));
}

Element take_element(std::istream& in) {
  const auto len = take<std::uint32_t>(in);
  if (len > 1U << 20) throw InputError("element length out of range");
  Element e;
  for (std::uint32_t i = 0; i < len; ++i)
    e.data.push_back(static_cast<std::int32_t>(take<std::uint32_t>(in)));
  return e;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

Group group_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  std::vector<Element> gens;
  auto parse_gens = [&](const Group& base) {
    if (!j.contains("generators")) return false;
    if (!j["generators"].is_array()) throw InputError("generators must be an array");
    for (const auto& e : j["generators"]) gens.push_back(element_from_json(base, e));
    return true;
  };
  if (kind == "torus") {
    const int d = get<int>(j, "d"), q = get<int>(j, "q");
    if (!parse_gens(Group::torus(d, q))) return Group::torus_standard(d, q);
    return Group::torus(d, q, std::move(gens));
  }
  if (kind == "lattice") {
    const int d = get<int>(j, "d");
    if (!parse_gens(Group::lattice(d))) return Group::lattice_standard(d);
    return Group::lattice(d, std::move(gens));
  }
  if (kind == "free") {
    const int r = get<int>(j, "rank");
    if (r > 26) throw InputError("free rank above 26 has no letter names");
    if (!parse_gens(Group::free(r))) return Group::free_standard(r);
    return Group::free(r, std::move(gens));
  }
  throw InputError("unknown group kind \"" + kind + "\"");
}

Json group_to_json(const Group& g) {
  Json j;
  switch (g.kind()) {
    case GroupKind::Torus:
      j = {{"kind", "torus"}, {"d", g.dim()}, {"q", g.modulus()}};
      break;
    case GroupKind::Lattice:
      j = {{"kind", "lattice"}, {"d", g.dim()}};
      break;
    case GroupKind::Free:
      j = {{"kind", "free"}, {"rank", g.rank()}};
      break;
  }
  j["generators"] = subset_to_json(g, g.generators());
  return j;
}

Element element_from_json(const Group& g, const Json& j) {
  if (g.kind() == GroupKind::Free) {
    if (!j.is_string()) throw InputError("free group elements are words");
    const auto w = j.get<std::string>();
    Element e;
    if (w == "1") return e;
    for (char c : w) {
      std::int32_t l;
      if (c >= 'a' && c <= 'z')
        l = c - 'a' + 1;
      else if (c >= 'A' && c <= 'Z')
        l = -(c - 'A' + 1);
      else
        throw InputError("bad letter in word \"" + w + "\"");
      if (!e.data.empty() && e.data.back() == -l)
        e.data.pop_back();
      else
        e.data.push_back(l);
    }
    g.validate(e);
    return e;
  }
  if (!j.is_array()) throw InputError("abelian group elements are coordinate vectors");
  std::vector<std::int32_t> c;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InputError("coordinates must be integers");
    c.push_back(x.get<std::int32_t>());
  }
  if (c.size() != static_cast<std::size_t>(g.dim()))
    throw InputError("element has the wrong dimension");
  return g.make(std::move(c));
}

Json element_to_json(const Group& g, const Element& e) {
  if (g.kind() == GroupKind::Free) return g.format(e);
  return e.data;
}

FiniteSubset subset_from_json(const Group& g, const Json& j) {
  if (!j.is_array()) throw InputError("a set of elements must be an array");
  FiniteSubset s;
  for (const auto& e : j) s.insert(element_from_json(g, e));
  return s;
}

Json subset_to_json(const Group& g, const FiniteSubset& s) {
  Json j = Json::array();
  for (const auto& e : s) j.push_back(element_to_json(g, e));
  return j;
}

Csp csp_from_json(const Json& j) {
  const auto k = get<std::int64_t>(j, "k");
  if (k < 1 || k > std::int64_t{1} << 31) throw InputError("k out of range");
  std::vector<PointId> points;
  if (!j.contains("points")) throw InputError("missing field \"points\"");
  if (j["points"].is_number_unsigned()) {
    const auto n = j["points"].get<std::uint64_t>();
    if (n > 1U << 28) throw InputError("too many points");
    for (std::uint64_t i = 0; i < n; ++i) points.push_back(static_cast<PointId>(i));
  } else {
    points = get<std::vector<PointId>>(j, "points");
  }
  std::vector<Constraint> cs;
  const auto arr = j.contains("constraints") ? j["constraints"] : Json::array();
  if (!arr.is_array()) throw InputError("constraints must be an array");
  for (const auto& c : arr) {
    auto dom = get<std::vector<PointId>>(c, "dom");
    auto forbidden = get<std::vector<Tuple>>(c, "forbidden");
    cs.emplace_back(std::move(dom), std::move(forbidden));
  }
  return Csp(std::move(points), static_cast<Color>(k), std::move(cs));
}

Json csp_to_json(const Csp& csp, std::uint64_t tuple_limit) {
  Json j;
  j["k"] = csp.k();
  j["points"] = csp.points();
  j["constraints"] = Json::array();
  for (const auto& c : csp.constraints()) {
    auto t = c.forbidden().tuples(tuple_limit);
    if (!t) throw BudgetExceeded("constraint too large to list explicitly");
    j["constraints"].push_back({{"dom", c.dom()}, {"forbidden", *t}});
  }
  return j;
}

Json assignment_to_json(const Assignment& f) {
  Json j = Json::array();
  for (const auto& c : f) j.push_back(c ? Json(*c) : Json(nullptr));
  return j;
}

PatternSet patterns_from_json(const Group& g, const Json& j) {
  PatternSet ps;
  const auto k = get<std::int64_t>(j, "k");
  if (k < 1 || k > std::int64_t{1} << 31) throw InputError("k out of range");
  ps.k = static_cast<Color>(k);
  if (!j.contains("patterns") || !j["patterns"].is_array())
    throw InputError("missing pattern list");
  for (const auto& p : j["patterns"]) {
    if (!p.contains("dom")) throw InputError("pattern without a domain");
    KPattern kp{subset_from_json(g, p["dom"]), get<std::vector<Color>>(p, "values")};
    if (kp.dom.size() != p["dom"].size()) throw InputError("pattern domain repeats a point");
    validate_pattern(g, kp, ps.k);
    ps.patterns.push_back(std::move(kp));
  }
  return ps;
}

Json patterns_to_json(const Group& g, const PatternSet& ps) {
  Json j{{"k", ps.k}, {"patterns", Json::array()}};
  for (const auto& p : ps.patterns)
    j["patterns"].push_back({{"dom", subset_to_json(g, p.dom)}, {"values", p.values}});
  return j;
}

NetworkSpec network_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("group")) throw InputError("missing field \"group\"");
  Group g = group_from_json(j["group"]);
  FiniteSubset s = j.contains("S") ? subset_from_json(g, j["S"]) : g.generators();
  FiniteSubset v;
  const Json spec = j.contains("vertices") ? j["vertices"] : Json("all");
  if (spec.is_string() && spec.get<std::string>() == "all") {
    if (g.kind() != GroupKind::Torus) throw InputError("\"all\" needs a torus");
    v = torus_points(g);
  } else if (spec.is_object()) {
    if (g.kind() == GroupKind::Free) throw InputError("boxes need an abelian group");
    auto lo = get<std::vector<int>>(spec, "lo");
    auto hi = get<std::vector<int>>(spec, "hi");
    if (lo.size() != static_cast<std::size_t>(g.dim()) || hi.size() != lo.size())
      throw InputError("box corners have the wrong dimension");
    v = coordinate_box(g, lo, hi);
  } else {
    v = subset_from_json(g, spec);
  }
  if (v.empty()) throw InputError("the network has no vertices");
  return {std::move(g), std::move(s), std::move(v)};
}

void write_tiles(std::ostream& out, const Group& g, const TileGraph& h,
                 const std::string& digest, std::uint64_t seed) {
  out.write(kTileMagic, sizeof(kTileMagic));
  std::string d = digest.substr(0, 64);
  d.resize(64, '\0');
  out.write(d.data(), 64);
  put<std::uint64_t>(out, seed);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.kind()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.modulus()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(h.d.size()));
  put<std::uint64_t>(out, h.n);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(h.s.size()));
  for (const auto& e : h.d) put_element(out, e);
  for (const auto& e : h.s) put_element(out, e);
  put<std::uint64_t>(out, h.graph.vertex_count());
  put<std::uint64_t>(out, h.graph.edge_count());
  for (std::uint32_t u = 0; u < h.graph.vertex_count(); ++u)
    for (const Arc& a : h.graph.arcs(u)) {
      if (a.to < u) continue;
      put<std::uint64_t>(out, u);
      put<std::uint64_t>(out, a.to);
      put<std::uint32_t>(out, a.label);
    }
}

TileFile read_tiles(std::istream& in) {
  char magic[sizeof(kTileMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kTileMagic, sizeof(magic)) != 0)
    throw InputError("not a tile graph file");
  char digest[64];
  if (!in.read(digest, sizeof(digest))) throw InputError("truncated tile file");
  std::string dg(digest, sizeof(digest));
  dg.erase(std::find(dg.begin(), dg.end(), '\0'), dg.end());
  const auto seed = take<std::uint64_t>(in);
  const auto kind = take<std::uint32_t>(in);
  const auto dim = static_cast<int>(take<std::uint32_t>(in));
  const auto modulus = static_cast<int>(take<std::uint32_t>(in));
  const auto dsize = take<std::uint32_t>(in);
  const auto n = take<std::uint64_t>(in);
  const auto ssize = take<std::uint32_t>(in);
  if (kind > 2) throw InputError("unknown group kind in tile file");
  if (dsize > 64 || ssize > 64 || n > 1U << 20) throw InputError("tile header out of range");
  std::vector<Element> d, s;
  for (std::uint32_t i = 0; i < dsize; ++i) d.push_back(take_element(in));
  for (std::uint32_t i = 0; i < ssize; ++i) s.push_back(take_element(in));
  Group g = kind == 0   ? Group::lattice(dim, s)
            : kind == 1 ? Group::torus(dim, modulus, s)
                        : Group::free(dim, s);
  for (const auto& e : d) g.validate(e);
  TileFile tf{g, TileGraph{FiniteSubset(d), n, FiniteSubset(s),
                           InjectionSpace(dsize, n), SLabeledGraph{}},
              dg, seed};
  const auto vcount = take<std::uint64_t>(in);
  const auto ecount = take<std::uint64_t>(in);
  if (!tf.tiles.space.fits() || vcount != tf.tiles.space.size())
    throw InputError("vertex count differs from n!/(n-|D|)!");
  auto [alphabet, inv] = label_alphabet(g, tf.tiles.s);
  tf.tiles.graph = SLabeledGraph(vcount, std::move(alphabet), std::move(inv));
  for (std::uint64_t i = 0; i < ecount; ++i) {
    const auto u = take<std::uint64_t>(in);
    const auto v = take<std::uint64_t>(in);
    const auto l = take<std::uint32_t>(in);
    if (u >= vcount || v >= vcount || l >= tf.tiles.graph.alphabet().size())
      throw InputError("edge out of range in tile file");
    tf.tiles.graph.add_edge(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), l);
  }
  return tf;
}

}  // namespace lllkit
