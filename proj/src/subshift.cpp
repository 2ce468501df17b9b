// SPDX-License-Identifier: Apache-2.0
#include "lllkit/subshift.hpp"

#include <algorithm>

#include "lllkit/errors.hpp"
#include "lllkit/similarity_set.hpp"
#include "lllkit/solver.hpp"

namespace lllkit {

namespace {

FiniteSubset lift_set(const Group& torus, const FiniteSubset& s) {
  FiniteSubset out;
  for (const auto& e : s) out.insert(lift_to_lattice(torus, e));
  return out;
}

FiniteSubset project(const Group& torus, const FiniteSubset& lattice_set) {
  FiniteSubset out;
  for (const auto& e : lattice_set) out.insert(torus.make(e.data));
  return out;
}

bool is_symmetric_with_identity(const Group& g, const FiniteSubset& s) {
  if (!s.contains(g.identity())) return false;
  for (const auto& e : s)
    if (!s.contains(g.inverse(e))) return false;
  return true;
}

std::uint32_t point_of(const FiniteSubset& points, const Element& e) {
  auto i = points.index_of(e);
  if (!i) throw InvariantError("element is not a carrier point");
  return static_cast<std::uint32_t>(*i);
}

}  // namespace

Element lift_to_lattice(const Group& torus, const Element& e) {
  if (torus.kind() != GroupKind::Torus) throw InputError("expected a torus");
  torus.validate(e);
  std::vector<std::int32_t> c = e.data;
  const int q = torus.modulus();
  for (auto& x : c)
    if (2 * x > q) x -= q;
  return Element(std::move(c));
}

std::int64_t lattice_radius(const FiniteSubset& lattice_set) {
  std::int64_t r = 0;
  for (const auto& e : lattice_set)
    for (auto x : e.data) r = std::max<std::int64_t>(r, x < 0 ? -std::int64_t{x} : x);
  return r;
}

bool is_syndetic(const Group& g, const FiniteSubset& points, const std::vector<char>& a,
                 const FiniteSubset& f) {
  for (const auto& x : points) {
    bool hit = false;
    for (const auto& phi : f)
      if (a[point_of(points, g.multiply(phi, x))]) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

bool is_separated(const Group& g, const FiniteSubset& points, const std::vector<char>& a,
                  const FiniteSubset& s) {
  for (std::uint32_t x = 0; x < points.size(); ++x) {
    if (!a[x]) continue;
    for (const auto& sigma : s) {
      auto y = point_of(points, g.multiply(sigma, points[x]));
      if (y != x && a[y]) return false;
    }
  }
  return true;
}

SimilarityInstance make_similarity_instance(const Group& torus, const FiniteSubset& f,
                                            const FiniteSubset& m_set, const Element& gamma,
                                            std::vector<Region> region,
                                            const PartialBits& colored) {
  if (torus.kind() != GroupKind::Torus) throw InputError("the carrier must be a torus");
  const Group lat = Group::lattice(torus.dim());
  const FiniteSubset fl = with_identity(lat, lift_set(torus, f));
  const FiniteSubset ml = lift_set(torus, m_set);
  if (!is_symmetric_with_identity(lat, ml))
    throw InputError("M must be symmetric and contain the identity");
  if (ml.size() % fl.size() != 0) throw InputError("|M| must be a multiple of |F|");
  const Element gl = lift_to_lattice(torus, gamma);
  if (lat.is_identity(gl)) throw InputError("gamma must not be the identity");

  const FiniteSubset nl = set_union(product_set(lat, fl, ml), product_set(lat, ml, fl));
  if (nl.size() > 31) throw InputError("|N| = " + std::to_string(nl.size()) + " exceeds 31 bits");
  const FiniteSubset n4 = power_set(lat, nl, 4);
  const FiniteSubset fgf = product_set(lat, product_set(lat, fl, FiniteSubset{gl}), fl);
  FiniteSubset deltal = product_set(lat, product_set(lat, n4, fgf), n4);
  deltal = set_difference(deltal, FiniteSubset{lat.identity()});
  const FiniteSubset n5f = product_set(lat, power_set(lat, nl, 5), fl);
  const FiniteSubset outer = product_set(
      lat, product_set(lat, power_set(lat, nl, 5), fgf), power_set(lat, nl, 5));
  const auto radius = lattice_radius(outer);
  if (torus.modulus() <= 2 * radius)
    throw InputError("torus modulus " + std::to_string(torus.modulus()) +
                     " is too small; need more than " + std::to_string(2 * radius));

  SimilarityInstance inst{torus, torus_points(torus), std::move(region),
                          project(torus, fl), project(torus, ml), project(torus, nl),
                          project(torus, n5f), project(torus, deltal),
                          torus.make(gl.data), ml.size() / fl.size(), {}, {}, {}, {}, true};
  const auto& pts = inst.points;
  const std::size_t np = pts.size();
  if (inst.region.size() != np || colored.size() != np)
    throw InputError("region and coloring must cover every torus point");

  std::vector<char> c(np), u(np);
  for (std::size_t x = 0; x < np; ++x) {
    c[x] = inst.region[x] == Region::ToColor;
    u[x] = inst.region[x] == Region::Uncolored;
    if (inst.region[x] == Region::Colored && (!colored[x] || *colored[x] > 1))
      throw InputError("C0 points need a color in {0, 1}");
  }
  if (!is_syndetic(torus, pts, c, inst.f)) throw InputError("C is not F-syndetic");
  if (!is_separated(torus, pts, u, inst.s)) throw InputError("U is not S-separated");

  // Z: greedy maximal N^4-separated subset of C.
  const FiniteSubset n4t = project(torus, n4);
  std::vector<char> blocked(np, 0);
  for (std::uint32_t x = 0; x < np; ++x) {
    if (!c[x] || blocked[x]) continue;
    inst.z.push_back(x);
    for (const auto& sigma : n4t) blocked[point_of(pts, torus.multiply(sigma, pts[x]))] = 1;
  }
  inst.owner_z.assign(np, -1);
  inst.owner_nu.assign(np, -1);
  for (std::size_t j = 0; j < inst.z.size(); ++j)
    for (std::size_t i = 0; i < inst.n.size(); ++i) {
      auto x = point_of(pts, torus.multiply(inst.n[i], pts[inst.z[j]]));
      if (inst.owner_z[x] >= 0) throw InvariantError("N Z representation is not unique");
      inst.owner_z[x] = static_cast<std::int32_t>(j);
      inst.owner_nu[x] = static_cast<std::int32_t>(i);
    }
  inst.base.assign(np, std::nullopt);
  for (std::size_t x = 0; x < np; ++x) {
    if (inst.region[x] == Region::Colored)
      inst.base[x] = colored[x];
    else if (inst.region[x] == Region::ToColor && inst.owner_z[x] < 0)
      inst.base[x] = 0;
  }
  return inst;
}

SimilarityCsp build_similarity_csp(const SimilarityInstance& inst) {
  const auto& g = inst.group;
  const auto& pts = inst.points;
  const FiniteSubset n2 = power_set(g, inst.n, 2);
  std::vector<std::int32_t> z_index(pts.size(), -1);
  for (std::size_t j = 0; j < inst.z.size(); ++j)
    z_index[inst.z[j]] = static_cast<std::int32_t>(j);

  SimilarityCsp out{Csp::dense(0, 1, {}), {}};
  std::vector<Constraint> constraints;
  for (std::uint32_t j = 0; j < inst.z.size(); ++j) {
    const Element& z = pts[inst.z[j]];
    for (std::uint32_t t = 0; t < inst.delta.size(); ++t) {
      const Element y = g.multiply(inst.delta[t], z);
      std::vector<PointId> dom;
      for (const auto& sigma : n2)
        for (const Element* base : {&z, &y}) {
          auto zi = z_index[point_of(pts, g.multiply(sigma, *base))];
          if (zi >= 0) dom.push_back(static_cast<PointId>(zi));
        }
      std::sort(dom.begin(), dom.end());
      dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
      auto term = [&](std::uint32_t x) {
        if (inst.region[x] == Region::ToColor && inst.owner_z[x] >= 0) {
          auto it = std::lower_bound(dom.begin(), dom.end(),
                                     static_cast<PointId>(inst.owner_z[x]));
          if (it == dom.end() || *it != static_cast<PointId>(inst.owner_z[x]))
            throw InvariantError("owner of a variable bit is outside the domain");
          return BitTerm::variable(static_cast<std::uint32_t>(it - dom.begin()),
                                   static_cast<std::uint32_t>(inst.owner_nu[x]));
        }
        return BitTerm::constant(*inst.base[x]);
      };
      std::vector<BitEquality> eqs;
      for (const auto& nu : inst.n) {
        auto x1 = point_of(pts, g.multiply(nu, z));
        auto x2 = point_of(pts, g.multiply(nu, y));
        if (inst.region[x1] == Region::Uncolored || inst.region[x2] == Region::Uncolored)
          continue;
        eqs.push_back({term(x1), term(x2)});
      }
      auto set = std::make_shared<SimilaritySet>(dom.size(),
                                                 static_cast<unsigned>(inst.n.size()),
                                                 std::move(eqs));
      constraints.emplace_back(std::move(dom), std::move(set));
      out.labels.emplace_back(j, t);
    }
  }
  const Color k = static_cast<Color>(std::uint64_t{1} << inst.n.size());
  out.csp = Csp::dense(inst.z.size(), k, std::move(constraints));
  return out;
}

PartialBits decode_coloring(const SimilarityInstance& inst, const Assignment& h) {
  if (h.size() < inst.z.size()) throw InputError("h must color every point of Z");
  PartialBits f = inst.base;
  for (std::size_t x = 0; x < inst.points.size(); ++x) {
    if (inst.region[x] != Region::ToColor || inst.owner_z[x] < 0) continue;
    const auto& c = h[inst.owner_z[x]];
    if (!c) throw InputError("h leaves a point of Z uncolored");
    f[x] = static_cast<std::uint8_t>((*c >> inst.owner_nu[x]) & 1U);
  }
  return f;
}

std::vector<Color> encode_coloring(const SimilarityInstance& inst, const PartialBits& f) {
  std::vector<Color> h(inst.z.size(), 0);
  for (std::size_t x = 0; x < inst.points.size(); ++x) {
    if (inst.region[x] != Region::ToColor || inst.owner_z[x] < 0) continue;
    if (!f[x]) throw InputError("f leaves a point of C uncolored");
    if (*f[x]) h[inst.owner_z[x]] |= Color{1} << inst.owner_nu[x];
  }
  return h;
}

SimilarityCheck check_not_similar(const Group& g, const FiniteSubset& points,
                                  const PartialBits& f, const FiniteSubset& s_chk,
                                  const Element& gamma) {
  if (f.size() != points.size()) throw InputError("coloring size differs from the carrier");
  for (std::uint32_t x = 0; x < points.size(); ++x) {
    const Element gx = g.multiply(gamma, points[x]);
    bool witnessed = false;
    for (const auto& sigma : s_chk) {
      const auto& a = f[point_of(points, g.multiply(sigma, points[x]))];
      const auto& b = f[point_of(points, g.multiply(sigma, gx))];
      if (a && b && *a != *b) {
        witnessed = true;
        break;
      }
    }
    if (!witnessed) return {false, x};
  }
  return {};
}

bool subshift_membership(const Group& g, const FiniteSubset& window_dom,
                         const PartialBits& window, const FiniteSubset& s,
                         const Element& gamma) {
  if (window.size() != window_dom.size()) throw InputError("window size mismatch");
  auto value = [&](const Element& e) {
    auto i = window_dom.index_of(e);
    if (!i || !window[*i]) throw InputError("window does not cover S u S gamma");
    return *window[*i];
  };
  bool member = false;
  for (const auto& sigma : s)
    member = (value(sigma) != value(g.multiply(sigma, gamma))) || member;
  return member;
}

ParameterReport parameter_report(const SimilarityInstance& inst, const SimilarityCsp& sc) {
  ParameterReport rep;
  const auto cond = check_conditions(sc.csp);
  rep.metrics = cond.metrics;
  rep.gate = cond.good;
  const BigInt fs = inst.f.size();
  rep.vdeg_bound = ipow(BigInt(2), 11) * ipow(BigInt(inst.m), 10) * ipow(fs, 22);
  rep.ord_ok = rep.metrics.ord <= 2;
  rep.vdeg_ok = BigInt(rep.metrics.vdeg) <= rep.vdeg_bound;
  rep.per_constraint_ok = true;
  rep.min_e = SIZE_MAX;
  rep.min_e_prime = SIZE_MAX;
  const auto& g = inst.group;
  const auto& pts = inst.points;
  std::vector<char> used(pts.size(), 0);
  for (std::size_t i = 0; i < sc.labels.size(); ++i) {
    const auto [j, t] = sc.labels[i];
    const Element& z = pts[inst.z[j]];
    const Element y = g.multiply(inst.delta[t], z);
    ConstraintEligibility ce;
    std::vector<std::uint32_t> touched;
    for (const auto& nu : inst.n) {
      auto a = point_of(pts, g.multiply(nu, z));
      auto b = point_of(pts, g.multiply(nu, y));
      if (inst.region[a] != Region::ToColor || inst.region[b] == Region::Uncolored) continue;
      ++ce.e;
      if (!used[a] && !used[b]) {
        used[a] = used[b] = 1;
        touched.push_back(a);
        touched.push_back(b);
        ++ce.e_prime;
      }
    }
    for (auto x : touched) used[x] = 0;
    const auto& b = sc.csp.constraints()[i];
    ce.p = Rational(b.size(), ipow(sc.csp.k(), b.dom().size()));
    if (ce.p > Rational(1, ipow(BigInt(2), ce.e_prime)) || ce.e + 1 < inst.m ||
        3 * ce.e_prime < ce.e)
      rep.per_constraint_ok = false;
    rep.min_e = std::min(rep.min_e, ce.e);
    rep.min_e_prime = std::min(rep.min_e_prime, ce.e_prime);
    rep.per_constraint.push_back(ce);
  }
  if (sc.labels.empty()) rep.min_e = rep.min_e_prime = 0;
  rep.p_bound = Rational(1, ipow(BigInt(2), rep.min_e_prime / 6));
  rep.p_ok = rep.metrics.p <= rep.p_bound;
  return rep;
}

SplitResult split_syndetic(const Group& torus, const FiniteSubset& points,
                           const std::vector<char>& w, const FiniteSubset& f,
                           const FiniteSubset& s_sep) {
  if (!is_symmetric_with_identity(torus, s_sep))
    throw InputError("S_sep must be symmetric and contain the identity");
  for (const auto& e : product_set(torus, inverse_set(torus, f), f))
    if (!s_sep.contains(e)) throw InputError("S_sep must contain F^-1 F");
  if (torus.kind() == GroupKind::Torus) {
    const auto r = lattice_radius(lift_set(torus, s_sep)) + lattice_radius(lift_set(torus, f));
    if (torus.modulus() <= 2 * r)
      throw InputError("torus too small for S_sep F without wrap-around");
  }
  SplitResult out{std::vector<char>(points.size(), 0), std::vector<char>(points.size(), 0)};
  std::vector<char> blocked(points.size(), 0);
  for (std::uint32_t x = 0; x < points.size(); ++x) {
    if (!w[x] || blocked[x]) continue;
    out.u[x] = 1;
    for (const auto& sigma : s_sep)
      blocked[point_of(points, torus.multiply(sigma, points[x]))] = 1;
  }
  for (std::size_t x = 0; x < points.size(); ++x) out.c[x] = w[x] && !out.u[x];
  if (!is_syndetic(torus, points, out.c, f))
    throw InputError("C is not F-syndetic; W must be H-syndetic with F = H u H delta disjoint");
  if (!is_separated(torus, points, out.u, s_sep))
    throw InvariantError("U is not separated");
  for (const auto& x : points) {
    std::size_t hits = 0;
    for (const auto& phi : f) hits += out.u[point_of(points, torus.multiply(phi, x))];
    if (hits > 1) throw InvariantError("an F-translate meets U twice");
  }
  return out;
}

DepthDemo subshift_depth_demo(const Group& torus, const FiniteSubset& h0,
                              const std::vector<Element>& gammas, std::size_t depth) {
  if (torus.kind() != GroupKind::Torus || torus.dim() != 1)
    throw InputError("the depth demo runs on a one-dimensional torus");
  if (gammas.size() < depth) throw InputError("one gamma per level is required");
  if (h0.empty()) throw InputError("H_0 must be nonempty");
  const Group lat = Group::lattice(1);
  const FiniteSubset points = torus_points(torus);
  const std::size_t np = points.size();
  DepthDemo demo;
  demo.coloring.assign(np, std::nullopt);
  std::vector<char> w(np, 1);
  FiniteSubset h = lift_set(torus, h0);

  for (std::size_t level = 0; level < depth; ++level) {
    DepthLevel rec;
    rec.level = level;
    rec.h_size = h.size();
    std::int32_t step = 1;
    while (true) {
      bool clash = false;
      for (const auto& e : h)
        if (h.contains(Element{e.data[0] + step})) clash = true;
      if (!clash) break;
      ++step;
    }
    const FiniteSubset fn = set_union(h, product_set(lat, h, FiniteSubset{Element{step}}));
    const FiniteSubset fsym = with_identity(lat, fn);
    rec.f_size = fn.size();
    bool done = false;
    for (std::size_t m = 1;; m += 2) {
      const std::int32_t half = static_cast<std::int32_t>((m * fsym.size() - 1) / 2);
      const FiniteSubset ml = coordinate_box(lat, {-half}, {half});
      const FiniteSubset nl =
          set_union(product_set(lat, fsym, ml), product_set(lat, ml, fsym));
      if (nl.size() > 31) {
        demo.refusal = "level " + std::to_string(level) + ": no m with |N| <= 31 passes the gate (|F| = " +
                       std::to_string(fsym.size()) + ")";
        break;
      }
      FiniteSubset sn = product_set(lat, power_set(lat, nl, 5), fsym);
      sn = set_union(symmetrize(lat, sn), product_set(lat, inverse_set(lat, fn), fn));
      const auto need = std::max<std::int64_t>(
          lattice_radius(sn) + lattice_radius(fn),
          10 * lattice_radius(nl) + 2 * lattice_radius(fsym) +
              lattice_radius(FiniteSubset{lift_to_lattice(torus, gammas[level])}));
      if (torus.modulus() <= 2 * need) {
        demo.torus_too_small = true;
        demo.refusal = "level " + std::to_string(level) + ": torus modulus " +
                       std::to_string(torus.modulus()) + " too small, need more than " +
                       std::to_string(2 * need);
        break;
      }
      const auto split = split_syndetic(torus, points, w, project(torus, fn), project(torus, sn));
      std::vector<Region> region(np);
      for (std::size_t x = 0; x < np; ++x)
        region[x] = split.c[x] ? Region::ToColor
                               : (split.u[x] ? Region::Uncolored : Region::Colored);
      auto inst = make_similarity_instance(torus, project(torus, fn), project(torus, ml),
                                           gammas[level], region, demo.coloring);
      auto sc = build_similarity_csp(inst);
      if (!check_conditions(sc.csp).good) continue;
      auto sol = solve(sc.csp);
      demo.coloring = decode_coloring(inst, sol.coloring);
      rec.m = m;
      rec.s_size = sn.size();
      rec.gate = true;
      rec.c_points = static_cast<std::size_t>(std::count(split.c.begin(), split.c.end(), 1));
      rec.u_points = static_cast<std::size_t>(std::count(split.u.begin(), split.u.end(), 1));
      rec.z_points = inst.z.size();
      rec.not_similar =
          check_not_similar(torus, points, demo.coloring, inst.s, inst.gamma).ok;
      w = split.u;
      h = product_set(lat, sn, h);
      done = true;
      break;
    }
    if (!done) {
      rec.note = demo.refusal;
      demo.levels.push_back(rec);
      return demo;
    }
    demo.levels.push_back(rec);
  }
  demo.completed = true;
  return demo;
}

}  // namespace lllkit
