// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "lllkit/errors.hpp"
#include "lllkit/patterns.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lllkit;
using namespace lllkit::testing;

namespace {

KPattern pattern(FiniteSubset dom, std::vector<Color> values) {
  return KPattern{std::move(dom), std::move(values)};
}

// Anchor scan on a torus: p occurs iff some x has f(delta x) = p(delta) for all delta.
bool occurs_by_anchor(const Group& t, const FiniteSubset& pts, const KPattern& p,
                      const std::vector<Color>& f) {
  for (const auto& x : pts) {
    bool all = true;
    for (std::size_t i = 0; i < p.dom.size() && all; ++i)
      all = f[*pts.index_of(t.multiply(p.dom[i], x))] == p.values[i];
    if (all) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("S-connectedness") {
  const auto z2 = Group::lattice_standard(2);
  const auto& s = z2.generators();
  CHECK(is_s_connected(z2, pattern({{0, 0}, {1, 0}}, {0, 0}), s));
  CHECK_FALSE(is_s_connected(z2, pattern({{0, 0}, {1, 1}}, {0, 0}), s));
  CHECK(is_s_connected(z2, pattern({{0, 0}, {1, 0}, {0, 1}}, {0, 1, 2}), s));
}

TEST_CASE("validation and normalization") {
  const auto z = Group::lattice_standard(1);
  CHECK_THROWS_AS(validate_pattern(z, pattern({{0}}, {3}), 3), InputError);
  CHECK_THROWS_AS(validate_pattern(z, pattern({{0}, {1}}, {0}), 3), InputError);
  const auto n = normalize(z, pattern({{5}, {6}}, {1, 0}));
  CHECK(n.dom.contains(z.identity()));
  CHECK(n.dom.size() == 2);
}

TEST_CASE("occurrence") {
  const auto z5 = Group::torus_standard(1, 5);
  const auto& s = z5.generators();
  const auto c5 = cayley_subgraph(z5, torus_points(z5), s);
  const std::vector<Color> f{0, 1, 0, 1, 2};
  CHECK(occurs(z5, pattern({{0}}, {2}), s, c5, f).found);
  CHECK_FALSE(occurs(z5, pattern({{0}}, {3}), s, c5, f).found);

  const auto mono = proper_coloring_patterns(z5, 3, s);
  CHECK(is_avoiding(z5, f, c5, mono, s).avoiding);
  std::vector<Color> planted = f;
  planted[1] = 0;
  const auto rep = is_avoiding(z5, planted, c5, mono, s);
  CHECK_FALSE(rep.avoiding);
  REQUIRE_FALSE(rep.violations.empty());
  const auto& w = rep.violations[0].second;
  CHECK(planted[w[0]] == planted[w[1]]);

  CHECK_THROWS_AS(occurs(z5, pattern({{0}, {2}}, {0, 0}), s, c5, f), InputError);
}

TEST_CASE("occurrence agrees with an anchor scan on tori") {
  Rng rng(17);
  for (int q : {4, 5, 6}) {
    const auto t = Group::torus_standard(2, q);
    const auto pts = torus_points(t);
    const auto& s = t.generators();
    const auto h = cayley_subgraph(t, pts, s);
    const std::vector<FiniteSubset> doms{
        {{0, 0}, {1, 0}}, {{0, 0}, {0, 1}, {1, 1}}, {{0, 0}, {1, 0}, {2, 0}, {2, 1}}};
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Color> f(pts.size());
      for (auto& c : f) c = static_cast<Color>(rng() % 2);
      for (const auto& dom : doms) {
        std::vector<Color> vals(dom.size());
        for (auto& v : vals) v = static_cast<Color>(rng() % 2);
        const auto p = pattern(dom, vals);
        CHECK(occurs(t, p, s, h, f).found == occurs_by_anchor(t, pts, p, f));
      }
    }
  }
}

TEST_CASE("domino on a colored 4x4 torus") {
  const auto t = Group::torus_standard(2, 4);
  const auto pts = torus_points(t);
  const auto h = cayley_subgraph(t, pts, t.generators());
  std::vector<Color> f(16);
  for (std::size_t i = 0; i < 16; ++i) f[i] = static_cast<Color>((i / 4 + i % 4) % 2);
  for (Color a = 0; a < 2; ++a)
    for (Color b = 0; b < 2; ++b) {
      const auto p = pattern({{0, 0}, {1, 0}}, {a, b});
      CHECK(occurs(t, p, t.generators(), h, f).found == (a != b));
    }
}

TEST_CASE("proper coloring patterns") {
  const auto z = Group::lattice_standard(1);
  CHECK(proper_coloring_patterns(z, 2, FiniteSubset{{1}}).patterns.size() == 2);
  CHECK(proper_coloring_patterns(z, 3, FiniteSubset{{0}}).patterns.empty());

  const auto z5 = Group::torus_standard(1, 5);
  const auto& s = z5.generators();
  const auto c5 = cayley_subgraph(z5, torus_points(z5), s);
  const auto ps = proper_coloring_patterns(z5, 2, s);
  const auto g = c5.underlying();
  for (int mask = 0; mask < 32; ++mask) {
    std::vector<Color> f(5);
    for (int i = 0; i < 5; ++i) f[i] = static_cast<Color>((mask >> i) & 1);
    CHECK(is_avoiding(z5, f, c5, ps, s).avoiding == is_proper(g, f));
  }
}

TEST_CASE("avoidance edge cases") {
  const auto z4 = Group::torus_standard(1, 4);
  const auto& s = z4.generators();
  const auto h = cayley_subgraph(z4, torus_points(z4), s);
  const std::vector<Color> f{0, 1, 0, 1};
  CHECK(is_avoiding(z4, f, h, PatternSet{2, {}}, s).avoiding);
  CHECK(is_avoiding(z4, f, h, PatternSet{3, {pattern({{0}}, {2})}}, s).avoiding);
}

TEST_CASE("occurring patterns") {
  const auto t = Group::torus_standard(2, 4);
  const auto pts = torus_points(t);
  const std::vector<Color> constant(16, 1);
  const FiniteSubset domino{{0, 0}, {1, 0}};
  const auto one = occurring_patterns(t, domino, pts, constant, 2);
  REQUIRE(one.patterns.size() == 1);
  CHECK(one.patterns[0].values == std::vector<Color>{1, 1});

  std::vector<Color> used(16, 0);
  used[3] = 2;
  const auto singles = occurring_patterns(t, FiniteSubset{{0, 0}}, pts, used, 3);
  CHECK(singles.patterns.size() == 2);

  std::vector<Color> checker(16);
  for (std::size_t i = 0; i < 16; ++i) checker[i] = static_cast<Color>((i / 4 + i % 4) % 2);
  const auto alt = occurring_patterns(t, domino, pts, checker, 2);
  std::set<std::vector<Color>> vals;
  for (const auto& p : alt.patterns) vals.insert(p.values);
  CHECK(vals == std::set<std::vector<Color>>{{0, 1}, {1, 0}});

  const auto h = cayley_subgraph(t, pts, t.generators());
  const auto graph_form = occurring_patterns(t, domino, t.generators(), h, checker, 2);
  std::set<std::vector<Color>> vals2;
  for (const auto& p : graph_form.patterns) vals2.insert(p.values);
  CHECK(vals2 == vals);
}

TEST_CASE("patterns transfer along label-preserving homomorphisms") {
  // The 12-cycle maps onto the 4-cycle by reduction mod 4.
  const auto z12 = Group::torus_standard(1, 12);
  const auto z4 = Group::torus_standard(1, 4);
  const auto g = cayley_subgraph(z12, torus_points(z12), z12.generators());
  const auto h = cayley_subgraph(z4, torus_points(z4), z4.generators());
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Color> hc(4);
    for (auto& c : hc) c = static_cast<Color>(rng() % 3);
    std::vector<Color> f(12);
    for (std::size_t i = 0; i < 12; ++i) f[i] = hc[i % 4];
    for (Color a = 0; a < 3; ++a)
      for (Color b = 0; b < 3; ++b) {
        const auto p12 = pattern({{0}, {1}}, {a, b});
        const auto p4 = pattern({{0}, {1}}, {a, b});
        if (occurs(z12, p12, z12.generators(), g, f).found)
          CHECK(occurs(z4, p4, z4.generators(), h, hc).found);
      }
    const auto ps4 = proper_coloring_patterns(z4, 3, z4.generators());
    const auto ps12 = proper_coloring_patterns(z12, 3, z12.generators());
    if (is_avoiding(z4, hc, h, ps4, z4.generators()).avoiding)
      CHECK(is_avoiding(z12, f, g, ps12, z12.generators()).avoiding);
  }
}
