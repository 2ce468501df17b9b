// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "lllkit/errors.hpp"
#include "lllkit/solver.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lllkit;
using namespace lllkit::testing;

namespace {

std::vector<std::uint32_t> iota_order(std::size_t n) {
  std::vector<std::uint32_t> o(n);
  std::iota(o.begin(), o.end(), 0U);
  return o;
}

bool independent(const Graph& g, const std::vector<std::uint32_t>& s) {
  for (auto u : s)
    for (auto v : s)
      if (g.adjacent(u, v)) return false;
  return true;
}

}  // namespace

TEST_CASE("maximal independent set") {
  CHECK(maximal_independent_set(Graph(4), iota_order(4)).size() == 4);
  const auto p = path_graph(3);
  CHECK(maximal_independent_set(p, iota_order(3)) == std::vector<std::uint32_t>{0, 2});
  CHECK(maximal_independent_set(complete_graph(5), iota_order(5)).size() == 1);

  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    Graph g(12);
    for (int e = 0; e < 20; ++e)
      g.add_edge(static_cast<std::uint32_t>(rng() % 12), static_cast<std::uint32_t>(rng() % 12));
    auto order = iota_order(12);
    std::shuffle(order.begin(), order.end(), rng);
    const auto s = maximal_independent_set(g, order);
    CHECK(independent(g, s));
    for (std::uint32_t v = 0; v < 12; ++v) {
      const bool in = std::find(s.begin(), s.end(), v) != s.end();
      bool covered = in;
      for (auto w : g.neighbors(v))
        if (std::find(s.begin(), s.end(), w) != s.end()) covered = true;
      CHECK(covered);
    }
  }
}

TEST_CASE("greedy proper coloring") {
  const auto edgeless = greedy_proper_coloring(Graph(5), iota_order(5));
  CHECK(std::all_of(edgeless.begin(), edgeless.end(), [](auto c) { return c == 0; }));
  const auto c5 = cycle_graph(5);
  const auto col = greedy_proper_coloring(c5, iota_order(5));
  CHECK(is_proper(c5, col));
  CHECK(palette_size(col) <= 3);
  const auto k4 = greedy_proper_coloring(complete_graph(4), iota_order(4));
  CHECK(palette_size(k4) == 4);
}

TEST_CASE("conditional probability") {
  const Constraint b({0, 1}, {{0, 0}});
  CHECK(conditional_probability(b, 0, 0, 2) == Rational(1, 2));
  CHECK(conditional_probability(b, 0, 1, 2) == 0);
  const Constraint full({0, 1}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  for (Color a = 0; a < 2; ++a) CHECK(conditional_probability(full, 1, a, 2) == 1);
  CHECK_THROWS_AS(conditional_probability(b, 2, 0, 2), InputError);

  Rng rng(8);
  RandomCspShape shape;
  shape.max_points = 4;
  shape.max_k = 4;
  shape.near_gate = false;
  for (int t = 0; t < 100; ++t) {
    const auto csp = random_csp(rng, shape);
    for (const auto& c : csp.constraints()) {
      const Rational p(c.size(), ipow(BigInt(csp.k()), c.dom().size()));
      for (auto x : c.dom()) {
        Rational sum = 0;
        for (Color a = 0; a < csp.k(); ++a) sum += conditional_probability(c, x, a, csp.k());
        CHECK(sum / csp.k() == p);
      }
    }
  }
}

TEST_CASE("good color") {
  CHECK(good_color(0, {}, 3, 1) == 0);
  const Constraint b({0, 1}, {{0, 0}, {0, 1}});
  const Constraint* inc[] = {&b};
  CHECK(good_color(0, inc, 2, 1) == 1);
}

TEST_CASE("fewer than k colors are bad") {
  Rng rng(21);
  RandomCspShape shape;
  shape.max_points = 6;
  shape.max_k = 4;
  shape.max_arity = 3;
  for (int t = 0; t < 200; ++t) {
    const auto csp = random_csp(rng, shape);
    const auto vdeg = std::max<std::size_t>(1, metrics(csp).vdeg);
    const auto inc = csp.incidence();
    for (auto x : csp.points()) {
      std::vector<const Constraint*> bs;
      for (auto i : inc[x]) bs.push_back(&csp.constraints()[i]);
      std::size_t bad = 0;
      for (Color a = 0; a < csp.k(); ++a)
        for (const auto* c : bs) {
          const Rational p(c->size(), ipow(BigInt(csp.k()), c->dom().size()));
          if (conditional_probability(*c, x, a, csp.k()) > p * BigInt(vdeg)) {
            ++bad;
            break;
          }
        }
      CHECK(bad < csp.k());
      CHECK(good_color(x, bs, csp.k(), vdeg) < csp.k());
    }
  }
}

TEST_CASE("solve") {
  const auto dis = Csp::dense(2, 2, {Constraint({0, 1}, {{0, 0}, {1, 1}})});
  const auto sol = solve(dis);
  CHECK(*sol.coloring[0] != *sol.coloring[1]);

  const auto p5 = disequality_csp(path_graph(8), 5);
  const auto m = metrics(p5);
  CHECK(m.p * BigInt(m.vdeg * m.vdeg) == Rational(4, 5));
  const auto s5 = solve(p5);
  CHECK(check_solution(p5, s5.coloring).ok);

  const auto p3 = disequality_csp(path_graph(8), 3);
  CHECK_THROWS_AS(solve(p3), GateRejected);
  CHECK(brute_force_solve(p3).has_value());
}

TEST_CASE("gate rejection names the witness") {
  const auto csp = Csp::dense(3, 2, {Constraint({0}, std::vector<Tuple>{}), Constraint({1, 2}, {{0, 0}, {1, 1}, {0, 1}, {1, 0}})});
  try {
    solve(csp);
    FAIL("expected rejection");
  } catch (const GateRejected& e) {
    CHECK(e.witness() == 1);
  }
}

TEST_CASE("solve is deterministic and its trace is strict") {
  Rng rng(31);
  RandomCspShape shape;
  shape.max_points = 40;
  shape.max_k = 5;
  int solved = 0;
  for (int t = 0; t < 200; ++t) {
    const auto csp = random_csp(rng, shape);
    if (!check_conditions(csp).good) continue;
    const auto a = solve(csp), b = solve(csp);
    CHECK(a.coloring == b.coloring);
    for (const auto& st : a.trace.stages) CHECK(st.strict);
    // Every class is independent in the dependency graph.
    const auto g = dependency_graph(csp);
    for (const auto& cls : a.trace.classes) CHECK(independent(g, cls));
    ++solved;
  }
  CHECK(solved > 100);
}

TEST_CASE("brute force") {
  const auto e = brute_force_solve(Csp::dense(2, 2, {}));
  REQUIRE(e);
  CHECK(*e == Assignment{0, 0});
  const auto d = brute_force_solve(Csp::dense(2, 2, {Constraint({0, 1}, {{0, 0}, {1, 1}})}));
  REQUIRE(d);
  CHECK(*d == Assignment{0, 1});
  const auto u = brute_force_solve(Csp::dense(1, 2, {Constraint({0}, {{0}, {1}})}));
  CHECK_FALSE(u.has_value());
  CHECK_THROWS_AS(brute_force_solve(Csp::dense(30, 3, {}), 1000), BudgetExceeded);
}
