// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numeric>

#include "lllkit/errors.hpp"
#include "lllkit/local.hpp"
#include "lllkit/solver.hpp"
#include "lllkit/tiles.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lllkit;
using namespace lllkit::testing;

namespace {

NetworkGraph grid(int side, std::vector<std::uint64_t> ids = {}) {
  const auto z2 = Group::lattice_standard(2);
  return make_network(z2, coordinate_box(z2, {0, 0}, {side - 1, side - 1}), z2.generators(),
                      std::move(ids));
}

NetworkGraph path(int n, std::vector<std::uint64_t> ids = {}) {
  const auto z = Group::lattice_standard(1);
  return make_network(z, coordinate_box(z, {0}, {n - 1}), z.generators(), std::move(ids));
}

std::uint64_t phase(const RoundLedger& l, const std::string& name) {
  for (const auto& p : l.phases)
    if (p.name == name) return p.rounds;
  return 0;
}

}  // namespace

TEST_CASE("one-step equivalence") {
  const auto net = grid(4);
  const auto& z2 = net.group;
  const auto x = static_cast<std::uint32_t>(*net.elements.index_of({1, 1}));
  const auto y = static_cast<std::uint32_t>(*net.elements.index_of({2, 1}));
  const Element e1{1, 0}, zero{0, 0};
  // y = e1 x, so (x, e1) ~ (y, 1).
  CHECK(equivalence_step(net, x, e1, y, zero));
  CHECK_FALSE(equivalence_step(net, x, zero, y, zero));
  CHECK(equivalence_step(net, y, zero, x, e1));
  const auto far = static_cast<std::uint32_t>(*net.elements.index_of({3, 3}));
  CHECK_FALSE(equivalence_step(net, x, z2.multiply(e1, e1), far, zero));
}

TEST_CASE("equivalence closure matches a group-arithmetic scan") {
  const auto net = grid(8);
  const auto d = word_ball(net.group, net.group.generators(), 2);
  const auto eq = equivalence_closure(net, d);
  const auto ref = similarity_classes(net, d);
  REQUIRE(eq.cls.size() == ref.size());
  // Same partition: the class maps are mutually functional.
  std::vector<std::int64_t> fwd(ref.size(), -1), bwd(ref.size(), -1);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    auto& f = fwd[eq.cls[i]];
    auto& b = bwd[ref[i]];
    if (f < 0) f = ref[i];
    if (b < 0) b = eq.cls[i];
    CHECK(f == ref[i]);
    CHECK(b == eq.cls[i]);
  }
  // Within a class each vertex appears at most once.
  for (const auto& cls : eq.members) {
    std::vector<char> seen(net.size(), 0);
    for (const auto& [x, j] : cls) {
      CHECK_FALSE(seen[x]);
      seen[x] = 1;
    }
  }
}

TEST_CASE("auxiliary graph") {
  const auto z2 = Group::lattice_standard(2);
  const auto apart = make_network(z2, FiniteSubset{{0, 0}, {5, 5}}, z2.generators());
  const auto d2 = with_identity(z2, z2.generators());
  CHECK(auxiliary_graph(apart, d2).graph.edge_count() == 0);

  const auto p = path(16);
  const auto d = coordinate_box(p.group, {-2}, {2});
  const auto aux = auxiliary_graph(p, d);
  CHECK(aux.max_degree <= 625);
  CHECK(aux.max_bracket <= 25);
  CHECK(aux.max_degree <= aux.degree_bound);
  CHECK(aux.degree_bound == aux_degree_bound(p.group, d));

  const auto g = grid(8);
  const auto dg = word_ball(g.group, g.group.generators(), 2);
  const auto ag = auxiliary_graph(g, dg);
  const auto under = g.graph.underlying();
  for (std::uint32_t x = 0; x < g.size(); ++x) {
    const auto dist = bfs_distances(under, x, static_cast<std::uint32_t>(dg.size()));
    for (auto y : ag.bracket[x]) CHECK(dist[y] <= dg.size());
  }
  CHECK(ag.max_degree <= ag.degree_bound);
}

TEST_CASE("distributed homomorphism") {
  const auto z2 = Group::lattice_standard(2);
  const auto d1 = with_identity(z2, z2.generators());
  const auto single = make_network(z2, FiniteSubset{{0, 0}}, z2.generators());
  const auto r1 = distributed_homomorphism(single, d1, 126);
  CHECK(r1.ledger.total() == 0);
  CHECK_FALSE(check_hom_by_scan(single, d1, 126, r1.q).has_value());

  const auto net = grid(8);
  const auto d = word_ball(z2, z2.generators(), 2);
  const std::size_t m = d.size() * d.size() * d.size() + 1;
  const auto res = distributed_homomorphism(net, d, m);
  CHECK(validate_homomorphism(net, d, m, res.q).ok);
  const auto scan = check_hom_by_scan(net, d, m, res.q);
  CHECK_MESSAGE(!scan.has_value(), scan.value_or(""));
  CHECK(res.aux_max_degree <= res.aux_degree_bound);
  CHECK(res.stages == res.aux_degree_bound + 1);
  CHECK(phase(res.ledger, "aux-discovery") == 2 * d.size());
  CHECK(phase(res.ledger, "stages") == res.stages * 2 * d.size());

  CHECK_THROWS_AS(distributed_homomorphism(net, d, m - 1), InputError);
  CHECK_THROWS_AS(distributed_homomorphism(net, FiniteSubset{{0, 0}, {1, 0}}, 9), InputError);

  auto broken = res.q;
  broken[5][0] = broken[5][1];
  CHECK_FALSE(validate_homomorphism(net, d, m, broken).ok);
}

TEST_CASE("homomorphisms under permuted ids and visiting orders") {
  const auto z2 = Group::lattice_standard(2);
  const auto d = with_identity(z2, z2.generators());
  const std::size_t m = 126;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto net = grid(6, random_ids(36, seed));
    const auto a = distributed_homomorphism(net, d, m);
    CHECK_FALSE(check_hom_by_scan(net, d, m, a.q).has_value());
    CHECK(distributed_homomorphism(net, d, m, seed + 100).q == a.q);
  }
}

TEST_CASE("round growth on paths is confined to the color reduction") {
  const FiniteSubset d{{0}, {1}, {-1}};
  const auto small = distributed_homomorphism(path(256, random_ids(256, 1)), d, 28);
  const auto large = distributed_homomorphism(path(65536, random_ids(65536, 1)), d, 28);
  const auto hop = 2 * d.size();
  CHECK(phase(small.ledger, "aux-discovery") == phase(large.ledger, "aux-discovery"));
  CHECK(phase(small.ledger, "stages") == phase(large.ledger, "stages"));
  const auto aux_bound = small.aux_degree_bound;
  const auto s = gps_schedule(256, aux_bound), l = gps_schedule(65536, aux_bound);
  CHECK(phase(small.ledger, "gps-on-aux") == s.rounds() * hop);
  CHECK(phase(large.ledger, "gps-on-aux") == l.rounds() * hop);
  CHECK(l.steps.size() <= log_star(65536));
  CHECK(l.elimination_rounds == s.elimination_rounds);
}

TEST_CASE("avoiding colorings through the tile graph") {
  const auto z = Group::lattice_standard(1);
  const FiniteSubset s{{1}};
  const FiniteSubset d{{0}, {1}, {-1}};
  const std::size_t m = 28;
  const auto net = path(256, random_ids(256, 4));

  const auto h = build_tile_graph(z, d, m, s);
  std::vector<std::uint32_t> order(h.graph.vertex_count());
  std::iota(order.begin(), order.end(), 0U);
  const auto hc = greedy_proper_coloring(h.graph.underlying(), order);
  const auto k = static_cast<Color>(palette_size(hc));

  const auto res = distributed_avoiding_coloring(net, d, m, hc, proper_coloring_patterns(z, k, s));
  CHECK(is_proper(net.graph.underlying(), res.coloring));
  CHECK(res.ledger.total() > 0);

  const std::vector<Color> zeros(h.graph.vertex_count(), 0);
  CHECK(distributed_avoiding_coloring(net, d, m, zeros, PatternSet{1, {}}).coloring ==
        std::vector<Color>(256, 0));
  CHECK_THROWS_AS(distributed_avoiding_coloring(net, d, m, zeros, proper_coloring_patterns(z, 1, s)),
                  InvariantError);
  CHECK_THROWS_AS(distributed_avoiding_coloring(net, d, m, std::vector<Color>(5, 0), PatternSet{1, {}}),
                  InputError);
}

TEST_CASE("the grid tile graph exceeds the vertex budget") {
  const auto z2 = Group::lattice_standard(2);
  const auto d = with_identity(z2, z2.generators());
  const std::size_t m = d.size() * d.size() * d.size() + 1;
  CHECK(falling_factorial(m, d.size()) > kDefaultVertexBudget);
  CHECK_THROWS_AS(build_tile_graph(z2, d, m, z2.generators()), BudgetExceeded);
}
