// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "lllkit/errors.hpp"
#include "lllkit/local.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lllkit;
using namespace lllkit::testing;

namespace {

NetworkGraph path_network(int n, std::vector<std::uint64_t> ids = {}) {
  const auto z = Group::lattice_standard(1);
  return make_network(z, coordinate_box(z, {0}, {n - 1}), z.generators(), std::move(ids));
}

}  // namespace

TEST_CASE("log star") {
  CHECK(log_star(1) == 0);
  CHECK(log_star(2) == 1);
  CHECK(log_star(3) == 2);
  CHECK(log_star(4) == 2);
  CHECK(log_star(5) == 3);
  CHECK(log_star(65536) == 4);
  CHECK(log_star(BigInt(1) << 70) == 5);
  CHECK(log_star_floor(4) == 17);
}

TEST_CASE("ids") {
  CHECK_THROWS_AS(validate_ids(std::vector<std::uint64_t>{1, 1}), InputError);
  CHECK_THROWS_AS(validate_ids(std::vector<std::uint64_t>{0, 1}), InputError);
  const auto ids = random_ids(50, 9);
  CHECK_NOTHROW(validate_ids(ids));
  CHECK(ids == random_ids(50, 9));
}

TEST_CASE("collect ball") {
  const auto p = path_network(7);
  const auto b0 = collect_ball(p, 3, 0);
  CHECK(b0.vertices == std::vector<std::uint32_t>{3});
  CHECK(b0.ids == std::vector<std::uint64_t>{4});
  const auto b1 = collect_ball(p, 3, 1);
  CHECK(b1.vertices.size() == 3);
  CHECK(b1.graph.edge_count() == 2);

  const auto z2 = Group::lattice_standard(2);
  const auto grid = make_network(z2, coordinate_box(z2, {0, 0}, {6, 6}), z2.generators());
  const auto centre = *grid.elements.index_of({3, 3});
  const auto b2 = collect_ball(grid, static_cast<std::uint32_t>(centre), 2);
  CHECK(b2.vertices.size() == 13);
  CHECK(b2.graph.edge_count() == 16);
  CHECK(b2.graph.labels_antisymmetric());
  for (std::uint32_t i = 0; i < b2.vertices.size(); ++i)
    for (const auto& a : b2.graph.arcs(i))
      CHECK(z2.multiply(b2.graph.alphabet()[a.label], grid.elements[b2.vertices[i]]) ==
            grid.elements[b2.vertices[a.to]]);

  // Translating the network keeps the ids, so the encodings agree.
  const auto shifted =
      make_network(z2, coordinate_box(z2, {10, 0}, {16, 6}), z2.generators());
  const auto c2 = *shifted.elements.index_of({13, 3});
  CHECK(collect_ball(shifted, static_cast<std::uint32_t>(c2), 2).encoding == b2.encoding);
  auto other_ids = grid.ids;
  std::swap(other_ids[centre], other_ids[0]);
  const auto relabelled = make_network(z2, grid.elements, z2.generators(), other_ids);
  CHECK(collect_ball(relabelled, static_cast<std::uint32_t>(centre), 2).encoding != b2.encoding);
}

TEST_CASE("gps coloring basics") {
  const Graph single(1);
  const std::vector<std::uint64_t> one{1};
  const auto r1 = gps_coloring(single, one, 2);
  CHECK(r1.colors == std::vector<Color>{0});
  CHECK(r1.rounds == 0);

  const auto c64 = cycle_graph(64);
  const auto ids = random_ids(64, 2);
  const auto r = gps_coloring(c64, ids, 2);
  CHECK(is_proper(c64, r.colors));
  for (auto c : r.colors) CHECK(c < 3);
  CHECK(r.rounds == r.schedule.rounds());

  CHECK_THROWS_AS(gps_coloring(complete_graph(4), random_ids(4, 1), 2), InputError);
}

TEST_CASE("gps round growth on cycles") {
  const auto small = gps_coloring(cycle_graph(256), random_ids(256, 3), 2);
  const auto large = gps_coloring(cycle_graph(65536), random_ids(65536, 3), 2);
  CHECK(is_proper(cycle_graph(65536), large.colors));
  CHECK(large.rounds <= small.rounds + 1);
  CHECK(large.schedule.steps.size() <= log_star(65536));
}

TEST_CASE("gps results do not depend on the visiting order") {
  const auto g = cycle_graph(500);
  const auto ids = random_ids(500, 5);
  const auto base = gps_coloring(g, ids, 2);
  for (std::uint64_t seed : {1, 2, 3}) CHECK(gps_coloring(g, ids, 2, seed).colors == base.colors);
}

TEST_CASE("gps output at x depends only on its ball") {
  const auto g = cycle_graph(400);
  auto ids = random_ids(400, 8);
  const auto base = gps_coloring(g, ids, 2);
  const auto radius = base.rounds;
  // Only vertices within the round count of 200 or 201 may change.
  std::swap(ids[200], ids[201]);
  const auto after = gps_coloring(g, ids, 2);
  for (std::uint64_t v = 0; v < 400; ++v) {
    const auto far = std::min({v > 200 ? v - 200 : 200 - v, v > 201 ? v - 201 : 201 - v,
                               400 - (v > 200 ? v - 200 : 200 - v), 400 - (v > 201 ? v - 201 : 201 - v)});
    if (far > radius) CHECK(after.colors[v] == base.colors[v]);
  }
}

TEST_CASE("sync network applies rounds from the previous states") {
  const auto g = path_graph(5);
  SyncNetwork<int> net(g, {1, 0, 0, 0, 0}, 7);
  for (int r = 0; r < 3; ++r)
    net.round([](std::uint32_t, int self, std::span<const int* const> nb) {
      int m = self;
      for (const int* x : nb) m = std::max(m, *x);
      return m;
    });
  CHECK(net.states() == std::vector<int>{1, 1, 1, 1, 0});
  CHECK(net.rounds() == 3);
}

TEST_CASE("local rule on windows") {
  const auto z = Group::lattice_standard(1);
  const auto& s = z.generators();
  const std::size_t n = 64;
  const auto radius = local_rule_radius(n, 2);
  const auto dom = coordinate_box(z, {-static_cast<int>(radius)}, {static_cast<int>(radius)});

  // Proper n-coloring of Z_256 that is injective on every window.
  std::vector<Color> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  Rng rng(6);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto color = [&](long x) { return perm[static_cast<std::size_t>(((x % 256) + 256) % 256) % n]; };
  auto window_at = [&](long x) {
    std::vector<Color> w(dom.size());
    for (std::size_t i = 0; i < dom.size(); ++i) w[i] = color(dom[i].data[0] + x);
    return w;
  };
  std::vector<Color> out(256);
  for (long x = 0; x < 256; ++x) out[x] = f_local_rule(z, dom, window_at(x), s, n);
  for (long x = 0; x < 256; ++x) {
    CHECK(out[x] < 3);
    CHECK(out[x] != out[(x + 1) % 256]);
  }

  // Values outside the ball are never read.
  const auto wider = coordinate_box(z, {-static_cast<int>(radius) - 3}, {static_cast<int>(radius) + 3});
  std::vector<Color> w1(wider.size()), w2(wider.size());
  for (std::size_t i = 0; i < wider.size(); ++i) w1[i] = w2[i] = color(wider[i].data[0]);
  std::swap(w2.front(), w2.back());
  CHECK(f_local_rule(z, wider, w1, s, n) == f_local_rule(z, wider, w2, s, n));

  auto bad = window_at(0);
  bad[1] = bad[0];
  CHECK_THROWS_AS(f_local_rule(z, dom, bad, s, n), InputError);

  // No generators: the ball is the identity alone.
  CHECK(f_local_rule(z, FiniteSubset{{0}}, std::vector<Color>{5}, FiniteSubset{}, 8) == 0);
}
