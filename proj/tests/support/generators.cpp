// SPDX-License-Identifier: Apache-2.0
#include "support/generators.hpp"

#include <algorithm>
#include <set>

namespace lllkit::testing {

namespace {

std::uint64_t upow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace

Csp random_csp(Rng& rng, const RandomCspShape& shape) {
  const std::size_t n = pick(rng, shape.min_points, shape.max_points);
  const Color k = static_cast<Color>(pick(rng, shape.min_k, shape.max_k));
  const std::size_t cap = pick(rng, 1, shape.max_vdeg);
  std::vector<std::size_t> load(n, 0);
  std::vector<Constraint> cs;
  const std::size_t attempts = pick(rng, 0, 2 * n);
  for (std::size_t t = 0; t < attempts; ++t) {
    std::vector<PointId> open;
    for (PointId x = 0; x < n; ++x)
      if (load[x] < cap) open.push_back(x);
    if (open.empty()) break;
    const std::size_t a = pick(rng, 1, std::min(shape.max_arity, open.size()));
    std::shuffle(open.begin(), open.end(), rng);
    std::vector<PointId> dom(open.begin(), open.begin() + static_cast<std::ptrdiff_t>(a));
    for (auto x : dom) ++load[x];
    const std::uint64_t total = upow(k, a);
    std::uint64_t most = total;
    if (shape.near_gate) {
      const std::uint64_t bound = upow(cap, a);
      most = (total - 1) / bound;  // |B| cap^a < k^a
    }
    const std::uint64_t count = pick(rng, 0, static_cast<std::size_t>(std::min<std::uint64_t>(most, total)));
    std::set<std::uint64_t> codes;
    while (codes.size() < count) codes.insert(pick(rng, 0, static_cast<std::size_t>(total - 1)));
    std::vector<Tuple> tuples;
    for (auto c : codes) {
      Tuple tup(a);
      for (std::size_t i = a; i-- > 0;) {
        tup[i] = static_cast<Color>(c % k);
        c /= k;
      }
      tuples.push_back(std::move(tup));
    }
    cs.emplace_back(std::move(dom), std::move(tuples));
  }
  return Csp::dense(n, k, std::move(cs));
}

Graph path_graph(std::size_t n) {
  Graph g(n);
  for (std::uint32_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph cycle_graph(std::size_t n) {
  Graph g = path_graph(n);
  if (n > 2) g.add_edge(static_cast<std::uint32_t>(n - 1), 0);
  return g;
}

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph circulant_graph(std::size_t n, std::size_t half) {
  Graph g(n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= half; ++j)
      g.add_edge(i, static_cast<std::uint32_t>((i + j) % n));
  return g;
}

Csp disequality_csp(const Graph& g, Color k) {
  std::vector<Tuple> same;
  for (Color c = 0; c < k; ++c) same.push_back({c, c});
  std::vector<Constraint> cs;
  for (std::uint32_t u = 0; u < g.vertex_count(); ++u)
    for (auto v : g.neighbors(u))
      if (u < v) cs.emplace_back(std::vector<PointId>{u, v}, same);
  return Csp::dense(g.vertex_count(), k, std::move(cs));
}

}  // namespace lllkit::testing
