// SPDX-License-Identifier: Apache-2.0
#include "lllkit/local.hpp"

#include <deque>
#include <limits>

#include "lllkit/errors.hpp"

namespace lllkit {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t p = 2; p * p <= x; ++p)
    if (x % p == 0) return false;
  return true;
}

std::uint64_t next_prime(std::uint64_t x) {
  while (!is_prime(x)) ++x;
  return x;
}

// r^e, saturating.
std::uint64_t sat_pow(std::uint64_t r, unsigned e) {
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < e; ++i) {
    acc *= r;
    if (acc > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(acc);
}

// Least r with r^e >= m.
std::uint64_t root_ceil(std::uint64_t m, unsigned e) {
  std::uint64_t lo = 1, hi = 1;
  while (sat_pow(hi, e) < m) hi *= 2;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (sat_pow(mid, e) >= m)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

LinialStep best_step(std::uint64_t m, std::size_t d) {
  LinialStep best{0, 0};
  std::uint64_t best_palette = kMax;
  for (unsigned t = 1; t < 64; ++t) {
    const std::uint64_t lo = static_cast<std::uint64_t>(d) * t + 1;
    if (sat_pow(lo, 2) >= best_palette) break;
    const std::uint64_t q = next_prime(std::max(lo, root_ceil(m, t + 1)));
    if (q * q < best_palette) {
      best_palette = q * q;
      best = {q, t};
    }
  }
  return best;
}

// Value at a of the polynomial whose coefficients are the base-q digits of c.
std::uint64_t poly_eval(std::uint64_t c, std::uint64_t q, unsigned t, std::uint64_t a) {
  std::uint64_t digits[64];
  for (unsigned i = 0; i <= t; ++i) {
    digits[i] = c % q;
    c /= q;
  }
  std::uint64_t v = 0;
  for (unsigned i = t + 1; i-- > 0;) v = (v * a + digits[i]) % q;
  return v;
}

}  // namespace

void validate_ids(std::span<const std::uint64_t> ids) {
  std::vector<char> seen(ids.size(), 0);
  for (auto id : ids) {
    if (id < 1 || id > ids.size() || seen[id - 1])
      throw InputError("ids must be a bijection onto 1..n");
    seen[id - 1] = 1;
  }
}

std::vector<std::uint64_t> random_ids(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> ids(n);
  std::iota(ids.begin(), ids.end(), 1);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

NetworkGraph make_network(const Group& g, const FiniteSubset& vertices,
                          const FiniteSubset& s, std::vector<std::uint64_t> ids) {
  if (ids.empty()) {
    ids.resize(vertices.size());
    std::iota(ids.begin(), ids.end(), 1);
  }
  if (ids.size() != vertices.size()) throw InputError("one id per vertex is required");
  validate_ids(ids);
  return NetworkGraph{g, vertices, s, cayley_subgraph(g, vertices, s), std::move(ids)};
}

Ball collect_ball(const NetworkGraph& net, std::uint32_t x, std::uint32_t radius) {
  constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
  Ball b;
  std::vector<std::uint32_t> local(net.size(), kUnseen);
  std::deque<std::uint32_t> queue{x};
  local[x] = 0;
  b.vertices.push_back(x);
  b.dist.push_back(0);
  auto sorted_arcs = [&](std::uint32_t v) {
    std::vector<Arc> arcs(net.graph.arcs(v).begin(), net.graph.arcs(v).end());
    std::sort(arcs.begin(), arcs.end(),
              [](const Arc& a, const Arc& c) { return a.label < c.label; });
    return arcs;
  };
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    if (b.dist[local[v]] == radius) continue;
    for (const Arc& a : sorted_arcs(v)) {
      if (local[a.to] != kUnseen) continue;
      local[a.to] = static_cast<std::uint32_t>(b.vertices.size());
      b.vertices.push_back(a.to);
      b.dist.push_back(b.dist[local[v]] + 1);
      queue.push_back(a.to);
    }
  }
  std::vector<std::uint32_t> inv(net.graph.alphabet().size());
  for (std::uint32_t l = 0; l < inv.size(); ++l) inv[l] = net.graph.inverse_label(l);
  b.graph = SLabeledGraph(b.vertices.size(), net.graph.alphabet(), inv);
  for (std::uint32_t i = 0; i < b.vertices.size(); ++i) {
    const auto v = b.vertices[i];
    b.ids.push_back(net.ids[v]);
    b.encoding += std::to_string(net.ids[v]) + "@" + std::to_string(b.dist[i]) + ":";
    for (const Arc& a : sorted_arcs(v)) {
      const auto j = local[a.to];
      if (j == kUnseen) continue;
      b.encoding += std::to_string(a.label) + ">" + std::to_string(j) + ",";
      if (i < j) b.graph.add_edge_unchecked(i, j, a.label);
    }
    b.encoding += ";";
  }
  return b;
}

GpsSchedule gps_schedule(std::uint64_t n, std::size_t d) {
  GpsSchedule s;
  s.n = n;
  s.d = d;
  if (n <= d + 1) {
    s.trivial = true;
    s.palette = n;
    return s;
  }
  const std::uint64_t qstar = next_prime(2 * static_cast<std::uint64_t>(d) + 1);
  const std::uint64_t fixed = qstar * qstar;
  std::uint64_t m = n;
  while (m > fixed) {
    auto step = best_step(m, d);
    s.steps.push_back(step);
    m = step.q * step.q;
  }
  s.palette = fixed;
  s.elimination_rounds = fixed - (d + 1);
  return s;
}

GpsResult gps_coloring(const Graph& g, std::span<const std::uint64_t> ids, std::size_t d,
                       std::uint64_t shuffle_seed) {
  const std::size_t n = g.vertex_count();
  if (ids.size() != n) throw InputError("one id per vertex is required");
  validate_ids(ids);
  if (g.max_degree() > d) throw InputError("graph degree exceeds the bound d");
  GpsResult res;
  res.schedule = gps_schedule(n, d);
  res.colors.resize(n);
  if (res.schedule.trivial) {
    for (std::size_t v = 0; v < n; ++v) res.colors[v] = static_cast<Color>(ids[v] - 1);
    return res;
  }
  std::vector<std::uint64_t> init(ids.begin(), ids.end());
  for (auto& c : init) --c;
  SyncNetwork<std::uint64_t> net(g, std::move(init), shuffle_seed);
  for (const auto& step : res.schedule.steps) {
    net.round([&](std::uint32_t, std::uint64_t self,
                  std::span<const std::uint64_t* const> nbrs) {
      for (std::uint64_t a = 0; a < step.q; ++a) {
        const auto mine = poly_eval(self, step.q, step.t, a);
        bool clash = false;
        for (const auto* c : nbrs)
          if (poly_eval(*c, step.q, step.t, a) == mine) {
            clash = true;
            break;
          }
        if (!clash) return a * step.q + mine;
      }
      throw InvariantError("no separating point for the color polynomial");
    });
  }
  // Elimination: class c recolors itself in its own round, from the top.
  const auto palette = res.schedule.palette;
  std::vector<std::vector<std::uint32_t>> classes(palette);
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto c = net.states()[v];
    if (c >= palette) throw InvariantError("color reduction left the palette");
    classes[c].push_back(v);
  }
  for (std::uint64_t c = palette; c-- > d + 1;) {
    if (classes[c].empty()) {
      net.idle_round();
      continue;
    }
    net.round(
        [&](std::uint32_t, std::uint64_t self, std::span<const std::uint64_t* const> nbrs) {
          if (self != c) return self;
          for (std::uint64_t a = 0;; ++a)
            if (std::none_of(nbrs.begin(), nbrs.end(),
                             [&](const std::uint64_t* x) { return *x == a; }))
              return a;
        },
        classes[c]);
  }
  res.rounds = net.rounds();
  if (res.rounds != res.schedule.rounds()) throw InvariantError("round count mismatch");
  for (std::uint32_t v = 0; v < n; ++v) {
    res.colors[v] = static_cast<Color>(net.states()[v]);
    if (res.colors[v] > d) throw InvariantError("gps color exceeds d");
    for (auto w : g.neighbors(v))
      if (net.states()[w] == net.states()[v]) throw InvariantError("gps coloring not proper");
  }
  return res;
}

std::size_t cayley_degree(const Group& g, const FiniteSubset& s) {
  return label_alphabet(g, s).first.size();
}

std::uint64_t local_rule_radius(std::uint64_t n, std::size_t d) {
  return gps_schedule(n, d).rounds() + 1;
}

Color f_local_rule(const Group& g, const FiniteSubset& window_dom,
                   std::span<const Color> window, const FiniteSubset& s, std::size_t n) {
  if (window.size() != window_dom.size())
    throw InputError("window values do not match the window domain");
  const std::size_t d = cayley_degree(g, s);
  const auto radius = local_rule_radius(n, d);
  const FiniteSubset ball = word_ball(g, s, radius);
  if (ball.size() > n) throw InputError("ball is larger than n");
  std::vector<std::uint64_t> ids(n, 0);
  std::vector<char> used(n, 0);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    auto w = window_dom.index_of(ball[i]);
    if (!w) throw InputError("window does not cover the ball of radius " +
                             std::to_string(radius));
    const Color v = window[*w];
    if (v >= n || used[v]) throw InputError("window is not injective below n");
    used[v] = 1;
    ids[i] = v + 1;
  }
  std::size_t next = 0;
  for (std::size_t i = ball.size(); i < n; ++i) {
    while (used[next]) ++next;
    used[next] = 1;
    ids[i] = next + 1;
  }
  const auto under = cayley_subgraph(g, ball, s).underlying();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::uint32_t v = 0; v < ball.size(); ++v) {
    auto nb = under.neighbors(v);
    adj[v].assign(nb.begin(), nb.end());
  }
  const auto res = gps_coloring(Graph(std::move(adj)), ids, d);
  return res.colors[*ball.index_of(g.identity())];
}

}  // namespace lllkit
