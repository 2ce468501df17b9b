// SPDX-License-Identifier: Apache-2.0
#include "lllkit/tiles.hpp"

#include <algorithm>
#include <limits>

#include "lllkit/errors.hpp"
#include "lllkit/log_star.hpp"
#include "lllkit/solver.hpp"

namespace lllkit {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, bool& fits) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > kMax) {
    fits = false;
    return kMax;
  }
  return static_cast<std::uint64_t>(p);
}

bool is_injective(std::span<const Color> q, std::size_t n) {
  std::vector<char> seen(n, 0);
  for (Color c : q) {
    if (c >= n || seen[c]) return false;
    seen[c] = 1;
  }
  return true;
}

}  // namespace

InjectionSpace::InjectionSpace(std::size_t d, std::size_t n)
    : d_(d), n_(n), tail_(d, 0) {
  if (n < d) {
    size_ = 0;
    return;
  }
  std::uint64_t acc = 1;
  for (std::size_t i = d; i-- > 0;) {
    tail_[i] = acc;
    acc = sat_mul(acc, n - i, fits_);
  }
  size_ = acc;
}

std::uint64_t InjectionSpace::rank(std::span<const Color> q) const {
  if (q.size() != d_ || !is_injective(q, n_))
    throw InputError("not an injection of the expected shape");
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < d_; ++i) {
    std::uint64_t smaller = q[i];
    for (std::size_t j = 0; j < i; ++j) smaller -= q[j] < q[i];
    r += smaller * tail_[i];
  }
  return r;
}

std::vector<Color> InjectionSpace::unrank(std::uint64_t r) const {
  if (r >= size_) throw InputError("injection rank out of range");
  std::vector<Color> q(d_);
  std::vector<char> used(n_, 0);
  for (std::size_t i = 0; i < d_; ++i) {
    std::uint64_t c = r / tail_[i];
    r %= tail_[i];
    for (Color v = 0;; ++v) {
      if (used[v]) continue;
      if (c-- == 0) {
        q[i] = v;
        used[v] = 1;
        break;
      }
    }
  }
  return q;
}

BigInt falling_factorial(std::uint64_t n, std::uint64_t d) {
  if (d > n) return 0;
  BigInt out = 1;
  for (std::uint64_t i = 0; i < d; ++i) out *= n - i;
  return out;
}

bool sigma_compatible(const Group& g, std::span<const Color> q,
                      std::span<const Color> q2, const Element& sigma,
                      const FiniteSubset& d) {
  if (q.size() != d.size() || q2.size() != d.size())
    throw InputError("mapping size differs from |D|");
  for (std::size_t j = 0; j < d.size(); ++j) {
    auto i = d.index_of(g.multiply(d[j], sigma));
    if (i && q[*i] != q2[j]) return false;
  }
  return true;
}

TileGraph build_tile_graph(const Group& g, const FiniteSubset& d, std::size_t n,
                           const FiniteSubset& s, std::uint64_t vertex_budget) {
  for (const auto& x : with_identity(g, s))
    if (!d.contains(x)) throw InputError("D must contain S, S^-1 and the identity");
  TileGraph t;
  t.d = d;
  t.n = n;
  t.s = s;
  t.space = InjectionSpace(d.size(), n);
  if (!t.space.fits() || t.space.size() > vertex_budget)
    throw BudgetExceeded("tile graph has " + falling_factorial(n, d.size()).str() +
                         " vertices, over the budget of " +
                         std::to_string(vertex_budget));
  auto [alphabet, inv] = label_alphabet(g, s);
  t.graph = SLabeledGraph(t.space.size(), alphabet, inv);

  const std::size_t m = d.size();
  // src[l][j]: index of D[j] sigma_l in D, or -1 when that position is free.
  std::vector<std::vector<std::int64_t>> src(alphabet.size(), std::vector<std::int64_t>(m));
  for (std::size_t l = 0; l < alphabet.size(); ++l)
    for (std::size_t j = 0; j < m; ++j) {
      auto i = d.index_of(g.multiply(d[j], alphabet[l]));
      src[l][j] = i ? static_cast<std::int64_t>(*i) : -1;
    }

  std::vector<Color> q2(m);
  std::vector<char> used(n);
  std::vector<std::size_t> free_pos;
  for (std::uint64_t r = 0; r < t.space.size(); ++r) {
    const auto q = t.space.unrank(r);
    for (std::uint32_t l = 0; l < alphabet.size(); ++l) {
      std::fill(used.begin(), used.end(), 0);
      free_pos.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (src[l][j] >= 0) {
          q2[j] = q[src[l][j]];
          used[q2[j]] = 1;
        } else {
          free_pos.push_back(j);
        }
      }
      // Odometer over injective fillings of the free positions.
      const std::size_t f = free_pos.size();
      std::vector<Color> cur(f, 0);
      std::size_t depth = 0;
      auto next_free = [&](Color from) -> Color {
        for (Color v = from; v < n; ++v)
          if (!used[v]) return v;
        return static_cast<Color>(n);
      };
      if (f == 0) {
        auto r2 = t.space.rank(q2);
        if (r < r2) t.graph.add_edge_unchecked(r, r2, l);
        continue;
      }
      cur[0] = next_free(0);
      while (true) {
        if (cur[depth] >= n) {
          if (depth == 0) break;
          --depth;
          used[cur[depth]] = 0;
          cur[depth] = next_free(cur[depth] + 1);
          continue;
        }
        q2[free_pos[depth]] = cur[depth];
        if (depth + 1 == f) {
          auto r2 = t.space.rank(q2);
          if (r < r2) t.graph.add_edge_unchecked(r, r2, l);
          cur[depth] = next_free(cur[depth] + 1);
          continue;
        }
        used[cur[depth]] = 1;
        ++depth;
        cur[depth] = next_free(0);
      }
    }
  }
  return t;
}

std::vector<Color> extend_injection_to_proper(const Group& g,
                                              std::span<const Color> q,
                                              const FiniteSubset& window,
                                              const FiniteSubset& d, std::size_t n) {
  if (n < 2 * d.size()) throw InputError("n must be at least 2|D|");
  if (q.size() != d.size() || !is_injective(q, n))
    throw InputError("q is not an injection D -> n");
  std::vector<Color> out(window.size(), kNoColor);
  for (std::size_t j = 0; j < d.size(); ++j) {
    auto i = window.index_of(d[j]);
    if (!i) throw InputError("window must contain D");
    out[*i] = q[j];
  }
  FiniteSubset gens;
  for (const auto& x : symmetrize(g, d))
    if (!g.is_identity(x)) gens.insert(x);
  std::vector<char> taken(n);
  for (std::size_t x = 0; x < window.size(); ++x) {
    if (out[x] != kNoColor) continue;
    std::fill(taken.begin(), taken.end(), 0);
    for (const auto& sigma : gens) {
      auto y = window.index_of(g.multiply(sigma, window[x]));
      if (y && out[*y] != kNoColor) taken[out[*y]] = 1;
    }
    auto it = std::find(taken.begin(), taken.end(), 0);
    if (it == taken.end()) throw InvariantError("greedy extension ran out of colors");
    out[x] = static_cast<Color>(it - taken.begin());
  }
  return out;
}

std::vector<std::vector<Color>> schreier_to_tile_hom(const Group& g,
                                                     const FiniteSubset& points,
                                                     const FiniteSubset& d,
                                                     std::size_t n) {
  if (n < d.size() * d.size()) throw InputError("n must be at least |D|^2");
  const FiniteSubset dd = product_set(g, d, inverse_set(g, d));
  Graph gr(points.size());
  for (std::uint32_t x = 0; x < points.size(); ++x)
    for (const auto& sigma : dd) {
      if (g.is_identity(sigma)) continue;
      auto y = points.index_of(g.multiply(sigma, points[x]));
      if (y) gr.add_edge(x, static_cast<std::uint32_t>(*y));
    }
  std::vector<std::uint32_t> order(points.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto f = greedy_proper_coloring(gr, order);
  std::vector<std::vector<Color>> q(points.size(), std::vector<Color>(d.size()));
  for (std::size_t x = 0; x < points.size(); ++x)
    for (std::size_t j = 0; j < d.size(); ++j) {
      auto y = points.index_of(g.multiply(d[j], points[x]));
      if (!y) throw InputError("points are not closed under D");
      if (f[*y] >= n) throw InvariantError("greedy coloring exceeded n colors");
      q[x][j] = f[*y];
    }
  return q;
}

TileHomCheck validate_tile_hom(const Group& g, const FiniteSubset& points,
                               const FiniteSubset& s, const FiniteSubset& d,
                               std::size_t n,
                               const std::vector<std::vector<Color>>& q) {
  TileHomCheck out;
  if (q.size() != points.size()) return {false, "wrong number of mappings"};
  for (std::size_t x = 0; x < q.size(); ++x)
    if (q[x].size() != d.size() || !is_injective(q[x], n))
      return {false, "q_" + g.format(points[x]) + " is not injective"};
  const auto graph = cayley_subgraph(g, points, s);
  for (std::uint32_t x = 0; x < points.size(); ++x)
    for (const Arc& a : graph.arcs(x))
      if (!sigma_compatible(g, q[x], q[a.to], graph.alphabet()[a.label], d))
        return {false, "edge " + g.format(points[x]) + " -> " +
                           g.format(points[a.to]) + " is not " +
                           g.format(graph.alphabet()[a.label]) + "-compatible"};
  return out;
}

BigInt least_tile_size(std::size_t f_size) {
  if (f_size == 0) throw InputError("F must be nonempty");
  // log* n = t exactly on (tower(t-1), tower(t)].
  BigInt lo = 2, hi = 2;
  for (unsigned t = 1; t <= 5; ++t) {
    BigInt cand = std::max(lo, ipow(BigInt(f_size), 2 * t));
    if (cand <= hi) return cand;
    lo = hi + 1;
    if (t < 5) hi = ipow(BigInt(2), static_cast<std::uint64_t>(hi));
  }
  throw BudgetExceeded("least tile size exceeds 2^65536");
}

TileFamilyEntry tile_family(const Group& g, const FiniteSubset& f,
                            std::uint64_t vertex_budget) {
  TileFamilyEntry e;
  e.f = f;
  e.n = least_tile_size(f.size());
  e.log_star_n = log_star(e.n);
  e.d = power_set(g, f, e.log_star_n);
  if (e.n <= BigInt(kMax)) {
    e.predicted_vertices =
        falling_factorial(static_cast<std::uint64_t>(e.n), e.d.size());
    e.materializable = e.predicted_vertices <= vertex_budget;
  }
  return e;
}

TileFamilyEntry tile_family_at(const Group& g, const FiniteSubset& s, std::size_t i,
                               std::uint64_t vertex_budget) {
  if (i < 1) throw InputError("schedule index starts at 1");
  return tile_family(g, word_ball(g, s, i), vertex_budget);
}

}  // namespace lllkit
