// SPDX-License-Identifier: Apache-2.0
#include "support/oracles.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace lllkit::testing {

PlainCsp to_plain(const Csp& csp) {
  PlainCsp out;
  out.points = csp.points();
  out.k = csp.k();
  for (const auto& c : csp.constraints()) {
    auto t = c.forbidden().tuples(std::uint64_t{1} << 22);
    if (!t) throw std::runtime_error("constraint too large for a table");
    out.constraints.push_back({c.dom(), std::move(*t)});
  }
  return out;
}

bool plain_violated(const PlainConstraint& c, const Assignment& f) {
  Tuple t;
  for (auto x : c.dom) {
    if (x >= f.size() || !f[x]) return false;
    t.push_back(*f[x]);
  }
  return std::find(c.tuples.begin(), c.tuples.end(), t) != c.tuples.end();
}

bool plain_is_solution(const PlainCsp& csp, const Assignment& f) {
  for (auto x : csp.points)
    if (x >= f.size() || !f[x] || *f[x] >= csp.k) return false;
  for (const auto& c : csp.constraints)
    if (plain_violated(c, f)) return false;
  return true;
}

bool plain_satisfiable(const PlainCsp& csp) {
  PointId top = 0;
  for (auto x : csp.points) top = std::max(top, x + 1);
  Assignment f(top);
  for (auto x : csp.points) f[x] = 0;
  while (true) {
    if (plain_is_solution(csp, f)) return true;
    std::size_t i = 0;
    for (; i < csp.points.size(); ++i) {
      auto& v = f[csp.points[i]];
      if (*v + 1 < csp.k) {
        ++*v;
        break;
      }
      v = 0;
    }
    if (i == csp.points.size()) return false;
  }
}

PlainMetrics plain_metrics(const PlainCsp& csp) {
  PlainMetrics m;
  std::map<PointId, std::size_t> through;
  for (const auto& c : csp.constraints) {
    m.ord = std::max(m.ord, c.dom.size());
    Rational p(BigInt(c.tuples.size()), ipow(BigInt(csp.k), c.dom.size()));
    if (p > m.p) m.p = p;
    for (auto x : c.dom) ++through[x];
  }
  for (const auto& [x, n] : through) m.vdeg = std::max(m.vdeg, n);
  for (std::size_t i = 0; i < csp.constraints.size(); ++i) {
    std::size_t nb = 0;
    for (std::size_t j = 0; j < csp.constraints.size(); ++j) {
      if (i == j) continue;
      const auto& a = csp.constraints[i].dom;
      const auto& b = csp.constraints[j].dom;
      bool meet = false;
      for (auto x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) meet = true;
      if (meet) ++nb;
    }
    m.d = std::max(m.d, nb);
  }
  return m;
}

bool plain_gate(const PlainCsp& csp) {
  const auto m = plain_metrics(csp);
  for (const auto& c : csp.constraints) {
    const auto a = c.dom.size();
    if (BigInt(c.tuples.size()) * ipow(BigInt(m.vdeg), a) >= ipow(BigInt(csp.k), a))
      return false;
  }
  return true;
}

Rational plain_stage_ratio(const PlainCsp& csp, const Assignment& g, std::size_t vdeg) {
  Rational best = 0;
  for (const auto& c : csp.constraints) {
    std::size_t agree = 0;
    for (const auto& t : c.tuples) {
      bool ok = true;
      for (std::size_t i = 0; i < c.dom.size(); ++i) {
        const auto x = c.dom[i];
        if (x < g.size() && g[x] && *g[x] != t[i]) ok = false;
      }
      if (ok) ++agree;
    }
    std::size_t u = 0;
    for (auto x : c.dom)
      if (x >= g.size() || !g[x]) ++u;
    if (u == 0 && agree == 0) continue;  // satisfied and dropped
    Rational r(BigInt(agree) * ipow(BigInt(vdeg), u), ipow(BigInt(csp.k), u));
    if (r > best) best = r;
  }
  return best;
}

bool is_proper(const Graph& g, std::span<const Color> f) {
  for (std::uint32_t u = 0; u < g.vertex_count(); ++u)
    for (auto v : g.neighbors(u))
      if (f[u] == f[v]) return false;
  return true;
}

std::size_t palette_size(std::span<const Color> f) {
  return std::set<Color>(f.begin(), f.end()).size();
}

namespace {

std::vector<Element> moves(const NetworkGraph& net) {
  std::vector<Element> out;
  for (const auto& s : net.s) {
    if (net.group.is_identity(s)) continue;
    for (const auto& e : {s, net.group.inverse(s)})
      if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  return out;
}

}  // namespace

std::vector<std::uint32_t> similarity_classes(const NetworkGraph& net, const FiniteSubset& d) {
  const auto& g = net.group;
  const std::size_t k = d.size();
  const auto mv = moves(net);
  std::vector<std::uint32_t> cls(net.size() * k, UINT32_MAX);
  std::uint32_t next = 0;
  for (std::size_t start = 0; start < cls.size(); ++start) {
    if (cls[start] != UINT32_MAX) continue;
    cls[start] = next;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      const auto& x = net.elements[cur / k];
      const auto& delta = d[cur % k];
      for (const auto& sigma : mv) {
        auto y = net.elements.index_of(g.multiply(sigma, x));
        if (!y) continue;
        auto j = d.index_of(g.multiply(delta, g.inverse(sigma)));
        if (!j) continue;
        const auto nb = *y * k + *j;
        if (cls[nb] == UINT32_MAX) {
          cls[nb] = next;
          queue.push_back(nb);
        }
      }
    }
    ++next;
  }
  return cls;
}

std::optional<std::string> check_hom_by_scan(const NetworkGraph& net, const FiniteSubset& d,
                                             std::size_t m,
                                             const std::vector<std::vector<Color>>& q) {
  const auto& g = net.group;
  if (q.size() != net.size()) return "wrong vertex count";
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x].size() != d.size()) return "wrong arity";
    std::set<Color> seen(q[x].begin(), q[x].end());
    if (seen.size() != d.size()) return "not injective at " + std::to_string(x);
    if (*seen.rbegin() >= m) return "value out of range";
  }
  for (std::size_t x = 0; x < net.size(); ++x)
    for (const auto& sigma : moves(net)) {
      auto y = net.elements.index_of(g.multiply(sigma, net.elements[x]));
      if (!y) continue;
      for (std::size_t j2 = 0; j2 < d.size(); ++j2) {
        auto j = d.index_of(g.multiply(d[j2], sigma));
        if (j && q[x][*j] != q[*y][j2])
          return "incompatible edge " + std::to_string(x) + "-" + std::to_string(*y);
      }
    }
  return std::nullopt;
}

}  // namespace lllkit::testing
