// SPDX-License-Identifier: Apache-2.0
#include "lllkit/patterns.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "lllkit/errors.hpp"

namespace lllkit {

void validate_pattern(const Group& g, const KPattern& p, Color k) {
  if (p.values.size() != p.dom.size())
    throw InputError("pattern values do not match its domain");
  for (const auto& e : p.dom) g.validate(e);
  for (Color c : p.values)
    if (c >= k) throw InputError("pattern value out of range");
}

KPattern normalize(const Group& g, const KPattern& p) {
  if (p.dom.empty()) return p;
  std::vector<std::pair<Element, Color>> best;
  for (const auto& beta : p.dom) {
    const Element inv = g.inverse(beta);
    std::vector<std::pair<Element, Color>> cand;
    for (std::size_t i = 0; i < p.dom.size(); ++i)
      cand.emplace_back(g.multiply(p.dom[i], inv), p.values[i]);
    std::sort(cand.begin(), cand.end());
    if (best.empty() || cand < best) best = std::move(cand);
  }
  KPattern out;
  for (auto& [e, c] : best) {
    out.dom.insert(e);
    out.values.push_back(c);
  }
  return out;
}

bool is_s_connected(const Group& g, const KPattern& p, const FiniteSubset& s) {
  if (p.dom.size() <= 1) return true;
  return count_components(cayley_subgraph(g, p.dom, s).underlying()) == 1;
}

PatternMatcher::PatternMatcher(const Group& g, const FiniteSubset& dom,
                               const FiniteSubset& s, const SLabeledGraph& target)
    : target_(&target) {
  const SLabeledGraph pg = cayley_subgraph(g, dom, s);
  std::vector<std::optional<std::uint32_t>> to_target;
  for (const auto& e : pg.alphabet()) to_target.push_back(target.label_index(e));
  auto mapped = [&](std::uint32_t l) -> std::uint32_t {
    if (!to_target[l]) {
      unmatchable_ = true;
      return 0;
    }
    return *to_target[l];
  };

  const std::size_t n = dom.size();
  if (n == 0) return;
  std::vector<std::int64_t> placed_at(n, -1);
  std::deque<std::uint32_t> queue{0};
  placed_at[0] = 0;
  order_.push_back(0);
  steps_.push_back({0, 0, 0});
  std::vector<std::uint32_t> parent(n, 0), plabel(n, 0);
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (const Arc& a : pg.arcs(u)) {
      if (placed_at[a.to] >= 0) continue;
      placed_at[a.to] = static_cast<std::int64_t>(order_.size());
      order_.push_back(a.to);
      steps_.push_back({a.to, u, mapped(a.label)});
      queue.push_back(a.to);
    }
  }
  if (order_.size() != n)
    throw InputError("pattern domain is not S-connected");
  checks_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    const auto node = order_[i];
    for (const Arc& a : pg.arcs(node)) {
      if (placed_at[a.to] >= static_cast<std::int64_t>(i)) continue;
      if (i > 0 && a.to == steps_[i].parent) continue;
      // Label of node -> a.to must be preserved.
      checks_[i].push_back({node, a.to, mapped(a.label)});
    }
  }
}

bool PatternMatcher::for_each(
    const std::vector<Color>* values, std::span<const Color> coloring,
    const std::function<bool(std::span<const std::uint32_t>)>& visit) const {
  const std::size_t n = order_.size();
  if (n == 0) return !visit({});
  if (unmatchable_) return false;
  const auto& t = *target_;
  std::vector<std::uint32_t> phi(n, 0);
  auto color_ok = [&](std::uint32_t node, std::uint32_t v) {
    return values == nullptr || coloring[v] == (*values)[node];
  };
  auto checks_ok = [&](std::size_t i) {
    for (const auto& c : checks_[i]) {
      auto l = t.label(phi[c.from], phi[c.to]);
      if (!l || *l != c.label) return false;
    }
    return true;
  };
  // Explicit stack of arc cursors per depth.
  std::vector<std::size_t> cursor(n, 0);
  for (std::uint32_t anchor = 0; anchor < t.vertex_count(); ++anchor) {
    if (!color_ok(order_[0], anchor)) continue;
    phi[order_[0]] = anchor;
    if (n == 1) {
      if (!visit(phi)) return true;
      continue;
    }
    std::size_t depth = 1;
    cursor[1] = 0;
    while (depth >= 1) {
      const Step& st = steps_[depth];
      auto arcs = t.arcs(phi[st.parent]);
      bool advanced = false;
      while (cursor[depth] < arcs.size()) {
        const Arc& a = arcs[cursor[depth]++];
        if (a.label != st.label || !color_ok(st.node, a.to)) continue;
        phi[st.node] = a.to;
        if (!checks_ok(depth)) continue;
        advanced = true;
        break;
      }
      if (!advanced) {
        --depth;
        continue;
      }
      if (depth + 1 == n) {
        if (!visit(phi)) return true;
        continue;
      }
      ++depth;
      cursor[depth] = 0;
    }
  }
  return false;
}

Occurrence occurs(const Group& g, const KPattern& p, const FiniteSubset& s,
                  const SLabeledGraph& target, std::span<const Color> coloring) {
  if (coloring.size() != target.vertex_count())
    throw InputError("coloring size differs from the vertex count");
  if (!is_s_connected(g, p, s)) throw InputError("pattern is not S-connected");
  PatternMatcher matcher(g, p.dom, s, target);
  Occurrence occ;
  matcher.for_each(&p.values, coloring, [&](std::span<const std::uint32_t> phi) {
    occ.found = true;
    occ.witness.assign(phi.begin(), phi.end());
    return false;
  });
  return occ;
}

PatternSet proper_coloring_patterns(const Group& g, Color k, const FiniteSubset& s) {
  if (k < 1) throw InputError("k must be at least 1");
  PatternSet ps;
  ps.k = k;
  for (Color i = 0; i < k; ++i)
    for (const auto& sigma : s) {
      if (g.is_identity(sigma)) continue;
      KPattern p;
      p.dom.insert(g.identity());
      p.dom.insert(sigma);
      p.values = {i, i};
      ps.patterns.push_back(std::move(p));
    }
  return ps;
}

AvoidanceReport is_avoiding(const Group& g, std::span<const Color> coloring,
                            const SLabeledGraph& target, const PatternSet& ps,
                            const FiniteSubset& s) {
  AvoidanceReport rep;
  for (std::size_t i = 0; i < ps.patterns.size(); ++i) {
    auto occ = occurs(g, ps.patterns[i], s, target, coloring);
    if (occ.found) {
      rep.avoiding = false;
      rep.violations.emplace_back(i, std::move(occ.witness));
    }
  }
  return rep;
}

namespace {

PatternSet from_value_set(const FiniteSubset& f_dom, std::set<std::vector<Color>> seen,
                          Color k) {
  PatternSet ps;
  ps.k = k;
  for (const auto& v : seen) ps.patterns.push_back({f_dom, v});
  return ps;
}

}  // namespace

PatternSet occurring_patterns(const Group& g, const FiniteSubset& f_dom,
                              const FiniteSubset& points,
                              std::span<const Color> coloring, Color k) {
  if (coloring.size() != points.size())
    throw InputError("coloring size differs from the point count");
  std::set<std::vector<Color>> seen;
  for (std::size_t x = 0; x < points.size(); ++x) {
    std::vector<Color> vals;
    bool inside = true;
    for (const auto& gamma : f_dom) {
      auto y = points.index_of(g.multiply(gamma, points[x]));
      if (!y) {
        inside = false;
        break;
      }
      vals.push_back(coloring[*y]);
    }
    if (inside) seen.insert(std::move(vals));
  }
  return from_value_set(f_dom, std::move(seen), k);
}

PatternSet occurring_patterns(const Group& g, const FiniteSubset& f_dom,
                              const FiniteSubset& s, const SLabeledGraph& target,
                              std::span<const Color> coloring, Color k) {
  PatternMatcher matcher(g, f_dom, s, target);
  std::set<std::vector<Color>> seen;
  matcher.for_each(nullptr, coloring, [&](std::span<const std::uint32_t> phi) {
    std::vector<Color> vals;
    for (auto v : phi) vals.push_back(coloring[v]);
    seen.insert(std::move(vals));
    return true;
  });
  return from_value_set(f_dom, std::move(seen), k);
}

}  // namespace lllkit
