// SPDX-License-Identifier: Apache-2.0
#include "lllkit/csp.hpp"

#include <algorithm>
#include <numeric>

#include "lllkit/errors.hpp"

namespace lllkit {

TableSet::TableSet(std::size_t arity, std::vector<Tuple> tuples)
    : arity_(arity), tuples_(std::move(tuples)) {
  for (const auto& t : tuples_)
    if (t.size() != arity_)
      throw InputError("forbidden tuple length differs from the domain size");
  std::sort(tuples_.begin(), tuples_.end());
  if (std::adjacent_find(tuples_.begin(), tuples_.end()) != tuples_.end())
    throw InputError("duplicate forbidden tuple");
}

BigInt TableSet::count_fixing(std::size_t pos, Color a) const {
  std::size_t c = 0;
  for (const auto& t : tuples_) c += t[pos] == a;
  return BigInt(c);
}

std::shared_ptr<const ForbiddenSet> TableSet::fix(std::size_t pos, Color a) const {
  std::vector<Tuple> out;
  for (const auto& t : tuples_) {
    if (t[pos] != a) continue;
    Tuple r;
    r.reserve(arity_ - 1);
    for (std::size_t i = 0; i < arity_; ++i)
      if (i != pos) r.push_back(t[i]);
    out.push_back(std::move(r));
  }
  return std::make_shared<TableSet>(arity_ - 1, std::move(out));
}

bool TableSet::contains(std::span<const Color> t) const {
  Tuple key(t.begin(), t.end());
  return std::binary_search(tuples_.begin(), tuples_.end(), key);
}

std::optional<std::vector<Tuple>> TableSet::tuples(std::uint64_t limit) const {
  if (tuples_.size() > limit) return std::nullopt;
  return tuples_;
}

bool TableSet::colors_below(Color k) const {
  for (const auto& t : tuples_)
    for (Color c : t)
      if (c >= k) return false;
  return true;
}

Constraint::Constraint(std::vector<PointId> dom, std::vector<Tuple> forbidden)
    : Constraint(dom, std::make_shared<TableSet>(dom.size(), std::move(forbidden))) {}

Constraint::Constraint(std::vector<PointId> dom,
                       std::shared_ptr<const ForbiddenSet> forbidden)
    : dom_(std::move(dom)), forbidden_(std::move(forbidden)) {
  if (!forbidden_) throw InputError("constraint without a forbidden set");
  if (forbidden_->arity() != dom_.size())
    throw InputError("forbidden set arity differs from the domain size");
  auto sorted = dom_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("constraint domain repeats a point");
}

std::optional<std::size_t> Constraint::position_of(PointId x) const {
  for (std::size_t i = 0; i < dom_.size(); ++i)
    if (dom_[i] == x) return i;
  return std::nullopt;
}

bool Constraint::violated_by(const Assignment& f) const {
  Tuple t(dom_.size());
  for (std::size_t i = 0; i < dom_.size(); ++i) {
    if (dom_[i] >= f.size() || !f[dom_[i]])
      throw InputError("coloring does not cover the constraint domain");
    t[i] = *f[dom_[i]];
  }
  return forbidden_->contains(t);
}

bool Constraint::same_as(const Constraint& other, std::uint64_t limit) const {
  if (dom_ != other.dom_) return false;
  auto a = forbidden_->tuples(limit);
  auto b = other.forbidden_->tuples(limit);
  if (!a || !b) throw BudgetExceeded("constraint too large to compare");
  return *a == *b;
}

Csp::Csp(std::vector<PointId> points, Color k, std::vector<Constraint> constraints)
    : points_(std::move(points)), k_(k), constraints_(std::move(constraints)) {
  if (k_ < 1) throw InputError("k must be at least 1");
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    for (PointId x : constraints_[i].dom())
      if (!has_point(x))
        throw InputError("constraint " + std::to_string(i) +
                         " mentions unknown point " + std::to_string(x));
    if (!constraints_[i].forbidden().colors_below(k_))
      throw InputError("constraint " + std::to_string(i) +
                       " uses a color outside the range");
  }
}

Csp Csp::dense(std::size_t n, Color k, std::vector<Constraint> constraints) {
  std::vector<PointId> pts(n);
  std::iota(pts.begin(), pts.end(), 0);
  return Csp(std::move(pts), k, std::move(constraints));
}

std::size_t Csp::universe() const {
  return points_.empty() ? 0 : static_cast<std::size_t>(points_.back()) + 1;
}

bool Csp::has_point(PointId x) const {
  return std::binary_search(points_.begin(), points_.end(), x);
}

std::vector<std::vector<std::size_t>> Csp::incidence() const {
  std::vector<std::vector<std::size_t>> inc(universe());
  for (std::size_t i = 0; i < constraints_.size(); ++i)
    for (PointId x : constraints_[i].dom()) inc[x].push_back(i);
  return inc;
}

CspMetrics metrics(const Csp& csp) {
  CspMetrics m;
  m.p = 0;
  const auto inc = csp.incidence();
  for (const auto& list : inc) m.vdeg = std::max(m.vdeg, list.size());
  std::vector<std::size_t> mark(csp.constraints().size(), SIZE_MAX);
  for (std::size_t i = 0; i < csp.constraints().size(); ++i) {
    const auto& b = csp.constraints()[i];
    m.ord = std::max(m.ord, b.dom().size());
    Rational prob(b.size(), ipow(csp.k(), b.dom().size()));
    if (prob > m.p) m.p = prob;
    std::size_t nb = 0;
    for (PointId x : b.dom())
      for (std::size_t j : inc[x])
        if (j != i && mark[j] != i) {
          mark[j] = i;
          ++nb;
        }
    m.d = std::max(m.d, nb);
  }
  return m;
}

Graph dependency_graph(const Csp& csp) {
  Graph g(csp.universe());
  for (const auto& b : csp.constraints())
    for (std::size_t i = 0; i < b.dom().size(); ++i)
      for (std::size_t j = i + 1; j < b.dom().size(); ++j)
        g.add_edge(b.dom()[i], b.dom()[j]);
  g.canonicalize();
  return g;
}

Constraint restrict(const Constraint& b, const Assignment& g, Color k) {
  std::vector<std::size_t> fixed;
  for (std::size_t i = 0; i < b.dom().size(); ++i) {
    PointId x = b.dom()[i];
    if (x < g.size() && g[x]) {
      if (*g[x] >= k) throw InputError("partial coloring uses a color >= k");
      fixed.push_back(i);
    }
  }
  if (fixed.empty()) return b;
  auto set = b.forbidden_ptr();
  // Highest position first so the remaining positions keep their meaning.
  for (auto it = fixed.rbegin(); it != fixed.rend(); ++it)
    set = set->fix(*it, *g[b.dom()[*it]]);
  std::vector<PointId> dom;
  for (std::size_t i = 0; i < b.dom().size(); ++i)
    if (!std::binary_search(fixed.begin(), fixed.end(), i)) dom.push_back(b.dom()[i]);
  return Constraint(std::move(dom), std::move(set));
}

Csp restrict_csp(const Csp& csp, const Assignment& g) {
  for (const auto& c : g)
    if (c && *c >= csp.k()) throw InputError("partial coloring uses a color >= k");
  std::vector<PointId> pts;
  for (PointId x : csp.points())
    if (x >= g.size() || !g[x]) pts.push_back(x);
  std::vector<Constraint> out;
  for (const auto& b : csp.constraints()) {
    bool touched = std::any_of(b.dom().begin(), b.dom().end(), [&](PointId x) {
      return x < g.size() && g[x].has_value();
    });
    if (!touched) {
      out.push_back(b);
      continue;
    }
    Constraint r = restrict(b, g, csp.k());
    if (r.is_satisfied_sentinel()) continue;
    out.push_back(std::move(r));
  }
  return Csp(std::move(pts), csp.k(), std::move(out));
}

SolutionCheck check_solution(const Csp& csp, const Assignment& f) {
  for (PointId x : csp.points()) {
    if (x >= f.size() || !f[x])
      throw InputError("coloring leaves point " + std::to_string(x) + " unassigned");
    if (*f[x] >= csp.k()) throw InputError("coloring uses a color >= k");
  }
  SolutionCheck out;
  for (std::size_t i = 0; i < csp.constraints().size(); ++i)
    if (csp.constraints()[i].violated_by(f)) {
      out.ok = false;
      out.violated.push_back(i);
    }
  return out;
}

bool times_e_at_most_one(const Rational& r) {
  if (r <= 0) return true;
  // Partial sums of 1/i! bracket e: S_n < e < S_n + 1/(n! n).
  Rational partial = 0;
  BigInt fact = 1;
  for (unsigned i = 0;; ++i) {
    if (i > 0) fact *= i;
    partial += Rational(1, fact);
    if (i < 12) continue;
    Rational upper = partial + Rational(1, fact * i);
    if (upper * r <= 1) return true;
    if (partial * r > 1) return false;
  }
}

ConditionReport check_conditions(const Csp& csp) {
  ConditionReport rep;
  rep.metrics = metrics(csp);
  const auto& m = rep.metrics;
  rep.classic_lll = times_e_at_most_one(m.p * Rational(m.d + 1));
  const BigInt vd_ord = ipow(m.vdeg, m.ord);
  rep.p_vdeg_ord = m.p * Rational(vd_ord);
  rep.continuous_lll = rep.p_vdeg_ord < 1;
  rep.good = true;
  for (std::size_t i = 0; i < csp.constraints().size(); ++i) {
    const auto& b = csp.constraints()[i];
    const std::size_t a = b.dom().size();
    if (b.size() * ipow(m.vdeg, a) >= ipow(csp.k(), a)) {
      rep.good = false;
      rep.good_witness = i;
      break;
    }
  }
  return rep;
}

}  // namespace lllkit

namespace lllkit {

Csp sinkless_orientation_csp(const Graph& g) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t u = 0; u < g.vertex_count(); ++u)
    for (auto v : g.neighbors(u))
      if (u < v) edges.emplace_back(u, v);
  std::sort(edges.begin(), edges.end());
  std::vector<std::vector<PointId>> dom(g.vertex_count());
  std::vector<Tuple> sink(g.vertex_count());
  for (PointId e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    dom[u].push_back(e);
    sink[u].push_back(1);  // v -> u
    dom[v].push_back(e);
    sink[v].push_back(0);  // u -> v
  }
  std::vector<Constraint> cs;
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
    if (dom[v].empty()) throw InputError("sinkless orientation needs minimum degree 1");
    cs.emplace_back(std::move(dom[v]), std::vector<Tuple>{std::move(sink[v])});
  }
  return Csp::dense(edges.size(), 2, std::move(cs));
}

}  // namespace lllkit
