// SPDX-License-Identifier: Apache-2.0
#include "lllkit/solver.hpp"

#include <algorithm>
#include <map>

#include "lllkit/errors.hpp"

namespace lllkit {

std::vector<std::uint32_t> maximal_independent_set(
    const Graph& g, std::span<const std::uint32_t> order) {
  std::vector<char> taken(g.vertex_count(), 0);
  std::vector<std::uint32_t> out;
  for (auto v : order) {
    bool free = true;
    for (auto w : g.neighbors(v))
      if (taken[w]) {
        free = false;
        break;
      }
    if (free) {
      taken[v] = 1;
      out.push_back(v);
    }
  }
  return out;
}

std::vector<std::uint32_t> greedy_proper_coloring(
    const Graph& g, std::span<const std::uint32_t> order) {
  std::vector<std::uint32_t> color(g.vertex_count(), kNoColor);
  std::vector<std::uint32_t> remaining(order.begin(), order.end());
  for (std::uint32_t c = 0; !remaining.empty(); ++c) {
    std::vector<std::uint32_t> next;
    for (auto v : remaining) {
      bool blocked = false;
      for (auto w : g.neighbors(v))
        if (color[w] == c) {
          blocked = true;
          break;
        }
      if (blocked)
        next.push_back(v);
      else
        color[v] = c;
    }
    remaining.swap(next);
  }
  return color;
}

Rational conditional_probability(const Constraint& b, PointId x, Color a, Color k) {
  auto pos = b.position_of(x);
  if (!pos) throw InputError("point is not in the constraint domain");
  if (a >= k) throw InputError("color out of range");
  return Rational(b.forbidden().count_fixing(*pos, a),
                  ipow(k, b.dom().size() - 1));
}

Color good_color(PointId x, std::span<const Constraint* const> incident, Color k,
                 std::size_t vdeg) {
  struct Entry {
    const Constraint* b;
    std::size_t pos;
    BigInt bound;  // |B| * vdeg
  };
  std::vector<Entry> entries;
  for (const Constraint* b : incident) {
    auto pos = b->position_of(x);
    if (!pos) throw InputError("incident constraint does not contain the point");
    entries.push_back({b, *pos, b->size() * vdeg});
  }
  // P[B|x->a] <= P[B] vdeg  <=>  count_a * k <= |B| * vdeg.
  for (Color a = 0; a < k; ++a) {
    bool good = true;
    for (const auto& e : entries)
      if (e.b->forbidden().count_fixing(e.pos, a) * k > e.bound) {
        good = false;
        break;
      }
    if (good) return a;
  }
  throw InvariantError("no good color exists for point " + std::to_string(x));
}

StageCertificate certify(std::span<const Constraint> constraints, std::size_t vdeg,
                         Color k) {
  StageCertificate cert;
  cert.max_ratio = 0;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& b = constraints[i];
    const std::size_t a = b.dom().size();
    BigInt lhs = b.size() * ipow(vdeg, a);
    BigInt rhs = ipow(k, a);
    Rational ratio(lhs, rhs);
    if (!cert.argmax || ratio > cert.max_ratio) {
      cert.max_ratio = ratio;
      cert.argmax = i;
    }
    if (lhs >= rhs) cert.strict = false;
  }
  return cert;
}

Solution solve(const Csp& csp) {
  const std::size_t vdeg = metrics(csp).vdeg;
  const Color k = csp.k();
  for (std::size_t i = 0; i < csp.constraints().size(); ++i) {
    const auto& b = csp.constraints()[i];
    const std::size_t a = b.dom().size();
    BigInt lhs = b.size() * ipow(vdeg, a);
    BigInt rhs = ipow(k, a);
    if (lhs >= rhs)
      throw GateRejected(i, "constraint " + std::to_string(i) + " fails the gate: " +
                                lhs.str() + " >= " + rhs.str());
  }

  Solution sol;
  SolveTrace& trace = sol.trace;
  trace.vdeg = vdeg;
  trace.k = k;

  const Graph g = dependency_graph(csp);
  const auto color = greedy_proper_coloring(g, csp.points());
  std::map<std::uint32_t, std::vector<PointId>> by_color;
  for (PointId x : csp.points()) by_color[color[x]].push_back(x);
  for (auto& [c, pts] : by_color) trace.classes.push_back(pts);

  std::vector<Constraint> current = csp.constraints();
  const auto inc = csp.incidence();
  trace.stages.push_back(certify(current, vdeg, k));

  sol.coloring.assign(csp.universe(), std::nullopt);
  for (const auto& cls : trace.classes) {
    // Members of a class share no constraint, so each choice only sees the
    // constraints restricted by earlier classes.
    for (PointId x : cls) {
      std::vector<const Constraint*> incident;
      for (std::size_t j : inc[x]) incident.push_back(&current[j]);
      Color a = good_color(x, incident, k, vdeg);
      sol.coloring[x] = a;
      trace.choices.emplace_back(x, a);
    }
    std::vector<std::size_t> touched;
    for (PointId x : cls) touched.insert(touched.end(), inc[x].begin(), inc[x].end());
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::size_t j : touched) current[j] = restrict(current[j], sol.coloring, k);

    StageCertificate cert = certify(current, vdeg, k);
    cert.points = cls;
    if (!cert.strict)
      throw InvariantError("stage certificate is not strict after coloring a class");
    trace.stages.push_back(std::move(cert));
  }

  for (const auto& b : current)
    if (b.is_violated_sentinel())
      throw InvariantError("a fully restricted constraint is violated");
  if (!check_solution(csp, sol.coloring).ok)
    throw InvariantError("solver produced an invalid coloring");
  return sol;
}

std::optional<Assignment> brute_force_solve(const Csp& csp, std::uint64_t budget) {
  const auto& pts = csp.points();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (total > budget / csp.k()) throw BudgetExceeded("enumeration budget exceeded");
    total *= csp.k();
  }
  if (total > budget) throw BudgetExceeded("enumeration budget exceeded");

  // Each constraint is checked once its last point (in point order) is set.
  std::vector<std::size_t> rank(csp.universe(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) rank[pts[i]] = i;
  std::vector<std::vector<std::size_t>> due(pts.size());
  for (std::size_t j = 0; j < csp.constraints().size(); ++j) {
    const auto& b = csp.constraints()[j];
    if (b.dom().empty()) {
      if (b.size() > 0) return std::nullopt;
      continue;
    }
    std::size_t last = 0;
    for (PointId x : b.dom()) last = std::max(last, rank[x]);
    due[last].push_back(j);
  }

  Assignment f(csp.universe(), std::nullopt);
  if (pts.empty()) return f;
  std::vector<Color> cur(pts.size(), 0);
  std::size_t depth = 0;
  f[pts[0]] = 0;
  while (true) {
    bool ok = true;
    for (std::size_t j : due[depth])
      if (csp.constraints()[j].violated_by(f)) {
        ok = false;
        break;
      }
    if (ok && depth + 1 == pts.size()) return f;
    if (ok) {
      ++depth;
      cur[depth] = 0;
      f[pts[depth]] = 0;
      continue;
    }
    // Advance to the next sibling, backtracking over exhausted levels.
    while (cur[depth] + 1 == csp.k()) {
      f[pts[depth]] = std::nullopt;
      if (depth == 0) return std::nullopt;
      --depth;
    }
    ++cur[depth];
    f[pts[depth]] = cur[depth];
  }
}

}  // namespace lllkit
