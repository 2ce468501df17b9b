// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lllkit/bigint.hpp"
#include "lllkit/labeled_graph.hpp"

namespace lllkit {

using PointId = std::uint32_t;
using Color = std::uint32_t;
using Tuple = std::vector<Color>;
// Partial coloring indexed by point id; nullopt means unassigned.
using Assignment = std::vector<std::optional<Color>>;

// The forbidden tuples of a constraint, addressed by position in its domain.
// Implementations may be explicit tables or implicit predicates; everything
// the solver needs is exposed through exact counts.
class ForbiddenSet {
 public:
  virtual ~ForbiddenSet() = default;
  virtual std::size_t arity() const = 0;
  // Number of forbidden tuples.
  virtual BigInt count() const = 0;
  // Number of forbidden tuples whose entry at `pos` equals `a`.
  virtual BigInt count_fixing(std::size_t pos, Color a) const = 0;
  // The set {phi without position pos : phi in B, phi[pos] = a}.
  virtual std::shared_ptr<const ForbiddenSet> fix(std::size_t pos, Color a) const = 0;
  virtual bool contains(std::span<const Color> t) const = 0;
  // All tuples in lexicographic order, or nullopt when more than `limit`
  // tuples would have to be examined.
  virtual std::optional<std::vector<Tuple>> tuples(std::uint64_t limit) const = 0;
  // Whether every tuple only uses colors below k.
  virtual bool colors_below(Color k) const = 0;
};

// Explicit sorted table of tuples.
class TableSet final : public ForbiddenSet {
 public:
  TableSet(std::size_t arity, std::vector<Tuple> tuples);
  std::size_t arity() const override { return arity_; }
  BigInt count() const override { return BigInt(tuples_.size()); }
  BigInt count_fixing(std::size_t pos, Color a) const override;
  std::shared_ptr<const ForbiddenSet> fix(std::size_t pos, Color a) const override;
  bool contains(std::span<const Color> t) const override;
  std::optional<std::vector<Tuple>> tuples(std::uint64_t limit) const override;
  bool colors_below(Color k) const override;
  const std::vector<Tuple>& table() const { return tuples_; }

 private:
  std::size_t arity_;
  std::vector<Tuple> tuples_;
};

class Constraint {
 public:
  // Explicit constraint; tuples are sorted and duplicates rejected.
  Constraint(std::vector<PointId> dom, std::vector<Tuple> forbidden);
  Constraint(std::vector<PointId> dom, std::shared_ptr<const ForbiddenSet> forbidden);

  const std::vector<PointId>& dom() const { return dom_; }
  const ForbiddenSet& forbidden() const { return *forbidden_; }
  std::shared_ptr<const ForbiddenSet> forbidden_ptr() const { return forbidden_; }
  BigInt size() const { return forbidden_->count(); }
  std::optional<std::size_t> position_of(PointId x) const;
  bool touches(PointId x) const { return position_of(x).has_value(); }

  bool is_violated_sentinel() const { return dom_.empty() && size() == 1; }
  bool is_satisfied_sentinel() const { return dom_.empty() && size() == 0; }
  // Whether the (total on dom) coloring f violates this constraint.
  bool violated_by(const Assignment& f) const;

  // Same domain and same forbidden tuples (requires enumerability).
  bool same_as(const Constraint& other, std::uint64_t limit = 1U << 22) const;

 private:
  std::vector<PointId> dom_;
  std::shared_ptr<const ForbiddenSet> forbidden_;
};

class Csp {
 public:
  // Points are sorted and deduplicated; every domain must lie inside them.
  Csp(std::vector<PointId> points, Color k, std::vector<Constraint> constraints);
  // Points 0..n-1.
  static Csp dense(std::size_t n, Color k, std::vector<Constraint> constraints);

  const std::vector<PointId>& points() const { return points_; }
  Color k() const { return k_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  // One more than the largest point id (0 when there are no points).
  std::size_t universe() const;
  bool has_point(PointId x) const;
  // For every point id, the indices of constraints whose domain contains it.
  std::vector<std::vector<std::size_t>> incidence() const;

 private:
  std::vector<PointId> points_;
  Color k_;
  std::vector<Constraint> constraints_;
};

struct CspMetrics {
  Rational p;
  std::size_t d = 0;
  std::size_t vdeg = 0;
  std::size_t ord = 0;
};

CspMetrics metrics(const Csp& csp);

// G_B on point ids 0..universe-1.
Graph dependency_graph(const Csp& csp);

Constraint restrict(const Constraint& b, const Assignment& g, Color k);
// Restriction to the unassigned points. Constraints that become fully
// assigned turn into sentinels: satisfied ones are dropped, violated ones kept.
Csp restrict_csp(const Csp& csp, const Assignment& g);

struct SolutionCheck {
  bool ok = true;
  std::vector<std::size_t> violated;
};
SolutionCheck check_solution(const Csp& csp, const Assignment& f);

struct ConditionReport {
  bool classic_lll = false;
  bool continuous_lll = false;
  // Per-constraint form |B| vdeg^{|dom B|} < k^{|dom B|}.
  bool good = false;
  std::optional<std::size_t> good_witness;
  Rational p_vdeg_ord;
  CspMetrics metrics;
};
ConditionReport check_conditions(const Csp& csp);

// Points are the edges {u < v} of g in lexicographic order; color 0 orients
// u -> v. Vertex v forbids the single tuple making it a sink. Needs minimum
// degree >= 1.
Csp sinkless_orientation_csp(const Graph& g);

// Decides r * e <= 1 exactly for rational r >= 0.
bool times_e_at_most_one(const Rational& r);

}  // namespace lllkit
