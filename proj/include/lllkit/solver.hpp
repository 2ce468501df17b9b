// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lllkit/csp.hpp"

namespace lllkit {

inline constexpr std::uint32_t kNoColor = std::numeric_limits<std::uint32_t>::max();

// Greedy maximal independent set scanning `order`.
std::vector<std::uint32_t> maximal_independent_set(
    const Graph& g, std::span<const std::uint32_t> order);

// Proper coloring by iterated maximal independent sets: class c is a maximal
// independent set of the vertices left after classes 0..c-1. Vertices not in
// `order` get kNoColor.
std::vector<std::uint32_t> greedy_proper_coloring(
    const Graph& g, std::span<const std::uint32_t> order);

// P[B | x -> a] = |{phi in B : phi(x) = a}| / k^{|dom B| - 1}.
Rational conditional_probability(const Constraint& b, PointId x, Color a, Color k);

// Least color a with P[B | x -> a] <= P[B] * vdeg for every incident B.
Color good_color(PointId x, std::span<const Constraint* const> incident, Color k,
                 std::size_t vdeg);

struct StageCertificate {
  std::vector<PointId> points;  // the class colored in this stage
  Rational max_ratio;           // max over B of |B| vdeg^{|dom B|} / k^{|dom B|}
  std::optional<std::size_t> argmax;
  bool strict = true;
};

struct SolveTrace {
  std::size_t vdeg = 0;
  Color k = 0;
  std::vector<std::vector<PointId>> classes;
  // stages[0] certifies the input; stages[i] follows class i-1.
  std::vector<StageCertificate> stages;
  std::vector<std::pair<PointId, Color>> choices;
};

struct Solution {
  Assignment coloring;
  SolveTrace trace;
};

// Staged conditional-probability solver for good CSPs. Throws GateRejected
// when some B has |B| vdeg^{|dom B|} >= k^{|dom B|}.
Solution solve(const Csp& csp);

// Certificate of the current (restricted) constraints.
StageCertificate certify(std::span<const Constraint> constraints, std::size_t vdeg,
                         Color k);

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

// Lexicographically least solution (first point most significant), or
// nullopt when none exists. Throws BudgetExceeded if k^|points| > budget.
std::optional<Assignment> brute_force_solve(
    const Csp& csp, std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace lllkit
