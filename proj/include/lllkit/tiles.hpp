// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lllkit/bigint.hpp"
#include "lllkit/csp.hpp"
#include "lllkit/group.hpp"
#include "lllkit/labeled_graph.hpp"
#include "lllkit/patterns.hpp"

namespace lllkit {

// Injective tuples (q_0, ..., q_{d-1}) over {0..n-1}, ranked in
// lexicographic order.
class InjectionSpace {
 public:
  InjectionSpace(std::size_t d, std::size_t n);

  std::size_t arity() const { return d_; }
  std::size_t range() const { return n_; }
  // n (n-1) ... (n-d+1); saturates at UINT64_MAX.
  std::uint64_t size() const { return size_; }
  bool fits() const { return fits_; }

  std::uint64_t rank(std::span<const Color> q) const;
  std::vector<Color> unrank(std::uint64_t r) const;

 private:
  std::size_t d_, n_;
  std::uint64_t size_ = 0;
  bool fits_ = true;
  // tail_[i] = (n-i-1)(n-i-2)...(n-d+1), the number of completions after
  // fixing position i.
  std::vector<std::uint64_t> tail_;
};

BigInt falling_factorial(std::uint64_t n, std::uint64_t d);

// q and q' (indexed like D) satisfy: delta = delta' sigma implies
// q(delta) = q'(delta').
bool sigma_compatible(const Group& g, std::span<const Color> q,
                      std::span<const Color> q2, const Element& sigma,
                      const FiniteSubset& d);

inline constexpr std::uint64_t kDefaultVertexBudget = std::uint64_t{1} << 22;

struct TileGraph {
  FiniteSubset d;
  std::size_t n = 0;
  FiniteSubset s;
  InjectionSpace space{0, 0};
  // Vertex r is the injection space.unrank(r).
  SLabeledGraph graph;
};

// H_{D,n}. Requires S u S^{-1} u {1} inside D. Throws BudgetExceeded when
// the vertex count exceeds `vertex_budget`.
TileGraph build_tile_graph(const Group& g, const FiniteSubset& d, std::size_t n,
                           const FiniteSubset& s,
                           std::uint64_t vertex_budget = kDefaultVertexBudget);

// Greedy extension of the injection q on D to a proper n-coloring of
// G(window, D). Requires n >= 2|D| and D inside window. Result is indexed
// like window.
std::vector<Color> extend_injection_to_proper(const Group& g,
                                              std::span<const Color> q,
                                              const FiniteSubset& window,
                                              const FiniteSubset& d, std::size_t n);

// x -> q_x with q_x(delta) = f(delta x), where f is a greedy proper coloring
// of G(points, D D^{-1}). `points` must be closed under left multiplication
// by D (a torus). Requires n >= |D|^2.
std::vector<std::vector<Color>> schreier_to_tile_hom(const Group& g,
                                                     const FiniteSubset& points,
                                                     const FiniteSubset& d,
                                                     std::size_t n);

struct TileHomCheck {
  bool ok = true;
  std::string failure;
};

// Injectivity of every q_x and sigma-compatibility along every edge
// (x, sigma x) of G(points, S).
TileHomCheck validate_tile_hom(const Group& g, const FiniteSubset& points,
                               const FiniteSubset& s, const FiniteSubset& d,
                               std::size_t n,
                               const std::vector<std::vector<Color>>& q);

enum class SearchStatus { Found, Unsat, Indeterminate };

struct SearchLimits {
  std::uint64_t node_limit = std::uint64_t{1} << 26;
  std::chrono::milliseconds time_limit{60000};
  // Maximum number of pattern occurrences turned into nogoods.
  std::uint64_t nogood_limit = std::uint64_t{1} << 24;
  // When the exhaustive search gives up after a quarter of the time, tabu
  // search over total colorings uses the rest. It can only find colorings.
  bool local_search = true;
  std::uint64_t seed = 1;
};

struct AvoidingSearchResult {
  SearchStatus status = SearchStatus::Indeterminate;
  std::vector<Color> coloring;
  std::uint64_t nodes = 0;
  std::uint64_t local_steps = 0;
  std::size_t nogoods = 0;
};

// Backtracking search for a P-avoiding k-coloring of an S-labelled graph.
// Every occurrence of every pattern becomes a nogood; search uses forward
// checking and fewest-remaining-colors ordering.
AvoidingSearchResult find_avoiding_coloring(const Group& g, const SLabeledGraph& h,
                                            const PatternSet& ps, const FiniteSubset& s,
                                            const SearchLimits& limits = {});

struct AscendingColoring {
  Color k = 0;  // 0 when no k in range succeeded
  std::vector<Color> coloring;
  std::vector<std::pair<Color, SearchStatus>> attempts;
};

// Tries k = k_min, k_min + 1, ..., k_max with patterns(k) until a search
// succeeds. Each attempt gets `per_k` as its limits.
AscendingColoring ascending_avoiding_coloring(
    const Group& g, const SLabeledGraph& h, const FiniteSubset& s,
    const std::function<PatternSet(Color)>& patterns, Color k_min, Color k_max,
    const SearchLimits& per_k);

struct TileFamilyEntry {
  FiniteSubset f;
  BigInt n;
  unsigned log_star_n = 0;
  FiniteSubset d;
  BigInt predicted_vertices;
  bool materializable = false;
};

// Least n >= 2 with n >= |F|^{2 log* n}; D = F^{log* n}.
BigInt least_tile_size(std::size_t f_size);
TileFamilyEntry tile_family(const Group& g, const FiniteSubset& f,
                            std::uint64_t vertex_budget = kDefaultVertexBudget);
// Entry i >= 1 of the generator-ball schedule F_i = (S u S^{-1} u {1})^i.
TileFamilyEntry tile_family_at(const Group& g, const FiniteSubset& s, std::size_t i,
                               std::uint64_t vertex_budget = kDefaultVertexBudget);

}  // namespace lllkit
