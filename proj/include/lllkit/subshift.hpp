// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lllkit/bigint.hpp"
#include "lllkit/csp.hpp"
#include "lllkit/group.hpp"

namespace lllkit {

using PartialBits = std::vector<std::optional<std::uint8_t>>;

enum class Region : std::uint8_t { Colored, ToColor, Uncolored };  // C0, C, U

// Centered lift of a torus element to the lattice of the same dimension.
Element lift_to_lattice(const Group& torus, const Element& e);
// Largest absolute lattice coordinate over the set.
std::int64_t lattice_radius(const FiniteSubset& lattice_set);

struct SimilarityInstance {
  Group group;           // torus
  FiniteSubset points;   // all torus points
  std::vector<Region> region;
  FiniteSubset f, m_set, n, s, delta;  // lattice-computed, projected to the torus
  Element gamma;
  std::size_t m = 0;     // |M| / |F|
  std::vector<std::uint32_t> z;          // point indices of Z, ascending
  std::vector<std::int32_t> owner_z;     // per point: index into z if in N Z, else -1
  std::vector<std::int32_t> owner_nu;    // per point: index into n
  PartialBits base;      // g on C0 u (C \ N Z)
  bool wrap_checked = false;
};

// F and M are given on the torus; F is replaced by F u F^{-1} u {1}. M must be
// symmetric, contain 1, and |M| must be a multiple of |F|. `colored` gives
// f0 on the C0 points. Refuses (InputError) when the torus is too small for
// N^5 F gamma F N^5, when C is not F-syndetic, when U is not N^5 F-separated,
// or when |N| > 31.
SimilarityInstance make_similarity_instance(const Group& torus, const FiniteSubset& f,
                                            const FiniteSubset& m_set, const Element& gamma,
                                            std::vector<Region> region,
                                            const PartialBits& colored);

struct SimilarityCsp {
  Csp csp;
  // constraint i is B_{z, delta}: (index into inst.z, index into inst.delta)
  std::vector<std::pair<std::uint32_t, std::uint32_t>> labels;
};

// CSP over Z (point j is inst.z[j]) with range 2^{|N|}.
SimilarityCsp build_similarity_csp(const SimilarityInstance& inst);

// f^h on every point; U stays unset.
PartialBits decode_coloring(const SimilarityInstance& inst, const Assignment& h);
// Bits of f on C n (N z); redundant bits are 0.
std::vector<Color> encode_coloring(const SimilarityInstance& inst, const PartialBits& f);

struct SimilarityCheck {
  bool ok = true;
  std::optional<std::uint32_t> counterexample;  // point index
};

// Every x has sigma in S with f(sigma x), f(sigma gamma x) both set and different.
SimilarityCheck check_not_similar(const Group& g, const FiniteSubset& points,
                                  const PartialBits& f, const FiniteSubset& s_chk,
                                  const Element& gamma);

// Exists sigma in S with y(sigma) != y(sigma gamma). The window must define
// y on S u S gamma.
bool subshift_membership(const Group& g, const FiniteSubset& window_dom,
                         const PartialBits& window, const FiniteSubset& s,
                         const Element& gamma);

struct ConstraintEligibility {
  std::size_t e = 0;        // |E|
  std::size_t e_prime = 0;  // |E'|
  Rational p;               // P[B]
};

struct ParameterReport {
  CspMetrics metrics;
  BigInt vdeg_bound;        // 2^11 m^10 |F|^22
  std::size_t min_e = 0;
  std::size_t min_e_prime = 0;
  Rational p_bound;         // 2^{-floor(min_e_prime / 6)}
  bool ord_ok = false;
  bool vdeg_ok = false;
  bool p_ok = false;
  bool per_constraint_ok = false;  // P[B] <= 2^{-|E'|}, |E| >= m-1, |E'| >= |E|/3
  bool gate = false;
  std::vector<ConstraintEligibility> per_constraint;
};

ParameterReport parameter_report(const SimilarityInstance& inst, const SimilarityCsp& sc);

struct SplitResult {
  std::vector<char> c;  // membership per point
  std::vector<char> u;
};

// U: greedy maximal S_sep-separated subset of W in point order; C = W \ U.
// Verifies that C is F-syndetic, U is S_sep-separated and |F x n U| <= 1;
// InvariantError otherwise. S_sep must be symmetric, contain 1 and F^{-1}F.
SplitResult split_syndetic(const Group& torus, const FiniteSubset& points,
                           const std::vector<char>& w, const FiniteSubset& f,
                           const FiniteSubset& s_sep);

// F^{-1} A covers the carrier.
bool is_syndetic(const Group& g, const FiniteSubset& points, const std::vector<char>& a,
                 const FiniteSubset& f);
bool is_separated(const Group& g, const FiniteSubset& points, const std::vector<char>& a,
                  const FiniteSubset& s);

struct DepthLevel {
  std::size_t level = 0;
  std::size_t h_size = 0, f_size = 0, s_size = 0;
  std::size_t m = 0;
  std::size_t c_points = 0, u_points = 0, z_points = 0;
  bool gate = false;
  bool not_similar = false;
  std::string note;
};

struct DepthDemo {
  std::vector<DepthLevel> levels;
  bool completed = false;
  std::string refusal;
  bool torus_too_small = false;  // otherwise no m with |N| <= 31 passed the gate
  PartialBits coloring;
};

// Finite-depth iteration H_{n+1} = S_n H_n on a one-dimensional torus. Each
// level searches the least odd m for which the gate passes.
DepthDemo subshift_depth_demo(const Group& torus, const FiniteSubset& h0,
                              const std::vector<Element>& gammas, std::size_t depth);

}  // namespace lllkit
