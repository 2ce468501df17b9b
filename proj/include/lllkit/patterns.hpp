// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lllkit/csp.hpp"
#include "lllkit/group.hpp"
#include "lllkit/labeled_graph.hpp"

namespace lllkit {

struct KPattern {
  FiniteSubset dom;
  std::vector<Color> values;  // values[i] is the color of dom[i]

  Color at(const Element& e) const { return values[*dom.index_of(e)]; }
  bool operator==(const KPattern& other) const {
    return dom == other.dom && values == other.values;
  }
};

struct PatternSet {
  Color k = 1;
  std::vector<KPattern> patterns;
};

// Throws InputError unless values are < k and sized like the domain.
void validate_pattern(const Group& g, const KPattern& p, Color k);

// Right-translates dom(p) so that it contains the identity, choosing the
// translate whose sorted (element, value) listing is lexicographically least.
// Occurrence is invariant under this translation.
KPattern normalize(const Group& g, const KPattern& p);

bool is_s_connected(const Group& g, const KPattern& p, const FiniteSubset& s);

// Label-preserving homomorphism search from G(dom, S) into a target graph.
class PatternMatcher {
 public:
  PatternMatcher(const Group& g, const FiniteSubset& dom, const FiniteSubset& s,
                 const SLabeledGraph& target);

  // Visits homomorphisms phi (phi[i] is the image of dom[i]) whose colors
  // match `values` under `coloring` when both are given. The visitor returns
  // false to stop. Returns whether the search was stopped.
  bool for_each(const std::vector<Color>* values, std::span<const Color> coloring,
                const std::function<bool(std::span<const std::uint32_t>)>& visit) const;

  std::size_t size() const { return order_.size(); }

 private:
  struct Step {
    std::uint32_t node;    // pattern vertex placed at this step
    std::uint32_t parent;  // earlier pattern vertex
    std::uint32_t label;   // target label index of parent -> node
  };
  struct Check {
    std::uint32_t from, to;  // pattern vertices, both placed
    std::uint32_t label;     // target label index of from -> to
  };

  const SLabeledGraph* target_;
  std::vector<std::uint32_t> order_;
  std::vector<Step> steps_;
  std::vector<std::vector<Check>> checks_;  // checks_[i] run after step i
  bool unmatchable_ = false;
};

struct Occurrence {
  bool found = false;
  std::vector<std::uint32_t> witness;  // witness[i] = image of dom[i]
};

Occurrence occurs(const Group& g, const KPattern& p, const FiniteSubset& s,
                  const SLabeledGraph& target, std::span<const Color> coloring);

PatternSet proper_coloring_patterns(const Group& g, Color k, const FiniteSubset& s);

struct AvoidanceReport {
  bool avoiding = true;
  // (pattern index, witness)
  std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> violations;
};

AvoidanceReport is_avoiding(const Group& g, std::span<const Color> coloring,
                            const SLabeledGraph& target, const PatternSet& ps,
                            const FiniteSubset& s);

// Action form: the patterns gamma -> f(gamma x) over all x in `points` with
// F x inside `points` (on a torus: every x). f is indexed like `points`.
PatternSet occurring_patterns(const Group& g, const FiniteSubset& f_dom,
                              const FiniteSubset& points,
                              std::span<const Color> coloring, Color k);

// Graph form: the patterns f o phi over all homomorphisms phi of G(F, S)
// into the target. F must be S-connected.
PatternSet occurring_patterns(const Group& g, const FiniteSubset& f_dom,
                              const FiniteSubset& s, const SLabeledGraph& target,
                              std::span<const Color> coloring, Color k);

}  // namespace lllkit
