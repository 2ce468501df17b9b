// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lllkit/csp.hpp"
#include "lllkit/group.hpp"
#include "lllkit/labeled_graph.hpp"
#include "lllkit/log_star.hpp"
#include "lllkit/patterns.hpp"

namespace lllkit {

// An induced subgraph of G(Gamma, S) with identifiers 1..n.
struct NetworkGraph {
  Group group;
  FiniteSubset elements;
  FiniteSubset s;
  SLabeledGraph graph;
  std::vector<std::uint64_t> ids;

  std::size_t size() const { return elements.size(); }
};

// Empty `ids` means ids[i] = i + 1.
NetworkGraph make_network(const Group& g, const FiniteSubset& vertices,
                          const FiniteSubset& s, std::vector<std::uint64_t> ids = {});
// Throws InputError unless ids is a bijection onto {1..n}.
void validate_ids(std::span<const std::uint64_t> ids);
std::vector<std::uint64_t> random_ids(std::size_t n, std::uint64_t seed);

struct LedgerPhase {
  std::string name;
  std::uint64_t rounds = 0;
};

struct RoundLedger {
  std::vector<LedgerPhase> phases;
  std::uint64_t n = 0;
  std::size_t d = 0;

  void add(std::string name, std::uint64_t rounds) {
    phases.push_back({std::move(name), rounds});
  }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& p : phases) t += p.rounds;
    return t;
  }
};

// Synchronous rounds over a fixed graph. Each round computes every new state
// from the previous states of the vertex and its neighbours only; updates
// land in a second buffer, so the visiting order is irrelevant. A nonzero
// seed shuffles that order.
template <class State>
class SyncNetwork {
 public:
  SyncNetwork(const Graph& g, std::vector<State> init, std::uint64_t shuffle_seed = 0)
      : g_(&g), cur_(std::move(init)), next_(cur_), rng_(shuffle_seed),
        shuffle_(shuffle_seed != 0) {}

  // rule(v, self, neighbour states) -> new state, applied to `active`
  // vertices; the others keep their state.
  template <class Rule>
  void round(Rule&& rule, std::span<const std::uint32_t> active) {
    order_.assign(active.begin(), active.end());
    if (shuffle_) std::shuffle(order_.begin(), order_.end(), rng_);
    std::vector<const State*> nb;
    for (std::uint32_t v : order_) {
      nb.clear();
      for (auto w : g_->neighbors(v)) nb.push_back(&cur_[w]);
      next_[v] = rule(v, cur_[v], std::span<const State* const>(nb));
    }
    for (std::uint32_t v : active) cur_[v] = next_[v];
    ++rounds_;
  }

  template <class Rule>
  void round(Rule&& rule) {
    if (all_.size() != cur_.size()) {
      all_.resize(cur_.size());
      std::iota(all_.begin(), all_.end(), 0U);
    }
    round(std::forward<Rule>(rule), std::span<const std::uint32_t>(all_));
  }

  // A round in which no vertex changes state.
  void idle_round() { ++rounds_; }

  const std::vector<State>& states() const { return cur_; }
  std::uint64_t rounds() const { return rounds_; }

 private:
  const Graph* g_;
  std::vector<State> cur_, next_;
  std::vector<std::uint32_t> order_, all_;
  std::mt19937_64 rng_;
  bool shuffle_;
  std::uint64_t rounds_ = 0;
};

struct Ball {
  std::vector<std::uint32_t> vertices;  // network indices, BFS order, root first
  std::vector<std::uint32_t> dist;
  std::vector<std::uint64_t> ids;
  SLabeledGraph graph;                  // induced, indexed like `vertices`
  std::string encoding;
};

// Radius-T ball around x. Neighbours are visited in label order, so equal
// labelled balls with equal ids have equal encodings.
Ball collect_ball(const NetworkGraph& net, std::uint32_t x, std::uint32_t radius);

struct LinialStep {
  std::uint64_t q = 0;  // field size
  unsigned t = 0;       // polynomial degree
};

struct GpsSchedule {
  std::uint64_t n = 0;
  std::size_t d = 0;
  std::vector<LinialStep> steps;
  std::uint64_t palette = 0;  // colors are below this after the Linial steps
  std::uint64_t elimination_rounds = 0;
  bool trivial = false;       // n <= d + 1: output id - 1 without communication
  std::uint64_t rounds() const { return steps.size() + elimination_rounds; }
};

// The round schedule depends only on (n, d).
GpsSchedule gps_schedule(std::uint64_t n, std::size_t d);

struct GpsResult {
  std::vector<Color> colors;
  GpsSchedule schedule;
  std::uint64_t rounds = 0;
};

// Proper (d+1)-coloring: Linial polynomial color reduction to the fixed
// palette q*^2 (q* the least prime above 2d), then one color class recolored
// per round. Throws InputError when some degree exceeds d.
GpsResult gps_coloring(const Graph& g, std::span<const std::uint64_t> ids, std::size_t d,
                       std::uint64_t shuffle_seed = 0);

// Largest degree of G(Gamma, S): |(S u S^{-1}) \ {1}|.
std::size_t cayley_degree(const Group& g, const FiniteSubset& s);

// Radius of the window the local rule reads: GPS rounds on n vertices + 1.
std::uint64_t local_rule_radius(std::uint64_t n, std::size_t d);

// The window is y -> x(y x) on window_dom. GPS runs on the S-ball of radius
// local_rule_radius around the identity, ids y(1) + 1, padded with isolated
// vertices to n; returns the color of the identity.
Color f_local_rule(const Group& g, const FiniteSubset& window_dom,
                   std::span<const Color> window, const FiniteSubset& s, std::size_t n);

// Union-find classes of the closure of (x, delta) ~1 (y, delta') on V x D.
struct Equivalence {
  std::size_t dsize = 0;
  std::vector<std::uint32_t> cls;  // cls[x * dsize + j]: dense class index
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> members;

  std::uint32_t class_of(std::uint32_t x, std::size_t j) const {
    return cls[x * dsize + j];
  }
};

// (x, delta) ~1 (y, delta'): x, y adjacent and delta = delta' lambda(x, y).
bool equivalence_step(const NetworkGraph& net, std::uint32_t x, const Element& delta,
                      std::uint32_t y, const Element& delta2);
Equivalence equivalence_closure(const NetworkGraph& net, const FiniteSubset& d);

struct AuxGraph {
  Graph graph;
  std::vector<std::vector<std::uint32_t>> bracket;  // [x], sorted
  std::size_t max_degree = 0;
  std::size_t max_bracket = 0;
  // min(|D|^4, |(D^{-1} D)^2| - 1), known without looking at G.
  std::size_t degree_bound = 0;
};

AuxGraph auxiliary_graph(const NetworkGraph& net, const FiniteSubset& d);
AuxGraph auxiliary_graph(const NetworkGraph& net, const FiniteSubset& d,
                         const Equivalence& eq);
std::size_t aux_degree_bound(const Group& g, const FiniteSubset& d);

struct HomomorphismResult {
  std::vector<std::vector<Color>> q;  // q[x][j] = q_x(D[j])
  RoundLedger ledger;
  std::size_t stages = 0;
  std::size_t aux_degree_bound = 0;
  std::size_t aux_max_degree = 0;
};

// x -> q_x into H_{D,m}. Requires S u S^{-1} u {1} inside D and m > |D|^3.
HomomorphismResult distributed_homomorphism(const NetworkGraph& net,
                                            const FiniteSubset& d, std::size_t m,
                                            std::uint64_t shuffle_seed = 0);

struct HomomorphismCheck {
  bool ok = true;
  std::string failure;
};

// Injectivity, sigma-compatibility along every edge, and agreement on every
// ~1 pair (hence on every ~ class).
HomomorphismCheck validate_homomorphism(const NetworkGraph& net, const FiniteSubset& d,
                                        std::size_t m,
                                        const std::vector<std::vector<Color>>& q);

struct LocalColoringResult {
  std::vector<Color> coloring;
  RoundLedger ledger;
};

// x -> h(q_x), where h colors H_{D,m} by injection rank. The result is
// checked against `ps`; an occurrence raises InvariantError.
LocalColoringResult distributed_avoiding_coloring(const NetworkGraph& net,
                                                  const FiniteSubset& d, std::size_t m,
                                                  std::span<const Color> h,
                                                  const PatternSet& ps,
                                                  std::uint64_t shuffle_seed = 0);

}  // namespace lllkit
