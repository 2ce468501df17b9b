// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <random>

#include "lllkit/errors.hpp"
#include "lllkit/local.hpp"
#include "lllkit/solver.hpp"
#include "lllkit/tiles.hpp"

namespace lllkit {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0U);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::uint32_t> parent_;
};

void require_d_contains_s(const NetworkGraph& net, const FiniteSubset& d) {
  for (const auto& x : with_identity(net.group, net.s))
    if (!d.contains(x)) throw InputError("D must contain S, S^-1 and the identity");
}

}  // namespace

bool equivalence_step(const NetworkGraph& net, std::uint32_t x, const Element& delta,
                      std::uint32_t y, const Element& delta2) {
  auto l = net.graph.label(x, y);
  if (!l) return false;
  return delta == net.group.multiply(delta2, net.graph.alphabet()[*l]);
}

Equivalence equivalence_closure(const NetworkGraph& net, const FiniteSubset& d) {
  const std::size_t k = d.size();
  const auto& alphabet = net.graph.alphabet();
  // shift[l][j]: index of D[j] sigma_l in D, or -1.
  std::vector<std::vector<std::int64_t>> shift(alphabet.size(), std::vector<std::int64_t>(k));
  for (std::size_t l = 0; l < alphabet.size(); ++l)
    for (std::size_t j = 0; j < k; ++j) {
      auto i = d.index_of(net.group.multiply(d[j], alphabet[l]));
      shift[l][j] = i ? static_cast<std::int64_t>(*i) : -1;
    }
  UnionFind uf(net.size() * k);
  for (std::uint32_t x = 0; x < net.size(); ++x)
    for (const Arc& a : net.graph.arcs(x))
      for (std::size_t j = 0; j < k; ++j)
        if (shift[a.label][j] >= 0)
          uf.unite(static_cast<std::uint32_t>(x * k + shift[a.label][j]),
                   static_cast<std::uint32_t>(a.to * k + j));
  Equivalence eq;
  eq.dsize = k;
  eq.cls.assign(net.size() * k, 0);
  std::vector<std::uint32_t> dense(net.size() * k, UINT32_MAX);
  for (std::uint32_t p = 0; p < net.size() * k; ++p) {
    const auto r = uf.find(p);
    if (dense[r] == UINT32_MAX) {
      dense[r] = static_cast<std::uint32_t>(eq.members.size());
      eq.members.emplace_back();
    }
    eq.cls[p] = dense[r];
    eq.members[dense[r]].emplace_back(p / k, p % k);
  }
  return eq;
}

std::size_t aux_degree_bound(const Group& g, const FiniteSubset& d) {
  const auto dd = product_set(g, inverse_set(g, d), d);
  const std::size_t reach = power_set(g, dd, 2).size() - 1;
  const std::size_t k = d.size();
  return std::min(k * k * k * k, reach);
}

AuxGraph auxiliary_graph(const NetworkGraph& net, const FiniteSubset& d) {
  return auxiliary_graph(net, d, equivalence_closure(net, d));
}

AuxGraph auxiliary_graph(const NetworkGraph& net, const FiniteSubset& d,
                         const Equivalence& eq) {
  AuxGraph aux;
  const std::size_t n = net.size();
  aux.bracket.resize(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    auto& b = aux.bracket[x];
    for (std::size_t j = 0; j < d.size(); ++j)
      for (const auto& [y, jj] : eq.members[eq.class_of(x, j)]) {
        (void)jj;
        b.push_back(y);
      }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    aux.max_bracket = std::max(aux.max_bracket, b.size());
  }
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    auto& a = adj[x];
    for (auto z : aux.bracket[x])
      for (auto y : aux.bracket[z])
        if (y != x) a.push_back(y);
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    aux.max_degree = std::max(aux.max_degree, a.size());
  }
  aux.graph = Graph(std::move(adj));
  aux.degree_bound = aux_degree_bound(net.group, d);
  return aux;
}

HomomorphismResult distributed_homomorphism(const NetworkGraph& net,
                                            const FiniteSubset& d, std::size_t m,
                                            std::uint64_t shuffle_seed) {
  require_d_contains_s(net, d);
  const std::size_t k = d.size();
  if (BigInt(m) <= ipow(BigInt(k), 3)) throw InputError("m must exceed |D|^3");
  const auto eq = equivalence_closure(net, d);
  const auto aux = auxiliary_graph(net, d, eq);
  if (aux.max_bracket > k * k) throw InvariantError("|[x]| exceeds |D|^2");
  if (aux.max_degree > aux.degree_bound) throw InvariantError("G' degree exceeds its bound");

  HomomorphismResult res;
  res.aux_degree_bound = aux.degree_bound;
  res.aux_max_degree = aux.max_degree;
  res.stages = aux.degree_bound + 1;
  const auto phi = gps_coloring(aux.graph, net.ids, aux.degree_bound, shuffle_seed);
  res.ledger.n = net.size();
  res.ledger.d = aux.degree_bound;
  // [x] and G'-neighbours are within distance |D| and 2|D| in G. A lone
  // vertex already sees the whole graph.
  const std::uint64_t hop = net.size() > 1 ? 2 * k : 0;
  res.ledger.add("aux-discovery", hop);
  res.ledger.add("gps-on-aux", phi.rounds * hop);
  // Per stage: gather B from [x] in |D| rounds, notify [x] in |D| rounds.
  res.ledger.add("stages", res.stages * hop);

  std::vector<std::vector<std::uint32_t>> stage_of(res.stages);
  for (std::uint32_t x = 0; x < net.size(); ++x) stage_of[phi.colors[x]].push_back(x);
  std::mt19937_64 rng(shuffle_seed);

  std::vector<Color> value(eq.members.size(), kNoColor);
  std::vector<std::uint32_t> stamp(m, 0);
  std::uint32_t epoch = 0;
  for (auto& xs : stage_of) {
    // X_i is independent in G', so the brackets of its vertices are disjoint
    // and the order of processing does not matter.
    if (shuffle_seed != 0) std::shuffle(xs.begin(), xs.end(), rng);
    for (auto x : xs) {
      ++epoch;
      for (auto y : aux.bracket[x])
        for (std::size_t j = 0; j < k; ++j) {
          const auto v = value[eq.class_of(y, j)];
          if (v != kNoColor) stamp[v] = epoch;
        }
      Color next = 0;
      for (std::size_t j = 0; j < k; ++j) {
        auto& v = value[eq.class_of(x, j)];
        if (v != kNoColor) continue;
        while (stamp[next] == epoch) ++next;
        v = next;
        stamp[next] = epoch;
      }
    }
  }
  res.q.assign(net.size(), std::vector<Color>(k));
  for (std::uint32_t x = 0; x < net.size(); ++x)
    for (std::size_t j = 0; j < k; ++j) res.q[x][j] = value[eq.class_of(x, j)];
  auto check = validate_homomorphism(net, d, m, res.q);
  if (!check.ok) throw InvariantError("homomorphism check failed: " + check.failure);
  return res;
}

HomomorphismCheck validate_homomorphism(const NetworkGraph& net, const FiniteSubset& d,
                                        std::size_t m,
                                        const std::vector<std::vector<Color>>& q) {
  const std::size_t k = d.size();
  if (q.size() != net.size()) return {false, "wrong number of mappings"};
  std::vector<std::uint32_t> seen(m, UINT32_MAX);
  for (std::uint32_t x = 0; x < q.size(); ++x) {
    if (q[x].size() != k) return {false, "mapping of wrong size"};
    for (Color c : q[x]) {
      if (c >= m || seen[c] == x)
        return {false, "q at " + net.group.format(net.elements[x]) + " is not injective"};
      seen[c] = x;
    }
  }
  for (std::uint32_t x = 0; x < net.size(); ++x)
    for (const Arc& a : net.graph.arcs(x))
      if (!sigma_compatible(net.group, q[x], q[a.to], net.graph.alphabet()[a.label], d))
        return {false, "edge " + net.group.format(net.elements[x]) + " -> " +
                           net.group.format(net.elements[a.to]) + " not compatible"};
  const auto eq = equivalence_closure(net, d);
  for (const auto& cls : eq.members) {
    const Color v = q[cls[0].first][cls[0].second];
    for (const auto& [y, j] : cls)
      if (q[y][j] != v)
        return {false, "equivalent pairs disagree at " + net.group.format(net.elements[y])};
  }
  return {};
}

LocalColoringResult distributed_avoiding_coloring(const NetworkGraph& net,
                                                  const FiniteSubset& d, std::size_t m,
                                                  std::span<const Color> h,
                                                  const PatternSet& ps,
                                                  std::uint64_t shuffle_seed) {
  const InjectionSpace space(d.size(), m);
  if (!space.fits() || h.size() != space.size())
    throw InputError("h must color every vertex of H_{D,m}");
  auto hom = distributed_homomorphism(net, d, m, shuffle_seed);
  LocalColoringResult res;
  res.ledger = std::move(hom.ledger);
  res.coloring.resize(net.size());
  for (std::uint32_t x = 0; x < net.size(); ++x) res.coloring[x] = h[space.rank(hom.q[x])];
  const auto rep = is_avoiding(net.group, res.coloring, net.graph, ps, net.s);
  if (!rep.avoiding) throw InvariantError("composed coloring contains a forbidden pattern");
  return res;
}

}  // namespace lllkit
