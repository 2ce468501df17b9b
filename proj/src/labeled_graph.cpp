// SPDX-License-Identifier: Apache-2.0
#include "lllkit/labeled_graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "lllkit/errors.hpp"

namespace lllkit {

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adj_) twice += a.size();
  return twice / 2;
}

bool Graph::add_edge(std::uint32_t u, std::uint32_t v) {
  if (u == v || adjacent(u, v)) return false;
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  return true;
}

bool Graph::adjacent(std::uint32_t u, std::uint32_t v) const {
  const auto& a = adj_[u];
  return std::find(a.begin(), a.end(), v) != a.end();
}

std::size_t Graph::max_degree() const {
  std::size_t m = 0;
  for (const auto& a : adj_) m = std::max(m, a.size());
  return m;
}

void Graph::canonicalize() {
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

SLabeledGraph::SLabeledGraph(std::size_t n, std::vector<Element> alphabet,
                             std::vector<std::uint32_t> inverse_label)
    : adj_(n), alphabet_(std::move(alphabet)), inverse_(std::move(inverse_label)) {
  if (inverse_.size() != alphabet_.size())
    throw InputError("label inverse table has the wrong size");
  for (std::size_t i = 0; i < inverse_.size(); ++i)
    if (inverse_[i] >= inverse_.size() || inverse_[inverse_[i]] != i)
      throw InputError("label inverse table is not an involution");
}

std::optional<std::uint32_t> SLabeledGraph::label_index(const Element& e) const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == e) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

void SLabeledGraph::add_edge(std::uint32_t u, std::uint32_t v,
                             std::uint32_t label) {
  if (u == v) throw InputError("self-loops are not allowed");
  if (adjacent(u, v)) throw InputError("edge already present");
  add_edge_unchecked(u, v, label);
}

void SLabeledGraph::add_edge_unchecked(std::uint32_t u, std::uint32_t v,
                                       std::uint32_t label) {
  adj_[u].push_back({v, label});
  adj_[v].push_back({u, inverse_[label]});
  ++edges_;
}

std::optional<std::uint32_t> SLabeledGraph::label(std::uint32_t u,
                                                  std::uint32_t v) const {
  for (const Arc& a : adj_[u])
    if (a.to == v) return a.label;
  return std::nullopt;
}

std::size_t SLabeledGraph::max_degree() const {
  std::size_t m = 0;
  for (const auto& a : adj_) m = std::max(m, a.size());
  return m;
}

Graph SLabeledGraph::underlying() const {
  Graph g(adj_.size());
  for (std::uint32_t u = 0; u < adj_.size(); ++u)
    for (const Arc& a : adj_[u])
      if (u < a.to) g.add_edge(u, a.to);
  return g;
}

bool SLabeledGraph::labels_antisymmetric() const {
  for (std::uint32_t u = 0; u < adj_.size(); ++u) {
    std::vector<std::uint32_t> seen;
    for (const Arc& a : adj_[u]) {
      if (a.to == u) return false;
      seen.push_back(a.to);
      auto back = label(a.to, u);
      if (!back || *back != inverse_[a.label]) return false;
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  }
  return true;
}

std::pair<std::vector<Element>, std::vector<std::uint32_t>> label_alphabet(
    const Group& g, const FiniteSubset& s) {
  FiniteSubset sym;
  for (const auto& x : symmetrize(g, s))
    if (!g.is_identity(x)) sym.insert(x);
  std::vector<std::uint32_t> inv(sym.size());
  for (std::size_t i = 0; i < sym.size(); ++i)
    inv[i] = static_cast<std::uint32_t>(*sym.index_of(g.inverse(sym[i])));
  return {sym.elements(), inv};
}

SLabeledGraph cayley_subgraph(const Group& g, const FiniteSubset& f,
                              const FiniteSubset& s) {
  auto [alphabet, inv] = label_alphabet(g, s);
  SLabeledGraph out(f.size(), alphabet, inv);
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    for (std::uint32_t l = 0; l < alphabet.size(); ++l) {
      auto y = f.index_of(g.multiply(alphabet[l], f[x]));
      if (!y || *y == x) continue;
      // The first label found in generator order wins.
      if (!out.adjacent(x, static_cast<std::uint32_t>(*y)))
        out.add_edge_unchecked(x, static_cast<std::uint32_t>(*y), l);
    }
  }
  return out;
}

std::size_t count_components(const Graph& g) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::size_t comps = 0;
  for (std::uint32_t s = 0; s < g.vertex_count(); ++s) {
    if (seen[s]) continue;
    ++comps;
    std::deque<std::uint32_t> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
    }
  }
  return comps;
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, std::uint32_t source,
                                         std::uint32_t limit) {
  constexpr auto kInf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(g.vertex_count(), kInf);
  std::deque<std::uint32_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    if (dist[v] == limit) continue;
    for (auto w : g.neighbors(v))
      if (dist[w] == kInf) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

}  // namespace lllkit
