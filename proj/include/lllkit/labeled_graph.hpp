// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lllkit/group.hpp"

namespace lllkit {

// Plain undirected simple graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}
  // Adjacency lists taken as given; they must be symmetric and loop-free.
  explicit Graph(std::vector<std::vector<std::uint32_t>> adj) : adj_(std::move(adj)) {}

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const;
  // Adds {u,v} unless present or u == v; returns whether it was added.
  bool add_edge(std::uint32_t u, std::uint32_t v);
  bool adjacent(std::uint32_t u, std::uint32_t v) const;
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return adj_[v];
  }
  std::size_t degree(std::uint32_t v) const { return adj_[v].size(); }
  std::size_t max_degree() const;
  // Sorts every adjacency list ascending.
  void canonicalize();

 private:
  std::vector<std::vector<std::uint32_t>> adj_;
};

struct Arc {
  std::uint32_t to;
  std::uint32_t label;  // index into the alphabet
};

// Simple graph whose ordered adjacent pairs carry labels from a symmetric
// alphabet, with label(v,u) = inverse(label(u,v)).
class SLabeledGraph {
 public:
  SLabeledGraph() = default;
  // `alphabet` must be closed under inversion; `inverse_label[i]` is the
  // index of alphabet[i]^{-1}.
  SLabeledGraph(std::size_t n, std::vector<Element> alphabet,
                std::vector<std::uint32_t> inverse_label);

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }
  const std::vector<Element>& alphabet() const { return alphabet_; }
  std::uint32_t inverse_label(std::uint32_t l) const { return inverse_[l]; }
  std::optional<std::uint32_t> label_index(const Element& e) const;

  // Adds u->v with `label` and v->u with its inverse. Rejects loops and
  // edges already present.
  void add_edge(std::uint32_t u, std::uint32_t v, std::uint32_t label);
  // Same without the duplicate scan; the caller guarantees freshness.
  void add_edge_unchecked(std::uint32_t u, std::uint32_t v,
                          std::uint32_t label);

  std::span<const Arc> arcs(std::uint32_t v) const { return adj_[v]; }
  std::optional<std::uint32_t> label(std::uint32_t u, std::uint32_t v) const;
  bool adjacent(std::uint32_t u, std::uint32_t v) const {
    return label(u, v).has_value();
  }
  std::size_t max_degree() const;
  Graph underlying() const;
  // Every ordered pair carries the inverse label of its reverse, no loops,
  // no repeated neighbours.
  bool labels_antisymmetric() const;

 private:
  std::vector<std::vector<Arc>> adj_;
  std::vector<Element> alphabet_;
  std::vector<std::uint32_t> inverse_;
  std::size_t edges_ = 0;
};

// Alphabet (S u S^{-1}) \ {1} in generator order and its inverse table.
std::pair<std::vector<Element>, std::vector<std::uint32_t>> label_alphabet(
    const Group& g, const FiniteSubset& s);

// G(F, S): vertex i is F[i]; x ~ y iff y = sigma x for some sigma in
// (S u S^{-1}) \ {1}, labelled by that sigma.
SLabeledGraph cayley_subgraph(const Group& g, const FiniteSubset& f,
                              const FiniteSubset& s);

// Connected components by BFS; returns the number of components.
std::size_t count_components(const Graph& g);
std::vector<std::uint32_t> bfs_distances(const Graph& g, std::uint32_t source,
                                         std::uint32_t limit);

}  // namespace lllkit
