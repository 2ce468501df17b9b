// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace lllkit {

// Canonical form of a group element. Lattice and torus elements store one
// coordinate per dimension (torus coordinates reduced into [0, q)). Free-group
// elements store a freely reduced word whose letters are +i for the i-th
// generator and -i for its inverse (1-based).
struct Element {
  std::vector<std::int32_t> data;

  Element() = default;
  explicit Element(std::vector<std::int32_t> d) : data(std::move(d)) {}
  Element(std::initializer_list<std::int32_t> d) : data(d) {}

  auto operator<=>(const Element&) const = default;
  bool operator==(const Element&) const = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

// Ordered, duplicate-free sequence of elements with O(1) membership.
class FiniteSubset {
 public:
  FiniteSubset() = default;
  explicit FiniteSubset(std::vector<Element> elements);
  FiniteSubset(std::initializer_list<Element> elements);

  // Appends `e` unless present; returns whether it was new.
  bool insert(const Element& e);
  bool contains(const Element& e) const { return index_.count(e) != 0; }
  std::optional<std::size_t> index_of(const Element& e) const;

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const Element& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Element>& elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  bool operator==(const FiniteSubset& other) const {
    return elements_ == other.elements_;
  }

 private:
  std::vector<Element> elements_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
};

enum class GroupKind { Lattice, Torus, Free };

// A finitely generated group: Z^d, (Z_q)^d or the free group of given rank,
// together with a generator list S (which may contain the identity).
class Group {
 public:
  static Group lattice(int dim, std::vector<Element> generators = {});
  static Group torus(int dim, int modulus, std::vector<Element> generators = {});
  static Group free(int rank, std::vector<Element> generators = {});

  // Standard generators: unit vectors, or the free letters a, b, ...
  static Group lattice_standard(int dim);
  static Group torus_standard(int dim, int modulus);
  static Group free_standard(int rank);

  GroupKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int modulus() const { return modulus_; }
  int rank() const { return dim_; }
  bool is_abelian() const { return kind_ != GroupKind::Free; }
  const FiniteSubset& generators() const { return generators_; }

  Element identity() const;
  bool is_identity(const Element& e) const;
  bool is_valid(const Element& e) const;
  void validate(const Element& e) const;  // throws InputError

  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element power(const Element& a, std::int64_t t) const;

  // Lattice-style coordinates on abelian groups (reduced on tori).
  Element make(std::vector<std::int32_t> coords) const;

  std::string format(const Element& e) const;
  // Largest absolute coordinate (lattice) or word length (free).
  std::int64_t norm(const Element& e) const;

  bool same_group(const Group& other) const {
    return kind_ == other.kind_ && dim_ == other.dim_ &&
           modulus_ == other.modulus_;
  }

 private:
  Group(GroupKind kind, int dim, int modulus, std::vector<Element> generators);

  GroupKind kind_;
  int dim_;
  int modulus_;
  FiniteSubset generators_;
};

// {ab : a in A, b in B}, first-occurrence order.
FiniteSubset product_set(const Group& g, const FiniteSubset& a,
                         const FiniteSubset& b);
// F^0 = {1}, F^t = F^{t-1} F.
FiniteSubset power_set(const Group& g, const FiniteSubset& f, std::size_t t);
// S followed by the inverses of S.
FiniteSubset symmetrize(const Group& g, const FiniteSubset& s);
// {1} followed by S and S^{-1}.
FiniteSubset with_identity(const Group& g, const FiniteSubset& s);
FiniteSubset inverse_set(const Group& g, const FiniteSubset& s);
FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b);
FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b);
// Elements of the ball of radius r around the identity in the word metric of
// S u S^{-1}; equals with_identity(S)^r.
FiniteSubset word_ball(const Group& g, const FiniteSubset& s, std::size_t r);
// All elements of a torus in lexicographic coordinate order.
FiniteSubset torus_points(const Group& g);
// Coordinate box [lo_i, hi_i] in a lattice or torus, lexicographic order.
FiniteSubset coordinate_box(const Group& g, const std::vector<int>& lo,
                            const std::vector<int>& hi);

}  // namespace lllkit
