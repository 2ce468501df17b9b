// SPDX-License-Identifier: Apache-2.0
#include "lllkit/group.hpp"

#include <algorithm>
#include <boost/container_hash/hash.hpp>
#include <cstdlib>

#include "lllkit/errors.hpp"

namespace lllkit {

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  return boost::hash_range(e.data.begin(), e.data.end());
}

FiniteSubset::FiniteSubset(std::vector<Element> elements) {
  elements_.reserve(elements.size());
  for (auto& e : elements) insert(e);
}

FiniteSubset::FiniteSubset(std::initializer_list<Element> elements) {
  for (const auto& e : elements) insert(e);
}

bool FiniteSubset::insert(const Element& e) {
  auto [it, fresh] = index_.emplace(e, elements_.size());
  if (fresh) elements_.push_back(e);
  return fresh;
}

std::optional<std::size_t> FiniteSubset::index_of(const Element& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

int positive_mod(std::int64_t a, int q) {
  std::int64_t r = a % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

}  // namespace

Group::Group(GroupKind kind, int dim, int modulus,
             std::vector<Element> generators)
    : kind_(kind), dim_(dim), modulus_(modulus) {
  if (dim < 1)
    throw InputError(kind == GroupKind::Free ? "free rank must be >= 1"
                                             : "dimension must be >= 1");
  if (kind == GroupKind::Torus && modulus < 2)
    throw InputError("torus modulus must be >= 2");
  for (auto& g : generators) {
    if (kind == GroupKind::Torus && g.data.size() == static_cast<size_t>(dim))
      for (auto& c : g.data) c = positive_mod(c, modulus);
    validate(g);
    generators_.insert(g);
  }
}

Group Group::lattice(int dim, std::vector<Element> generators) {
  return Group(GroupKind::Lattice, dim, 0, std::move(generators));
}
Group Group::torus(int dim, int modulus, std::vector<Element> generators) {
  return Group(GroupKind::Torus, dim, modulus, std::move(generators));
}
Group Group::free(int rank, std::vector<Element> generators) {
  return Group(GroupKind::Free, rank, 0, std::move(generators));
}

namespace {
std::vector<Element> unit_vectors(int dim) {
  std::vector<Element> out;
  for (int i = 0; i < dim; ++i) {
    Element e(std::vector<std::int32_t>(dim, 0));
    e.data[i] = 1;
    out.push_back(e);
  }
  return out;
}
}  // namespace

Group Group::lattice_standard(int dim) { return lattice(dim, unit_vectors(dim)); }
Group Group::torus_standard(int dim, int modulus) {
  return torus(dim, modulus, unit_vectors(dim));
}
Group Group::free_standard(int rank) {
  std::vector<Element> gens;
  for (int i = 1; i <= rank; ++i) gens.push_back(Element{i});
  return free(rank, gens);
}

Element Group::identity() const {
  if (kind_ == GroupKind::Free) return Element{};
  return Element(std::vector<std::int32_t>(dim_, 0));
}

bool Group::is_identity(const Element& e) const {
  if (kind_ == GroupKind::Free) return e.data.empty();
  return std::all_of(e.data.begin(), e.data.end(),
                     [](std::int32_t c) { return c == 0; });
}

bool Group::is_valid(const Element& e) const {
  switch (kind_) {
    case GroupKind::Lattice:
      return e.data.size() == static_cast<size_t>(dim_);
    case GroupKind::Torus:
      if (e.data.size() != static_cast<size_t>(dim_)) return false;
      return std::all_of(e.data.begin(), e.data.end(), [&](std::int32_t c) {
        return c >= 0 && c < modulus_;
      });
    case GroupKind::Free:
      for (size_t i = 0; i < e.data.size(); ++i) {
        std::int32_t l = e.data[i];
        if (l == 0 || std::abs(l) > dim_) return false;
        if (i > 0 && e.data[i - 1] == -l) return false;
      }
      return true;
  }
  return false;
}

void Group::validate(const Element& e) const {
  if (!is_valid(e))
    throw InputError("element " + format(e) + " does not belong to the group");
}

Element Group::multiply(const Element& a, const Element& b) const {
  validate(a);
  validate(b);
  if (kind_ == GroupKind::Free) {
    Element out = a;
    for (std::int32_t l : b.data) {
      if (!out.data.empty() && out.data.back() == -l)
        out.data.pop_back();
      else
        out.data.push_back(l);
    }
    return out;
  }
  Element out{std::vector<std::int32_t>(dim_)};
  for (int i = 0; i < dim_; ++i) {
    std::int64_t s = static_cast<std::int64_t>(a.data[i]) + b.data[i];
    out.data[i] = kind_ == GroupKind::Torus ? positive_mod(s, modulus_)
                                            : static_cast<std::int32_t>(s);
  }
  return out;
}

Element Group::inverse(const Element& a) const {
  validate(a);
  Element out;
  if (kind_ == GroupKind::Free) {
    out.data.assign(a.data.rbegin(), a.data.rend());
    for (auto& l : out.data) l = -l;
    return out;
  }
  out.data.resize(dim_);
  for (int i = 0; i < dim_; ++i)
    out.data[i] = kind_ == GroupKind::Torus ? positive_mod(-a.data[i], modulus_)
                                            : -a.data[i];
  return out;
}

Element Group::power(const Element& a, std::int64_t t) const {
  Element base = t < 0 ? inverse(a) : a;
  Element out = identity();
  for (std::int64_t i = 0; i < std::abs(t); ++i) out = multiply(out, base);
  return out;
}

Element Group::make(std::vector<std::int32_t> coords) const {
  if (kind_ == GroupKind::Free)
    throw InputError("coordinates are meaningless in a free group");
  if (coords.size() != static_cast<size_t>(dim_))
    throw InputError("coordinate count does not match the dimension");
  if (kind_ == GroupKind::Torus)
    for (auto& c : coords) c = positive_mod(c, modulus_);
  return Element(std::move(coords));
}

std::string Group::format(const Element& e) const {
  if (kind_ == GroupKind::Free) {
    if (e.data.empty()) return "1";
    std::string s;
    for (std::int32_t l : e.data) {
      if (l == 0 || std::abs(l) > 26) return "<invalid>";
      char c = static_cast<char>('a' + std::abs(l) - 1);
      s.push_back(l > 0 ? c : static_cast<char>(c - 'a' + 'A'));
    }
    return s;
  }
  std::string s = "(";
  for (size_t i = 0; i < e.data.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e.data[i]);
  }
  return s + ")";
}

std::int64_t Group::norm(const Element& e) const {
  if (kind_ == GroupKind::Free) return static_cast<std::int64_t>(e.data.size());
  std::int64_t m = 0;
  for (std::int32_t c : e.data) {
    std::int64_t v = c;
    if (kind_ == GroupKind::Torus) v = std::min<std::int64_t>(c, modulus_ - c);
    m = std::max(m, std::abs(v));
  }
  return m;
}

FiniteSubset product_set(const Group& g, const FiniteSubset& a,
                         const FiniteSubset& b) {
  FiniteSubset out;
  for (const auto& x : a)
    for (const auto& y : b) out.insert(g.multiply(x, y));
  return out;
}

FiniteSubset power_set(const Group& g, const FiniteSubset& f, std::size_t t) {
  FiniteSubset out{g.identity()};
  for (std::size_t i = 0; i < t; ++i) out = product_set(g, out, f);
  return out;
}

FiniteSubset symmetrize(const Group& g, const FiniteSubset& s) {
  FiniteSubset out = s;
  for (const auto& x : s) out.insert(g.inverse(x));
  return out;
}

FiniteSubset with_identity(const Group& g, const FiniteSubset& s) {
  FiniteSubset out{g.identity()};
  for (const auto& x : symmetrize(g, s)) out.insert(x);
  return out;
}

FiniteSubset inverse_set(const Group& g, const FiniteSubset& s) {
  FiniteSubset out;
  for (const auto& x : s) out.insert(g.inverse(x));
  return out;
}

FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b) {
  FiniteSubset out = a;
  for (const auto& x : b) out.insert(x);
  return out;
}

FiniteSubset set_difference(const FiniteSubset& a, const FiniteSubset& b) {
  FiniteSubset out;
  for (const auto& x : a)
    if (!b.contains(x)) out.insert(x);
  return out;
}

FiniteSubset word_ball(const Group& g, const FiniteSubset& s, std::size_t r) {
  return power_set(g, with_identity(g, s), r);
}

FiniteSubset coordinate_box(const Group& g, const std::vector<int>& lo,
                            const std::vector<int>& hi) {
  if (g.kind() == GroupKind::Free)
    throw InputError("coordinate boxes need an abelian group");
  const int d = g.dim();
  if (lo.size() != static_cast<size_t>(d) || hi.size() != static_cast<size_t>(d))
    throw InputError("box bounds do not match the dimension");
  FiniteSubset out;
  std::vector<std::int32_t> cur(lo.begin(), lo.end());
  for (int i = 0; i < d; ++i)
    if (lo[i] > hi[i]) return out;
  while (true) {
    out.insert(g.make(cur));
    int i = d - 1;
    while (i >= 0 && cur[i] == hi[i]) {
      cur[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

FiniteSubset torus_points(const Group& g) {
  if (g.kind() != GroupKind::Torus) throw InputError("not a torus");
  return coordinate_box(g, std::vector<int>(g.dim(), 0),
                        std::vector<int>(g.dim(), g.modulus() - 1));
}

}  // namespace lllkit
