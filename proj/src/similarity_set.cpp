// SPDX-License-Identifier: Apache-2.0
#include "lllkit/similarity_set.hpp"

#include <numeric>

#include "lllkit/errors.hpp"

namespace lllkit {

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

std::uint8_t bit_of(Color c, std::uint32_t i) { return (c >> i) & 1U; }

}  // namespace

SimilaritySet::SimilaritySet(std::size_t arity, unsigned bits,
                             std::vector<BitEquality> eqs)
    : arity_(arity), bits_(bits) {
  if (bits_ > 31) throw InputError("at most 31 bits per color are supported");
  for (const auto& e : eqs) {
    for (const BitTerm* t : {&e.a, &e.b})
      if (!t->fixed && (t->pos >= arity_ || t->bit >= bits_))
        throw InputError("bit equality refers outside the domain");
    if (e.a.fixed && e.b.fixed) {
      if (e.a.value != e.b.value) impossible_ = true;
      continue;
    }
    eqs_.push_back(e);
  }
}

BigInt SimilaritySet::count_with(
    std::optional<std::pair<std::size_t, Color>> pinned) const {
  if (impossible_) return 0;
  const std::uint32_t vars = static_cast<std::uint32_t>(arity_ * bits_);
  const std::uint32_t zero = vars, one = vars + 1;
  UnionFind uf(vars + 2);
  auto node = [&](const BitTerm& t) {
    return t.fixed ? (t.value ? one : zero) : t.pos * bits_ + t.bit;
  };
  for (const auto& e : eqs_) uf.unite(node(e.a), node(e.b));
  if (pinned)
    for (std::uint32_t i = 0; i < bits_; ++i)
      uf.unite(static_cast<std::uint32_t>(pinned->first) * bits_ + i,
               bit_of(pinned->second, i) ? one : zero);
  if (uf.find(zero) == uf.find(one)) return 0;
  const auto rz = uf.find(zero), ro = uf.find(one);
  std::size_t free_components = 0;
  for (std::uint32_t v = 0; v < vars; ++v) {
    auto r = uf.find(v);
    if (r == v && r != rz && r != ro) ++free_components;
  }
  return ipow(2, free_components);
}

BigInt SimilaritySet::count() const { return count_with(std::nullopt); }

BigInt SimilaritySet::count_fixing(std::size_t pos, Color a) const {
  if (pos >= arity_) throw InputError("position outside the domain");
  if (bits_ < 32 && (static_cast<std::uint64_t>(a) >> bits_) != 0) return 0;
  return count_with(std::make_pair(pos, a));
}

std::shared_ptr<const ForbiddenSet> SimilaritySet::fix(std::size_t pos, Color a) const {
  if (pos >= arity_) throw InputError("position outside the domain");
  auto subst = [&](BitTerm t) {
    if (t.fixed) return t;
    if (t.pos == pos) return BitTerm::constant(bit_of(a, t.bit));
    if (t.pos > pos) --t.pos;
    return t;
  };
  std::vector<BitEquality> eqs;
  eqs.reserve(eqs_.size() + 1);
  for (const auto& e : eqs_) eqs.push_back({subst(e.a), subst(e.b)});
  if (impossible_) eqs.push_back({BitTerm::constant(0), BitTerm::constant(1)});
  return std::make_shared<SimilaritySet>(arity_ - 1, bits_, std::move(eqs));
}

bool SimilaritySet::contains(std::span<const Color> t) const {
  if (impossible_) return false;
  if (t.size() != arity_) throw InputError("tuple length differs from arity");
  auto value = [&](const BitTerm& term) -> std::uint8_t {
    return term.fixed ? term.value : bit_of(t[term.pos], term.bit);
  };
  for (const auto& e : eqs_)
    if (value(e.a) != value(e.b)) return false;
  return true;
}

std::optional<std::vector<Tuple>> SimilaritySet::tuples(std::uint64_t limit) const {
  const std::uint64_t k = std::uint64_t{1} << bits_;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < arity_; ++i) {
    if (total > limit / k) return std::nullopt;
    total *= k;
  }
  if (total > limit) return std::nullopt;
  std::vector<Tuple> out;
  Tuple t(arity_, 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    std::uint64_t r = n;
    for (std::size_t i = arity_; i-- > 0;) {
      t[i] = static_cast<Color>(r % k);
      r /= k;
    }
    if (contains(t)) out.push_back(t);
  }
  return out;
}

bool SimilaritySet::colors_below(Color k) const {
  return (std::uint64_t{1} << bits_) <= k;
}

}  // namespace lllkit
