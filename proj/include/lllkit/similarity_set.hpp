// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lllkit/csp.hpp"

namespace lllkit {

// A bit of the carrier coloring: either already fixed, or bit `bit` of the
// color at domain position `pos`.
struct BitTerm {
  bool fixed = false;
  std::uint8_t value = 0;
  std::uint32_t pos = 0;
  std::uint32_t bit = 0;

  static BitTerm constant(std::uint8_t v) { return {true, v, 0, 0}; }
  static BitTerm variable(std::uint32_t pos, std::uint32_t bit) {
    return {false, 0, pos, bit};
  }
};

struct BitEquality {
  BitTerm a;
  BitTerm b;
};

// Tuples of 2^bits-colors under which every listed bit equality holds.
// Counting is exact via union-find over the bit variables.
class SimilaritySet final : public ForbiddenSet {
 public:
  SimilaritySet(std::size_t arity, unsigned bits, std::vector<BitEquality> eqs);

  std::size_t arity() const override { return arity_; }
  BigInt count() const override;
  BigInt count_fixing(std::size_t pos, Color a) const override;
  std::shared_ptr<const ForbiddenSet> fix(std::size_t pos, Color a) const override;
  bool contains(std::span<const Color> t) const override;
  std::optional<std::vector<Tuple>> tuples(std::uint64_t limit) const override;
  bool colors_below(Color k) const override;

  unsigned bits() const { return bits_; }
  const std::vector<BitEquality>& equalities() const { return eqs_; }

 private:
  BigInt count_with(std::optional<std::pair<std::size_t, Color>> pinned) const;

  std::size_t arity_;
  unsigned bits_;
  std::vector<BitEquality> eqs_;
  bool impossible_ = false;
};

}  // namespace lllkit
