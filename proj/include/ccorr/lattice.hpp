#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>

#include "ccorr/rational.hpp"

namespace ccorr {

/// Result of a positive lattice condition check on {0,1}^n.
struct LatticeVerdict {
  bool holds = true;
  /// Minimum-rank failing pair (first < second) when the condition fails.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;
  std::uint64_t pairs_checked = 0;
};

/// Checks mu(a) mu(b) <= mu(a & b) mu(a | b) over all incomparable pairs of a
/// table indexed by bitmask rank. Comparable pairs hold with equality.
inline LatticeVerdict lattice_condition(std::span<const Rational> table) {
  if (!std::has_single_bit(table.size())) throw std::invalid_argument("lattice table size must be a power of two");
  const ScaledTable scaled = scale_to_integers(table);
  const auto& w = scaled.numerators;
  LatticeVerdict verdict;
  Integer lhs, rhs;
  for (std::uint64_t a = 0; a < table.size(); ++a) {
    for (std::uint64_t b = a + 1; b < table.size(); ++b) {
      const std::uint64_t meet = a & b;
      if (meet == a || meet == b) continue;
      ++verdict.pairs_checked;
      lhs = w[a] * w[b];
      rhs = w[meet] * w[a | b];
      if (lhs > rhs) {
        verdict.holds = false;
        verdict.witness = std::make_pair(a, b);
        return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace ccorr
