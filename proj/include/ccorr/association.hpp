#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccorr/caps.hpp"
#include "ccorr/edge_measure.hpp"
#include "ccorr/rational.hpp"
#include "ccorr/spin_measure.hpp"

namespace ccorr {

/// A subset of {0,1}^n, stored as a bitset over configuration ranks.
class Event {
 public:
  explicit Event(int coordinates) : coordinates_(coordinates) {
    if (coordinates < 0 || coordinates > 40) throw std::invalid_argument("event coordinate count out of range");
    words_.assign(std::max<std::uint64_t>(1, size() / 64 + (size() % 64 != 0)), 0);
  }

  static Event from_ranks(int coordinates, std::span<const std::uint64_t> ranks) {
    Event e(coordinates);
    for (auto r : ranks) e.insert(r);
    return e;
  }

  static Event full(int coordinates) {
    Event e(coordinates);
    for (std::uint64_t r = 0; r < e.size(); ++r) e.insert(r);
    return e;
  }

  /// Single-word events, n <= 6.
  static Event from_mask(int coordinates, std::uint64_t mask) {
    if (coordinates > 6) throw std::invalid_argument("mask events need at most 6 coordinates");
    Event e(coordinates);
    e.words_[0] = mask;
    return e;
  }

  int coordinates() const noexcept { return coordinates_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << coordinates_; }

  bool contains(std::uint64_t rank) const { return rank < size() && ((words_[rank / 64] >> (rank % 64)) & 1U); }
  void insert(std::uint64_t rank) {
    if (rank >= size()) throw std::out_of_range("rank outside the event's space");
    words_[rank / 64] |= std::uint64_t{1} << (rank % 64);
  }

  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  std::uint64_t mask() const {
    if (coordinates_ > 6) throw std::logic_error("event does not fit one word");
    return words_[0];
  }

  std::vector<std::uint64_t> ranks() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t r = 0; r < size(); ++r)
      if (contains(r)) out.push_back(r);
    return out;
  }

  Event complement() const {
    Event e(coordinates_);
    for (std::uint64_t r = 0; r < size(); ++r)
      if (!contains(r)) e.insert(r);
    return e;
  }

  Event intersect(const Event& o) const {
    check_compatible(o);
    Event e(coordinates_);
    for (std::size_t i = 0; i < words_.size(); ++i) e.words_[i] = words_[i] & o.words_[i];
    return e;
  }

  /// Upward closed in the coordinatewise order.
  bool is_increasing() const {
    for (std::uint64_t r = 0; r < size(); ++r) {
      if (!contains(r)) continue;
      for (int i = 0; i < coordinates_; ++i)
        if (!contains(r | (std::uint64_t{1} << i))) return false;
    }
    return true;
  }

  bool operator==(const Event&) const = default;

 private:
  void check_compatible(const Event& o) const {
    if (o.coordinates_ != coordinates_) throw std::invalid_argument("events over different spaces");
  }

  int coordinates_;
  std::vector<std::uint64_t> words_;
};

/// An increasing event. Construction validates upward closure.
class UpSet {
 public:
  explicit UpSet(Event event) : event_(std::move(event)) {
    if (!event_.is_increasing()) throw std::invalid_argument("event is not upward closed");
  }

  /// {config : config >= base}.
  static UpSet principal(int coordinates, std::uint64_t base) {
    Event e(coordinates);
    for (std::uint64_t r = 0; r < e.size(); ++r)
      if ((r & base) == base) e.insert(r);
    return UpSet(std::move(e));
  }

  static UpSet all_ones(int coordinates) { return principal(coordinates, (std::uint64_t{1} << coordinates) - 1); }
  static UpSet coordinate(int coordinates, int i) { return principal(coordinates, std::uint64_t{1} << i); }
  static UpSet full(int coordinates) { return UpSet(Event::full(coordinates)); }
  static UpSet empty(int coordinates) { return UpSet(Event(coordinates)); }

  const Event& event() const noexcept { return event_; }
  int coordinates() const noexcept { return event_.coordinates(); }
  bool contains(std::uint64_t rank) const { return event_.contains(rank); }
  std::vector<std::uint64_t> ranks() const { return event_.ranks(); }

  bool operator==(const UpSet&) const = default;

 private:
  Event event_;
};

/// Every up-set of {0,1}^n (equivalently {-1,+1}^n), the empty and full sets
/// included, in ascending order of membership mask. An up-set on n
/// coordinates splits into its halves with top coordinate 0 and 1, and the
/// lower half must be contained in the upper half.
inline std::vector<UpSet> enumerate_upsets(int n, const Caps& caps = {}) {
  if (n < 0) throw std::invalid_argument("negative coordinate count");
  enforce_cap("max-upset-coordinates", n, std::min(caps.max_upset_coordinates, 6));
  std::vector<std::uint64_t> masks{0, 1};
  for (int k = 1; k <= n; ++k) {
    const int half = 1 << (k - 1);
    std::vector<std::uint64_t> next;
    for (auto lo : masks)
      for (auto hi : masks)
        if ((lo & ~hi) == 0) next.push_back(lo | (hi << half));
    std::sort(next.begin(), next.end());
    masks = std::move(next);
  }
  std::vector<UpSet> out;
  out.reserve(masks.size());
  for (auto m : masks) out.emplace_back(Event::from_mask(n, m));
  return out;
}

namespace detail {

inline int table_coordinates(std::span<const Rational> table) {
  if (!std::has_single_bit(table.size())) throw std::invalid_argument("binary table size must be a power of two");
  return std::countr_zero(table.size());
}

inline Rational event_prob(std::span<const Rational> table, const Event& a) {
  if (a.size() != table.size()) throw std::invalid_argument("event and measure live on different spaces");
  Rational out;
  for (std::uint64_t r = 0; r < table.size(); ++r)
    if (a.contains(r)) out += table[r];
  return out;
}

inline std::span<const Rational> binary_table(const SpinMeasure& nu) {
  if (nu.color_count() != 2) throw std::invalid_argument("association checks need a two-color measure");
  return nu.table();
}

}  // namespace detail

/// Pr(AB) - Pr(A) Pr(B).
inline Rational correlation(std::span<const Rational> table, const Event& a, const Event& b) {
  return detail::event_prob(table, a.intersect(b)) - detail::event_prob(table, a) * detail::event_prob(table, b);
}
inline Rational correlation(std::span<const Rational> table, const UpSet& a, const UpSet& b) {
  return correlation(table, a.event(), b.event());
}
inline Rational correlation(const SpinMeasure& nu, const UpSet& a, const UpSet& b) {
  return correlation(detail::binary_table(nu), a, b);
}
inline Rational correlation(const EdgeMeasure& mu, const UpSet& a, const UpSet& b) {
  return correlation(mu.table(), a, b);
}

/// Covariance given C; empty when Pr(C) = 0.
inline std::optional<Rational> conditional_correlation(std::span<const Rational> table, const Event& a, const Event& b,
                                                       const Event& c) {
  const Rational pc = detail::event_prob(table, c);
  if (pc == 0) return std::nullopt;
  const Rational pab = detail::event_prob(table, a.intersect(b).intersect(c)) / pc;
  const Rational pa = detail::event_prob(table, a.intersect(c)) / pc;
  const Rational pb = detail::event_prob(table, b.intersect(c)) / pc;
  return pab - pa * pb;
}

struct AssociationWitness {
  UpSet a;
  UpSet b;
  Rational covariance;
};

struct AssociationVerdict {
  bool holds = true;
  std::optional<AssociationWitness> witness;
  std::uint64_t pairs_checked = 0;
  std::uint64_t upset_count = 0;
};

/// Cov(1_A, 1_B) >= 0 for every pair of up-sets. Pairs are visited as (i, j)
/// with i <= j in enumeration order and the first failure is reported.
inline AssociationVerdict positive_association_check(std::span<const Rational> table, const Caps& caps = {}) {
  const int n = detail::table_coordinates(table);
  enforce_cap("max-pa-vertices", n, caps.max_pa_vertices);
  const auto upsets = enumerate_upsets(n, caps);
  const ScaledTable scaled = scale_to_integers(table);
  const auto& w = scaled.numerators;
  const Integer& total = scaled.denominator;

  std::vector<std::uint64_t> masks;
  std::vector<Integer> mass;
  masks.reserve(upsets.size());
  mass.reserve(upsets.size());
  for (const auto& u : upsets) {
    const std::uint64_t m = u.event().mask();
    Integer s = 0;
    for (std::uint64_t bits = m; bits != 0; bits &= bits - 1) s += w[static_cast<std::size_t>(std::countr_zero(bits))];
    masks.push_back(m);
    mass.push_back(std::move(s));
  }

  AssociationVerdict verdict;
  verdict.upset_count = upsets.size();
  Integer joint, lhs, rhs;
  for (std::size_t i = 0; i < upsets.size(); ++i) {
    for (std::size_t j = i; j < upsets.size(); ++j) {
      ++verdict.pairs_checked;
      joint = 0;
      for (std::uint64_t bits = masks[i] & masks[j]; bits != 0; bits &= bits - 1)
        joint += w[static_cast<std::size_t>(std::countr_zero(bits))];
      // total^2 * Cov = total * joint - mass_i * mass_j
      lhs = total * joint;
      rhs = mass[i] * mass[j];
      if (lhs < rhs) {
        verdict.holds = false;
        Rational cov(lhs - rhs, total * total);
        cov.canonicalize();
        verdict.witness = AssociationWitness{upsets[i], upsets[j], std::move(cov)};
        return verdict;
      }
    }
  }
  return verdict;
}

inline AssociationVerdict positive_association_check(const SpinMeasure& nu, const Caps& caps = {}) {
  return positive_association_check(detail::binary_table(nu), caps);
}
inline AssociationVerdict positive_association_check(const EdgeMeasure& mu, const Caps& caps = {}) {
  return positive_association_check(mu.table(), caps);
}

/// One instance of the decomposition lemma: if A and B are each positively
/// correlated with C, and A, B are conditionally positively correlated given C
/// and given not-C, then A and B are positively correlated.
struct Lemma1Report {
  Rational cov_ac;
  Rational cov_bc;
  std::optional<Rational> cov_ab_given_c;      // empty when Pr(C) = 0
  std::optional<Rational> cov_ab_given_not_c;  // empty when Pr(C) = 1
  Rational cov_ab;
  bool hypotheses_hold = false;
  bool conclusion_holds = false;
  /// The implication holds for this instance.
  bool consistent() const noexcept { return !hypotheses_hold || conclusion_holds; }
};

inline Lemma1Report lemma1_decomposition_check(std::span<const Rational> table, const Event& a, const Event& b,
                                               const Event& c) {
  Lemma1Report rep;
  rep.cov_ac = correlation(table, a, c);
  rep.cov_bc = correlation(table, b, c);
  rep.cov_ab_given_c = conditional_correlation(table, a, b, c);
  rep.cov_ab_given_not_c = conditional_correlation(table, a, b, c.complement());
  rep.cov_ab = correlation(table, a, b);
  const auto nonneg = [](const std::optional<Rational>& v) { return !v || *v >= 0; };
  rep.hypotheses_hold = rep.cov_ac >= 0 && rep.cov_bc >= 0 && nonneg(rep.cov_ab_given_c) && nonneg(rep.cov_ab_given_not_c);
  rep.conclusion_holds = rep.cov_ab >= 0;
  return rep;
}

inline Lemma1Report lemma1_decomposition_check(const SpinMeasure& nu, const Event& a, const Event& b, const Event& c) {
  return lemma1_decomposition_check(detail::binary_table(nu), a, b, c);
}

struct Lemma2Witness {
  UpSet c;
  Rational covariance;
};

struct Lemma2Verdict {
  bool holds = true;
  std::optional<Lemma2Witness> witness;
  std::uint64_t upsets_checked = 0;
};

namespace detail {

// Per spin rank sigma, under jm restricted to sigma_x = +1:
//   joint[sigma] = Pr(sigma, eta_e = 1, sigma_x = +1), plain[sigma] = Pr(sigma, sigma_x = +1).
struct Lemma2Sums {
  std::vector<Rational> joint;
  std::vector<Rational> plain;
  Rational px;
  Rational pe;
};

inline Lemma2Sums lemma2_sums(const JointMeasure& jm, int x, int e) {
  const Graph& g = jm.graph();
  if (jm.color_count() != 2) throw std::invalid_argument("lemma2_check needs a two-color joint measure");
  if (x < 0 || x >= g.vertex_count()) throw std::out_of_range("vertex out of range");
  if (e < 0 || e >= g.edge_count()) throw std::out_of_range("edge out of range");
  if (!g.edge(e).touches(x))
    throw std::invalid_argument("edge " + std::to_string(e) + " does not contain vertex " + std::to_string(x));
  Lemma2Sums s;
  const std::uint64_t n = std::uint64_t{1} << g.vertex_count();
  s.joint.assign(n, Rational(0));
  s.plain.assign(n, Rational(0));
  for (const auto& entry : jm.entries()) {
    if (((entry.spins >> x) & 1U) == 0) continue;
    s.plain[entry.spins] += entry.prob;
    s.px += entry.prob;
    if (entry.edges.open(e)) {
      s.joint[entry.spins] += entry.prob;
      s.pe += entry.prob;
    }
  }
  return s;
}

// Pr(sigma_x = +1)^2 * Cov(1_C, 1_{eta_e = 1} | sigma_x = +1)
inline Rational lemma2_scaled_covariance(const Lemma2Sums& s, const UpSet& c) {
  Rational joint, plain;
  for (auto r : c.ranks()) {
    joint += s.joint[r];
    plain += s.plain[r];
  }
  return s.px * joint - plain * s.pe;
}

}  // namespace detail

/// Cov(1_C, 1_{eta_e = 1} | sigma_x = +1) for one up-set C of spins.
inline Rational lemma2_covariance(const JointMeasure& jm, int x, int e, const UpSet& c) {
  const auto s = detail::lemma2_sums(jm, x, e);
  if (c.coordinates() != jm.graph().vertex_count()) throw std::invalid_argument("up-set over the wrong vertex count");
  return detail::lemma2_scaled_covariance(s, c) / (s.px * s.px);
}

/// Checks the candidate up-sets in order; reports the first negative one.
inline Lemma2Verdict lemma2_check(const JointMeasure& jm, int x, int e, std::span<const UpSet> candidates) {
  const auto s = detail::lemma2_sums(jm, x, e);
  Lemma2Verdict verdict;
  for (const auto& c : candidates) {
    if (c.coordinates() != jm.graph().vertex_count()) throw std::invalid_argument("up-set over the wrong vertex count");
    ++verdict.upsets_checked;
    const Rational scaled = detail::lemma2_scaled_covariance(s, c);
    if (scaled < 0) {
      verdict.holds = false;
      verdict.witness = Lemma2Witness{c, scaled / (s.px * s.px)};
      return verdict;
    }
  }
  return verdict;
}

/// Every up-set over the spins (vertex count limited by max-pa-vertices).
inline Lemma2Verdict lemma2_check(const JointMeasure& jm, int x, int e, const Caps& caps = {}) {
  enforce_cap("max-pa-vertices", jm.graph().vertex_count(), caps.max_pa_vertices);
  const auto upsets = enumerate_upsets(jm.graph().vertex_count(), caps);
  return lemma2_check(jm, x, e, upsets);
}

}  // namespace ccorr
