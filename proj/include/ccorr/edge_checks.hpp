#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ccorr/edge_measure.hpp"
#include "ccorr/lattice.hpp"

namespace ccorr {

struct PlcVerdict {
  bool holds = true;
  std::optional<std::pair<EdgeConfig, EdgeConfig>> witness;
};

inline PlcVerdict plc_check(const EdgeMeasure& mu) {
  const LatticeVerdict lv = lattice_condition(mu.table());
  PlcVerdict out;
  out.holds = lv.holds;
  if (lv.witness) out.witness = std::make_pair(EdgeConfig(lv.witness->first), EdgeConfig(lv.witness->second));
  return out;
}

/// A violation of mu(eta_e = 1 | eta = lower on F) <= mu(eta_e = 1 | eta = upper on F).
struct MonotoneWitness {
  std::uint64_t fixed_edges = 0;  // F as an edge mask
  int edge = 0;
  EdgeConfig lower;  // values on F, zero outside F
  EdgeConfig upper;
  Rational lower_prob;
  Rational upper_prob;
};

struct MonotoneVerdict {
  bool holds = true;
  std::optional<MonotoneWitness> witness;
  std::uint64_t comparisons = 0;
  std::uint64_t skipped_null = 0;
};

/// Exhaustive check over F, e not in F, and lower < upper on F. Conditions of
/// probability zero are skipped. Witness order: F, then e, then lower, then
/// upper, each ascending.
inline MonotoneVerdict monotone_conditional_check(const EdgeMeasure& mu) {
  const int m = mu.graph().edge_count();
  const std::uint64_t n = mu.size();
  const ScaledTable scaled = scale_to_integers(mu.table());
  const auto& w = scaled.numerators;
  MonotoneVerdict verdict;

  std::vector<Integer> cyl(n);
  std::vector<Integer> cyl_open(n * static_cast<std::uint64_t>(m));
  Integer lhs, rhs;
  for (std::uint64_t fixed = 0; fixed < n; ++fixed) {
    // cylinder sums indexed by the value on F (a submask of F)
    for (std::uint64_t v = fixed;; v = (v - 1) & fixed) {
      cyl[v] = 0;
      for (int e = 0; e < m; ++e) cyl_open[v * m + e] = 0;
      if (v == 0) break;
    }
    for (std::uint64_t r = 0; r < n; ++r) {
      const std::uint64_t v = r & fixed;
      cyl[v] += w[r];
      for (int e = 0; e < m; ++e)
        if ((r >> e) & 1U) cyl_open[v * m + e] += w[r];
    }
    for (int e = 0; e < m; ++e) {
      if ((fixed >> e) & 1U) continue;
      // ascending submasks of F
      for (std::uint64_t lo = 0;; lo = (lo - fixed) & fixed) {
        if (cyl[lo] != 0) {
          const std::uint64_t free_bits = fixed & ~lo;
          for (std::uint64_t add = (0 - free_bits) & free_bits; add != 0; add = (add - free_bits) & free_bits) {
            const std::uint64_t hi = lo | add;
            if (cyl[hi] == 0) {
              ++verdict.skipped_null;
              continue;
            }
            ++verdict.comparisons;
            // P(e|lo) <= P(e|hi)  <=>  P(e,lo) P(hi) <= P(e,hi) P(lo)
            lhs = cyl_open[lo * m + e] * cyl[hi];
            rhs = cyl_open[hi * m + e] * cyl[lo];
            if (lhs > rhs) {
              verdict.holds = false;
              MonotoneWitness wit;
              wit.fixed_edges = fixed;
              wit.edge = e;
              wit.lower = EdgeConfig(lo);
              wit.upper = EdgeConfig(hi);
              wit.lower_prob = Rational(cyl_open[lo * m + e], cyl[lo]);
              wit.lower_prob.canonicalize();
              wit.upper_prob = Rational(cyl_open[hi * m + e], cyl[hi]);
              wit.upper_prob.canonicalize();
              verdict.witness = std::move(wit);
              return verdict;
            }
          }
        } else {
          ++verdict.skipped_null;
        }
        if (lo == fixed) break;
      }
    }
  }
  return verdict;
}

struct CutWitness {
  std::uint64_t vertex_subset = 0;  // S as a vertex mask
  EdgeConfig config;                // a configuration where the product fails
};

struct CutVerdict {
  bool holds = true;
  std::optional<CutWitness> witness;
  int cuts_checked = 0;
  int cuts_skipped = 0;
};

/// For every S with {} != S != V: conditioned on all S-to-complement edges
/// closed, the law of the edges inside S and the law of the edges inside the
/// complement must be independent.
inline CutVerdict cut_independence_check(const EdgeMeasure& mu) {
  const Graph& g = mu.graph();
  const int nv = g.vertex_count();
  if (nv > 30) throw std::invalid_argument("cut_independence_check supports at most 30 vertices");
  const std::uint64_t n = mu.size();
  const ScaledTable scaled = scale_to_integers(mu.table());
  const auto& w = scaled.numerators;
  CutVerdict verdict;
  std::vector<Integer> inside(n), outside(n);
  Integer lhs, rhs;
  const std::uint64_t all_vertices = (std::uint64_t{1} << nv) - 1;
  for (std::uint64_t s = 1; s < all_vertices; ++s) {
    std::uint64_t in_mask = 0, out_mask = 0, cut_mask = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
      const bool a_in = (s >> g.edge(e).a) & 1U;
      const bool b_in = (s >> g.edge(e).b) & 1U;
      const std::uint64_t bit = std::uint64_t{1} << e;
      if (a_in && b_in)
        in_mask |= bit;
      else if (!a_in && !b_in)
        out_mask |= bit;
      else
        cut_mask |= bit;
    }
    Integer cut_closed = 0;
    for (std::uint64_t r = 0; r < n; ++r) {
      inside[r] = 0;
      outside[r] = 0;
    }
    for (std::uint64_t r = 0; r < n; ++r) {
      if (r & cut_mask) continue;
      cut_closed += w[r];
      inside[r & in_mask] += w[r];
      outside[r & out_mask] += w[r];
    }
    if (cut_closed == 0) {
      ++verdict.cuts_skipped;
      continue;
    }
    ++verdict.cuts_checked;
    for (std::uint64_t r = 0; r < n; ++r) {
      if (r & cut_mask) continue;
      lhs = w[r] * cut_closed;
      rhs = inside[r & in_mask] * outside[r & out_mask];
      if (lhs != rhs) {
        verdict.holds = false;
        verdict.witness = CutWitness{s, EdgeConfig(r)};
        return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace ccorr
