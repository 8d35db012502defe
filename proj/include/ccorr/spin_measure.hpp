#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccorr/caps.hpp"
#include "ccorr/edge_measure.hpp"
#include "ccorr/graph.hpp"
#include "ccorr/lattice.hpp"
#include "ccorr/rational.hpp"

namespace ccorr {

// Two-color convention: color 1 is spin +1 and color 0 is spin -1, so a
// two-color spin rank has bit v set iff sigma_v = +1 and the product order
// on {-1,+1}^V is the bitmask order.
inline constexpr int kSpinPlus = 1;
inline constexpr int kSpinMinus = 0;

namespace detail {

inline int bits_for_colors(int colors) { return std::bit_width(static_cast<unsigned>(colors - 1)); }

inline std::uint64_t spin_config_count(int vertices, int colors, const Caps& caps) {
  if (colors < 2) throw std::invalid_argument("need at least two colors");
  enforce_cap("max-spin-bits", static_cast<long>(vertices) * bits_for_colors(colors), caps.max_spin_bits);
  std::uint64_t n = 1;
  for (int v = 0; v < vertices; ++v) n *= static_cast<std::uint64_t>(colors);
  return n;
}

}  // namespace detail

/// Exact measure on Omega^V with Omega = {0..K-1}; rank = sum color_v K^v.
class SpinMeasure {
 public:
  SpinMeasure(int vertex_count, int color_count, std::vector<Rational> prob)
      : vertex_count_(vertex_count), color_count_(color_count), prob_(std::move(prob)) {
    std::uint64_t expected = 1;
    for (int v = 0; v < vertex_count_; ++v) expected *= static_cast<std::uint64_t>(color_count_);
    if (color_count_ < 2) throw std::invalid_argument("need at least two colors");
    if (prob_.size() != expected) throw std::invalid_argument("spin table size does not match |Omega|^|V|");
    Rational total;
    for (const auto& v : prob_) {
      if (v < 0) throw std::invalid_argument("negative probability");
      total += v;
    }
    if (total != 1) throw std::invalid_argument("spin probabilities sum to " + to_string(total));
  }

  static SpinMeasure from_weights(int vertex_count, int color_count, std::vector<Rational> weights) {
    Rational total;
    for (const auto& w : weights) total += w;
    if (total == 0) throw std::invalid_argument("all weights are zero");
    for (auto& w : weights) w /= total;
    return SpinMeasure(vertex_count, color_count, std::move(weights));
  }

  int vertex_count() const noexcept { return vertex_count_; }
  int color_count() const noexcept { return color_count_; }
  std::uint64_t size() const noexcept { return prob_.size(); }
  std::span<const Rational> table() const noexcept { return prob_; }
  const Rational& prob(std::uint64_t rank) const { return prob_.at(rank); }

  int color_of(std::uint64_t rank, int v) const {
    for (int i = 0; i < v; ++i) rank /= static_cast<std::uint64_t>(color_count_);
    return static_cast<int>(rank % static_cast<std::uint64_t>(color_count_));
  }

  std::uint64_t rank_of(std::span<const int> colors) const {
    std::uint64_t rank = 0;
    for (int v = vertex_count_ - 1; v >= 0; --v) rank = rank * static_cast<std::uint64_t>(color_count_) + colors[static_cast<std::size_t>(v)];
    return rank;
  }

  bool operator==(const SpinMeasure&) const = default;

 private:
  int vertex_count_;
  int color_count_;
  std::vector<Rational> prob_;
};

/// beta for two colors: index 1 (+1) gets alpha, index 0 (-1) gets 1 - alpha.
inline std::vector<Rational> two_color_beta(const Rational& alpha) { return {Rational(1) - alpha, alpha}; }

inline void check_color_distribution(std::span<const Rational> beta) {
  if (beta.size() < 2) throw std::invalid_argument("color distribution needs at least two colors");
  Rational total;
  for (const auto& b : beta) {
    if (b < 0) throw std::invalid_argument("negative color probability");
    total += b;
  }
  if (total != 1) throw std::invalid_argument("color distribution sums to " + to_string(total));
}

/// Calls fn(spin_rank, weight) for every coloring that is constant on the
/// blocks of part, colors drawn independently per block from beta. When
/// forced_vertex >= 0 its block gets forced_color with weight 1. Colorings are
/// enumerated per block, so the cost is |Omega|^{#blocks}.
template <class Fn>
void for_each_block_coloring(const Partition& part, std::span<const Rational> beta, Fn&& fn, int forced_vertex = -1,
                             int forced_color = 0) {
  const int k = part.block_count();
  const int colors = static_cast<int>(beta.size());
  const int forced_block = forced_vertex >= 0 ? part.block_of(forced_vertex) : -1;
  std::vector<std::uint64_t> place(static_cast<std::size_t>(part.vertex_count()));
  std::uint64_t scale = 1;
  for (int v = 0; v < part.vertex_count(); ++v) {
    place[static_cast<std::size_t>(v)] = scale;
    scale *= static_cast<std::uint64_t>(colors);
  }
  // block_place[b] = sum of K^v over v in block b
  std::vector<std::uint64_t> block_place(static_cast<std::size_t>(k), 0);
  for (int v = 0; v < part.vertex_count(); ++v) block_place[static_cast<std::size_t>(part.block_of(v))] += place[static_cast<std::size_t>(v)];

  std::vector<int> color(static_cast<std::size_t>(k), 0);
  if (forced_block >= 0) color[static_cast<std::size_t>(forced_block)] = forced_color;
  while (true) {
    Rational weight = 1;
    std::uint64_t rank = 0;
    for (int b = 0; b < k; ++b) {
      if (b != forced_block) weight *= beta[static_cast<std::size_t>(color[static_cast<std::size_t>(b)])];
      rank += block_place[static_cast<std::size_t>(b)] * static_cast<std::uint64_t>(color[static_cast<std::size_t>(b)]);
    }
    if (weight != 0) fn(rank, weight);
    int b = 0;
    for (; b < k; ++b) {
      if (b == forced_block) continue;
      if (++color[static_cast<std::size_t>(b)] < colors) break;
      color[static_cast<std::size_t>(b)] = 0;
    }
    if (b == k) break;
  }
}

/// Push-forward of an edge measure through component_partition.
class PartitionMeasure {
 public:
  PartitionMeasure(int vertex_count, std::map<Partition, Rational> prob)
      : vertex_count_(vertex_count), prob_(std::move(prob)) {
    Rational total;
    for (const auto& [part, pr] : prob_) {
      if (part.vertex_count() != vertex_count_) throw std::invalid_argument("partition on the wrong vertex set");
      if (pr < 0) throw std::invalid_argument("negative probability");
      total += pr;
    }
    if (total != 1) throw std::invalid_argument("partition probabilities sum to " + to_string(total));
  }

  static PartitionMeasure point_mass(const Partition& part) {
    return PartitionMeasure(part.vertex_count(), {{part, Rational(1)}});
  }

  int vertex_count() const noexcept { return vertex_count_; }
  const std::map<Partition, Rational>& prob() const noexcept { return prob_; }

 private:
  int vertex_count_;
  std::map<Partition, Rational> prob_;
};

inline PartitionMeasure partition_measure_from_edge_measure(const EdgeMeasure& mu) {
  std::map<Partition, Rational> out;
  for (std::uint64_t r = 0; r < mu.size(); ++r) {
    if (mu.table()[r] == 0) continue;
    out[component_partition(mu.graph(), EdgeConfig(r))] += mu.table()[r];
  }
  return PartitionMeasure(mu.graph().vertex_count(), std::move(out));
}

/// Choose a partition from pm, then color each block independently from beta.
inline SpinMeasure divide_and_color(const PartitionMeasure& pm, std::span<const Rational> beta, const Caps& caps = {}) {
  check_color_distribution(beta);
  const int colors = static_cast<int>(beta.size());
  std::vector<Rational> table(detail::spin_config_count(pm.vertex_count(), colors, caps));
  for (const auto& [part, pr] : pm.prob()) {
    if (pr == 0) continue;
    for_each_block_coloring(part, beta, [&](std::uint64_t rank, const Rational& w) { table[rank] += pr * w; });
  }
  return SpinMeasure(pm.vertex_count(), colors, std::move(table));
}

/// The fuzzy Potts measure nu_{phi,alpha}: clusters of eta ~ phi get +1 with
/// probability alpha, -1 otherwise, independently.
inline SpinMeasure fuzzy_potts(const EdgeMeasure& mu, const Rational& alpha, const Caps& caps = {}) {
  require_open_interval(alpha, 0, 1, "alpha");
  const auto beta = two_color_beta(alpha);
  const Graph& g = mu.graph();
  std::vector<Rational> table(detail::spin_config_count(g.vertex_count(), 2, caps));
  for (std::uint64_t r = 0; r < mu.size(); ++r) {
    const Rational& pr = mu.table()[r];
    if (pr == 0) continue;
    for_each_block_coloring(component_partition(g, EdgeConfig(r)), beta,
                            [&](std::uint64_t rank, const Rational& w) { table[rank] += pr * w; });
  }
  return SpinMeasure(g.vertex_count(), 2, std::move(table));
}

struct JointEntry {
  EdgeConfig edges;
  std::uint64_t spins = 0;
  Rational prob;

  bool operator==(const JointEntry&) const = default;
};

/// Joint law of (eta, sigma). Only the support is stored: entries with
/// sigma not constant on the clusters of eta are zero and omitted. Entries are
/// sorted by (edge rank, spin rank).
class JointMeasure {
 public:
  JointMeasure(Graph graph, int color_count, std::vector<JointEntry> entries)
      : graph_(std::move(graph)), color_count_(color_count), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const JointEntry& a, const JointEntry& b) {
      return a.edges != b.edges ? a.edges < b.edges : a.spins < b.spins;
    });
    Rational total;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].prob <= 0) throw std::invalid_argument("joint entries must be positive");
      if (i > 0 && entries_[i - 1].edges == entries_[i].edges && entries_[i - 1].spins == entries_[i].spins)
        throw std::invalid_argument("duplicate joint entry");
      total += entries_[i].prob;
    }
    if (total != 1) throw std::invalid_argument("joint probabilities sum to " + to_string(total));
  }

  const Graph& graph() const noexcept { return graph_; }
  int color_count() const noexcept { return color_count_; }
  const std::vector<JointEntry>& entries() const noexcept { return entries_; }

  Rational prob(EdgeConfig edges, std::uint64_t spins) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(edges, spins),
                                     [](const JointEntry& e, const std::pair<EdgeConfig, std::uint64_t>& key) {
                                       return e.edges != key.first ? e.edges < key.first : e.spins < key.second;
                                     });
    if (it != entries_.end() && it->edges == edges && it->spins == spins) return it->prob;
    return 0;
  }

  EdgeMeasure edge_marginal() const {
    std::vector<Rational> table(graph_.config_count());
    for (const auto& e : entries_) table[e.edges.rank()] += e.prob;
    return EdgeMeasure(graph_, std::move(table));
  }

  SpinMeasure spin_marginal() const {
    std::uint64_t n = 1;
    for (int v = 0; v < graph_.vertex_count(); ++v) n *= static_cast<std::uint64_t>(color_count_);
    std::vector<Rational> table(n);
    for (const auto& e : entries_) table[e.spins] += e.prob;
    return SpinMeasure(graph_.vertex_count(), color_count_, std::move(table));
  }

  int color_of(std::uint64_t spins, int v) const {
    for (int i = 0; i < v; ++i) spins /= static_cast<std::uint64_t>(color_count_);
    return static_cast<int>(spins % static_cast<std::uint64_t>(color_count_));
  }

 private:
  Graph graph_;
  int color_count_;
  std::vector<JointEntry> entries_;
};

/// Pr(eta, sigma) = phi(eta) alpha^{#(+1 clusters)} (1 - alpha)^{#(-1 clusters)}
/// for cluster-constant sigma.
inline JointMeasure joint_fuzzy_potts(const EdgeMeasure& mu, const Rational& alpha, const Caps& caps = {}) {
  require_open_interval(alpha, 0, 1, "alpha");
  const Graph& g = mu.graph();
  enforce_cap("max-joint-bits", g.edge_count() + g.vertex_count(), caps.max_joint_bits);
  const auto beta = two_color_beta(alpha);
  std::vector<JointEntry> entries;
  for (std::uint64_t r = 0; r < mu.size(); ++r) {
    const Rational& pr = mu.table()[r];
    if (pr == 0) continue;
    for_each_block_coloring(component_partition(g, EdgeConfig(r)), beta, [&](std::uint64_t rank, const Rational& w) {
      entries.push_back(JointEntry{EdgeConfig(r), rank, pr * w});
    });
  }
  return JointMeasure(g, 2, std::move(entries));
}

/// q-state Potts Gibbs measure, Pr(sigma) proportional to
/// prod_{e=(u,v)} w_e^{[sigma_u = sigma_v]} with w_e = 1 / (1 - p_e).
/// Scaled by prod (1 - p_e) this is prod_{same} b_e prod_{diff} (b_e - a_e)
/// for p_e = a_e / b_e.
inline SpinMeasure potts_gibbs(const Graph& g, std::span<const Rational> p, const Rational& q, const Caps& caps = {}) {
  if (q.get_den() != 1 || q < 2) throw std::invalid_argument("Potts q must be an integer >= 2, got " + to_string(q));
  if (static_cast<int>(p.size()) != g.edge_count()) throw std::invalid_argument("need one p per edge");
  for (const auto& pe : p) require_open_interval(pe, 0, 1, "p_e");
  const int colors = static_cast<int>(q.get_num().get_si());
  const std::uint64_t n = detail::spin_config_count(g.vertex_count(), colors, caps);
  std::vector<Integer> weights(n);
  Integer total = 0;
  std::vector<int> color(static_cast<std::size_t>(g.vertex_count()));
  for (std::uint64_t rank = 0; rank < n; ++rank) {
    std::uint64_t rest = rank;
    for (int v = 0; v < g.vertex_count(); ++v) {
      color[static_cast<std::size_t>(v)] = static_cast<int>(rest % static_cast<std::uint64_t>(colors));
      rest /= static_cast<std::uint64_t>(colors);
    }
    Integer w = 1;
    for (int e = 0; e < g.edge_count(); ++e) {
      const Rational& pe = p[static_cast<std::size_t>(e)];
      const Edge& ed = g.edge(e);
      const bool same = color[static_cast<std::size_t>(ed.a)] == color[static_cast<std::size_t>(ed.b)];
      w *= same ? Integer(pe.get_den()) : Integer(pe.get_den() - pe.get_num());
    }
    total += w;
    weights[rank] = std::move(w);
  }
  std::vector<Rational> table;
  table.reserve(n);
  for (auto& w : weights) {
    Rational v(w, total);
    v.canonicalize();
    table.push_back(std::move(v));
  }
  return SpinMeasure(g.vertex_count(), colors, std::move(table));
}

inline SpinMeasure potts_gibbs(const Graph& g, const Rational& p, const Rational& q, const Caps& caps = {}) {
  const std::vector<Rational> ps(static_cast<std::size_t>(g.edge_count()), p);
  return potts_gibbs(g, ps, q, caps);
}

/// nu(. | sigma_v = color).
inline SpinMeasure condition_spin(const SpinMeasure& nu, int v, int color) {
  if (v < 0 || v >= nu.vertex_count()) throw std::out_of_range("vertex out of range");
  if (color < 0 || color >= nu.color_count()) throw std::out_of_range("color out of range");
  std::vector<Rational> table(nu.size());
  Rational mass;
  for (std::uint64_t r = 0; r < nu.size(); ++r)
    if (nu.color_of(r, v) == color) {
      table[r] = nu.table()[r];
      mass += table[r];
    }
  if (mass == 0) throw std::domain_error("conditioning on a null spin event");
  for (auto& t : table) t /= mass;
  return SpinMeasure(nu.vertex_count(), nu.color_count(), std::move(table));
}

inline JointMeasure condition_spin(const JointMeasure& jm, int v, int color) {
  if (v < 0 || v >= jm.graph().vertex_count()) throw std::out_of_range("vertex out of range");
  if (color < 0 || color >= jm.color_count()) throw std::out_of_range("color out of range");
  std::vector<JointEntry> kept;
  Rational mass;
  for (const auto& e : jm.entries())
    if (jm.color_of(e.spins, v) == color) {
      kept.push_back(e);
      mass += e.prob;
    }
  if (mass == 0) throw std::domain_error("conditioning on a null spin event");
  for (auto& e : kept) e.prob /= mass;
  return JointMeasure(jm.graph(), jm.color_count(), std::move(kept));
}

/// Positive lattice condition on {-1,+1}^V with the product order.
inline LatticeVerdict plc_check_spin(const SpinMeasure& nu) {
  if (nu.color_count() != 2) throw std::invalid_argument("spin lattice condition is defined for two colors only");
  return lattice_condition(nu.table());
}

}  // namespace ccorr
