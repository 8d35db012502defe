#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ccorr/association.hpp"
#include "ccorr/edge_measure.hpp"
#include "ccorr/graph.hpp"
#include "ccorr/rational.hpp"
#include "ccorr/spin_measure.hpp"

namespace ccorr {

/// Which edge incident with the x-component of psi is visited next (and,
/// when there is none, which remaining edge).
enum class EdgeRule { lowest_index, highest_index };

inline std::string to_string(EdgeRule rule) { return rule == EdgeRule::lowest_index ? "lowest-index" : "highest-index"; }

struct CouplingStep {
  int edge = 0;
  Rational t_psi;  // phi(eta_f = 1 | psi prefix)
  Rational t_xi;   // phi(eta_f = 1 | xi prefix)
};

struct CouplingLeaf {
  EdgeConfig psi;
  EdgeConfig xi;
  Rational prob;
  std::vector<CouplingStep> steps;  // visits after the designated edge
};

/// Exact joint law of the edge-by-edge coupled pair (psi, xi), with psi
/// distributed as phi(. | eta_e = 1) and xi as phi(. | eta_e = 0). The
/// uniform thresholds are integrated out: each visit splits a branch into at
/// most three children.
struct CouplingDistribution {
  Graph graph;
  int x = 0;
  int e = 0;
  EdgeRule rule = EdgeRule::lowest_index;
  /// False for inputs outside the q >= 1 guarantee; domination may then fail.
  bool domination_guaranteed = true;
  Rational edge_open_probability;  // phi(eta_e = 1)
  std::vector<CouplingLeaf> leaves;
};

namespace detail {

class CylinderOracle {
 public:
  explicit CylinderOracle(const EdgeMeasure& phi) : scaled_(scale_to_integers(phi.table())) {}

  /// Sum of scaled weights over configurations equal to values on mask.
  const Integer& mass(std::uint64_t mask, std::uint64_t values) {
    const auto key = std::make_pair(mask, values & mask);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Integer s = 0;
    for (std::uint64_t r = 0; r < scaled_.numerators.size(); ++r)
      if ((r & mask) == key.second) s += scaled_.numerators[r];
    return cache_.emplace(key, std::move(s)).first->second;
  }

  /// phi(eta_f = 1 | eta = values on mask).
  Rational open_given(std::uint64_t mask, std::uint64_t values, int f) {
    const Integer& base = mass(mask, values);
    if (base == 0) throw std::domain_error("coupling reached a null conditioning event");
    const std::uint64_t bit = std::uint64_t{1} << f;
    Rational t(mass(mask | bit, values | bit), base);
    t.canonicalize();
    return t;
  }

 private:
  ScaledTable scaled_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Integer> cache_;
};

inline int next_coupling_edge(const Graph& g, std::uint64_t visited, EdgeConfig psi, int x, EdgeRule rule) {
  DisjointSets ds(g.vertex_count());
  for (int f = 0; f < g.edge_count(); ++f)
    if (((visited >> f) & 1U) && psi.open(f)) ds.unite(g.edge(f).a, g.edge(f).b);
  const int root = ds.find(x);
  int incident = -1;
  int remaining = -1;
  for (int i = 0; i < g.edge_count(); ++i) {
    const int f = rule == EdgeRule::lowest_index ? i : g.edge_count() - 1 - i;
    if ((visited >> f) & 1U) continue;
    if (remaining < 0) remaining = f;
    if (ds.find(g.edge(f).a) == root || ds.find(g.edge(f).b) == root) {
      incident = f;
      break;
    }
  }
  return incident >= 0 ? incident : remaining;
}

inline void check_coupling_input(const EdgeMeasure& phi, int e, int x) {
  const Graph& g = phi.graph();
  if (e < 0 || e >= g.edge_count()) throw std::out_of_range("edge index out of range");
  if (x < 0 || x >= g.vertex_count()) throw std::out_of_range("vertex out of range");
  if (!g.edge(e).touches(x))
    throw std::invalid_argument("vertex " + std::to_string(x) + " is not an endpoint of edge " + std::to_string(e));
}

}  // namespace detail

/// Children of each branch are ordered both-open, psi-only, xi-only,
/// both-closed, so leaves come out lexicographic in the branch choices.
inline CouplingDistribution build_coupling(const EdgeMeasure& phi, int e, int x, EdgeRule rule = EdgeRule::lowest_index,
                                           bool domination_guaranteed = true) {
  detail::check_coupling_input(phi, e, x);
  const Graph& g = phi.graph();
  detail::CylinderOracle oracle(phi);
  CouplingDistribution cd;
  cd.graph = g;
  cd.x = x;
  cd.e = e;
  cd.rule = rule;
  cd.domination_guaranteed = domination_guaranteed;
  cd.edge_open_probability = marginal(phi, e);
  if (cd.edge_open_probability == 0 || cd.edge_open_probability == 1)
    throw std::domain_error("the designated edge must be open and closed with positive probability");

  const std::uint64_t all = g.config_count() - 1;
  std::vector<CouplingStep> steps;
  auto expand = [&](auto&& self, std::uint64_t visited, EdgeConfig psi, EdgeConfig xi, const Rational& prob) -> void {
    if (visited == all) {
      cd.leaves.push_back(CouplingLeaf{psi, xi, prob, steps});
      return;
    }
    const int f = detail::next_coupling_edge(g, visited, psi, x, rule);
    const std::uint64_t next = visited | (std::uint64_t{1} << f);
    CouplingStep step{f, oracle.open_given(visited, psi.rank(), f), oracle.open_given(visited, xi.rank(), f)};
    const Rational lo = std::min(step.t_psi, step.t_xi);
    const Rational hi = std::max(step.t_psi, step.t_xi);
    const Rational gap_psi = step.t_psi - step.t_xi;
    steps.push_back(std::move(step));
    if (lo > 0) self(self, next, psi.with(f, true), xi.with(f, true), prob * lo);
    if (gap_psi > 0) self(self, next, psi.with(f, true), xi, prob * gap_psi);
    if (gap_psi < 0) self(self, next, psi, xi.with(f, true), prob * -gap_psi);
    if (hi < 1) self(self, next, psi, xi, prob * (1 - hi));
    steps.pop_back();
  };
  const std::uint64_t start = std::uint64_t{1} << e;
  expand(expand, start, EdgeConfig(start), EdgeConfig(0), Rational(1));
  return cd;
}

inline CouplingDistribution build_coupling(const Graph& g, std::span<const Rational> p, const Rational& q, int e, int x,
                                           EdgeRule rule = EdgeRule::lowest_index, const Caps& caps = {}) {
  return build_coupling(random_cluster(g, p, q, caps), e, x, rule, q >= 1);
}

/// Vertex set of the x-cluster of a configuration, as a mask.
inline std::uint64_t cluster_of(const Graph& g, EdgeConfig c, int x) {
  const Partition part = component_partition(g, c);
  std::uint64_t mask = 0;
  for (int v : part.blocks()[static_cast<std::size_t>(part.block_of(x))]) mask |= std::uint64_t{1} << v;
  return mask;
}

struct CouplingReport {
  bool marginals_ok = false;
  bool domination_ok = false;
  std::optional<std::size_t> first_domination_failure;  // leaf index
  bool agreement_ok = false;
  std::optional<std::size_t> first_agreement_failure;  // leaf index
  bool probabilities_sum_to_one = false;

  bool all_ok() const noexcept { return marginals_ok && domination_ok && agreement_ok && probabilities_sum_to_one; }
};

/// The three coupling guarantees, checked exactly: psi and xi have the
/// conditional laws given e open / closed (compared on the minors), psi >= xi
/// on every leaf, and psi, xi agree off the vertex set S of the x-cluster of
/// psi.
inline CouplingReport verify_coupling(const CouplingDistribution& cd, const EdgeMeasure& phi) {
  if (!(cd.graph == phi.graph())) throw std::invalid_argument("coupling and measure live on different graphs");
  const Graph& g = cd.graph;
  CouplingReport rep;

  Rational total;
  std::vector<Rational> psi_law(g.config_count() / 2), xi_law(g.config_count() / 2);
  bool on_designated = true;
  for (const auto& leaf : cd.leaves) {
    total += leaf.prob;
    if (!leaf.psi.open(cd.e) || leaf.xi.open(cd.e)) on_designated = false;
    psi_law[drop_edge_bit(leaf.psi, cd.e).rank()] += leaf.prob;
    xi_law[drop_edge_bit(leaf.xi, cd.e).rank()] += leaf.prob;
  }
  rep.probabilities_sum_to_one = total == 1;
  const auto open_side = condition_on_edge(phi, cd.e, true);
  const auto closed_side = condition_on_edge(phi, cd.e, false);
  rep.marginals_ok = on_designated && std::equal(psi_law.begin(), psi_law.end(), open_side.measure.table().begin()) &&
                     std::equal(xi_law.begin(), xi_law.end(), closed_side.measure.table().begin());

  for (std::size_t i = 0; i < cd.leaves.size(); ++i) {
    const auto& leaf = cd.leaves[i];
    if (!rep.first_domination_failure && !leaf.xi.below(leaf.psi)) rep.first_domination_failure = i;
    if (!rep.first_agreement_failure) {
      const std::uint64_t s = cluster_of(g, leaf.psi, cd.x);
      for (int f = 0; f < g.edge_count(); ++f) {
        const bool inside = ((s >> g.edge(f).a) & 1U) && ((s >> g.edge(f).b) & 1U);
        if (!inside && leaf.psi.open(f) != leaf.xi.open(f)) {
          rep.first_agreement_failure = i;
          break;
        }
      }
    }
  }
  rep.domination_ok = !rep.first_domination_failure;
  rep.agreement_ok = !rep.first_agreement_failure;
  return rep;
}

/// One coupled draw with explicit uniform thresholds X_f from a seeded
/// mt19937_64 (53-bit dyadic uniforms, compared exactly).
inline std::pair<EdgeConfig, EdgeConfig> sample_coupling(const EdgeMeasure& phi, int e, int x, std::uint64_t seed,
                                                         EdgeRule rule = EdgeRule::lowest_index) {
  detail::check_coupling_input(phi, e, x);
  std::mt19937_64 gen(seed);
  detail::CylinderOracle oracle(phi);
  const Graph& g = phi.graph();
  const Integer two53 = pow(Integer(2), 53);
  std::uint64_t visited = std::uint64_t{1} << e;
  EdgeConfig psi(visited), xi(0);
  while (visited != g.config_count() - 1) {
    const int f = detail::next_coupling_edge(g, visited, psi, x, rule);
    const Rational t_psi = oracle.open_given(visited, psi.rank(), f);
    const Rational t_xi = oracle.open_given(visited, xi.rank(), f);
    Rational u(Integer(static_cast<unsigned long>(gen() >> 11)), two53);
    u.canonicalize();
    psi = psi.with(f, u <= t_psi);
    xi = xi.with(f, u <= t_xi);
    visited |= std::uint64_t{1} << f;
  }
  return {psi, xi};
}

namespace detail {

/// Law of sigma given the clusters of c and sigma_x = +1.
inline std::vector<Rational> spins_given_clusters(const Graph& g, EdgeConfig c, int x, std::span<const Rational> beta) {
  std::vector<Rational> out(std::uint64_t{1} << g.vertex_count());
  for_each_block_coloring(component_partition(g, c), beta, [&](std::uint64_t rank, const Rational& w) { out[rank] += w; },
                          x, kSpinPlus);
  return out;
}

inline Rational event_mass(std::span<const Rational> law, const UpSet& c) {
  Rational s;
  for (auto r : c.ranks()) s += law[r];
  return s;
}

}  // namespace detail

struct CouplingConclusion {
  bool per_leaf_holds = true;
  std::optional<std::size_t> first_failing_leaf;
  Rational psi_side;  // Pr(C | sigma_x = +1, eta_e = 1)
  Rational xi_side;   // Pr(C | sigma_x = +1, eta_e = 0)
  /// Cov(1_C, 1_{eta_e = 1} | sigma_x = +1) = Pr(e)(1 - Pr(e)) (psi_side - xi_side).
  Rational covariance;
};

/// Per leaf, Pr(C | psi, sigma_x = +1) >= Pr(C | xi, sigma_x = +1) with the
/// cluster spins colored at rate alpha.
inline CouplingConclusion lemma2_conclusion_via_coupling(const CouplingDistribution& cd, const Rational& alpha,
                                                         const UpSet& c) {
  require_open_interval(alpha, 0, 1, "alpha");
  if (c.coordinates() != cd.graph.vertex_count()) throw std::invalid_argument("up-set over the wrong vertex count");
  const auto beta = two_color_beta(alpha);
  CouplingConclusion out;
  for (std::size_t i = 0; i < cd.leaves.size(); ++i) {
    const auto& leaf = cd.leaves[i];
    const Rational up = detail::event_mass(detail::spins_given_clusters(cd.graph, leaf.psi, cd.x, beta), c);
    const Rational down = detail::event_mass(detail::spins_given_clusters(cd.graph, leaf.xi, cd.x, beta), c);
    if (up < down && out.per_leaf_holds) {
      out.per_leaf_holds = false;
      out.first_failing_leaf = i;
    }
    out.psi_side += leaf.prob * up;
    out.xi_side += leaf.prob * down;
  }
  const Rational& pe = cd.edge_open_probability;
  out.covariance = pe * (1 - pe) * (out.psi_side - out.xi_side);
  return out;
}

struct CouplingConclusionSweep {
  bool per_leaf_holds = true;
  std::optional<std::pair<std::size_t, std::size_t>> first_failure;  // (up-set index, leaf index)
  std::uint64_t upsets_checked = 0;
  std::uint64_t distinct_leaf_shapes = 0;
};

/// The per-leaf inequality for every up-set over the spins. Leaves are
/// grouped by their (psi clusters, xi clusters) pair since the spin laws only
/// depend on the clusters.
inline CouplingConclusionSweep lemma2_conclusion_all_upsets(const CouplingDistribution& cd, const Rational& alpha,
                                                            const Caps& caps = {}) {
  require_open_interval(alpha, 0, 1, "alpha");
  const int nv = cd.graph.vertex_count();
  enforce_cap("max-pa-vertices", nv, caps.max_pa_vertices);
  const auto upsets = enumerate_upsets(nv, caps);
  const auto beta = two_color_beta(alpha);

  std::map<std::pair<Partition, Partition>, std::size_t> shapes;  // -> first leaf index
  for (std::size_t i = 0; i < cd.leaves.size(); ++i)
    shapes.emplace(std::make_pair(component_partition(cd.graph, cd.leaves[i].psi),
                                  component_partition(cd.graph, cd.leaves[i].xi)),
                   i);

  CouplingConclusionSweep out;
  out.upsets_checked = upsets.size();
  out.distinct_leaf_shapes = shapes.size();
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (const auto& [shape, leaf_index] : shapes) {
    const auto& leaf = cd.leaves[leaf_index];
    const auto up_law = detail::spins_given_clusters(cd.graph, leaf.psi, cd.x, beta);
    const auto down_law = detail::spins_given_clusters(cd.graph, leaf.xi, cd.x, beta);
    for (std::size_t u = 0; u < upsets.size(); ++u) {
      if (detail::event_mass(up_law, upsets[u]) < detail::event_mass(down_law, upsets[u])) {
        // the reported leaf is the lowest-index leaf with this shape
        const std::pair<std::size_t, std::size_t> cand{u, leaf_index};
        if (!best || cand < *best) best = cand;
        break;
      }
    }
  }
  if (best) {
    out.per_leaf_holds = false;
    out.first_failure = best;
  }
  return out;
}

}  // namespace ccorr
