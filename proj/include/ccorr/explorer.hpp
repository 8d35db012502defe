#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccorr/association.hpp"
#include "ccorr/edge_checks.hpp"
#include "ccorr/edge_measure.hpp"
#include "ccorr/graph.hpp"
#include "ccorr/rational.hpp"
#include "ccorr/spin_measure.hpp"

namespace ccorr {

/// Connected simple graphs with at most 4 vertices and 6 edges (10 graphs).
inline std::vector<Graph> default_corpus() { return enumerate_connected_graphs(4, 6); }

struct Figure1Counts {
  Integer forests;
  Integer trees;
  Integer forests_with_e;
  Integer trees_with_e;

  bool operator==(const Figure1Counts&) const = default;
};

/// forests 2*3^m + m*3^{m-1}, spanning trees 2^{m-1}(m+2), forests through e
/// 3^m, trees through e 2^m. Each x-u_i-y path is empty, half open or fully
/// open; with e open no path may be fully open, without e at most one may.
inline Figure1Counts figure1_closed_form(int m) {
  if (m < 1) throw std::invalid_argument("figure1 requires m >= 1");
  const auto um = static_cast<unsigned long>(m);
  Figure1Counts c;
  c.forests = 2 * pow(Integer(3), um) + Integer(m) * pow(Integer(3), um - 1);
  c.trees = pow(Integer(2), um - 1) * Integer(m + 2);
  c.forests_with_e = pow(Integer(3), um);
  c.trees_with_e = pow(Integer(2), um);
  return c;
}

inline Figure1Counts figure1_brute_force(int m, const Caps& caps = {}) {
  const Figure1Graph fig = figure1_graph(m);
  enforce_edge_cap(fig.graph, caps);
  Figure1Counts c;
  for (std::uint64_t r = 0; r < fig.graph.config_count(); ++r) {
    const EdgeConfig cfg(r);
    const int k = component_count(fig.graph, cfg);
    if (cfg.open_count() + k != fig.graph.vertex_count()) continue;
    const bool with_e = cfg.open(fig.e);
    c.forests += 1;
    if (with_e) c.forests_with_e += 1;
    if (k == 1) {
      c.trees += 1;
      if (with_e) c.trees_with_e += 1;
    }
  }
  return c;
}

struct Figure1Analysis {
  int m = 0;
  Figure1Counts closed_form;
  std::optional<Figure1Counts> brute_force;
  bool counts_agree = true;
  Rational pr_connected;
  Rational pr_e_open;
  Rational pr_connected_and_e_open;
  Rational covariance;  // Cov({eta_e = 1}, {eta connected}) under the uniform forest
  int sign = 0;
};

/// Brute force runs for m <= brute_force_max_m; closed forms always.
inline Figure1Analysis figure1_analysis(int m, int brute_force_max_m = 7, const Caps& caps = {}) {
  if (m < 1) throw std::invalid_argument("figure1 requires m >= 1");
  Figure1Analysis a;
  a.m = m;
  a.closed_form = figure1_closed_form(m);
  if (m <= brute_force_max_m) {
    a.brute_force = figure1_brute_force(m, caps);
    a.counts_agree = *a.brute_force == a.closed_form;
  }
  const auto& c = a.closed_form;
  a.pr_connected = Rational(c.trees, c.forests);
  a.pr_connected.canonicalize();
  a.pr_e_open = Rational(c.forests_with_e, c.forests);
  a.pr_e_open.canonicalize();
  a.pr_connected_and_e_open = Rational(c.trees_with_e, c.forests);
  a.pr_connected_and_e_open.canonicalize();
  a.covariance = a.pr_connected_and_e_open - a.pr_connected * a.pr_e_open;
  a.sign = sgn(a.covariance);
  return a;
}

struct Lemma2FailureDemo {
  int m = 0;
  Rational alpha;
  Rational covariance;  // Cov(1_A, 1_{eta_e = 1} | sigma_x = +1), A = all spins +1
  int sign = 0;
  Rational pr_all_plus_given_x;
  Rational pr_connected;
  bool alpha_bound_holds = false;  // |Pr(A | sigma_x = +1) - Pr(connected)| <= alpha
  std::uint64_t joint_support = 0;
};

/// Joint edge/spin law from the uniform forest on figure1_graph(m).
inline Lemma2FailureDemo lemma2_failure_demo(int m, const Rational& alpha, const Caps& caps = {}) {
  require_open_interval(alpha, 0, 1, "alpha");
  const Figure1Graph fig = figure1_graph(m);
  const EdgeMeasure forest = uniform_forest(fig.graph, caps);
  const JointMeasure jm = joint_fuzzy_potts(forest, alpha, caps);
  const int nv = fig.graph.vertex_count();
  const UpSet all_plus = UpSet::all_ones(nv);

  Lemma2FailureDemo d;
  d.m = m;
  d.alpha = alpha;
  d.joint_support = jm.entries().size();
  d.covariance = lemma2_covariance(jm, fig.x, fig.e, all_plus);
  d.sign = sgn(d.covariance);

  const std::uint64_t all = (std::uint64_t{1} << nv) - 1;
  Rational px, pa;
  for (const auto& entry : jm.entries()) {
    if ((entry.spins >> fig.x) & 1U) px += entry.prob;
    if (entry.spins == all) pa += entry.prob;
  }
  d.pr_all_plus_given_x = pa / px;
  for (std::uint64_t r = 0; r < forest.size(); ++r)
    if (forest.table()[r] != 0 && is_connected(fig.graph, EdgeConfig(r))) d.pr_connected += forest.table()[r];
  d.alpha_bound_holds = abs(d.pr_all_plus_given_x - d.pr_connected) <= alpha;
  return d;
}

struct ProbeViolation {
  std::size_t graph_index = 0;
  Rational q;
  Rational p;
  Rational alpha;
  AssociationWitness witness;
};

struct ProbeReport {
  std::uint64_t cells_checked = 0;
  std::vector<ProbeViolation> violations;
};

/// Positive association of the fuzzy Potts measure over a parameter sweep.
/// Cells are visited graph-major, then q, p, alpha in the given order.
inline ProbeReport conjecture_probe(std::span<const Graph> corpus, std::span<const Rational> q_values,
                                    std::span<const Rational> p_values, std::span<const Rational> alpha_values,
                                    const Caps& caps = {}) {
  ProbeReport rep;
  for (std::size_t gi = 0; gi < corpus.size(); ++gi)
    for (const auto& q : q_values)
      for (const auto& p : p_values) {
        const EdgeMeasure phi = random_cluster(corpus[gi], p, q, caps);
        for (const auto& alpha : alpha_values) {
          ++rep.cells_checked;
          const auto verdict = positive_association_check(fuzzy_potts(phi, alpha, caps), caps);
          if (!verdict.holds) rep.violations.push_back(ProbeViolation{gi, q, p, alpha, *verdict.witness});
        }
      }
  return rep;
}

struct BoundaryInstance {
  std::size_t graph_index = 0;
  Rational p;
  LatticeVerdict plc;
};

struct BoundaryCell {
  Rational q;
  Rational alpha;
  bool condition_met = false;  // alpha q >= 1 and (1 - alpha) q >= 1
  std::vector<BoundaryInstance> instances;
  std::size_t failures = 0;

  /// Sufficient condition met: every instance holds. Otherwise at least one fails.
  bool assertion_ok() const noexcept { return condition_met ? failures == 0 : failures > 0; }
};

struct BoundaryReport {
  std::vector<BoundaryCell> cells;
  bool assertions_ok() const noexcept {
    for (const auto& c : cells)
      if (!c.assertion_ok()) return false;
    return true;
  }
};

inline BoundaryReport haggstrom_boundary_scan(std::span<const Graph> corpus, std::span<const Rational> q_values,
                                              std::span<const Rational> alpha_values, std::span<const Rational> p_values,
                                              const Caps& caps = {}) {
  BoundaryReport rep;
  for (const auto& q : q_values)
    for (const auto& alpha : alpha_values) {
      BoundaryCell cell;
      cell.q = q;
      cell.alpha = alpha;
      cell.condition_met = alpha * q >= 1 && (1 - alpha) * q >= 1;
      for (std::size_t gi = 0; gi < corpus.size(); ++gi)
        for (const auto& p : p_values) {
          const auto verdict = plc_check_spin(fuzzy_potts(random_cluster(corpus[gi], p, q, caps), alpha, caps));
          if (!verdict.holds) ++cell.failures;
          cell.instances.push_back(BoundaryInstance{gi, p, verdict});
        }
      rep.cells.push_back(std::move(cell));
    }
  return rep;
}

struct InsufficiencyWitness {
  EdgeMeasure measure;
  Rational alpha;
  PlcVerdict plc;
  CutVerdict cut;
  AssociationVerdict pa;
  std::uint64_t trial = 0;  // search trial that produced it; 0 for the construction
  bool constructed = false;
};

struct InsufficiencyResult {
  std::optional<InsufficiencyWitness> lattice_only;  // PLC holds, cut independence fails, nu not PA
  std::optional<InsufficiencyWitness> cut_only;      // cut independence holds, PLC fails, nu not PA
  std::uint64_t trials = 0;
};

/// Uniform on five configurations of the path 0-1-2-3-4: empty, {01}, {12},
/// {23,34}, {01,23,34}. Its cluster law is proportional to a product of block
/// weights (1 for singletons, {0,1}, {1,2}, {2,3,4}; 0 otherwise), and every
/// block-product law conditioned on a cut factorizes over the two sides. PLC
/// fails since {01} and {12} are supported but their join is not.
inline EdgeMeasure cut_only_construction() {
  std::vector<Rational> weights(16);
  for (std::uint64_t r : {0b0000U, 0b0001U, 0b0010U, 0b1100U, 0b1101U}) weights[r] = 1;
  return EdgeMeasure::from_weights(path_graph(5), std::move(weights));
}

/// Seeded search over graphs on at most 4 vertices with 1 to 3 edges and
/// random integer weight tables (entries 0..4), alpha from a fixed list;
/// stops at the first lattice-only witness. Cut-independent tables on such
/// graphs never produced a non-associated nu, so the cut-only witness comes
/// from cut_only_construction() (4 edges, 5 vertices). Both are verified
/// exactly with the same checkers.
inline InsufficiencyResult single_property_insufficiency_search(std::uint64_t seed = 1, std::uint64_t max_trials = 20000,
                                                                const Caps& caps = {}) {
  std::vector<Graph> graphs;
  for (int n = 2; n <= 4; ++n) {
    const auto pairs = detail::vertex_pairs(n);
    for (std::uint64_t code = 1; code < (std::uint64_t{1} << pairs.size()); ++code) {
      if (std::popcount(code) > 3) continue;
      std::vector<Edge> edges;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if ((code >> i) & 1U) edges.push_back({pairs[i].first, pairs[i].second});
      graphs.emplace_back(n, std::move(edges));
    }
  }
  const std::vector<Rational> alphas{make_rational(1, 2), make_rational(1, 10), make_rational(9, 10),
                                     make_rational(1, 4), make_rational(3, 4)};
  std::mt19937_64 gen(seed);
  InsufficiencyResult out;
  for (std::uint64_t trial = 0; trial < max_trials && !out.lattice_only; ++trial) {
    out.trials = trial + 1;
    const Graph& g = graphs[gen() % graphs.size()];
    std::vector<Rational> weights(g.config_count());
    for (auto& w : weights) w = static_cast<long>(gen() % 5);
    const Rational alpha = alphas[gen() % alphas.size()];
    bool any = false;
    for (const auto& w : weights) any = any || w != 0;
    if (!any) continue;
    EdgeMeasure mu = EdgeMeasure::from_weights(g, std::move(weights));
    PlcVerdict plc = plc_check(mu);
    if (!plc.holds) continue;
    CutVerdict cut = cut_independence_check(mu);
    if (cut.holds) continue;
    AssociationVerdict pa = positive_association_check(fuzzy_potts(mu, alpha, caps), caps);
    if (pa.holds) continue;
    out.lattice_only = InsufficiencyWitness{std::move(mu), alpha, std::move(plc), std::move(cut), std::move(pa), trial, false};
  }

  EdgeMeasure mu = cut_only_construction();
  Caps five = caps;
  five.max_pa_vertices = std::max(five.max_pa_vertices, 5);
  const Rational alpha = make_rational(1, 2);
  PlcVerdict plc = plc_check(mu);
  CutVerdict cut = cut_independence_check(mu);
  AssociationVerdict pa = positive_association_check(fuzzy_potts(mu, alpha, caps), five);
  if (!plc.holds && cut.holds && !pa.holds)
    out.cut_only = InsufficiencyWitness{std::move(mu), alpha, std::move(plc), std::move(cut), std::move(pa), 0, true};
  return out;
}

}  // namespace ccorr
