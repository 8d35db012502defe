#pragma once

// The end-to-end verification suite: each criterion runs exhaustively with
// exact arithmetic and yields one pass/fail result with a JSON detail block.

#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ccorr/association.hpp"
#include "ccorr/coupling.hpp"
#include "ccorr/edge_checks.hpp"
#include "ccorr/edge_measure.hpp"
#include "ccorr/explorer.hpp"
#include "ccorr/report.hpp"
#include "ccorr/spin_measure.hpp"

namespace ccorr::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  Json detail;
};

namespace detail {

inline std::vector<Rational> rationals(std::initializer_list<std::pair<long, long>> values) {
  std::vector<Rational> out;
  for (const auto& [n, d] : values) out.push_back(make_rational(n, d));
  return out;
}

inline std::vector<Rational> theorem_q_values() { return rationals({{1, 1}, {3, 2}, {2, 1}, {4, 1}}); }
inline std::vector<Rational> grid_p_values() { return rationals({{1, 3}, {1, 2}, {2, 3}}); }
inline std::vector<Rational> grid_alpha_values() { return rationals({{1, 4}, {1, 2}, {3, 4}}); }

/// p_e = (e + 1) / (|E| + 2): distinct per edge, so re-indexing mistakes show.
inline std::vector<Rational> graded_p(const Graph& g) {
  std::vector<Rational> p;
  for (int e = 0; e < g.edge_count(); ++e) p.push_back(make_rational(e + 1, g.edge_count() + 2));
  return p;
}

inline std::vector<Rational> uniform_p(const Graph& g, const Rational& p) {
  return std::vector<Rational>(static_cast<std::size_t>(g.edge_count()), p);
}

/// Up-set count by testing every subset of {0,1}^n for upward closure.
inline std::uint64_t brute_force_upset_count(int n) {
  const std::uint64_t points = std::uint64_t{1} << n;
  std::uint64_t count = 0;
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << points); ++set) {
    bool closed = true;
    for (std::uint64_t a = 0; a < points && closed; ++a) {
      if (!((set >> a) & 1U)) continue;
      for (std::uint64_t b = 0; b < points; ++b)
        if ((a & b) == a && !((set >> b) & 1U)) {
          closed = false;
          break;
        }
    }
    if (closed) ++count;
  }
  return count;
}

}  // namespace detail

/// Fuzzy Potts measures with q >= 1 are positively associated.
inline CriterionResult positive_association_suite(const Caps& caps = {}) {
  const auto corpus = default_corpus();
  const auto report = conjecture_probe(corpus, detail::theorem_q_values(), detail::grid_p_values(),
                                       detail::grid_alpha_values(), caps);
  CriterionResult r{1, "positive association of fuzzy Potts measures, q in {1, 3/2, 2, 4}", false, {}};
  r.passed = report.violations.empty() && report.cells_checked == corpus.size() * 36;
  r.detail = Json{{"graphs", corpus.size()}, {"measures", report.cells_checked}, {"violations", report.violations.size()}};
  return r;
}

inline CriterionResult lattice_condition_suite(const Caps& caps = {}) {
  const auto corpus = default_corpus();
  std::uint64_t checked = 0, failures = 0;
  for (const auto& g : corpus)
    for (const auto& q : detail::theorem_q_values())
      for (const auto& p : detail::grid_p_values()) {
        ++checked;
        if (!plc_check(random_cluster(g, p, q, caps)).holds) ++failures;
      }
  const auto low_q = plc_check(random_cluster(triangle(), make_rational(1, 2), make_rational(1, 2), caps));
  CriterionResult r{2, "lattice condition for q >= 1; failure witness for q = 1/2 on the triangle", false, {}};
  r.passed = failures == 0 && !low_q.holds && low_q.witness.has_value();
  r.detail = Json{{"measures", checked}, {"failures", failures}, {"triangle_q_half", verdict_json(low_q)}};
  return r;
}

inline CriterionResult conditional_measure_identity(const Caps& caps = {}) {
  const auto corpus = default_corpus();
  auto qs = detail::theorem_q_values();
  qs.push_back(make_rational(1, 2));
  std::uint64_t checked = 0, mismatches = 0;
  for (const auto& g : corpus) {
    std::vector<std::vector<Rational>> p_sets;
    for (const auto& p : detail::grid_p_values()) p_sets.push_back(detail::uniform_p(g, p));
    p_sets.push_back(detail::graded_p(g));
    for (const auto& q : qs)
      for (const auto& ps : p_sets) {
        const EdgeMeasure phi = random_cluster(g, ps, q, caps);
        for (int e = 0; e < g.edge_count(); ++e)
          for (bool open : {false, true}) {
            ++checked;
            const auto cond = condition_on_edge(phi, e, open);
            std::vector<Rational> surviving;
            for (int f = 0; f < g.edge_count(); ++f)
              if (f != e) surviving.push_back(ps[static_cast<std::size_t>(f)]);
            if (!(cond.measure == random_cluster(cond.minor.graph, surviving, q, caps))) ++mismatches;
          }
      }
  }
  CriterionResult r{3, "conditioning on an edge gives the random cluster measure of the minor", false, {}};
  r.passed = mismatches == 0 && checked > 0;
  r.detail = Json{{"conditionings", checked}, {"mismatches", mismatches}};
  return r;
}

inline CriterionResult coupling_suite(const Caps& caps = {}) {
  const auto corpus = default_corpus();
  std::uint64_t couplings = 0, report_failures = 0, sweeps = 0, sweep_failures = 0;
  for (const auto& g : corpus) {
    if (g.edge_count() == 0) continue;
    const std::vector<std::vector<Rational>> p_sets{detail::uniform_p(g, make_rational(1, 2)), detail::graded_p(g)};
    for (const auto& q : {Rational(1), Rational(2)})
      for (const auto& ps : p_sets) {
        const EdgeMeasure phi = random_cluster(g, ps, q, caps);
        for (int x = 0; x < g.vertex_count(); ++x)
          for (int e = 0; e < g.edge_count(); ++e) {
            if (!g.edge(e).touches(x)) continue;
            ++couplings;
            const auto cd = build_coupling(phi, e, x);
            if (!verify_coupling(cd, phi).all_ok()) ++report_failures;
            for (const auto& alpha : detail::grid_alpha_values()) {
              ++sweeps;
              if (!lemma2_conclusion_all_upsets(cd, alpha, caps).per_leaf_holds) ++sweep_failures;
            }
          }
      }
  }
  CriterionResult r{4, "edge-by-edge coupling: marginals, domination, off-cluster agreement, per-leaf spin inequality",
                    false, {}};
  r.passed = couplings > 0 && report_failures == 0 && sweep_failures == 0;
  r.detail = Json{{"couplings", couplings},
                  {"verification_failures", report_failures},
                  {"upset_sweeps", sweeps},
                  {"per_leaf_failures", sweep_failures}};
  return r;
}

inline CriterionResult figure1_threshold(const Caps& caps = {}) {
  bool counts_ok = true;
  Json per_m = Json::array();
  for (int m = 1; m <= 7; ++m) {
    const auto a = figure1_analysis(m, 7, caps);
    counts_ok = counts_ok && a.brute_force && a.counts_agree;
    per_m.push_back(Json{{"m", m}, {"covariance", to_string(a.covariance)}, {"counts_agree", a.counts_agree}});
  }
  const auto six = figure1_analysis(6, 7, caps);
  const auto seven = figure1_analysis(7, 7, caps);
  CriterionResult r{5, "two-terminal family: covariance 0 at m = 6, negative at m = 7, counts match closed forms", false, {}};
  r.passed = counts_ok && six.covariance == 0 && seven.covariance < 0;
  r.detail = Json{{"per_m", std::move(per_m)}};
  return r;
}

inline CriterionResult lemma2_failure(const Caps& caps = {}) {
  const auto d = lemma2_failure_demo(7, make_rational(1, 100), caps);
  CriterionResult r{6, "uniform forest, m = 7, alpha = 1/100: negative conditional covariance for all-plus", false, {}};
  r.passed = d.covariance < 0;
  r.detail = lemma2_demo_json(d);
  return r;
}

inline CriterionResult edwards_sokal(const Caps& caps = {}) {
  Json cases = Json::array();
  bool ok = true;
  const Rational p = make_rational(1, 2);
  for (const auto& [name, g] : {std::pair<std::string, Graph>{"triangle", triangle()}, {"path3", path_graph(3)}})
    for (int q : {2, 3}) {
      const SpinMeasure gibbs = potts_gibbs(g, p, Rational(q), caps);
      const std::vector<Rational> beta(static_cast<std::size_t>(q), make_rational(1, q));
      const SpinMeasure dc =
          divide_and_color(partition_measure_from_edge_measure(random_cluster(g, p, Rational(q), caps)), beta, caps);
      const bool equal = gibbs == dc;
      ok = ok && equal;
      cases.push_back(Json{{"graph", name}, {"q", q}, {"equal", equal}});
    }
  CriterionResult r{7, "Potts Gibbs measure equals divide-and-color of the random cluster measure", false, {}};
  r.passed = ok;
  r.detail = Json{{"cases", std::move(cases)}};
  return r;
}

inline CriterionResult haggstrom_boundary(const Caps& caps = {}) {
  const auto corpus = default_corpus();
  const auto qs = detail::theorem_q_values();
  const auto alphas = detail::rationals({{1, 4}, {1, 2}, {3, 4}, {9, 10}});
  const auto ps = detail::grid_p_values();
  const auto scan = haggstrom_boundary_scan(corpus, qs, alphas, ps, caps);
  bool sufficient_ok = true;
  for (const auto& cell : scan.cells)
    if (cell.condition_met && cell.failures != 0) sufficient_ok = false;

  // (q, alpha) = (2, 9/10): find a lattice failure and confirm association still holds there.
  Json boundary_case = nullptr;
  bool necessity_ok = false;
  for (const auto& cell : scan.cells) {
    if (!(cell.q == 2 && cell.alpha == make_rational(9, 10))) continue;
    for (const auto& inst : cell.instances) {
      if (inst.plc.holds) continue;
      const auto nu = fuzzy_potts(random_cluster(corpus[inst.graph_index], inst.p, cell.q, caps), cell.alpha, caps);
      const auto pa = positive_association_check(nu, caps);
      necessity_ok = pa.holds;
      boundary_case = Json{{"graph", graph_json(corpus[inst.graph_index])},
                           {"p", to_string(inst.p)},
                           {"plc", verdict_json(inst.plc)},
                           {"positive_association", pa.holds}};
      break;
    }
  }
  CriterionResult r{8, "lattice condition of nu when alpha q >= 1 and (1 - alpha) q >= 1; failure at (2, 9/10) with association intact",
                    false, {}};
  r.passed = sufficient_ok && necessity_ok;
  r.detail = Json{{"cells", scan.cells.size()}, {"sufficient_condition_ok", sufficient_ok}, {"boundary_case", boundary_case}};
  return r;
}

inline CriterionResult upset_counts(const Caps& caps = {}) {
  Json counts = Json::array();
  bool ok = true;
  const std::uint64_t expected[] = {6, 20, 168};
  for (int n = 2; n <= 4; ++n) {
    const std::uint64_t enumerated = enumerate_upsets(n, caps).size();
    const std::uint64_t brute = detail::brute_force_upset_count(n);
    ok = ok && enumerated == brute && enumerated == expected[n - 2];
    counts.push_back(Json{{"n", n}, {"enumerated", enumerated}, {"brute_force", brute}});
  }
  CriterionResult r{9, "up-set counts 6, 20, 168 for n = 2, 3, 4", false, {}};
  r.passed = ok;
  r.detail = Json{{"counts", std::move(counts)}};
  return r;
}

inline std::vector<CriterionResult> run_exact_criteria(const Caps& caps = {}) {
  return {positive_association_suite(caps), lattice_condition_suite(caps), conditional_measure_identity(caps),
          coupling_suite(caps),             figure1_threshold(caps),       lemma2_failure(caps),
          edwards_sokal(caps),              haggstrom_boundary(caps),      upset_counts(caps)};
}

inline Json results_json(const std::vector<CriterionResult>& results) {
  Json out = Json::array();
  for (const auto& r : results)
    out.push_back(Json{{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
  return out;
}

/// Criteria 1-9 twice; both serialized reports must be byte-identical.
inline CriterionResult determinism(const std::string& first_report, const Caps& caps = {}) {
  const std::string second = results_json(run_exact_criteria(caps)).dump();
  CriterionResult r{10, "repeated runs produce byte-identical reports", false, {}};
  r.passed = first_report == second;
  r.detail = Json{{"bytes", second.size()}};
  return r;
}

inline std::vector<CriterionResult> run_all(const Caps& caps = {}) {
  auto results = run_exact_criteria(caps);
  results.push_back(determinism(results_json(results).dump(), caps));
  return results;
}

inline std::string result_line(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.title << " -- " << r.detail.dump();
  return out.str();
}

}  // namespace ccorr::acceptance
