#pragma once

// JSON renderings of measures, verdicts and reports. Every rational is
// written as {"exact": "a/b", "decimal": "..."}; the exact string is
// authoritative. Keys keep insertion order so output is byte-stable.

#include <json.hpp>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ccorr/association.hpp"
#include "ccorr/coupling.hpp"
#include "ccorr/edge_checks.hpp"
#include "ccorr/edge_measure.hpp"
#include "ccorr/explorer.hpp"
#include "ccorr/graph.hpp"
#include "ccorr/rational.hpp"
#include "ccorr/spin_measure.hpp"

namespace ccorr {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

inline Json rational_json(const Rational& r) { return Json{{"exact", to_string(r)}, {"decimal", to_decimal(r)}}; }

inline Json graph_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back(Json::array({e.a, e.b}));
  return Json{{"vertices", g.vertex_count()}, {"edges", std::move(edges)}};
}

inline Json ranks_json(const std::vector<std::uint64_t>& ranks) {
  Json out = Json::array();
  for (auto r : ranks) out.push_back(r);
  return out;
}

inline Json edge_table_json(const EdgeMeasure& mu) {
  Json rows = Json::array();
  for (std::uint64_t r = 0; r < mu.size(); ++r) {
    Json row = rational_json(mu.table()[r]);
    row["rank"] = r;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json spin_table_json(const SpinMeasure& nu) {
  Json rows = Json::array();
  for (std::uint64_t r = 0; r < nu.size(); ++r) {
    Json row = rational_json(nu.table()[r]);
    row["rank"] = r;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// CSV with columns rank,exact,decimal.
inline std::string table_csv(std::span<const Rational> table) {
  std::ostringstream out;
  out << "rank,exact,decimal\n";
  for (std::size_t r = 0; r < table.size(); ++r) out << r << ',' << to_string(table[r]) << ',' << to_decimal(table[r]) << '\n';
  return out.str();
}

inline Json verdict_json(const LatticeVerdict& v) {
  Json out{{"holds", v.holds}, {"pairs_checked", v.pairs_checked}};
  if (v.witness) out["witness"] = Json::array({v.witness->first, v.witness->second});
  return out;
}

inline Json verdict_json(const PlcVerdict& v) {
  Json out{{"holds", v.holds}};
  if (v.witness) out["witness"] = Json::array({v.witness->first.rank(), v.witness->second.rank()});
  return out;
}

inline Json verdict_json(const MonotoneVerdict& v) {
  Json out{{"holds", v.holds}, {"comparisons", v.comparisons}, {"skipped_null", v.skipped_null}};
  if (v.witness) {
    const auto& w = *v.witness;
    out["witness"] = Json{{"fixed_edges", w.fixed_edges}, {"edge", w.edge},           {"lower", w.lower.rank()},
                          {"upper", w.upper.rank()},      {"lower_prob", rational_json(w.lower_prob)},
                          {"upper_prob", rational_json(w.upper_prob)}};
  }
  return out;
}

inline Json verdict_json(const CutVerdict& v) {
  Json out{{"holds", v.holds}, {"cuts_checked", v.cuts_checked}, {"cuts_skipped", v.cuts_skipped}};
  if (v.witness) out["witness"] = Json{{"vertex_subset", v.witness->vertex_subset}, {"config", v.witness->config.rank()}};
  return out;
}

/// Witness up-sets as sorted configuration-rank lists, covariance as "a/b".
inline Json verdict_json(const AssociationVerdict& v) {
  Json out{{"holds", v.holds}, {"upsets", v.upset_count}, {"pairs_checked", v.pairs_checked}};
  if (v.witness)
    out["witness"] = Json{{"a", ranks_json(v.witness->a.ranks())},
                          {"b", ranks_json(v.witness->b.ranks())},
                          {"covariance", to_string(v.witness->covariance)}};
  return out;
}

inline Json verdict_json(const Lemma2Verdict& v) {
  Json out{{"holds", v.holds}, {"upsets_checked", v.upsets_checked}};
  if (v.witness)
    out["witness"] = Json{{"c", ranks_json(v.witness->c.ranks())}, {"covariance", to_string(v.witness->covariance)}};
  return out;
}

inline Json lemma1_json(const Lemma1Report& r) {
  auto opt = [](const std::optional<Rational>& v) { return v ? rational_json(*v) : Json(nullptr); };
  return Json{{"cov_ac", rational_json(r.cov_ac)},
              {"cov_bc", rational_json(r.cov_bc)},
              {"cov_ab_given_c", opt(r.cov_ab_given_c)},
              {"cov_ab_given_not_c", opt(r.cov_ab_given_not_c)},
              {"cov_ab", rational_json(r.cov_ab)},
              {"hypotheses_hold", r.hypotheses_hold},
              {"conclusion_holds", r.conclusion_holds},
              {"consistent", r.consistent()}};
}

/// Leaves as (psi-rank, xi-rank, "a/b") triples plus metadata.
inline Json coupling_json(const CouplingDistribution& cd) {
  Json leaves = Json::array();
  for (const auto& leaf : cd.leaves) leaves.push_back(Json::array({leaf.psi.rank(), leaf.xi.rank(), to_string(leaf.prob)}));
  return Json{{"e", cd.e},
              {"x", cd.x},
              {"rule", to_string(cd.rule)},
              {"domination_guaranteed", cd.domination_guaranteed},
              {"edge_open_probability", rational_json(cd.edge_open_probability)},
              {"leaves", std::move(leaves)}};
}

inline Json coupling_report_json(const CouplingReport& r) {
  Json out{{"marginals_ok", r.marginals_ok},
           {"domination_ok", r.domination_ok},
           {"agreement_ok", r.agreement_ok},
           {"probabilities_sum_to_one", r.probabilities_sum_to_one}};
  if (r.first_domination_failure) out["first_domination_failure"] = *r.first_domination_failure;
  if (r.first_agreement_failure) out["first_agreement_failure"] = *r.first_agreement_failure;
  return out;
}

inline Json counts_json(const Figure1Counts& c) {
  return Json{{"forests", c.forests.get_str()},
              {"trees", c.trees.get_str()},
              {"forests_with_e", c.forests_with_e.get_str()},
              {"trees_with_e", c.trees_with_e.get_str()}};
}

inline Json figure1_json(const Figure1Analysis& a) {
  Json out{{"m", a.m},
           {"forest_count", a.closed_form.forests.get_str()},
           {"tree_count", a.closed_form.trees.get_str()},
           {"closed_form", counts_json(a.closed_form)},
           {"brute_force", a.brute_force ? counts_json(*a.brute_force) : Json(nullptr)},
           {"counts_agree", a.counts_agree},
           {"pr_connected", rational_json(a.pr_connected)},
           {"pr_e_open", rational_json(a.pr_e_open)},
           {"covariance", rational_json(a.covariance)},
           {"sign", a.sign}};
  return out;
}

inline Json lemma2_demo_json(const Lemma2FailureDemo& d) {
  return Json{{"m", d.m},
              {"alpha", rational_json(d.alpha)},
              {"covariance", rational_json(d.covariance)},
              {"sign", d.sign},
              {"pr_all_plus_given_x", rational_json(d.pr_all_plus_given_x)},
              {"pr_connected", rational_json(d.pr_connected)},
              {"alpha_bound_holds", d.alpha_bound_holds},
              {"joint_support", d.joint_support}};
}

inline Json probe_json(const ProbeReport& r) {
  Json viol = Json::array();
  for (const auto& v : r.violations)
    viol.push_back(Json{{"graph_index", v.graph_index},
                        {"q", to_string(v.q)},
                        {"p", to_string(v.p)},
                        {"alpha", to_string(v.alpha)},
                        {"a", ranks_json(v.witness.a.ranks())},
                        {"b", ranks_json(v.witness.b.ranks())},
                        {"covariance", to_string(v.witness.covariance)}});
  return Json{{"cells_checked", r.cells_checked}, {"violation_count", r.violations.size()}, {"violations", std::move(viol)}};
}

inline Json boundary_json(const BoundaryReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json failing = Json::array();
    for (const auto& inst : c.instances)
      if (!inst.plc.holds)
        failing.push_back(Json{{"graph_index", inst.graph_index},
                               {"p", to_string(inst.p)},
                               {"witness", Json::array({inst.plc.witness->first, inst.plc.witness->second})}});
    cells.push_back(Json{{"q", to_string(c.q)},
                         {"alpha", to_string(c.alpha)},
                         {"condition_met", c.condition_met},
                         {"instances", c.instances.size()},
                         {"failures", c.failures},
                         {"assertion_ok", c.assertion_ok()},
                         {"failing", std::move(failing)}});
  }
  return Json{{"assertions_ok", r.assertions_ok()}, {"cells", std::move(cells)}};
}

inline Json insufficiency_json(const InsufficiencyWitness& w) {
  return Json{{"graph", graph_json(w.measure.graph())},
              {"alpha", to_string(w.alpha)},
              {"table", edge_table_json(w.measure)},
              {"plc", verdict_json(w.plc)},
              {"cut_independence", verdict_json(w.cut)},
              {"positive_association", verdict_json(w.pa)},
              {"trial", w.trial},
              {"constructed", w.constructed}};
}

inline Json report_header(const std::string& command) {
  return Json{{"schema_version", kReportSchemaVersion}, {"command", command}};
}

}  // namespace ccorr
