#pragma once

// Command runner behind the ccorr executable. Argument parsing lives in the
// tool; everything here is callable in-process for tests.

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccorr/acceptance.hpp"
#include "ccorr/association.hpp"
#include "ccorr/caps.hpp"
#include "ccorr/coupling.hpp"
#include "ccorr/edge_checks.hpp"
#include "ccorr/edge_measure.hpp"
#include "ccorr/explorer.hpp"
#include "ccorr/graph.hpp"
#include "ccorr/rational.hpp"
#include "ccorr/report.hpp"
#include "ccorr/spin_measure.hpp"

namespace ccorr::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kProbeViolation = 2, kUsage = 3 };

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"measure", "check-plc", "check-pa", "check-lemma2", "couple",
                                              "figure1", "probe-q",   "boundary", "es-check",     "corpus"};
  return names;
}

struct RunConfig {
  std::string command;
  std::string graph_file;  // takes precedence over family
  std::string family;      // k2, path, cycle, complete, triangle, figure1
  int n = 3;               // vertex count for path, cycle, complete
  int m = 1;               // figure1 parameter
  std::vector<Rational> p;      // one value for every edge, or one per edge; sweep grid for probe-q/boundary
  std::vector<Rational> q;      // single value except for sweeps
  std::vector<Rational> alpha;  // single value except for sweeps
  std::string measure = "random-cluster";  // or uniform-forest
  std::string format = "json";             // json, csv, text
  std::uint64_t seed = 1;
  int samples = 0;
  Caps caps;
  std::optional<int> x;
  std::optional<int> e;
  std::string rule = "lowest-index";
  bool spins = false;        // measure and check-plc act on nu instead of phi
  std::string upsets = "all";  // check-lemma2 candidates: all or all-plus
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct Instance {
  Graph graph;
  int x = 0;
  int e = 0;
  std::string source;
};

inline bool has_graph(const RunConfig& c) { return !c.graph_file.empty() || !c.family.empty(); }

inline Instance load_instance(const RunConfig& c) {
  Instance inst{Graph(1, {}), 0, 0, ""};
  std::optional<int> default_e;
  if (!c.graph_file.empty()) {
    std::ifstream in(c.graph_file);
    if (!in) throw UsageError("cannot open graph file " + c.graph_file);
    inst.graph = parse_graph(in);
    inst.source = c.graph_file;
  } else {
    const std::string fam = c.family.empty() ? "triangle" : c.family;
    inst.source = fam;
    if (fam == "k2") {
      inst.graph = path_graph(2);
    } else if (fam == "triangle") {
      inst.graph = triangle();
    } else if (fam == "path") {
      inst.graph = path_graph(c.n);
    } else if (fam == "cycle") {
      if (c.n < 3) throw UsageError("cycle needs --n >= 3");
      inst.graph = cycle_graph(c.n);
    } else if (fam == "complete") {
      inst.graph = complete_graph(c.n);
    } else if (fam == "figure1") {
      if (c.m < 1) throw UsageError("figure1 needs --m >= 1");
      const auto fig = figure1_graph(c.m);
      inst.graph = fig.graph;
      inst.x = fig.x;
      default_e = fig.e;
    } else {
      throw UsageError("unknown family '" + fam + "'");
    }
  }
  if (c.x) inst.x = *c.x;
  if (inst.x < 0 || inst.x >= inst.graph.vertex_count()) throw UsageError("--x is not a vertex of the graph");
  if (c.e) {
    default_e = *c.e;
  } else if (!default_e) {
    for (int f = 0; f < inst.graph.edge_count() && !default_e; ++f)
      if (inst.graph.edge(f).touches(inst.x) && !inst.graph.edge(f).is_loop()) default_e = f;
  }
  inst.e = default_e.value_or(-1);
  return inst;
}

inline std::vector<Rational> edge_probabilities(const RunConfig& c, const Graph& g) {
  const std::vector<Rational> p = c.p.empty() ? std::vector<Rational>{make_rational(1, 2)} : c.p;
  if (p.size() == 1) return std::vector<Rational>(static_cast<std::size_t>(g.edge_count()), p.front());
  if (p.size() != static_cast<std::size_t>(g.edge_count()))
    throw UsageError("--p needs one value or " + std::to_string(g.edge_count()) + " values");
  return p;
}

inline const Rational& single(const std::vector<Rational>& values, const char* name) {
  if (values.size() != 1) throw UsageError(std::string("--") + name + " needs exactly one value");
  return values.front();
}

inline bool uses_random_cluster(const RunConfig& c) {
  if (c.measure == "random-cluster") return true;
  if (c.measure == "uniform-forest") return false;
  throw UsageError("unknown measure '" + c.measure + "'");
}

inline EdgeMeasure build_measure(const RunConfig& c, const Graph& g) {
  if (!uses_random_cluster(c)) return uniform_forest(g, c.caps);
  if (c.q.empty()) throw UsageError("random-cluster measure needs --q");
  return random_cluster(g, edge_probabilities(c, g), single(c.q, "q"), c.caps);
}

inline Json strings(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

inline Json parameters(const RunConfig& c, const Graph* g) {
  Json out{{"measure", c.measure}};
  if (g && uses_random_cluster(c)) out["p"] = strings(edge_probabilities(c, *g));
  else if (!c.p.empty()) out["p"] = strings(c.p);
  if (!c.q.empty()) out["q"] = strings(c.q);
  if (!c.alpha.empty()) out["alpha"] = strings(c.alpha);
  return out;
}

inline Json start(const RunConfig& c, const Instance* inst) {
  Json doc = report_header(c.command);
  if (inst) {
    doc["source"] = inst->source;
    doc["graph"] = graph_json(inst->graph);
  }
  doc["parameters"] = parameters(c, inst ? &inst->graph : nullptr);
  return doc;
}

inline void flatten(const Json& j, const std::string& path, std::ostream& out) {
  if (j.is_object()) {
    if (j.contains("exact") && j.contains("decimal") && j.size() == 2) {
      out << path << " = " << j["exact"].get<std::string>() << " (" << j["decimal"].get<std::string>() << ")\n";
      return;
    }
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array() && !j.empty() && j.front().is_object()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out << path << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

/// summary is the first line of text output ("holds", "fails", ...).
inline void emit(const RunConfig& c, const Json& doc, const std::string& summary, std::ostream& out) {
  if (c.format == "json") {
    out << doc.dump(2) << '\n';
  } else if (c.format == "text") {
    out << summary << '\n';
    flatten(doc, "", out);
  } else {
    throw UsageError("csv output is available for measure, probe-q and boundary only");
  }
}

inline EdgeRule parse_rule(const std::string& r) {
  if (r == "lowest-index") return EdgeRule::lowest_index;
  if (r == "highest-index") return EdgeRule::highest_index;
  throw UsageError("unknown rule '" + r + "'");
}

inline std::vector<Graph> sweep_corpus(const RunConfig& c) {
  if (has_graph(c)) return {load_instance(c).graph};
  return default_corpus();
}

inline std::vector<Rational> or_default(const std::vector<Rational>& v, std::initializer_list<std::pair<long, long>> d) {
  if (!v.empty()) return v;
  std::vector<Rational> out;
  for (const auto& [a, b] : d) out.push_back(make_rational(a, b));
  return out;
}

inline const char* verdict_word(bool holds) { return holds ? "holds" : "fails"; }

// ---- commands ----

inline int cmd_measure(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance(c);
  const EdgeMeasure phi = build_measure(c, inst.graph);
  Json doc = start(c, &inst);
  if (c.spins) {
    const SpinMeasure nu = fuzzy_potts(phi, single(c.alpha, "alpha"), c.caps);
    if (c.format == "csv") {
      out << table_csv(nu.table());
      return kOk;
    }
    doc["kind"] = "spin";
    doc["table"] = spin_table_json(nu);
  } else {
    if (c.format == "csv") {
      out << table_csv(phi.table());
      return kOk;
    }
    doc["kind"] = "edge";
    doc["table"] = edge_table_json(phi);
  }
  emit(c, doc, doc["kind"].get<std::string>() + " table", out);
  return kOk;
}

inline int cmd_check_plc(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance(c);
  const EdgeMeasure phi = build_measure(c, inst.graph);
  Json doc = start(c, &inst);
  bool holds = false;
  if (c.spins) {
    const auto v = plc_check_spin(fuzzy_potts(phi, single(c.alpha, "alpha"), c.caps));
    holds = v.holds;
    doc["plc"] = verdict_json(v);
  } else {
    const auto v = plc_check(phi);
    holds = v.holds;
    doc["plc"] = verdict_json(v);
    doc["monotone_conditional"] = verdict_json(monotone_conditional_check(phi));
    doc["cut_independence"] = verdict_json(cut_independence_check(phi));
  }
  emit(c, doc, verdict_word(holds), out);
  return holds ? kOk : kFailed;
}

inline int cmd_check_pa(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance(c);
  enforce_cap("max-pa-vertices", inst.graph.vertex_count(), c.caps.max_pa_vertices);
  const EdgeMeasure phi = build_measure(c, inst.graph);
  const auto v = positive_association_check(fuzzy_potts(phi, single(c.alpha, "alpha"), c.caps), c.caps);
  Json doc = start(c, &inst);
  doc["positive_association"] = verdict_json(v);
  emit(c, doc, verdict_word(v.holds), out);
  return v.holds ? kOk : kFailed;
}

inline int cmd_check_lemma2(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance(c);
  if (inst.e < 0) throw UsageError("no edge contains x; pass --e");
  const EdgeMeasure phi = build_measure(c, inst.graph);
  const JointMeasure jm = joint_fuzzy_potts(phi, single(c.alpha, "alpha"), c.caps);
  Lemma2Verdict v;
  if (c.upsets == "all") {
    v = lemma2_check(jm, inst.x, inst.e, c.caps);
  } else if (c.upsets == "all-plus") {
    const std::vector<UpSet> candidates{UpSet::all_ones(inst.graph.vertex_count())};
    v = lemma2_check(jm, inst.x, inst.e, candidates);
  } else {
    throw UsageError("unknown --upsets '" + c.upsets + "'");
  }
  Json doc = start(c, &inst);
  doc["x"] = inst.x;
  doc["e"] = inst.e;
  doc["upsets"] = c.upsets;
  doc["lemma2"] = verdict_json(v);
  emit(c, doc, verdict_word(v.holds), out);
  return v.holds ? kOk : kFailed;
}

inline int cmd_couple(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance(c);
  if (inst.e < 0) throw UsageError("no edge contains x; pass --e");
  const EdgeMeasure phi = build_measure(c, inst.graph);
  const bool guaranteed = uses_random_cluster(c) && single(c.q, "q") >= 1;
  const EdgeRule rule = parse_rule(c.rule);
  const auto cd = build_coupling(phi, inst.e, inst.x, rule, guaranteed);
  const auto rep = verify_coupling(cd, phi);
  Json doc = start(c, &inst);
  doc["coupling"] = coupling_json(cd);
  doc["verification"] = coupling_report_json(rep);
  bool ok = rep.all_ok();
  if (!c.alpha.empty()) {
    const auto sweep = lemma2_conclusion_all_upsets(cd, single(c.alpha, "alpha"), c.caps);
    doc["per_leaf"] = Json{{"holds", sweep.per_leaf_holds},
                           {"upsets_checked", sweep.upsets_checked},
                           {"distinct_leaf_shapes", sweep.distinct_leaf_shapes}};
    ok = ok && sweep.per_leaf_holds;
  }
  if (c.samples > 0) {
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;
    for (int i = 0; i < c.samples; ++i) {
      const auto [psi, xi] = sample_coupling(phi, inst.e, inst.x, c.seed + static_cast<std::uint64_t>(i), rule);
      ++counts[{psi.rank(), xi.rank()}];
    }
    Json rows = Json::array();
    for (const auto& [key, n] : counts) rows.push_back(Json::array({key.first, key.second, n}));
    doc["samples"] = Json{{"seed", c.seed}, {"draws", c.samples}, {"counts", std::move(rows)}};
  }
  emit(c, doc, ok ? "coupling verified" : "coupling check failed", out);
  return ok || !guaranteed ? kOk : kFailed;
}

inline int cmd_figure1(const RunConfig& c, std::ostream& out) {
  const int brute_max = 2 * c.m + 1 <= c.caps.max_edges ? 7 : 0;
  const auto a = figure1_analysis(c.m, brute_max, c.caps);
  Json doc = report_header(c.command);
  doc["graph"] = graph_json(figure1_graph(c.m).graph);
  doc["parameters"] = parameters(c, nullptr);
  doc["parameters"]["measure"] = "uniform-forest";
  doc["analysis"] = figure1_json(a);
  if (!c.alpha.empty()) doc["lemma2_demo"] = lemma2_demo_json(lemma2_failure_demo(c.m, single(c.alpha, "alpha"), c.caps));
  const char* sign = a.sign < 0 ? "negative" : a.sign == 0 ? "zero" : "positive";
  emit(c, doc, std::string("covariance ") + sign, out);
  return a.counts_agree ? kOk : kFailed;
}

inline int cmd_probe(const RunConfig& c, std::ostream& out) {
  const auto corpus = sweep_corpus(c);
  const auto qs = or_default(c.q, {{1, 2}, {1, 4}, {1, 10}});
  const auto ps = or_default(c.p, {{1, 3}, {1, 2}, {2, 3}});
  const auto alphas = or_default(c.alpha, {{1, 4}, {1, 2}, {3, 4}});
  const auto rep = conjecture_probe(corpus, qs, ps, alphas, c.caps);
  if (c.format == "csv") {
    out << "graph_index,q,p,alpha,covariance\n";
    for (const auto& v : rep.violations)
      out << v.graph_index << ',' << to_string(v.q) << ',' << to_string(v.p) << ',' << to_string(v.alpha) << ','
          << to_string(v.witness.covariance) << '\n';
  } else {
    Json doc = report_header(c.command);
    doc["parameters"] = Json{{"q", strings(qs)}, {"p", strings(ps)}, {"alpha", strings(alphas)}};
    doc["graphs"] = corpus.size();
    doc["probe"] = probe_json(rep);
    emit(c, doc, rep.violations.empty() ? "no violations" : "violation found", out);
  }
  return rep.violations.empty() ? kOk : kProbeViolation;
}

inline int cmd_boundary(const RunConfig& c, std::ostream& out) {
  const auto corpus = sweep_corpus(c);
  const auto qs = or_default(c.q, {{1, 1}, {3, 2}, {2, 1}, {4, 1}});
  const auto alphas = or_default(c.alpha, {{1, 4}, {1, 2}, {3, 4}, {9, 10}});
  const auto ps = or_default(c.p, {{1, 3}, {1, 2}, {2, 3}});
  const auto rep = haggstrom_boundary_scan(corpus, qs, alphas, ps, c.caps);
  if (c.format == "csv") {
    out << "q,alpha,condition_met,instances,failures,assertion_ok\n";
    for (const auto& cell : rep.cells)
      out << to_string(cell.q) << ',' << to_string(cell.alpha) << ',' << cell.condition_met << ',' << cell.instances.size()
          << ',' << cell.failures << ',' << cell.assertion_ok() << '\n';
  } else {
    Json doc = report_header(c.command);
    doc["parameters"] = Json{{"q", strings(qs)}, {"p", strings(ps)}, {"alpha", strings(alphas)}};
    doc["graphs"] = corpus.size();
    doc["boundary"] = boundary_json(rep);
    emit(c, doc, rep.assertions_ok() ? "assertions met" : "assertion failed", out);
  }
  return rep.assertions_ok() ? kOk : kFailed;
}

inline int cmd_es_check(const RunConfig& c, std::ostream& out) {
  const Instance inst = load_instance(c);
  const Rational q = c.q.empty() ? Rational(2) : single(c.q, "q");
  if (q.get_den() != 1 || q < 2) throw UsageError("es-check needs an integer --q >= 2");
  const int colors = static_cast<int>(q.get_num().get_si());
  const auto p = edge_probabilities(c, inst.graph);
  const SpinMeasure gibbs = potts_gibbs(inst.graph, p, q, c.caps);
  const std::vector<Rational> beta(static_cast<std::size_t>(colors), make_rational(1, colors));
  const SpinMeasure dc =
      divide_and_color(partition_measure_from_edge_measure(random_cluster(inst.graph, p, q, c.caps)), beta, c.caps);
  Rational max_diff;
  for (std::uint64_t r = 0; r < gibbs.size(); ++r) max_diff = std::max(max_diff, Rational(abs(gibbs.table()[r] - dc.table()[r])));
  Json doc = start(c, &inst);
  doc["colors"] = colors;
  doc["configurations"] = gibbs.size();
  doc["equal"] = gibbs == dc;
  doc["max_difference"] = rational_json(max_diff);
  emit(c, doc, gibbs == dc ? "equal" : "differ", out);
  return gibbs == dc ? kOk : kFailed;
}

inline int cmd_corpus(const RunConfig& c, std::ostream& out) {
  const auto results = acceptance::run_all(c.caps);
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (c.format == "text") {
    for (const auto& r : results) out << acceptance::result_line(r) << '\n';
  } else {
    Json doc = report_header(c.command);
    doc["all_passed"] = all;
    doc["criteria"] = acceptance::results_json(results);
    emit(c, doc, "", out);
  }
  return all ? kOk : kFailed;
}

}  // namespace detail

/// Runs one command. Reports go to out, diagnostics to err.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.format != "json" && c.format != "csv" && c.format != "text") throw UsageError("unknown format '" + c.format + "'");
    if (c.command == "measure") return detail::cmd_measure(c, out);
    if (c.command == "check-plc") return detail::cmd_check_plc(c, out);
    if (c.command == "check-pa") return detail::cmd_check_pa(c, out);
    if (c.command == "check-lemma2") return detail::cmd_check_lemma2(c, out);
    if (c.command == "couple") return detail::cmd_couple(c, out);
    if (c.command == "figure1") return detail::cmd_figure1(c, out);
    if (c.command == "probe-q") return detail::cmd_probe(c, out);
    if (c.command == "boundary") return detail::cmd_boundary(c, out);
    if (c.command == "es-check") return detail::cmd_es_check(c, out);
    if (c.command == "corpus") return detail::cmd_corpus(c, out);
    throw UsageError("unknown command '" + c.command + "'");
  } catch (const CapExceeded& ex) {
    err << ex.what() << '\n';
    return kFailed;
  } catch (const GraphParseError& ex) {
    err << "graph parse error: " << ex.what() << '\n';
    return kUsage;
  } catch (const RationalParseError& ex) {
    err << "rational parse error: " << ex.what() << '\n';
    return kUsage;
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& ex) {
    err << "invalid input: " << ex.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& ex) {
    err << "invalid input: " << ex.what() << '\n';
    return kUsage;
  }
}

}  // namespace ccorr::cli
