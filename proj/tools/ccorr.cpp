#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "ccorr/cli.hpp"

namespace {

std::vector<ccorr::Rational> rationals(const std::string& text) {
  return text.empty() ? std::vector<ccorr::Rational>{} : ccorr::parse_rational_list(text);
}

}  // namespace

int main(int argc, char** argv) {
  ccorr::cli::RunConfig cfg;
  cfg.caps = ccorr::Caps::from_environment();
  std::string p_text, q_text, alpha_text;
  int x = -1, e = -1;

  CLI::App app{"Exact correlation checks for random cluster and fuzzy Potts measures"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--graph", cfg.graph_file, "graph file (\"vertices N\" then \"u v\" per edge)");
  app.add_option("--family", cfg.family, "k2, path, cycle, complete, triangle or figure1");
  app.add_option("--n", cfg.n, "vertex count for path, cycle, complete");
  app.add_option("--m", cfg.m, "figure1 parameter");
  app.add_option("--p", p_text, "edge probability, or a comma list (per edge, or a sweep grid)");
  app.add_option("--q", q_text, "cluster weight, or a comma list for sweeps");
  app.add_option("--alpha", alpha_text, "probability of spin +1, or a comma list for sweeps");
  app.add_option("--measure", cfg.measure, "random-cluster or uniform-forest");
  app.add_option("--format", cfg.format, "json, csv or text");
  app.add_option("--seed", cfg.seed, "sampler seed");
  app.add_option("--samples", cfg.samples, "coupled draws for couple");
  app.add_option("--x", x, "distinguished vertex");
  app.add_option("--e", e, "designated edge containing x");
  app.add_option("--rule", cfg.rule, "lowest-index or highest-index");
  app.add_option("--upsets", cfg.upsets, "check-lemma2 candidates: all or all-plus");
  app.add_flag("--spins", cfg.spins, "act on the spin measure nu");
  app.add_option("--max-edges", cfg.caps.max_edges, "edge cap for dense tables");
  app.add_option("--max-pa-vertices", cfg.caps.max_pa_vertices, "vertex cap for association checks");

  for (const auto& name : ccorr::cli::command_names())
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });

  try {
    app.parse(argc, argv);
    cfg.p = rationals(p_text);
    cfg.q = rationals(q_text);
    cfg.alpha = rationals(alpha_text);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex);
    return code == 0 ? 0 : ccorr::cli::kUsage;
  } catch (const ccorr::RationalParseError& ex) {
    std::cerr << "rational parse error: " << ex.what() << '\n';
    return ccorr::cli::kUsage;
  }
  if (x >= 0) cfg.x = x;
  if (e >= 0) cfg.e = e;
  return ccorr::cli::run(cfg, std::cout, std::cerr);
}
