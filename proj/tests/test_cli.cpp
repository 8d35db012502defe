#include <catch_amalgamated.hpp>

#include <sstream>

#include "ccorr/cli.hpp"

using namespace ccorr;
using namespace ccorr::cli;

namespace {

Rational r(long a, long b = 1) { return make_rational(a, b); }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cmd(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(const std::string& command) {
  RunConfig c;
  c.command = command;
  return c;
}

}  // namespace

TEST_CASE("check-pa on the smallest two-terminal graph") {
  auto c = config("check-pa");
  c.family = "figure1";
  c.m = 1;
  c.measure = "uniform-forest";
  c.alpha = {r(1, 2)};
  const auto res = run_cmd(c);
  CHECK(res.code == kOk);
  const auto doc = Json::parse(res.out);
  CHECK(doc["positive_association"]["holds"] == true);

  c.format = "text";
  const auto text = run_cmd(c);
  CHECK(text.code == kOk);
  CHECK(text.out.find("holds") != std::string::npos);
}

TEST_CASE("figure1 reports a negative covariance at m = 7") {
  auto c = config("figure1");
  c.m = 7;
  const auto res = run_cmd(c);
  CHECK(res.code == kOk);
  CHECK(res.out.find("-64/123201") != std::string::npos);
}

TEST_CASE("cap refusal") {
  auto c = config("check-pa");
  c.family = "path";
  c.n = 6;
  c.q = {r(2)};
  c.alpha = {r(1, 2)};
  const auto res = run_cmd(c);
  CHECK(res.code == kFailed);
  CHECK(res.err.find("refused: max-pa-vertices = 6 exceeds cap 4") != std::string::npos);

  auto big = config("measure");
  big.family = "complete";
  big.n = 7;
  big.q = {r(2)};
  const auto edges = run_cmd(big);
  CHECK(edges.code == kFailed);
  CHECK(edges.err.find("max-edges") != std::string::npos);
}

TEST_CASE("graph parse errors carry line numbers") {
  auto c = config("measure");
  c.graph_file = std::string(CCORR_TEST_DATA) + "/bad_edge.graph";
  c.q = {r(2)};
  const auto res = run_cmd(c);
  CHECK(res.code == kUsage);
  CHECK(res.err.find("line 3") != std::string::npos);

  c.graph_file = std::string(CCORR_TEST_DATA) + "/bowtie.graph";
  CHECK(run_cmd(c).code == kOk);
}

TEST_CASE("usage errors") {
  CHECK(run_cmd(config("nonsense")).code == kUsage);
  auto no_q = config("measure");
  no_q.family = "triangle";
  CHECK(run_cmd(no_q).code == kUsage);
  auto bad_p = config("measure");
  bad_p.q = {r(2)};
  bad_p.p = {r(3, 2)};
  CHECK(run_cmd(bad_p).code == kUsage);
  auto bad_format = config("figure1");
  bad_format.format = "csv";
  CHECK(run_cmd(bad_format).code == kUsage);
}

TEST_CASE("measure tables in csv") {
  auto c = config("measure");
  c.family = "triangle";
  c.q = {r(2)};
  c.format = "csv";
  const auto res = run_cmd(c);
  CHECK(res.code == kOk);
  CHECK(res.out.find("7,1/14,") != std::string::npos);
}

TEST_CASE("verdict exit codes") {
  auto plc = config("check-plc");
  plc.q = {r(1, 2)};
  CHECK(run_cmd(plc).code == kFailed);
  plc.q = {r(2)};
  CHECK(run_cmd(plc).code == kOk);

  auto lemma = config("check-lemma2");
  lemma.family = "figure1";
  lemma.m = 7;
  lemma.measure = "uniform-forest";
  lemma.alpha = {r(1, 100)};
  lemma.upsets = "all-plus";
  CHECK(run_cmd(lemma).code == kFailed);

  auto es = config("es-check");
  es.q = {r(3)};
  CHECK(run_cmd(es).code == kOk);

  auto couple = config("couple");
  couple.family = "complete";
  couple.n = 4;
  couple.q = {r(2)};
  couple.samples = 20;
  CHECK(run_cmd(couple).code == kOk);
}

TEST_CASE("identical configurations give identical reports") {
  auto c = config("couple");
  c.family = "cycle";
  c.n = 4;
  c.q = {r(3, 2)};
  c.samples = 50;
  c.seed = 7;
  CHECK(run_cmd(c).out == run_cmd(c).out);

  auto probe = config("probe-q");
  probe.p = {r(1, 2)};
  probe.alpha = {r(1, 2)};
  CHECK(run_cmd(probe).out == run_cmd(probe).out);
}

TEST_CASE("every command emits a report header") {
  for (const auto& name : command_names()) {
    if (name == "corpus") continue;
    auto c = config(name);
    c.q = {r(2)};
    if (name == "probe-q" || name == "boundary") {
      c.q = {};
      c.p = {r(1, 2)};
      c.alpha = {r(1, 2)};
    }
    if (name == "couple" || name == "check-pa" || name == "check-lemma2") c.alpha = {r(1, 2)};
    const auto res = run_cmd(c);
    INFO(name << ": " << res.err);
    CHECK(res.code != kUsage);
    const auto doc = Json::parse(res.out);
    CHECK(doc["command"] == name);
    CHECK(doc["schema_version"] == 1);
  }
}
