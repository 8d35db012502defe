#include <catch_amalgamated.hpp>

#include <random>

#include "ccorr/association.hpp"
#include "ccorr/explorer.hpp"
#include "oracles.hpp"

using namespace ccorr;

namespace {

Rational r(long a, long b = 1) { return make_rational(a, b); }

std::vector<Rational> table_of(const SpinMeasure& nu) { return {nu.table().begin(), nu.table().end()}; }

// Pr(++) = Pr(--) = 1/8, Pr(+-) = Pr(-+) = 3/8
SpinMeasure anti_correlated() { return SpinMeasure(2, 2, {r(1, 8), r(3, 8), r(3, 8), r(1, 8)}); }

}  // namespace

TEST_CASE("up-set counts match brute force") {
  CHECK(enumerate_upsets(0).size() == 2);
  for (int n = 1; n <= 4; ++n) {
    const auto ups = enumerate_upsets(n);
    const auto brute = oracle::upsets(n);
    REQUIRE(ups.size() == brute.size());
    for (std::size_t i = 0; i < ups.size(); ++i) CHECK(ups[i].event().mask() == brute[i]);
  }
  CHECK(enumerate_upsets(1).size() == 3);
  CHECK(enumerate_upsets(2).size() == 6);
  CHECK(enumerate_upsets(3).size() == 20);
  CHECK(enumerate_upsets(4).size() == 168);
  CHECK(enumerate_upsets(5).size() == 7581);
  Caps tight;
  tight.max_upset_coordinates = 3;
  CHECK_THROWS_AS(enumerate_upsets(4, tight), CapExceeded);
  CHECK_THROWS_AS(enumerate_upsets(6), CapExceeded);
}

TEST_CASE("up-sets are validated") {
  CHECK_THROWS_AS(UpSet(Event::from_mask(2, 0b0001)), std::invalid_argument);
  CHECK_NOTHROW(UpSet(Event::from_mask(2, 0b1000)));
  CHECK(UpSet::all_ones(3).ranks() == std::vector<std::uint64_t>{7});
  CHECK(UpSet::coordinate(2, 1).ranks() == std::vector<std::uint64_t>{2, 3});
  for (const auto& u : enumerate_upsets(3)) CHECK(u.event().is_increasing());
}

TEST_CASE("correlation of indicators") {
  const auto nu = fuzzy_potts(random_cluster(path_graph(2), r(1, 2), r(2)), r(1, 2));
  CHECK(correlation(nu, UpSet::coordinate(2, 0), UpSet::coordinate(2, 1)) == r(1, 12));
  for (const auto& a : enumerate_upsets(2)) {
    CHECK(correlation(nu, UpSet::full(2), a) == 0);
    CHECK(correlation(nu, a, a) >= 0);
    for (const auto& b : enumerate_upsets(2)) CHECK(correlation(nu, a, b) == correlation(nu, b, a));
  }

  const Graph g = path_graph(4);
  const auto prod = product_measure(g, std::vector<Rational>{r(1, 3), r(1, 2), r(4, 5)});
  // edges 0 and 2 against edge 1
  const UpSet first = UpSet::principal(3, 0b001);
  const UpSet outer = UpSet::principal(3, 0b101);
  const UpSet middle = UpSet::principal(3, 0b010);
  CHECK(correlation(prod, first, middle) == 0);
  CHECK(correlation(prod, outer, middle) == 0);
}

TEST_CASE("oracle covariance agrees") {
  const auto nu = fuzzy_potts(random_cluster(triangle(), r(1, 3), r(3)), r(1, 4));
  const auto t = table_of(nu);
  for (const auto& a : enumerate_upsets(3))
    for (const auto& b : enumerate_upsets(3))
      CHECK(correlation(nu, a, b) == oracle::covariance(t, a.event().mask(), b.event().mask()));
}

TEST_CASE("positive association verdicts") {
  CHECK(positive_association_check(fuzzy_potts(random_cluster(triangle(), r(1, 2), r(3, 2)), r(1, 3))).holds);
  CHECK(positive_association_check(fuzzy_potts(EdgeMeasure(Graph(1, {}), {r(1)}), r(1, 3))).holds);

  const auto bad = positive_association_check(anti_correlated());
  REQUIRE_FALSE(bad.holds);
  CHECK(bad.witness->covariance == r(-1, 8));
  CHECK(bad.witness->a == UpSet::coordinate(2, 0));
  CHECK(bad.witness->b == UpSet::coordinate(2, 1));

  Caps small;
  small.max_pa_vertices = 2;
  CHECK_THROWS_AS(positive_association_check(fuzzy_potts(random_cluster(triangle(), r(1, 2), r(2)), r(1, 2)), small),
                  CapExceeded);
}

TEST_CASE("positive association agrees with the oracle on the corpus") {
  for (const auto& g : default_corpus())
    for (const auto& q : {r(1, 4), r(1), r(2)}) {
      const auto nu = fuzzy_potts(random_cluster(g, r(1, 2), q), r(1, 3));
      const bool ok = positive_association_check(nu).holds;
      CHECK(ok == oracle::positively_associated(table_of(nu)));
      if (q >= 1) CHECK(ok);
    }
}

TEST_CASE("product measures are positively associated") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> p;
    for (int e = 0; e < 4; ++e) p.push_back(r(static_cast<long>(1 + gen() % 8), 9));
    CHECK(positive_association_check(product_measure(cycle_graph(4), p)).holds);
  }
}

TEST_CASE("lattice condition implies positive association") {
  for (const auto& g : default_corpus())
    for (const auto& q : {r(1, 2), r(1), r(2), r(4)})
      for (const auto& alpha : {r(1, 10), r(1, 2), r(3, 4)}) {
        const auto nu = fuzzy_potts(random_cluster(g, r(1, 3), q), alpha);
        if (plc_check_spin(nu).holds) CHECK(positive_association_check(nu).holds);
      }
}

TEST_CASE("increasing functions built from up-sets are positively correlated") {
  std::mt19937_64 gen(9);
  const auto ups = enumerate_upsets(3);
  const auto nu = fuzzy_potts(random_cluster(triangle(), r(1, 2), r(2)), r(2, 5));
  const auto t = table_of(nu);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> f(8), g(8);
    for (int k = 0; k < 3; ++k) {
      const auto& u = ups[gen() % ups.size()];
      const auto& v = ups[gen() % ups.size()];
      const Rational cu(static_cast<long>(1 + gen() % 5)), cv(static_cast<long>(1 + gen() % 5));
      for (std::uint64_t s = 0; s < 8; ++s) {
        if (u.contains(s)) f[s] += cu;
        if (v.contains(s)) g[s] += cv;
      }
    }
    Rational ef, eg, efg;
    for (std::uint64_t s = 0; s < 8; ++s) {
      ef += t[s] * f[s];
      eg += t[s] * g[s];
      efg += t[s] * f[s] * g[s];
    }
    CHECK(efg >= ef * eg);
  }
}

TEST_CASE("decomposition lemma instances") {
  const auto nu = fuzzy_potts(random_cluster(triangle(), r(1, 2), r(2)), r(1, 2));
  const Event all = UpSet::all_ones(3).event();
  const Event x_plus = UpSet::coordinate(3, 0).event();
  const auto rep = lemma1_decomposition_check(nu, all, all, x_plus);
  CHECK(rep.cov_ac >= 0);
  CHECK(rep.cov_bc >= 0);
  REQUIRE(rep.cov_ab_given_c);
  REQUIRE(rep.cov_ab_given_not_c);
  CHECK(*rep.cov_ab_given_c >= 0);
  CHECK(*rep.cov_ab_given_not_c >= 0);
  CHECK(rep.cov_ab >= 0);
  CHECK(rep.hypotheses_hold);
  CHECK(rep.consistent());

  const auto full = lemma1_decomposition_check(nu, x_plus, UpSet::coordinate(3, 1).event(), Event::full(3));
  CHECK_FALSE(full.cov_ab_given_not_c);
  REQUIRE(full.cov_ab_given_c);
  CHECK(*full.cov_ab_given_c == full.cov_ab);

  const auto neg = lemma1_decomposition_check(anti_correlated(), UpSet::coordinate(2, 0).event(),
                                              UpSet::coordinate(2, 1).event(), UpSet::coordinate(2, 0).event());
  CHECK(neg.cov_bc < 0);
  CHECK_FALSE(neg.hypotheses_hold);
  CHECK(neg.consistent());
}

TEST_CASE("conditional correlation with the edge") {
  const auto tri = random_cluster(triangle(), r(1, 2), r(2));
  const auto jm = joint_fuzzy_potts(tri, r(1, 2));
  for (int x = 0; x < 3; ++x)
    for (int e = 0; e < 3; ++e)
      if (triangle().edge(e).touches(x)) CHECK(lemma2_check(jm, x, e).holds);

  const auto k2 = joint_fuzzy_potts(random_cluster(path_graph(2), r(1, 3), r(5)), r(1, 10));
  CHECK(lemma2_check(k2, 0, 0).holds);
  CHECK(lemma2_check(k2, 1, 0).holds);

  const auto fig = figure1_graph(7);
  const auto big = joint_fuzzy_potts(uniform_forest(fig.graph), r(1, 100));
  const std::vector<UpSet> candidates{UpSet::all_ones(fig.graph.vertex_count())};
  const auto verdict = lemma2_check(big, fig.x, fig.e, candidates);
  REQUIRE_FALSE(verdict.holds);
  CHECK(verdict.witness->covariance < 0);
  CHECK(verdict.witness->covariance == lemma2_covariance(big, fig.x, fig.e, candidates[0]));

  CHECK_THROWS_AS(lemma2_check(joint_fuzzy_potts(random_cluster(path_graph(3), r(1, 2), r(2)), r(1, 2)), 0, 1),
                  std::invalid_argument);
}

TEST_CASE("conditional edge covariance agrees with a direct computation") {
  const Graph g = path_graph(3);
  const auto mu = random_cluster(g, r(1, 3), r(3, 2));
  const Rational alpha = r(1, 3);
  const auto jm = joint_fuzzy_potts(mu, alpha);
  const auto ups = enumerate_upsets(3);
  for (const auto& c : ups) {
    Rational px, pc, pe, pce;
    for (const auto& entry : jm.entries()) {
      if (!((entry.spins >> 0) & 1U)) continue;
      px += entry.prob;
      const bool in_c = c.contains(entry.spins);
      const bool open = entry.edges.open(0);
      if (in_c) pc += entry.prob;
      if (open) pe += entry.prob;
      if (in_c && open) pce += entry.prob;
    }
    CHECK(lemma2_covariance(jm, 0, 0, c) == pce / px - (pc / px) * (pe / px));
  }
}
