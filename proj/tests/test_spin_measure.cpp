#include <catch_amalgamated.hpp>

#include "ccorr/explorer.hpp"
#include "ccorr/spin_measure.hpp"
#include "oracles.hpp"

using namespace ccorr;

namespace {

Rational r(long a, long b = 1) { return make_rational(a, b); }

std::vector<Rational> table_of(const EdgeMeasure& mu) { return {mu.table().begin(), mu.table().end()}; }
std::vector<Rational> table_of(const SpinMeasure& nu) { return {nu.table().begin(), nu.table().end()}; }

const std::vector<Rational>& alphas() {
  static const std::vector<Rational> a{r(1, 10), r(1, 3), r(1, 2), r(4, 5)};
  return a;
}

}  // namespace

TEST_CASE("fuzzy Potts on a single edge") {
  const auto nu = fuzzy_potts(random_cluster(path_graph(2), r(1, 2), r(2)), r(1, 2));
  // rank bit v set means spin +1 at v
  CHECK(nu.table()[0b11] == r(1, 3));
  CHECK(nu.table()[0b01] == r(1, 6));
  CHECK(nu.table()[0b10] == r(1, 6));
  CHECK(nu.table()[0b00] == r(1, 3));
}

TEST_CASE("fuzzy Potts degenerate cases") {
  const Graph one(1, {});
  const auto single = fuzzy_potts(EdgeMeasure(one, {r(1)}), r(2, 7));
  CHECK(single.table()[1] == r(2, 7));
  CHECK(single.table()[0] == r(5, 7));

  const Graph g = triangle();
  std::vector<Rational> closed(g.config_count());
  closed[0] = 1;
  const auto iid = fuzzy_potts(EdgeMeasure(g, closed), r(1, 3));
  for (std::uint64_t s = 0; s < iid.size(); ++s) {
    Rational want = 1;
    for (int v = 0; v < 3; ++v) want *= ((s >> v) & 1U) ? r(1, 3) : r(2, 3);
    CHECK(iid.table()[s] == want);
  }
  const EdgeMeasure mu = random_cluster(g, r(1, 2), r(2));
  CHECK_THROWS_AS(fuzzy_potts(mu, r(0)), std::invalid_argument);
  CHECK_THROWS_AS(fuzzy_potts(mu, r(1)), std::invalid_argument);
}

TEST_CASE("fuzzy Potts agrees with the brute-force oracle") {
  for (const auto& g : default_corpus())
    for (const auto& alpha : alphas()) {
      const auto mu = random_cluster(g, r(1, 3), r(3, 2));
      CHECK(table_of(fuzzy_potts(mu, alpha)) == oracle::fuzzy_potts(g, table_of(mu), alpha));
      const auto uf = uniform_forest(g);
      CHECK(table_of(fuzzy_potts(uf, alpha)) == oracle::fuzzy_potts(g, table_of(uf), alpha));
    }
}

TEST_CASE("joint measure") {
  const auto mu = random_cluster(path_graph(2), r(1, 2), r(2));
  const auto jm = joint_fuzzy_potts(mu, r(1, 2));
  CHECK(jm.prob(EdgeConfig(1), 0b11) == r(1, 6));
  CHECK(jm.prob(EdgeConfig(1), 0b01) == 0);
  CHECK(jm.prob(EdgeConfig(0), 0b01) == r(1, 6));

  for (const auto& g : default_corpus())
    for (const auto& alpha : alphas()) {
      const auto phi = random_cluster(g, r(1, 2), r(3));
      const auto j = joint_fuzzy_potts(phi, alpha);
      CHECK(j.edge_marginal() == phi);
      CHECK(j.spin_marginal() == fuzzy_potts(phi, alpha));
      for (const auto& e : j.entries()) {
        const auto part = component_partition(g, e.edges);
        for (const auto& block : part.blocks())
          for (int v : block) CHECK(((e.spins >> v) & 1U) == ((e.spins >> block.front()) & 1U));
      }
    }
}

TEST_CASE("partition push-forward") {
  const auto pm = partition_measure_from_edge_measure(random_cluster(path_graph(2), r(1, 2), r(2)));
  CHECK(pm.prob().at(Partition::from_labels({0, 0})) == r(1, 3));
  CHECK(pm.prob().at(Partition::from_labels({0, 1})) == r(2, 3));

  const Graph g = complete_graph(4);
  std::vector<Rational> closed(g.config_count());
  closed[0] = 1;
  const auto singletons = partition_measure_from_edge_measure(EdgeMeasure(g, closed));
  REQUIRE(singletons.prob().size() == 1);
  CHECK(singletons.prob().begin()->first.block_count() == 4);

  const auto forests = partition_measure_from_edge_measure(uniform_forest(g));
  Rational total;
  for (const auto& [part, pr] : forests.prob()) total += pr;
  CHECK(total == 1);
}

TEST_CASE("divide and color") {
  const std::vector<Rational> beta{r(1, 6), r(1, 3), r(1, 2)};
  const auto iid = divide_and_color(PartitionMeasure::point_mass(Partition::from_labels({0, 1, 2})), beta);
  CHECK(iid.color_count() == 3);
  for (std::uint64_t s = 0; s < iid.size(); ++s) {
    Rational want = 1;
    for (int v = 0; v < 3; ++v) want *= beta[static_cast<std::size_t>(iid.color_of(s, v))];
    CHECK(iid.table()[s] == want);
  }

  const auto two = divide_and_color(PartitionMeasure::point_mass(Partition::from_labels({0, 0, 0})), two_color_beta(r(1, 4)));
  CHECK(two.table()[0b111] == r(1, 4));
  CHECK(two.table()[0b000] == r(3, 4));
  for (std::uint64_t s = 1; s < 7; ++s) CHECK(two.table()[s] == 0);

  for (const auto& g : default_corpus())
    for (const auto& alpha : alphas()) {
      const auto phi = random_cluster(g, r(2, 3), r(1, 2));
      CHECK(divide_and_color(partition_measure_from_edge_measure(phi), two_color_beta(alpha)) == fuzzy_potts(phi, alpha));
    }

  const std::vector<Rational> bad{r(1, 2), r(1, 3)};
  CHECK_THROWS(divide_and_color(PartitionMeasure::point_mass(Partition::from_labels({0})), bad));
}

TEST_CASE("Potts Gibbs measure") {
  const auto k2 = potts_gibbs(path_graph(2), r(1, 2), r(2));
  CHECK(k2.table()[0] + k2.table()[3] == r(2, 3));

  for (int q : {2, 3})
    for (const auto& g : default_corpus()) {
      const auto gibbs = potts_gibbs(g, r(1, 2), r(q));
      CHECK(table_of(gibbs) == oracle::potts(g, r(1, 2), q));
      const std::vector<Rational> uniform(static_cast<std::size_t>(q), r(1, q));
      CHECK(gibbs == divide_and_color(partition_measure_from_edge_measure(random_cluster(g, r(1, 2), r(q))), uniform));
    }

  const auto tri = potts_gibbs(triangle(), r(1, 2), r(3));
  // invariant under the color permutation 0 -> 1 -> 2 -> 0
  for (std::uint64_t s = 0; s < tri.size(); ++s) {
    std::vector<int> shifted(3);
    for (int v = 0; v < 3; ++v) shifted[static_cast<std::size_t>(v)] = (tri.color_of(s, v) + 1) % 3;
    CHECK(tri.table()[tri.rank_of(shifted)] == tri.table()[s]);
  }

  CHECK_THROWS_AS(potts_gibbs(path_graph(2), r(1, 2), r(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(potts_gibbs(path_graph(2), r(1, 2), r(1)), std::invalid_argument);
}

TEST_CASE("spin conditioning") {
  const auto nu = fuzzy_potts(random_cluster(path_graph(2), r(1, 2), r(2)), r(1, 2));
  const auto given = condition_spin(nu, 0, kSpinPlus);
  CHECK(given.table()[0b11] == r(2, 3));
  CHECK(condition_spin(given, 0, kSpinPlus) == given);

  const auto single = condition_spin(fuzzy_potts(EdgeMeasure(Graph(1, {}), {r(1)}), r(1, 3)), 0, kSpinPlus);
  CHECK(single.table()[1] == 1);
  CHECK(single.table()[0] == 0);

  const auto mu = random_cluster(triangle(), r(1, 2), r(2));
  const auto jm = condition_spin(joint_fuzzy_potts(mu, r(1, 3)), 1, kSpinPlus);
  CHECK(jm.spin_marginal() == condition_spin(fuzzy_potts(mu, r(1, 3)), 1, kSpinPlus));
  CHECK(jm.edge_marginal() == mu);

  CHECK_THROWS_AS(condition_spin(given, 0, kSpinMinus), std::domain_error);
  CHECK_THROWS_AS(condition_spin(given, 2, kSpinPlus), std::out_of_range);
}

TEST_CASE("spin lattice condition") {
  CHECK(plc_check_spin(fuzzy_potts(random_cluster(triangle(), r(1, 2), r(4)), r(1, 2))).holds);
  CHECK(plc_check_spin(fuzzy_potts(EdgeMeasure(Graph(1, {}), {r(1)}), r(1, 5))).holds);

  bool some_fail = false;
  for (const auto& g : default_corpus()) {
    const auto nu = fuzzy_potts(random_cluster(g, r(1, 2), r(2)), r(9, 10));
    const auto verdict = plc_check_spin(nu);
    CHECK(verdict.holds == oracle::lattice_condition(table_of(nu)));
    if (!verdict.holds) {
      some_fail = true;
      CHECK(verdict.witness);
    }
  }
  CHECK(some_fail);

  CHECK_THROWS_AS(plc_check_spin(potts_gibbs(path_graph(2), r(1, 2), r(3))), std::invalid_argument);
}

TEST_CASE("global spin flip exchanges alpha and one minus alpha") {
  for (const auto& g : default_corpus())
    for (const auto& alpha : alphas()) {
      const auto phi = random_cluster(g, r(1, 3), r(2, 3));
      const auto nu = fuzzy_potts(phi, alpha);
      const auto flipped = fuzzy_potts(phi, 1 - alpha);
      const std::uint64_t all = nu.size() - 1;
      for (std::uint64_t s = 0; s < nu.size(); ++s) CHECK(nu.table()[s] == flipped.table()[s ^ all]);
    }
}

TEST_CASE("each spin is plus with probability alpha") {
  for (const auto& g : default_corpus())
    for (const auto& alpha : alphas())
      for (const auto& phi : {random_cluster(g, r(3, 4), r(5)), uniform_forest(g)}) {
        const auto nu = fuzzy_potts(phi, alpha);
        for (int v = 0; v < g.vertex_count(); ++v) {
          Rational plus;
          for (std::uint64_t s = 0; s < nu.size(); ++s)
            if ((s >> v) & 1U) plus += nu.table()[s];
          CHECK(plus == alpha);
        }
      }
}
