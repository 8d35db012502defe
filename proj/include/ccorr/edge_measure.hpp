#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccorr/caps.hpp"
#include "ccorr/graph.hpp"
#include "ccorr/rational.hpp"

namespace ccorr {

/// Exact probability measure on {0,1}^E, stored densely by configuration rank.
class EdgeMeasure {
 public:
  EdgeMeasure(Graph graph, std::vector<Rational> prob) : graph_(std::move(graph)), prob_(std::move(prob)) {
    if (prob_.size() != graph_.config_count()) throw std::invalid_argument("table size does not match 2^|E|");
    Rational total;
    for (const auto& v : prob_) {
      if (v < 0) throw std::invalid_argument("negative probability");
      total += v;
    }
    if (total != 1) throw std::invalid_argument("probabilities sum to " + to_string(total) + ", not 1");
  }

  /// Normalizes nonnegative weights.
  static EdgeMeasure from_weights(Graph graph, std::vector<Rational> weights) {
    Rational total;
    for (const auto& w : weights) {
      if (w < 0) throw std::invalid_argument("negative weight");
      total += w;
    }
    if (total == 0) throw std::invalid_argument("all weights are zero");
    for (auto& w : weights) w /= total;
    return EdgeMeasure(std::move(graph), std::move(weights));
  }

  const Graph& graph() const noexcept { return graph_; }
  std::span<const Rational> table() const noexcept { return prob_; }
  const Rational& prob(EdgeConfig c) const { return prob_.at(c.rank()); }
  std::uint64_t size() const noexcept { return prob_.size(); }

  bool strictly_positive() const {
    for (const auto& v : prob_)
      if (v == 0) return false;
    return true;
  }

  bool operator==(const EdgeMeasure&) const = default;

 private:
  Graph graph_;
  std::vector<Rational> prob_;
};

/// phi(eta) proportional to prod p_e^{eta_e} (1 - p_e)^{1 - eta_e} q^{k(eta)}.
///
/// With p_e = a_e / b_e and q = c / d every weight is scaled by
/// prod b_e * d^{|V|}, which leaves the integer
///   prod (a_e or b_e - a_e) * c^k * d^{|V| - k}.
inline EdgeMeasure random_cluster(const Graph& g, std::span<const Rational> p, const Rational& q,
                                  const Caps& caps = {}) {
  enforce_edge_cap(g, caps);
  if (g.vertex_count() < 1) throw std::invalid_argument("random cluster measure needs at least one vertex");
  if (static_cast<int>(p.size()) != g.edge_count()) throw std::invalid_argument("need one p per edge");
  for (const auto& pe : p) require_open_interval(pe, 0, 1, "p_e");
  if (q <= 0) throw std::invalid_argument("q = " + to_string(q) + " must be positive");

  const int n = g.vertex_count();
  std::vector<Integer> q_num_pow(static_cast<std::size_t>(n) + 1), q_den_pow(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    q_num_pow[static_cast<std::size_t>(k)] = pow(q.get_num(), static_cast<unsigned long>(k));
    q_den_pow[static_cast<std::size_t>(k)] = pow(q.get_den(), static_cast<unsigned long>(k));
  }
  std::vector<Integer> weights(g.config_count());
  Integer total = 0;
  for (std::uint64_t r = 0; r < g.config_count(); ++r) {
    const EdgeConfig c(r);
    Integer w = 1;
    for (int e = 0; e < g.edge_count(); ++e) {
      const Rational& pe = p[static_cast<std::size_t>(e)];
      w *= c.open(e) ? Integer(pe.get_num()) : Integer(pe.get_den() - pe.get_num());
    }
    const int k = component_count(g, c);
    w *= q_num_pow[static_cast<std::size_t>(k)] * q_den_pow[static_cast<std::size_t>(n - k)];
    total += w;
    weights[r] = std::move(w);
  }
  std::vector<Rational> prob;
  prob.reserve(weights.size());
  for (auto& w : weights) {
    Rational v(w, total);
    v.canonicalize();
    prob.push_back(std::move(v));
  }
  return EdgeMeasure(g, std::move(prob));
}

inline EdgeMeasure random_cluster(const Graph& g, const Rational& p, const Rational& q, const Caps& caps = {}) {
  const std::vector<Rational> ps(static_cast<std::size_t>(g.edge_count()), p);
  return random_cluster(g, ps, q, caps);
}

/// Independent bond percolation, the q = 1 random cluster measure.
inline EdgeMeasure product_measure(const Graph& g, std::span<const Rational> p, const Caps& caps = {}) {
  return random_cluster(g, p, Rational(1), caps);
}

inline EdgeMeasure uniform_forest(const Graph& g, const Caps& caps = {}) {
  enforce_edge_cap(g, caps);
  std::vector<Rational> weights(g.config_count());
  for (std::uint64_t r = 0; r < g.config_count(); ++r)
    if (is_forest(g, EdgeConfig(r))) weights[r] = 1;
  return EdgeMeasure::from_weights(g, std::move(weights));
}

/// Pr(eta_e = 1).
inline Rational marginal(const EdgeMeasure& mu, int e) {
  if (e < 0 || e >= mu.graph().edge_count()) throw std::out_of_range("edge index out of range");
  Rational out;
  for (std::uint64_t r = 0; r < mu.size(); ++r)
    if (EdgeConfig(r).open(e)) out += mu.table()[r];
  return out;
}

/// Half the L1 distance. Both measures must live on the same graph.
inline Rational tv_distance(const EdgeMeasure& a, const EdgeMeasure& b) {
  if (!(a.graph() == b.graph())) throw std::invalid_argument("tv_distance needs measures on the same graph");
  Rational sum;
  for (std::uint64_t r = 0; r < a.size(); ++r) sum += abs(a.table()[r] - b.table()[r]);
  return sum / 2;
}

/// mu(. | eta_e = b) transported to G/e (b open) or G - e (b closed).
struct ConditionedMeasure {
  EdgeMeasure measure;
  Minor minor;
};

inline ConditionedMeasure condition_on_edge(const EdgeMeasure& mu, int e, bool open) {
  const Graph& g = mu.graph();
  if (e < 0 || e >= g.edge_count()) throw std::out_of_range("edge index out of range");
  Minor minor = open ? contract_edge(g, e) : deletion_minor(g, e);
  std::vector<Rational> weights(minor.graph.config_count());
  for (std::uint64_t r = 0; r < mu.size(); ++r) {
    const EdgeConfig c(r);
    if (c.open(e) == open) weights[drop_edge_bit(c, e).rank()] = mu.table()[r];
  }
  bool null_event = true;
  for (const auto& w : weights)
    if (w != 0) null_event = false;
  if (null_event)
    throw std::domain_error("conditioning on a null event: edge " + std::to_string(e) + (open ? " open" : " closed"));
  EdgeMeasure conditioned = EdgeMeasure::from_weights(minor.graph, std::move(weights));
  return ConditionedMeasure{std::move(conditioned), std::move(minor)};
}

}  // namespace ccorr
