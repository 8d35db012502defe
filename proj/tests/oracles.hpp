#pragma once

// Brute-force reference computations. They share only Graph, EdgeConfig and
// Rational with the library; everything else is recomputed from definitions.

#include <cstdint>
#include <queue>
#include <vector>

#include "ccorr/graph.hpp"
#include "ccorr/rational.hpp"

namespace oracle {

using ccorr::EdgeConfig;
using ccorr::Graph;
using ccorr::Rational;

/// Component label per vertex by breadth-first search over open edges.
inline std::vector<int> bfs_labels(const Graph& g, std::uint64_t rank) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!((rank >> e) & 1U)) continue;
    adj[static_cast<std::size_t>(g.edge(e).a)].push_back(g.edge(e).b);
    adj[static_cast<std::size_t>(g.edge(e).b)].push_back(g.edge(e).a);
  }
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    std::queue<int> todo;
    todo.push(s);
    label[static_cast<std::size_t>(s)] = next;
    while (!todo.empty()) {
      const int v = todo.front();
      todo.pop();
      for (int w : adj[static_cast<std::size_t>(v)])
        if (label[static_cast<std::size_t>(w)] < 0) {
          label[static_cast<std::size_t>(w)] = next;
          todo.push(w);
        }
    }
    ++next;
  }
  return label;
}

inline int components(const Graph& g, std::uint64_t rank) {
  int k = 0;
  for (int l : bfs_labels(g, rank)) k = std::max(k, l + 1);
  return k;
}

/// Acyclic iff each open edge, added in order, joins two vertices not yet
/// reachable from one another.
inline bool acyclic(const Graph& g, std::uint64_t rank) {
  std::uint64_t partial = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!((rank >> e) & 1U)) continue;
    const auto labels = bfs_labels(g, partial);
    if (labels[static_cast<std::size_t>(g.edge(e).a)] == labels[static_cast<std::size_t>(g.edge(e).b)]) return false;
    partial |= std::uint64_t{1} << e;
  }
  return true;
}

inline std::vector<Rational> normalize(std::vector<Rational> w) {
  Rational total;
  for (const auto& x : w) total += x;
  for (auto& x : w) x /= total;
  return w;
}

/// prod p^eta (1-p)^(1-eta) q^k, normalized, straight from the definition.
inline std::vector<Rational> random_cluster(const Graph& g, const std::vector<Rational>& p, const Rational& q) {
  std::vector<Rational> w(g.config_count());
  for (std::uint64_t r = 0; r < g.config_count(); ++r) {
    Rational x = 1;
    for (int e = 0; e < g.edge_count(); ++e) x *= ((r >> e) & 1U) ? p[static_cast<std::size_t>(e)] : 1 - p[static_cast<std::size_t>(e)];
    for (int i = 0; i < components(g, r); ++i) x *= q;
    w[r] = x;
  }
  return normalize(std::move(w));
}

inline std::vector<Rational> random_cluster(const Graph& g, const Rational& p, const Rational& q) {
  return random_cluster(g, std::vector<Rational>(static_cast<std::size_t>(g.edge_count()), p), q);
}

inline std::vector<Rational> uniform_forest(const Graph& g) {
  std::vector<Rational> w(g.config_count());
  for (std::uint64_t r = 0; r < g.config_count(); ++r) w[r] = acyclic(g, r) ? 1 : 0;
  return normalize(std::move(w));
}

/// nu(sigma): sum over eta of phi(eta) * alpha^{#+ clusters} (1-alpha)^{#- clusters}
/// for sigma constant on clusters. Bit v of sigma set means spin +1.
inline std::vector<Rational> fuzzy_potts(const Graph& g, const std::vector<Rational>& phi, const Rational& alpha) {
  const int n = g.vertex_count();
  std::vector<Rational> nu(std::uint64_t{1} << n);
  for (std::uint64_t r = 0; r < g.config_count(); ++r) {
    if (phi[r] == 0) continue;
    const auto labels = bfs_labels(g, r);
    const int k = components(g, r);
    for (std::uint64_t s = 0; s < nu.size(); ++s) {
      std::vector<int> color(static_cast<std::size_t>(k), -1);
      bool constant = true;
      for (int v = 0; v < n && constant; ++v) {
        const int c = static_cast<int>((s >> v) & 1U);
        int& slot = color[static_cast<std::size_t>(labels[static_cast<std::size_t>(v)])];
        if (slot < 0) slot = c;
        else if (slot != c) constant = false;
      }
      if (!constant) continue;
      Rational x = phi[r];
      for (int c : color) x *= c == 1 ? alpha : 1 - alpha;
      nu[s] += x;
    }
  }
  return nu;
}

/// Potts Gibbs weights prod_e w_e^{[sigma_u = sigma_v]}, w_e = 1/(1 - p_e),
/// with base-q digits of the rank as colors.
inline std::vector<Rational> potts(const Graph& g, const Rational& p, int q) {
  const int n = g.vertex_count();
  std::uint64_t size = 1;
  for (int v = 0; v < n; ++v) size *= static_cast<std::uint64_t>(q);
  std::vector<Rational> w(size);
  const Rational weight = 1 / (1 - p);
  for (std::uint64_t s = 0; s < size; ++s) {
    std::vector<int> color(static_cast<std::size_t>(n));
    std::uint64_t t = s;
    for (int v = 0; v < n; ++v) {
      color[static_cast<std::size_t>(v)] = static_cast<int>(t % static_cast<std::uint64_t>(q));
      t /= static_cast<std::uint64_t>(q);
    }
    Rational x = 1;
    for (const auto& e : g.edges())
      if (color[static_cast<std::size_t>(e.a)] == color[static_cast<std::size_t>(e.b)]) x *= weight;
    w[s] = x;
  }
  return normalize(std::move(w));
}

/// Subsets of {0,1}^n (as bitmasks over the 2^n points) closed upward.
inline std::vector<std::uint64_t> upsets(int n) {
  const std::uint64_t points = std::uint64_t{1} << n;
  std::vector<std::uint64_t> out;
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << points); ++set) {
    bool closed = true;
    for (std::uint64_t a = 0; a < points && closed; ++a)
      for (std::uint64_t b = 0; b < points && closed; ++b)
        if (((set >> a) & 1U) && (a & b) == a && !((set >> b) & 1U)) closed = false;
    if (closed) out.push_back(set);
  }
  return out;
}

inline Rational mass(const std::vector<Rational>& t, std::uint64_t set) {
  Rational s;
  for (std::uint64_t r = 0; r < t.size(); ++r)
    if ((set >> r) & 1U) s += t[r];
  return s;
}

inline Rational covariance(const std::vector<Rational>& t, std::uint64_t a, std::uint64_t b) {
  return mass(t, a & b) - mass(t, a) * mass(t, b);
}

/// Every pair of up-sets positively correlated (tables over at most 4 bits).
inline bool positively_associated(const std::vector<Rational>& t) {
  int n = 0;
  while ((std::size_t{1} << n) < t.size()) ++n;
  const auto ups = upsets(n);
  for (auto a : ups)
    for (auto b : ups)
      if (covariance(t, a, b) < 0) return false;
  return true;
}

/// mu(a) mu(b) <= mu(a & b) mu(a | b) for all pairs.
inline bool lattice_condition(const std::vector<Rational>& t) {
  for (std::uint64_t a = 0; a < t.size(); ++a)
    for (std::uint64_t b = 0; b < t.size(); ++b)
      if (t[a] * t[b] > t[a & b] * t[a | b]) return false;
  return true;
}

}  // namespace oracle
