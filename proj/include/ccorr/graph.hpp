#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ccorr/caps.hpp"

namespace ccorr {

struct Edge {
  int a = 0;
  int b = 0;

  bool is_loop() const noexcept { return a == b; }
  bool touches(int v) const noexcept { return a == v || b == v; }
  auto operator<=>(const Edge&) const = default;
};

/// Finite undirected multigraph. Loops and parallel edges are allowed; the
/// order of the edge list fixes the bit layout of every EdgeConfig.
class Graph {
 public:
  static constexpr int kMaxEdges = 63;

  Graph() = default;

  Graph(int vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count), edges_(std::move(edges)) {
    if (vertex_count_ < 0) throw std::invalid_argument("negative vertex count");
    if (static_cast<int>(edges_.size()) > kMaxEdges) throw std::invalid_argument("more than 63 edges");
    for (const auto& e : edges_)
      if (e.a < 0 || e.b < 0 || e.a >= vertex_count_ || e.b >= vertex_count_)
        throw std::invalid_argument("edge endpoint out of range");
  }

  int vertex_count() const noexcept { return vertex_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int i) const { return edges_.at(static_cast<std::size_t>(i)); }

  /// Number of edge configurations, 2^|E|.
  std::uint64_t config_count() const noexcept { return std::uint64_t{1} << edges_.size(); }

  bool operator==(const Graph&) const = default;

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
};

/// A 0/1 assignment to the edges of a graph; bit i set means edge i is open.
class EdgeConfig {
 public:
  constexpr EdgeConfig() = default;
  constexpr explicit EdgeConfig(std::uint64_t rank) : rank_(rank) {}

  constexpr std::uint64_t rank() const noexcept { return rank_; }
  constexpr bool open(int e) const noexcept { return (rank_ >> e) & 1U; }
  int open_count() const noexcept { return std::popcount(rank_); }
  constexpr EdgeConfig with(int e, bool is_open) const noexcept {
    return EdgeConfig(is_open ? (rank_ | (std::uint64_t{1} << e)) : (rank_ & ~(std::uint64_t{1} << e)));
  }
  /// True iff every edge open here is also open in other.
  constexpr bool below(EdgeConfig other) const noexcept { return (rank_ & ~other.rank_) == 0; }

  constexpr auto operator<=>(const EdgeConfig&) const = default;

 private:
  std::uint64_t rank_ = 0;
};

inline void check_config(const Graph& g, EdgeConfig c) {
  if (c.rank() >= g.config_count())
    throw std::out_of_range("configuration rank " + std::to_string(c.rank()) + " out of range for " +
                            std::to_string(g.edge_count()) + " edges");
}

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1), count_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns false if x and y were already joined.
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
    --count_;
    return true;
  }

  bool same(int x, int y) { return find(x) == find(y); }
  int count() const noexcept { return count_; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int count_;
};

/// Set partition of {0..n-1}. Blocks are numbered in order of their minimum
/// element, which makes the representation canonical.
class Partition {
 public:
  Partition() = default;

  /// Any labelling (equal label = same block) is accepted and canonicalized.
  static Partition from_labels(const std::vector<int>& labels) {
    Partition p;
    p.labels_.resize(labels.size());
    std::vector<std::pair<int, int>> seen;
    for (std::size_t v = 0; v < labels.size(); ++v) {
      auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& s) { return s.first == labels[v]; });
      int block;
      if (it == seen.end()) {
        block = static_cast<int>(seen.size());
        seen.emplace_back(labels[v], block);
        p.blocks_.emplace_back();
      } else {
        block = it->second;
      }
      p.labels_[v] = block;
      p.blocks_[static_cast<std::size_t>(block)].push_back(static_cast<int>(v));
    }
    return p;
  }

  static Partition singletons(int n) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), 0);
    return from_labels(labels);
  }

  static Partition whole(int n) { return from_labels(std::vector<int>(static_cast<std::size_t>(n), 0)); }

  int vertex_count() const noexcept { return static_cast<int>(labels_.size()); }
  int block_count() const noexcept { return static_cast<int>(blocks_.size()); }
  int block_of(int v) const { return labels_.at(static_cast<std::size_t>(v)); }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }

  bool operator==(const Partition& o) const { return labels_ == o.labels_; }
  auto operator<=>(const Partition& o) const { return labels_ <=> o.labels_; }

 private:
  std::vector<int> labels_;
  std::vector<std::vector<int>> blocks_;
};

inline Partition component_partition(const Graph& g, EdgeConfig c) {
  check_config(g, c);
  DisjointSets ds(g.vertex_count());
  for (int i = 0; i < g.edge_count(); ++i)
    if (c.open(i)) ds.unite(g.edge(i).a, g.edge(i).b);
  std::vector<int> labels(static_cast<std::size_t>(g.vertex_count()));
  for (int v = 0; v < g.vertex_count(); ++v) labels[static_cast<std::size_t>(v)] = ds.find(v);
  return Partition::from_labels(labels);
}

/// k(c): clusters of the open subgraph, isolated vertices included.
inline int component_count(const Graph& g, EdgeConfig c) {
  check_config(g, c);
  DisjointSets ds(g.vertex_count());
  for (int i = 0; i < g.edge_count(); ++i)
    if (c.open(i)) ds.unite(g.edge(i).a, g.edge(i).b);
  return ds.count();
}

/// Open edges form a forest iff |open| + k = |V|; an open loop always breaks this.
inline bool is_forest(const Graph& g, EdgeConfig c) {
  return c.open_count() + component_count(g, c) == g.vertex_count();
}

inline bool is_connected(const Graph& g, EdgeConfig c) { return component_count(g, c) == 1; }

/// A graph minor together with how it maps onto the original.
struct Minor {
  Graph graph;
  std::vector<int> vertex_map;  // old vertex -> new vertex
  std::vector<int> edge_map;    // old edge -> new edge, -1 for the removed edge
};

namespace detail {

inline std::vector<int> removal_edge_map(int edge_count, int removed) {
  std::vector<int> map(static_cast<std::size_t>(edge_count));
  for (int i = 0; i < edge_count; ++i) map[static_cast<std::size_t>(i)] = i < removed ? i : (i == removed ? -1 : i - 1);
  return map;
}

inline void check_edge_index(const Graph& g, int e) {
  if (e < 0 || e >= g.edge_count()) throw std::out_of_range("edge index " + std::to_string(e) + " out of range");
}

}  // namespace detail

/// G - e. Surviving edges keep their relative order.
inline Graph delete_edge(const Graph& g, int e) {
  detail::check_edge_index(g, e);
  std::vector<Edge> edges = g.edges();
  edges.erase(edges.begin() + e);
  return Graph(g.vertex_count(), std::move(edges));
}

inline Minor deletion_minor(const Graph& g, int e) {
  std::vector<int> identity(static_cast<std::size_t>(g.vertex_count()));
  std::iota(identity.begin(), identity.end(), 0);
  return Minor{delete_edge(g, e), std::move(identity), detail::removal_edge_map(g.edge_count(), e)};
}

/// G/e. The higher endpoint is merged into the lower one and vertices above it
/// shift down by one. Parallel edges survive; edges parallel to e become
/// loops. Contracting a loop only removes it.
inline Minor contract_edge(const Graph& g, int e) {
  detail::check_edge_index(g, e);
  const Edge target = g.edge(e);
  if (target.is_loop()) return deletion_minor(g, e);
  const int keep = std::min(target.a, target.b);
  const int drop = std::max(target.a, target.b);
  std::vector<int> vmap(static_cast<std::size_t>(g.vertex_count()));
  for (int w = 0; w < g.vertex_count(); ++w) vmap[static_cast<std::size_t>(w)] = w < drop ? w : (w == drop ? keep : w - 1);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(g.edge_count() - 1));
  for (int i = 0; i < g.edge_count(); ++i) {
    if (i == e) continue;
    const Edge& old = g.edge(i);
    edges.push_back(Edge{vmap[static_cast<std::size_t>(old.a)], vmap[static_cast<std::size_t>(old.b)]});
  }
  return Minor{Graph(g.vertex_count() - 1, std::move(edges)), std::move(vmap),
               detail::removal_edge_map(g.edge_count(), e)};
}

/// Removes bit e from a configuration, shifting higher bits down.
constexpr EdgeConfig drop_edge_bit(EdgeConfig c, int e) noexcept {
  const std::uint64_t low = c.rank() & ((std::uint64_t{1} << e) - 1);
  const std::uint64_t high = (c.rank() >> (e + 1)) << e;
  return EdgeConfig(low | high);
}

/// Inverse of drop_edge_bit with bit e set to the given value.
constexpr EdgeConfig insert_edge_bit(EdgeConfig c, int e, bool value) noexcept {
  const std::uint64_t low = c.rank() & ((std::uint64_t{1} << e) - 1);
  const std::uint64_t high = (c.rank() >> e) << (e + 1);
  return EdgeConfig(low | high | (value ? (std::uint64_t{1} << e) : 0));
}

/// Vertices x = 0, y = 1 and u_i = i + 1 for i = 1..m. Edge 0 is {x, y};
/// edges 2i-1 and 2i are {x, u_i} and {u_i, y}.
///
/// The layout is inferred: it is the two-terminal family whose uniform
/// spanning forest makes {e open} and {connected} independent at m = 6 and
/// strictly negatively correlated for every m > 6.
struct Figure1Graph {
  Graph graph;
  int x = 0;
  int y = 1;
  int e = 0;
};

inline Figure1Graph figure1_graph(int m) {
  if (m < 1) throw std::invalid_argument("figure1_graph requires m >= 1");
  std::vector<Edge> edges{{0, 1}};
  for (int i = 1; i <= m; ++i) {
    edges.push_back({0, i + 1});
    edges.push_back({i + 1, 1});
  }
  return Figure1Graph{Graph(m + 2, std::move(edges)), 0, 1, 0};
}

// Small named families used by the CLI and tests.
inline Graph path_graph(int n) {
  if (n < 1) throw std::invalid_argument("path needs at least one vertex");
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return Graph(n, std::move(edges));
}

inline Graph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least three vertices");
  Graph p = path_graph(n);
  std::vector<Edge> edges = p.edges();
  edges.push_back({n - 1, 0});
  return Graph(n, std::move(edges));
}

inline Graph complete_graph(int n) {
  if (n < 1) throw std::invalid_argument("complete graph needs at least one vertex");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

inline Graph triangle() { return cycle_graph(3); }

namespace detail {

// Vertex pairs (u < v) in lexicographic order; bit i of an adjacency code
// stands for pair i.
inline std::vector<std::pair<int, int>> vertex_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  return pairs;
}

inline bool code_connected(int n, const std::vector<std::pair<int, int>>& pairs, std::uint64_t code) {
  DisjointSets ds(n);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if ((code >> i) & 1U) ds.unite(pairs[i].first, pairs[i].second);
  return ds.count() == 1;
}

inline std::uint64_t canonical_code(int n, const std::vector<std::pair<int, int>>& pairs, std::uint64_t code) {
  std::vector<int> index(static_cast<std::size_t>(n * n), -1);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    index[static_cast<std::size_t>(pairs[i].first * n + pairs[i].second)] = static_cast<int>(i);
    index[static_cast<std::size_t>(pairs[i].second * n + pairs[i].first)] = static_cast<int>(i);
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t mapped = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if ((code >> i) & 1U)
        mapped |= std::uint64_t{1} << index[static_cast<std::size_t>(perm[pairs[i].first] * n + perm[pairs[i].second])];
    best = std::min(best, mapped);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

/// Connected simple graphs with at most max_vertices vertices and max_edges
/// edges, one per isomorphism class. Ordered by vertex count, edge count and
/// canonical adjacency code; edges are listed in lexicographic pair order of
/// the canonical labelling.
inline std::vector<Graph> enumerate_connected_graphs(int max_vertices, int max_edges) {
  if (max_vertices < 1 || max_vertices > 7) throw std::invalid_argument("max_vertices must be in [1, 7]");
  std::vector<Graph> out;
  for (int n = 1; n <= max_vertices; ++n) {
    const auto pairs = detail::vertex_pairs(n);
    std::set<std::pair<int, std::uint64_t>> classes;
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    for (std::uint64_t code = 0; code < total; ++code) {
      const int m = std::popcount(code);
      if (m > max_edges || !detail::code_connected(n, pairs, code)) continue;
      classes.emplace(m, detail::canonical_code(n, pairs, code));
    }
    for (const auto& [m, code] : classes) {
      std::vector<Edge> edges;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if ((code >> i) & 1U) edges.push_back({pairs[i].first, pairs[i].second});
      out.emplace_back(n, std::move(edges));
    }
  }
  return out;
}

class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Text format: "vertices N", then one "u v" line per edge (0-based, order
/// significant). Blank lines and lines starting with '#' are ignored.
inline Graph parse_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  int vertex_count = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (vertex_count < 0) {
      std::string keyword;
      if (!(fields >> keyword >> vertex_count) || keyword != "vertices" || vertex_count < 0)
        throw GraphParseError(line_no, "expected 'vertices N'");
    } else {
      Edge e;
      if (!(fields >> e.a >> e.b)) throw GraphParseError(line_no, "expected 'u v'");
      if (e.a < 0 || e.b < 0 || e.a >= vertex_count || e.b >= vertex_count)
        throw GraphParseError(line_no, "endpoint out of range");
      edges.push_back(e);
    }
    std::string rest;
    if (fields >> rest) throw GraphParseError(line_no, "trailing text '" + rest + "'");
  }
  if (vertex_count < 0) throw GraphParseError(line_no, "missing 'vertices N' header");
  if (static_cast<int>(edges.size()) > Graph::kMaxEdges) throw GraphParseError(line_no, "more than 63 edges");
  return Graph(vertex_count, std::move(edges));
}

inline Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << "vertices " << g.vertex_count() << '\n';
  for (const auto& e : g.edges()) out << e.a << ' ' << e.b << '\n';
  return out.str();
}

inline void enforce_edge_cap(const Graph& g, const Caps& caps) { enforce_cap("max-edges", g.edge_count(), caps.max_edges); }

}  // namespace ccorr
