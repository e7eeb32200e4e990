#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "shamap/dataset.hpp"
#include "shamap/error.hpp"
#include "shamap/parallel.hpp"

namespace shamap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct KnnRule {
  std::size_t k = 2;
};
struct EpsRule {
  double eps = 1.0;
};
using BuildRule = std::variant<KnnRule, EpsRule>;

// Undirected weighted adjacency. Edge lengths are the Euclidean distances
// between the endpoints at build time; zero-length edges (duplicate points)
// are legal. Adjacency lists are sorted by neighbor index.
struct NeighborGraph {
  struct Edge {
    std::int32_t to;
    double length;
  };

  std::size_t n = 0;
  std::vector<std::vector<Edge>> adj;
  BuildRule rule;

  std::size_t edge_count() const {
    std::size_t deg = 0;
    for (const auto& list : adj) deg += list.size();
    return deg / 2;
  }
};

// Per-edge weights parallel to NeighborGraph::adj (same list order). Used to
// hand per-edge angles to the ANGULAR weight mode.
using EdgeWeights = std::vector<std::vector<double>>;

namespace detail {

inline NeighborGraph graph_from_pairs(
    std::size_t n, const BuildRule& rule,
    std::vector<std::tuple<std::int32_t, std::int32_t, double>>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  NeighborGraph g;
  g.n = n;
  g.rule = rule;
  g.adj.resize(n);
  for (const auto& [i, j, len] : pairs) {
    g.adj[i].push_back({j, len});
    g.adj[j].push_back({i, len});
  }
  for (auto& list : g.adj)
    std::sort(list.begin(), list.end(),
              [](const NeighborGraph::Edge& a, const NeighborGraph::Edge& b) {
                return a.to < b.to;
              });
  return g;
}

}  // namespace detail

// K-nearest-neighbor graph with union symmetrization: an i-j edge exists iff
// j is among i's K nearest or i among j's K nearest. Exact brute force;
// distance ties break toward the lower index.
inline NeighborGraph knn_graph(const PointCloud& cloud, std::size_t k) {
  const std::size_t n = cloud.size();
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("knn_graph: K must be in [1, n-1], got " +
                                std::to_string(k));
  std::vector<std::tuple<std::int32_t, std::int32_t, double>> pairs;
  pairs.reserve(n * k);
  std::vector<std::pair<double, std::int32_t>> cand(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      cand[c++] = {squared_distance(cloud.point(i), cloud.point(j)),
                   static_cast<std::int32_t>(j)};
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (std::size_t r = 0; r < k; ++r) {
      const std::int32_t j = cand[r].second;
      const std::int32_t a = std::min<std::int32_t>(i, j);
      const std::int32_t b = std::max<std::int32_t>(i, j);
      pairs.emplace_back(a, b,
                         euclidean_distance(cloud.point(a), cloud.point(b)));
    }
  }
  return detail::graph_from_pairs(n, KnnRule{k}, pairs);
}

// Edge iff Euclidean distance <= eps.
inline NeighborGraph eps_graph(const PointCloud& cloud, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps_graph: eps must be > 0");
  const std::size_t n = cloud.size();
  std::vector<std::tuple<std::int32_t, std::int32_t, double>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = euclidean_distance(cloud.point(i), cloud.point(j));
      if (d <= eps)
        pairs.emplace_back(static_cast<std::int32_t>(i),
                           static_cast<std::int32_t>(j), d);
    }
  return detail::graph_from_pairs(n, EpsRule{eps}, pairs);
}

// Component ids in [0, #components), assigned in order of first discovery
// scanning nodes 0..n-1.
inline std::vector<int> connected_components(const NeighborGraph& g) {
  std::vector<int> comp(g.n, -1);
  int next_id = 0;
  std::vector<std::int32_t> stack;
  for (std::size_t s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next_id;
    stack.push_back(static_cast<std::int32_t>(s));
    while (!stack.empty()) {
      const std::int32_t u = stack.back();
      stack.pop_back();
      for (const auto& e : g.adj[u]) {
        if (comp[e.to] < 0) {
          comp[e.to] = next_id;
          stack.push_back(e.to);
        }
      }
    }
    ++next_id;
  }
  return comp;
}

enum class WeightMode { Euclidean, Angular };

// All-pairs shortest paths with canonical path recovery.
//
// dist is exactly symmetric (each pair's value comes from the lower-index
// source). parent[s*n+v] is the predecessor of v on the canonical s->v path;
// next_hop[m*n+v] the first step from m toward v. Following next_hop from m
// reaches v in at most n-1 steps whenever dist is finite.
struct GeodesicResult {
  std::size_t n = 0;
  std::vector<double> dist;        // n*n
  std::vector<std::int32_t> parent;    // n*n, -1 on diagonal / unreachable
  std::vector<std::int32_t> next_hop;  // n*n, m on diagonal, -1 unreachable
  std::vector<std::int32_t> hops;      // n*n, -1 unreachable

  double distance(std::size_t m, std::size_t v) const { return dist[m * n + v]; }

  // Canonical path m = p_0, p_1, ..., p_W+1 = v.
  std::vector<std::int32_t> path(std::size_t m, std::size_t v) const {
    if (dist[m * n + v] == kInf)
      throw PreconditionError("path: nodes " + std::to_string(m) + " and " +
                              std::to_string(v) + " are not connected");
    std::vector<std::int32_t> out{static_cast<std::int32_t>(m)};
    std::size_t cur = m;
    while (cur != v) {
      cur = static_cast<std::size_t>(next_hop[cur * n + v]);
      out.push_back(static_cast<std::int32_t>(cur));
    }
    return out;
  }
};

namespace detail {

inline const EdgeWeights* select_weights(const NeighborGraph& g,
                                         WeightMode mode,
                                         const EdgeWeights* angles) {
  if (mode == WeightMode::Angular) {
    if (!angles)
      throw std::invalid_argument(
          "all-pairs shortest: ANGULAR mode requires a per-edge angle table");
    if (angles->size() != g.n)
      throw std::invalid_argument(
          "all-pairs shortest: angle table does not cover the graph");
    for (std::size_t i = 0; i < g.n; ++i)
      if ((*angles)[i].size() != g.adj[i].size())
        throw std::invalid_argument(
            "all-pairs shortest: angle table does not cover the graph");
  }
  return mode == WeightMode::Angular ? angles : nullptr;
}

// Dijkstra from `s`. Ties on distance prefer fewer hops, then the smaller
// predecessor index, so the canonical paths are deterministic.
inline void dijkstra_row(const NeighborGraph& g, const EdgeWeights* w,
                         std::size_t s, double* dist, std::int32_t* parent,
                         std::int32_t* next_hop, std::int32_t* hops) {
  const std::size_t n = g.n;
  std::fill(dist, dist + n, kInf);
  std::fill(parent, parent + n, -1);
  std::fill(next_hop, next_hop + n, -1);
  std::fill(hops, hops + n, -1);
  dist[s] = 0.0;
  hops[s] = 0;
  next_hop[s] = static_cast<std::int32_t>(s);

  using Entry = std::tuple<double, std::int32_t, std::int32_t>;  // d, h, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  queue.emplace(0.0, 0, static_cast<std::int32_t>(s));
  std::vector<char> done(n, 0);
  std::vector<std::int32_t> order;
  order.reserve(n);

  while (!queue.empty()) {
    const auto [d, h, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    order.push_back(u);
    const auto& edges = g.adj[u];
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::int32_t v = edges[e].to;
      if (done[v]) continue;
      const double nd = dist[u] + (w ? (*w)[u][e] : edges[e].length);
      const std::int32_t nh = hops[u] + 1;
      if (nd < dist[v]) {
        dist[v] = nd;
        hops[v] = nh;
        parent[v] = u;
        queue.emplace(nd, nh, v);
      } else if (nd == dist[v] &&
                 (nh < hops[v] || (nh == hops[v] && u < parent[v]))) {
        hops[v] = nh;
        parent[v] = u;
      }
    }
  }
  // Successors, derivable in finalization order because a node's parent is
  // always finalized before the node itself.
  for (const std::int32_t v : order) {
    if (v == static_cast<std::int32_t>(s)) continue;
    next_hop[v] =
        parent[v] == static_cast<std::int32_t>(s) ? v : next_hop[parent[v]];
  }
}

}  // namespace detail

// Repeated single-source runs with a priority queue; sources are independent
// so rows may be computed concurrently. See GeodesicResult for the contract.
inline GeodesicResult all_pairs_shortest(const NeighborGraph& g,
                                         WeightMode mode = WeightMode::Euclidean,
                                         const EdgeWeights* angles = nullptr) {
  const EdgeWeights* w = detail::select_weights(g, mode, angles);
  const std::size_t n = g.n;
  GeodesicResult r;
  r.n = n;
  r.dist.resize(n * n);
  r.parent.resize(n * n);
  r.next_hop.resize(n * n);
  r.hops.resize(n * n);

  parallel_for(n, [&](std::size_t s) {
    detail::dijkstra_row(g, w, s, r.dist.data() + s * n,
                         r.parent.data() + s * n, r.next_hop.data() + s * n,
                         r.hops.data() + s * n);
  });
  // Mirror the upper triangle so dist is exactly symmetric; per-source sums
  // of the same edge weights can differ in the last ulp otherwise.
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t v = m + 1; v < n; ++v) r.dist[v * n + m] = r.dist[m * n + v];
  return r;
}

// O(n^3) dynamic program kept as the reference algorithm and test oracle for
// all_pairs_shortest. Same contract; tie-breaking is deterministic via the
// ascending pivot order with a fewer-hops preference.
inline GeodesicResult floyd_warshall_oracle(
    const NeighborGraph& g, WeightMode mode = WeightMode::Euclidean,
    const EdgeWeights* angles = nullptr) {
  const EdgeWeights* w = detail::select_weights(g, mode, angles);
  const std::size_t n = g.n;
  GeodesicResult r;
  r.n = n;
  r.dist.assign(n * n, kInf);
  r.parent.assign(n * n, -1);
  r.next_hop.assign(n * n, -1);
  r.hops.assign(n * n, -1);

  for (std::size_t i = 0; i < n; ++i) {
    r.dist[i * n + i] = 0.0;
    r.hops[i * n + i] = 0;
    r.next_hop[i * n + i] = static_cast<std::int32_t>(i);
    const auto& edges = g.adj[i];
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::int32_t j = edges[e].to;
      r.dist[i * n + j] = w ? (*w)[i][e] : edges[e].length;
      r.hops[i * n + j] = 1;
      r.next_hop[i * n + j] = j;
      r.parent[i * n + j] = static_cast<std::int32_t>(i);
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (r.dist[i * n + k] == kInf || i == k) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (r.dist[k * n + j] == kInf || j == k || j == i) continue;
        const double nd = r.dist[i * n + k] + r.dist[k * n + j];
        const std::int32_t nh = r.hops[i * n + k] + r.hops[k * n + j];
        if (nd < r.dist[i * n + j] ||
            (nd == r.dist[i * n + j] && nh < r.hops[i * n + j])) {
          r.dist[i * n + j] = nd;
          r.hops[i * n + j] = nh;
          r.next_hop[i * n + j] = r.next_hop[i * n + k];
          r.parent[i * n + j] = r.parent[k * n + j];
        }
      }
    }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t v = m + 1; v < n; ++v) r.dist[v * n + m] = r.dist[m * n + v];
  return r;
}

// Indices kept when restricting to the largest connected component (smallest
// component id wins ties, i.e. the one discovered first).
inline std::vector<std::size_t> largest_component_indices(
    const NeighborGraph& g) {
  const std::vector<int> comp = connected_components(g);
  const int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> sizes(ncomp, 0);
  for (int c : comp) ++sizes[c];
  const int best = static_cast<int>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<std::size_t> keep;
  keep.reserve(sizes[best]);
  for (std::size_t i = 0; i < comp.size(); ++i)
    if (comp[i] == best) keep.push_back(i);
  return keep;
}

}  // namespace shamap
