#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "shamap/dataset.hpp"
#include "shamap/error.hpp"
#include "shamap/graph.hpp"
#include "shamap/matrix.hpp"
#include "shamap/parallel.hpp"

namespace shamap {

inline constexpr double kDegenerateNorm = 1e-12;

namespace detail {

inline double angle_between(std::span<const double> xi,
                            std::span<const double> xj,
                            std::span<const double> c, double ni, double nj) {
  double d = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k)
    d += (xi[k] - c[k]) * (xj[k] - c[k]);
  const double cosv = d / (ni * nj);
  if (std::abs(cosv) > 1.0 + 1e-9)
    throw PreconditionError(
        "edge angle: cosine " + std::to_string(cosv) +
        " outside [-1,1] beyond rounding; inputs are inconsistent");
  return std::acos(std::clamp(cosv, -1.0, 1.0));
}

inline double offset_norm(std::span<const double> x,
                          std::span<const double> c) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - c[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace detail

// Angle at the reference point c subtended by x_i and x_j:
// arccos of (x_i-c).(x_j-c) / (|x_i-c| |x_j-c|), clamped into [-1,1] before
// arccos. Result in [0, pi].
inline double edge_angle(std::span<const double> x_i,
                         std::span<const double> x_j,
                         std::span<const double> c) {
  const double ni = detail::offset_norm(x_i, c);
  const double nj = detail::offset_norm(x_j, c);
  if (ni <= kDegenerateNorm || nj <= kDegenerateNorm)
    throw PreconditionError(
        "edge angle: a point coincides with the reference point");
  return detail::angle_between(x_i, x_j, c, ni, nj);
}

// Norms |x_i - c| for all points, rejecting any point that coincides with c
// (the angular metric is undefined there). Lists every offending index.
inline std::vector<double> reference_norms(const PointCloud& cloud,
                                           std::span<const double> c) {
  std::vector<double> norms(cloud.size());
  std::vector<std::size_t> degenerate;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    norms[i] = detail::offset_norm(cloud.point(i), c);
    if (norms[i] <= kDegenerateNorm) degenerate.push_back(i);
  }
  if (!degenerate.empty()) {
    std::ostringstream msg;
    msg << "degenerate reference: point(s)";
    for (std::size_t i : degenerate) msg << ' ' << i;
    msg << " coincide with the reference point";
    throw PreconditionError(msg.str());
  }
  return norms;
}

// Per-edge angles parallel to the graph adjacency, for the ANGULAR weight
// mode and for cheap path re-accumulation.
inline EdgeWeights edge_angle_table(const NeighborGraph& g,
                                    const PointCloud& cloud,
                                    std::span<const double> c) {
  const std::vector<double> norms = reference_norms(cloud, c);
  EdgeWeights w(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    w[i].resize(g.adj[i].size());
    for (std::size_t e = 0; e < g.adj[i].size(); ++e) {
      const std::int32_t j = g.adj[i][e].to;
      w[i][e] = detail::angle_between(cloud.point(i), cloud.point(j), c,
                                      norms[i], norms[j]);
    }
  }
  return w;
}

// Symmetric accumulated-angle matrix: theta[m][n] is the sum of edge angles
// over consecutive nodes of the canonical shortest path from m to n.
struct AngleMatrix {
  Matrix theta;
};

// Elementwise cosine of an AngleMatrix; unit diagonal.
struct CosineMatrix {
  Matrix c;
};

// Walks every canonical geodesic once (per-source shortest-path trees, in
// increasing hop order) and accumulates edge angles along it. Each unordered
// pair takes its value from the lower-index source, so the matrix is
// symmetric by construction. The optional graph enables a precomputed
// edge-angle table, which pays off for high-dimensional points.
inline AngleMatrix accumulated_angles(const PointCloud& cloud,
                                      std::span<const double> c,
                                      const GeodesicResult& geo,
                                      const NeighborGraph* g = nullptr) {
  const std::size_t n = geo.n;
  if (cloud.size() != n)
    throw std::invalid_argument(
        "accumulated_angles: cloud and geodesic sizes differ");
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t v = m + 1; v < n; ++v)
      if (geo.dist[m * n + v] == kInf)
        throw PreconditionError("accumulated_angles: nodes " +
                                std::to_string(m) + " and " +
                                std::to_string(v) +
                                " are not connected in the neighbor graph");
  const std::vector<double> norms = reference_norms(cloud, c);

  // Optional cache of per-edge angles, indexed like the adjacency lists.
  EdgeWeights cache;
  if (g) cache = edge_angle_table(*g, cloud, c);
  auto angle_of = [&](std::int32_t u, std::int32_t v) {
    if (g) {
      const auto& list = g->adj[u];
      std::size_t lo = 0, hi = list.size();
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (list[mid].to < v)
          lo = mid + 1;
        else
          hi = mid;
      }
      if (lo < list.size() && list[lo].to == v) return cache[u][lo];
    }
    return detail::angle_between(cloud.point(u), cloud.point(v), c, norms[u],
                                 norms[v]);
  };

  AngleMatrix out{Matrix(n, n)};
  Matrix& theta = out.theta;
  parallel_for(n, [&](std::size_t s) {
    // Process targets in increasing hop count; a node's parent always has one
    // hop less, so its accumulated angle is ready.
    std::vector<std::int32_t> by_hop(n);
    std::vector<std::int32_t> bucket_start(n + 1, 0);
    const std::int32_t* hops = geo.hops.data() + s * n;
    for (std::size_t v = 0; v < n; ++v) ++bucket_start[hops[v] + 1];
    for (std::size_t b = 1; b <= n; ++b) bucket_start[b] += bucket_start[b - 1];
    {
      std::vector<std::int32_t> cursor(bucket_start.begin(), bucket_start.end());
      for (std::size_t v = 0; v < n; ++v)
        by_hop[cursor[hops[v]]++] = static_cast<std::int32_t>(v);
    }
    const std::int32_t* parent = geo.parent.data() + s * n;
    double* row = &theta(s, 0);
    for (const std::int32_t v : by_hop) {
      if (v == static_cast<std::int32_t>(s)) {
        row[v] = 0.0;
        continue;
      }
      row[v] = row[parent[v]] + angle_of(parent[v], v);
    }
  });
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t v = m + 1; v < n; ++v) theta(v, m) = theta(m, v);
  return out;
}

inline CosineMatrix cosine_matrix(const AngleMatrix& angles) {
  const std::size_t n = angles.theta.rows();
  CosineMatrix out{Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::cos(angles.theta(i, j));
      out.c(i, j) = v;
      out.c(j, i) = v;
    }
    out.c(i, i) = 1.0;
  }
  return out;
}

}  // namespace shamap
