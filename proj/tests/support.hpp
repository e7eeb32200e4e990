#pragma once

// Shared fixture builders and independent oracles for the test suite.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <tuple>
#include <vector>

#include "shamap/shamap.hpp"

namespace testsupport {

using namespace shamap;

// ---- IDX serialization (inverse of parse_idx, fixtures only) ----

inline void be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::vector<std::uint8_t> serialize_idx(const IdxTensor& t) {
  std::vector<std::uint8_t> out;
  out.push_back(0);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(t.kind));
  out.push_back(static_cast<std::uint8_t>(t.dims.size()));
  for (std::size_t d : t.dims) be32(out, static_cast<std::uint32_t>(d));

  auto put16 = [&out](std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
  };
  switch (t.kind) {
    case IdxKind::U8:
      for (std::uint8_t v : std::get<std::vector<std::uint8_t>>(t.data))
        out.push_back(v);
      break;
    case IdxKind::I8:
      for (std::int8_t v : std::get<std::vector<std::int8_t>>(t.data))
        out.push_back(static_cast<std::uint8_t>(v));
      break;
    case IdxKind::I16:
      for (std::int16_t v : std::get<std::vector<std::int16_t>>(t.data))
        put16(static_cast<std::uint16_t>(v));
      break;
    case IdxKind::I32:
      for (std::int32_t v : std::get<std::vector<std::int32_t>>(t.data))
        be32(out, static_cast<std::uint32_t>(v));
      break;
    case IdxKind::F32:
      for (float v : std::get<std::vector<float>>(t.data)) {
        std::uint32_t bits = 0;
        std::memcpy(&bits, &v, 4);
        be32(out, bits);
      }
      break;
    case IdxKind::F64:
      for (double v : std::get<std::vector<double>>(t.data)) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, 8);
        be32(out, static_cast<std::uint32_t>(bits >> 32));
        be32(out, static_cast<std::uint32_t>(bits));
      }
      break;
  }
  return out;
}

// ---- PGM fixtures ----

inline std::vector<std::uint8_t> make_p5(std::size_t w, std::size_t h,
                                         unsigned maxval,
                                         const std::vector<std::uint8_t>& px) {
  std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) +
                       "\n" + std::to_string(maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

// ---- Random fixtures (SplitMix64 keeps them platform-stable) ----

inline Matrix random_matrix(std::size_t rows, std::size_t cols, SplitMix64& rng,
                            double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.next_uniform(lo, hi);
  return m;
}

inline Matrix random_symmetric(std::size_t n, SplitMix64& rng) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = rng.next_uniform(-1.0, 1.0);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

// Weights on the grid k/1024, k in [1, 4096]. Sums of dozens of them are
// exact in doubles, so shortest-path costs compare with == across algorithms
// that add them in different orders.
inline double dyadic_weight(SplitMix64& rng) {
  return static_cast<double>(1 + rng.next_below(4096)) / 1024.0;
}

// Random connected undirected graph: a random spanning tree plus extra
// edges, dyadic weights.
inline NeighborGraph random_connected_graph(std::size_t n, SplitMix64& rng,
                                            std::size_t extra_edges) {
  std::vector<std::tuple<std::int32_t, std::int32_t, double>> pairs;
  for (std::size_t v = 1; v < n; ++v) {
    const std::size_t u = rng.next_below(v);
    pairs.emplace_back(static_cast<std::int32_t>(u),
                       static_cast<std::int32_t>(v), dyadic_weight(rng));
  }
  for (std::size_t e = 0; e < extra_edges && n > 1; ++e) {
    std::size_t a = rng.next_below(n), b = rng.next_below(n);
    if (a == b) continue;
    pairs.emplace_back(static_cast<std::int32_t>(std::min(a, b)),
                       static_cast<std::int32_t>(std::max(a, b)),
                       dyadic_weight(rng));
  }
  // Duplicate pairs with different weights would make the edge ambiguous.
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end(),
                          [](const auto& x, const auto& y) {
                            return std::get<0>(x) == std::get<0>(y) &&
                                   std::get<1>(x) == std::get<1>(y);
                          }),
              pairs.end());
  return shamap::detail::graph_from_pairs(n, KnnRule{1}, pairs);
}

// Per-edge weight table matching the adjacency lists, symmetric per
// undirected edge, dyadic values.
inline EdgeWeights random_edge_weights(const NeighborGraph& g, SplitMix64& rng) {
  EdgeWeights w(g.n);
  std::vector<std::vector<double>> by_pair(g.n);
  for (std::size_t i = 0; i < g.n; ++i) w[i].resize(g.adj[i].size());
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t e = 0; e < g.adj[i].size(); ++e) {
      const std::int32_t j = g.adj[i][e].to;
      if (static_cast<std::size_t>(j) < i) continue;
      w[i][e] = dyadic_weight(rng);
    }
  // mirror: find the reverse slot
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t e = 0; e < g.adj[i].size(); ++e) {
      const std::size_t j = static_cast<std::size_t>(g.adj[i][e].to);
      if (j >= i) continue;
      const auto& list = g.adj[j];
      for (std::size_t f = 0; f < list.size(); ++f)
        if (static_cast<std::size_t>(list[f].to) == i) {
          w[i][e] = w[j][f];
          break;
        }
    }
  return w;
}

// ---- Independent oracles ----

// Re-walks every canonical path and re-sums the per-edge angles in long
// double. Deliberately ignores the tree-accumulation shortcut used by
// accumulated_angles.
inline Matrix naive_accumulated(const PointCloud& cloud,
                                const std::vector<double>& c,
                                const GeodesicResult& geo) {
  const std::size_t n = cloud.size();
  Matrix theta(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t v = 0; v < n; ++v) {
      if (m == v) {
        theta(m, v) = 0.0;
        continue;
      }
      const std::vector<std::int32_t> p = geo.path(m, v);
      long double acc = 0.0L;
      for (std::size_t s = 0; s + 1 < p.size(); ++s)
        acc += static_cast<long double>(
            edge_angle(cloud.point(p[s]), cloud.point(p[s + 1]), c));
      theta(m, v) = static_cast<double>(acc);
    }
  return theta;
}

// Eigenvalues of a symmetric 3x3 via the trigonometric solution of the
// characteristic cubic, in long double. Returned descending.
inline std::array<double, 3> cubic_eigenvalues(const Matrix& a) {
  const long double a00 = a(0, 0), a11 = a(1, 1), a22 = a(2, 2);
  const long double a01 = a(0, 1), a02 = a(0, 2), a12 = a(1, 2);
  const long double q = (a00 + a11 + a22) / 3.0L;
  const long double b00 = a00 - q, b11 = a11 - q, b22 = a22 - q;
  const long double p2 = b00 * b00 + b11 * b11 + b22 * b22 +
                         2.0L * (a01 * a01 + a02 * a02 + a12 * a12);
  const long double p = std::sqrt(p2 / 6.0L);
  std::array<double, 3> out;
  if (p < 1e-30L) {
    out = {static_cast<double>(q), static_cast<double>(q),
           static_cast<double>(q)};
    return out;
  }
  // det(B/p)/2 with B the shifted matrix
  const long double c00 = b00 / p, c11 = b11 / p, c22 = b22 / p;
  const long double c01 = a01 / p, c02 = a02 / p, c12 = a12 / p;
  long double r = (c00 * (c11 * c22 - c12 * c12) -
                   c01 * (c01 * c22 - c12 * c02) +
                   c02 * (c01 * c12 - c11 * c02)) /
                  2.0L;
  if (r < -1.0L) r = -1.0L;
  if (r > 1.0L) r = 1.0L;
  const long double phi = std::acos(r) / 3.0L;
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double e1 = q + 2.0L * p * std::cos(phi);
  const long double e3 = q + 2.0L * p * std::cos(phi + 2.0L * pi / 3.0L);
  const long double e2 = 3.0L * q - e1 - e3;
  out = {static_cast<double>(e1), static_cast<double>(e2),
         static_cast<double>(e3)};
  if (out[0] < out[1]) std::swap(out[0], out[1]);
  if (out[1] < out[2]) std::swap(out[1], out[2]);
  if (out[0] < out[1]) std::swap(out[0], out[1]);
  return out;
}

// ---- Synthetic 28x28 digit fixture ----
//
// Two image families: rings (class 0) and near-vertical strokes (class 1),
// each jittered over a smooth parameter grid, plus a pixel-blend chain
// between one ring and one stroke so the 20-NN union graph of the full set
// stays connected. 250 images per class.

namespace digits {

inline void draw_ring(std::vector<std::uint8_t>& img, double cx, double cy,
                      double radius, double thickness, double intensity) {
  for (int y = 0; y < 28; ++y)
    for (int x = 0; x < 28; ++x) {
      const double r = std::hypot(x - cx, y - cy);
      const double d = std::abs(r - radius);
      if (d < thickness) {
        const double v = intensity * (1.0 - d / thickness);
        const std::uint8_t pv =
            static_cast<std::uint8_t>(std::lround(255.0 * v));
        img[y * 28 + x] = std::max(img[y * 28 + x], pv);
      }
    }
}

inline void draw_stroke(std::vector<std::uint8_t>& img, double x0, double tilt,
                        double thickness, double intensity) {
  for (int y = 3; y < 25; ++y)
    for (int x = 0; x < 28; ++x) {
      const double cx = x0 + tilt * (y - 14);
      const double d = std::abs(x - cx);
      if (d < thickness) {
        const double v = intensity * (1.0 - d / thickness);
        const std::uint8_t pv =
            static_cast<std::uint8_t>(std::lround(255.0 * v));
        img[y * 28 + x] = std::max(img[y * 28 + x], pv);
      }
    }
}

inline std::vector<std::uint8_t> ring_image(std::size_t i) {
  // radius sweeps 4 -> 8 across the family
  std::vector<std::uint8_t> img(28 * 28, 0);
  const double radius = 4.0 + 4.0 * static_cast<double>(i) / 229.0;
  draw_ring(img, 13.5, 13.5, radius, 2.2, 0.9);
  return img;
}

inline std::vector<std::uint8_t> stroke_image(std::size_t i) {
  // column sweeps 8 -> 20 across the family
  std::vector<std::uint8_t> img(28 * 28, 0);
  const double x0 = 8.0 + 12.0 * static_cast<double>(i) / 229.0;
  draw_stroke(img, x0, 0.0, 2.0, 0.9);
  return img;
}

inline std::vector<std::uint8_t> blend(const std::vector<std::uint8_t>& a,
                                       const std::vector<std::uint8_t>& b,
                                       double lam) {
  std::vector<std::uint8_t> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    out[k] = static_cast<std::uint8_t>(
        std::lround((1.0 - lam) * a[k] + lam * b[k]));
  return out;
}

}  // namespace digits

// Returns (images tensor [500,28,28] u8, labels tensor [500] u8). The rows
// form one smooth chain in pixel space so a 20-NN graph stays connected:
// 230 rings with growing radius, 40 cross-fade frames, then 230 strokes
// sliding rightward. First 250 rows are labeled 0, the rest 1; the label
// flip lands mid-fade.
inline std::pair<IdxTensor, IdxTensor> digit_fixture() {
  const std::vector<std::uint8_t> ring_end = digits::ring_image(229);
  const std::vector<std::uint8_t> stroke_start = digits::stroke_image(0);

  std::vector<std::uint8_t> pixels;
  std::vector<std::uint8_t> labels;
  pixels.reserve(500 * 784);
  auto push = [&pixels](const std::vector<std::uint8_t>& img) {
    pixels.insert(pixels.end(), img.begin(), img.end());
  };

  for (std::size_t i = 0; i < 230; ++i) push(digits::ring_image(i));
  for (std::size_t b = 1; b <= 40; ++b)
    push(digits::blend(ring_end, stroke_start, static_cast<double>(b) / 41.0));
  for (std::size_t i = 0; i < 230; ++i) push(digits::stroke_image(i));
  for (std::size_t i = 0; i < 250; ++i) labels.push_back(0);
  for (std::size_t i = 0; i < 250; ++i) labels.push_back(1);

  IdxTensor images;
  images.kind = IdxKind::U8;
  images.dims = {500, 28, 28};
  images.data = std::move(pixels);

  IdxTensor labs;
  labs.kind = IdxKind::U8;
  labs.dims = {500};
  labs.data = std::move(labels);
  return {std::move(images), std::move(labs)};
}

}  // namespace testsupport
