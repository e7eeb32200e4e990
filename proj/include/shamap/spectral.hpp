#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shamap/angles.hpp"
#include "shamap/dataset.hpp"
#include "shamap/error.hpp"
#include "shamap/graph.hpp"
#include "shamap/matrix.hpp"

namespace shamap {

// Eigenvalues sorted descending with matching unit eigenvectors in the
// columns of `vectors`. Sign convention: the largest-magnitude entry of each
// eigenvector is positive (first such entry on exact ties).
struct EigenPairs {
  std::vector<double> values;
  Matrix vectors;
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Sweeps the upper
// triangle in row-major order until the off-diagonal Frobenius norm drops
// below 1e-11 * |A|_F, up to 100 sweeps. Deterministic: no pivot searching,
// fixed rotation order.
inline EigenPairs jacobi_eigen(const Matrix& input) {
  if (input.rows() != input.cols())
    throw std::invalid_argument("jacobi_eigen: matrix is not square");
  if (!input.all_finite())
    throw std::invalid_argument("jacobi_eigen: non-finite entry");
  const std::size_t n = input.rows();
  const double scale = std::max(1.0, input.frobenius_norm());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(input(i, j) - input(j, i)) > 1e-9 * scale)
        throw PreconditionError("jacobi_eigen: matrix is not symmetric");

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (input(i, j) + input(j, i));
  Matrix v = Matrix::identity(n);

  const double tol = 1e-11 * a.frobenius_norm();
  auto off_norm = [&a, n] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  bool converged = off_norm() <= tol;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(p, k) = a(k, p);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_norm() <= tol;
  }
  if (!converged)
    throw PreconditionError("jacobi_eigen: no convergence in 100 sweeps");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&a](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenPairs out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t src = idx[p];
    out.values[p] = a(src, src);
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double mag = std::abs(v(k, src));
      if (mag > best) {
        best = mag;
        arg = k;
      }
    }
    const double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, p) = sign * v(k, src);
  }
  return out;
}

enum class EmbedMethod { Shamap, Isomap, Sammon };

inline const char* method_name(EmbedMethod m) {
  switch (m) {
    case EmbedMethod::Shamap: return "shamap";
    case EmbedMethod::Isomap: return "isomap";
    case EmbedMethod::Sammon: return "sammon";
  }
  return "?";
}

// Low-dimensional coordinates plus the eigenvalue spectrum that produced
// them. For Sammon the spectrum is the initializer's; `stress` and
// `converged` are only meaningful there.
struct Embedding {
  Matrix coords;                 // n x d
  std::vector<double> spectrum;  // full, descending
  EmbedMethod method = EmbedMethod::Shamap;
  std::size_t d = 2;
  std::optional<double> stress;
  bool converged = true;
};

struct EmbedOptions {
  bool clamp_negative = false;  // clamp negative selected eigenvalues to zero
  bool center = false;          // double-center C before decomposing (Shamap)
};

namespace detail {

// B = -1/2 J S J computed via row/column means; upper triangle mirrored so
// the result is exactly symmetric.
inline Matrix double_center(const Matrix& s) {
  const std::size_t n = s.rows();
  std::vector<double> row_mean(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += s(i, j);
    row_mean[i] = acc / static_cast<double>(n);
  }
  double total = 0.0;
  for (double v : row_mean) total += v;
  total /= static_cast<double>(n);

  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = -0.5 * (s(i, j) - row_mean[i] - row_mean[j] + total);
      b(i, j) = v;
      b(j, i) = v;
    }
  return b;
}

inline void check_selected_spectrum(const std::vector<double>& values,
                                    std::size_t d, bool clamp) {
  if (d < 1) throw std::invalid_argument("embedding dimension must be >= 1");
  if (d > values.size())
    throw std::invalid_argument("embedding dimension exceeds point count");
  if (clamp) return;
  for (std::size_t p = 0; p < d; ++p)
    if (!(values[p] > 0.0))
      throw PreconditionError(
          "spectral deficiency: eigenvalue " + std::to_string(p + 1) + " is " +
          std::to_string(values[p]) +
          " (<= 0); lower d or enable negative-eigenvalue clamping");
}

inline NeighborGraph build_rule_graph(const PointCloud& cloud,
                                      const BuildRule& rule) {
  if (std::holds_alternative<KnnRule>(rule))
    return knn_graph(cloud, std::get<KnnRule>(rule).k);
  return eps_graph(cloud, std::get<EpsRule>(rule).eps);
}

inline void require_connected(const NeighborGraph& g) {
  const std::vector<int> comp = connected_components(g);
  const int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  if (ncomp > 1) {
    std::vector<std::size_t> sizes(ncomp, 0);
    for (int c : comp) ++sizes[c];
    std::string msg = "neighbor graph is disconnected (" +
                      std::to_string(ncomp) + " components, sizes";
    for (std::size_t s : sizes) msg += ' ' + std::to_string(s);
    msg += "); raise K/eps or restrict to the largest component";
    throw PreconditionError(msg);
  }
}

}  // namespace detail

// The full Shamap pipeline: neighbor graph -> shortest paths -> accumulated
// angles along them -> cosine matrix -> eigendecomposition. Coordinate p of
// point i is sqrt(lambda_p) * u_p[i] * |x_i - c|.
inline Embedding shamap_embed(const PointCloud& cloud, const ReferencePoint& ref,
                              const BuildRule& rule, std::size_t d,
                              WeightMode mode = WeightMode::Euclidean,
                              const EmbedOptions& opts = {}) {
  const std::vector<double> c = resolve_reference(ref, cloud);
  const std::vector<double> norms = reference_norms(cloud, c);
  const NeighborGraph g = detail::build_rule_graph(cloud, rule);
  detail::require_connected(g);

  EdgeWeights angle_table;
  const EdgeWeights* table = nullptr;
  if (mode == WeightMode::Angular) {
    angle_table = edge_angle_table(g, cloud, c);
    table = &angle_table;
  }
  const GeodesicResult geo = all_pairs_shortest(g, mode, table);
  const AngleMatrix theta = accumulated_angles(cloud, c, geo, &g);
  CosineMatrix cosm = cosine_matrix(theta);
  if (opts.center) cosm.c = detail::double_center(cosm.c);

  const EigenPairs eig = jacobi_eigen(cosm.c);
  detail::check_selected_spectrum(eig.values, d, opts.clamp_negative);

  const std::size_t n = cloud.size();
  Embedding emb;
  emb.method = EmbedMethod::Shamap;
  emb.d = d;
  emb.spectrum = eig.values;
  emb.coords = Matrix(n, d);
  for (std::size_t p = 0; p < d; ++p) {
    const double lambda = std::max(eig.values[p], 0.0);
    const double root = std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i)
      emb.coords(i, p) = root * eig.vectors(i, p) * norms[i];
  }
  return emb;
}

// Classical MDS over graph geodesics: double-center the squared distance
// matrix and read coordinates off the top eigenpairs.
inline Embedding isomap_embed(const PointCloud& cloud, const BuildRule& rule,
                              std::size_t d, const EmbedOptions& opts = {}) {
  const NeighborGraph g = detail::build_rule_graph(cloud, rule);
  detail::require_connected(g);
  const GeodesicResult geo = all_pairs_shortest(g, WeightMode::Euclidean);

  const std::size_t n = cloud.size();
  Matrix sq(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = geo.dist[i * n + j];
      sq(i, j) = v * v;
    }
  const Matrix b = detail::double_center(sq);
  const EigenPairs eig = jacobi_eigen(b);
  detail::check_selected_spectrum(eig.values, d, opts.clamp_negative);

  Embedding emb;
  emb.method = EmbedMethod::Isomap;
  emb.d = d;
  emb.spectrum = eig.values;
  emb.coords = Matrix(n, d);
  for (std::size_t p = 0; p < d; ++p) {
    const double root = std::sqrt(std::max(eig.values[p], 0.0));
    for (std::size_t i = 0; i < n; ++i)
      emb.coords(i, p) = root * eig.vectors(i, p);
  }
  return emb;
}

namespace detail {

inline Matrix pairwise_distances(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = euclidean_distance(cloud.point(i), cloud.point(j));
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

inline double sammon_stress_impl(const Matrix& delta, const Matrix& y,
                                 double inv_total) {
  const std::size_t n = delta.rows();
  double stress = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = euclidean_distance(y.row(i), y.row(j));
      const double diff = delta(i, j) - dij;
      stress += diff * diff / delta(i, j);
    }
  return stress * inv_total;
}

inline void sammon_gradient(const Matrix& delta, const Matrix& y,
                            double inv_total, Matrix& grad) {
  const std::size_t n = y.rows(), d = y.cols();
  for (double& v : grad.data()) v = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dij = euclidean_distance(y.row(i), y.row(j));
      if (dij < 1e-12) dij = 1e-12;
      const double coeff =
          -2.0 * inv_total * (delta(i, j) - dij) / (delta(i, j) * dij);
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = y(i, k) - y(j, k);
        grad(i, k) += coeff * diff;
        grad(j, k) -= coeff * diff;
      }
    }
}

}  // namespace detail

// Sammon stress of a low-dimensional configuration against the original
// pairwise distances: (1/sum delta) * sum (delta-d)^2/delta over i<j.
inline double sammon_stress(const PointCloud& high, const Matrix& low) {
  if (high.size() != low.rows())
    throw std::invalid_argument("sammon_stress: row counts differ");
  const Matrix delta = detail::pairwise_distances(high);
  double total = 0.0;
  for (std::size_t i = 0; i < delta.rows(); ++i)
    for (std::size_t j = i + 1; j < delta.rows(); ++j) {
      if (delta(i, j) == 0.0)
        throw PreconditionError("sammon_stress: points " + std::to_string(i) +
                                " and " + std::to_string(j) + " are duplicates");
      total += delta(i, j);
    }
  return detail::sammon_stress_impl(delta, low, 1.0 / total);
}

// Sammon mapping: gradient descent on the stress functional, initialized
// from classical MDS (Isomap over the complete graph) so runs are
// deterministic. The step size backtracks by halving until the stress
// decreases (up to 30 halvings) and doubles after every accepted step.
// Stops when the relative improvement falls below 1e-9; hitting max_iters
// first flags the embedding as not converged.
inline Embedding sammon_embed(const PointCloud& cloud, std::size_t d,
                              std::size_t max_iters = 500,
                              double step_size = 1.0,
                              std::vector<double>* stress_trace = nullptr) {
  const std::size_t n = cloud.size();
  if (n < 2) throw std::invalid_argument("sammon_embed: need n >= 2");
  const Matrix delta = detail::pairwise_distances(cloud);
  {
    std::vector<std::pair<std::size_t, std::size_t>> dup;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (delta(i, j) == 0.0) dup.emplace_back(i, j);
    if (!dup.empty()) {
      std::string msg = "sammon_embed: duplicate points";
      for (auto [i, j] : dup)
        msg += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
      throw PreconditionError(msg);
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) total += delta(i, j);
  const double inv_total = 1.0 / total;

  EmbedOptions init_opts;
  init_opts.clamp_negative = true;
  Embedding emb = isomap_embed(cloud, KnnRule{n - 1}, d, init_opts);
  emb.method = EmbedMethod::Sammon;

  Matrix y = emb.coords;
  Matrix grad(n, d);
  double stress = detail::sammon_stress_impl(delta, y, inv_total);
  double step = step_size;
  bool converged = false;
  if (stress_trace) stress_trace->push_back(stress);

  for (std::size_t iter = 0; iter < max_iters && !converged; ++iter) {
    detail::sammon_gradient(delta, y, inv_total, grad);
    double trial = step;
    bool accepted = false;
    for (int halving = 0; halving <= 30; ++halving) {
      Matrix cand = y;
      for (std::size_t i = 0; i < cand.data().size(); ++i)
        cand.data()[i] -= trial * grad.data()[i];
      const double cand_stress = detail::sammon_stress_impl(delta, cand, inv_total);
      if (cand_stress < stress) {
        const double improvement = (stress - cand_stress) / std::max(stress, 1e-300);
        y = std::move(cand);
        stress = cand_stress;
        step = trial * 2.0;
        accepted = true;
        if (stress_trace) stress_trace->push_back(stress);
        if (improvement < 1e-9) converged = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) {
      converged = true;  // no descent direction at working precision
      break;
    }
  }

  emb.coords = std::move(y);
  emb.stress = stress;
  emb.converged = converged || stress == 0.0;
  return emb;
}

}  // namespace shamap
