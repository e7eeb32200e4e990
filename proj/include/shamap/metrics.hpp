#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "shamap/dataset.hpp"
#include "shamap/error.hpp"
#include "shamap/matrix.hpp"
#include "shamap/spectral.hpp"
#include "shamap/synth.hpp"

namespace shamap {

// Best similarity transform (orthogonal map, uniform scale, translation)
// taking `source` onto `target`: aligned = scale * source * rotation + t.
// Reflections are allowed, so embeddings with flipped axes align cleanly.
struct ProcrustesReport {
  Matrix rotation;                 // d x d orthogonal
  double scale = 1.0;
  std::vector<double> translation; // d
  double rmse = 0.0;               // sqrt(mean squared residual)
  Matrix aligned;                  // n x d, source after the transform
};

namespace detail {

// Orthonormal columns extending `cols` (each length d) to `want` vectors.
// Candidates are the standard basis vectors in index order.
inline void complete_basis(std::vector<std::vector<double>>& cols,
                           std::size_t d, std::size_t want) {
  for (std::size_t e = 0; e < d && cols.size() < want; ++e) {
    std::vector<double> v(d, 0.0);
    v[e] = 1.0;
    for (const auto& c : cols) {
      double proj = 0.0;
      for (std::size_t k = 0; k < d; ++k) proj += v[k] * c[k];
      for (std::size_t k = 0; k < d; ++k) v[k] -= proj * c[k];
    }
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm > 1e-8) {
      for (double& x : v) x /= nrm;
      cols.push_back(std::move(v));
    }
  }
  if (cols.size() < want)
    throw PreconditionError("procrustes: could not complete orthonormal basis");
}

}  // namespace detail

inline ProcrustesReport procrustes(const Matrix& target, const Matrix& source) {
  if (target.rows() != source.rows() || target.cols() != source.cols())
    throw std::invalid_argument("procrustes: shape mismatch");
  const std::size_t n = target.rows(), d = target.cols();
  if (n == 0 || d == 0) throw std::invalid_argument("procrustes: empty input");

  std::vector<double> mu_a(d, 0.0), mu_b(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      mu_a[k] += target(i, k);
      mu_b[k] += source(i, k);
    }
  for (std::size_t k = 0; k < d; ++k) {
    mu_a[k] /= static_cast<double>(n);
    mu_b[k] /= static_cast<double>(n);
  }

  Matrix ac(n, d), bc(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      ac(i, k) = target(i, k) - mu_a[k];
      bc(i, k) = source(i, k) - mu_b[k];
    }
  const double bnorm2 = bc.frobenius_norm() * bc.frobenius_norm();
  if (bnorm2 <= 0.0)
    throw PreconditionError("procrustes: source configuration has no spread");
  if (ac.frobenius_norm() <= 0.0)
    throw PreconditionError("procrustes: target configuration has no spread");

  // Cross-covariance M = Bc^T Ac; its singular triplets come out of the
  // symmetric block matrix [[0, M], [M^T, 0]], whose eigenvalue +sigma has
  // eigenvector (u; v)/sqrt(2).
  Matrix m(d, d);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += bc(i, p) * ac(i, q);
      m(p, q) = acc;
    }
  Matrix z(2 * d, 2 * d);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      z(p, d + q) = m(p, q);
      z(d + q, p) = m(p, q);
    }
  const EigenPairs eig = jacobi_eigen(z);

  std::vector<std::vector<double>> u_cols, v_cols;
  double sigma_sum = 0.0;
  for (std::size_t p = 0; p < d; ++p) {
    sigma_sum += std::max(eig.values[p], 0.0);
    std::vector<double> u(d), v(d);
    double nu = 0.0, nv = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      u[k] = eig.vectors(k, p);
      v[k] = eig.vectors(d + k, p);
      nu += u[k] * u[k];
      nv += v[k] * v[k];
    }
    nu = std::sqrt(nu);
    nv = std::sqrt(nv);
    // Blocks of a clean singular pair have norm 1/sqrt(2); much smaller
    // means a null direction, filled in afterwards.
    if (nu < 1e-6 || nv < 1e-6 || u_cols.size() < p) continue;
    for (std::size_t k = 0; k < d; ++k) {
      u[k] /= nu;
      v[k] /= nv;
    }
    u_cols.push_back(std::move(u));
    v_cols.push_back(std::move(v));
  }
  detail::complete_basis(u_cols, d, d);
  detail::complete_basis(v_cols, d, d);

  ProcrustesReport rep;
  rep.rotation = Matrix(d, d);  // R = U V^T
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += u_cols[k][p] * v_cols[k][q];
      rep.rotation(p, q) = acc;
    }
  rep.scale = sigma_sum / bnorm2;
  rep.translation.assign(d, 0.0);
  for (std::size_t q = 0; q < d; ++q) {
    double acc = 0.0;
    for (std::size_t p = 0; p < d; ++p) acc += mu_b[p] * rep.rotation(p, q);
    rep.translation[q] = mu_a[q] - rep.scale * acc;
  }

  rep.aligned = Matrix(n, d);
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t q = 0; q < d; ++q) {
      double acc = 0.0;
      for (std::size_t p = 0; p < d; ++p) acc += source(i, p) * rep.rotation(p, q);
      const double y = rep.scale * acc + rep.translation[q];
      rep.aligned(i, q) = y;
      const double r = target(i, q) - y;
      sq += r * r;
    }
  rep.rmse = std::sqrt(sq / static_cast<double>(n));
  return rep;
}

// Signed number of turns a 2-D point sequence makes around `center`:
// accumulated atan2 increments, each wrapped to (-pi, pi], divided by 2 pi.
// Rows must be in traversal order.
inline double winding_count(const Matrix& coords,
                            const std::vector<double>& center = {0.0, 0.0}) {
  if (coords.cols() != 2)
    throw std::invalid_argument("winding_count: coords must be n x 2");
  if (center.size() != 2)
    throw std::invalid_argument("winding_count: center must have 2 entries");
  const std::size_t n = coords.rows();
  if (n < 2) throw std::invalid_argument("winding_count: need at least 2 points");

  double total = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = coords(i, 0) - center[0];
    const double dy = coords(i, 1) - center[1];
    if (dx * dx + dy * dy == 0.0)
      throw PreconditionError("winding_count: point " + std::to_string(i) +
                              " coincides with the center");
    const double ang = std::atan2(dy, dx);
    if (i > 0) total += std::remainder(ang - prev, 2.0 * kPi);
    prev = ang;
  }
  return total / (2.0 * kPi);
}

// Leave-one-out 1-nearest-neighbor label agreement. Distance ties go to the
// lower index, so the result does not depend on evaluation order.
inline double nn_label_accuracy(const Matrix& coords, const LabelSet& labels) {
  const std::size_t n = coords.rows();
  if (labels.size() != n)
    throw std::invalid_argument("nn_label_accuracy: label count mismatch");
  if (n < 2)
    throw std::invalid_argument("nn_label_accuracy: need at least 2 points");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = n;
    double best_d = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dij = squared_distance(coords.row(i), coords.row(j));
      if (dij < best_d) {
        best_d = dij;
        best = j;
      }
    }
    if (labels[best] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

// How far apart two labeled groups sit in an embedding. `min_cross` is the
// closest approach between the groups; `hausdorff` is the symmetric
// Hausdorff distance (large when the groups occupy different regions, near
// zero when they superimpose).
struct SeparationReport {
  double min_cross = 0.0;
  double hausdorff = 0.0;
};

inline SeparationReport set_separation(const Matrix& coords,
                                       const LabelSet& labels, int label_a,
                                       int label_b) {
  if (labels.size() != coords.rows())
    throw std::invalid_argument("set_separation: label count mismatch");
  std::vector<std::size_t> a, b;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label_a) a.push_back(i);
    if (labels[i] == label_b) b.push_back(i);
  }
  if (a.empty() || b.empty())
    throw std::invalid_argument("set_separation: a group is empty");

  SeparationReport rep;
  rep.min_cross = kInf;
  double dir_ab = 0.0;
  for (std::size_t i : a) {
    double nearest = kInf;
    for (std::size_t j : b)
      nearest = std::min(nearest, euclidean_distance(coords.row(i), coords.row(j)));
    rep.min_cross = std::min(rep.min_cross, nearest);
    dir_ab = std::max(dir_ab, nearest);
  }
  double dir_ba = 0.0;
  for (std::size_t j : b) {
    double nearest = kInf;
    for (std::size_t i : a)
      nearest = std::min(nearest, euclidean_distance(coords.row(j), coords.row(i)));
    dir_ba = std::max(dir_ba, nearest);
  }
  rep.hausdorff = std::max(dir_ab, dir_ba);
  return rep;
}

inline double diameter(const Matrix& coords) {
  double best = 0.0;
  for (std::size_t i = 0; i < coords.rows(); ++i)
    for (std::size_t j = i + 1; j < coords.rows(); ++j)
      best = std::max(best, euclidean_distance(coords.row(i), coords.row(j)));
  return best;
}

// lambda_2 / lambda_1 of a descending spectrum. Near zero means the
// embedding is essentially one-dimensional.
inline double spectral_ratio(const std::vector<double>& spectrum) {
  if (spectrum.size() < 2)
    throw std::invalid_argument("spectral_ratio: need at least 2 eigenvalues");
  if (!(spectrum[0] > 0.0))
    throw PreconditionError("spectral_ratio: leading eigenvalue is not positive");
  return spectrum[1] / spectrum[0];
}

}  // namespace shamap
