#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shamap/dataset.hpp"
#include "shamap/matrix.hpp"
#include "shamap/rng.hpp"

namespace shamap {

inline constexpr double kPi = 3.14159265358979323846;

// Parametric helix (radius*cos(t+phase), radius*sin(t+phase), pitch*t)
// sampled at t = t_start + k*t_step.
struct HelixSpec {
  double t_start = 0.0;
  double t_end = 10.0 * kPi;
  double t_step = 0.05 * kPi;
  double pitch = 0.1;
  double phase = 0.0;
  double radius = 1.0;

  void validate() const {
    for (double v : {t_start, t_end, t_step, pitch, phase, radius})
      if (!std::isfinite(v))
        throw std::invalid_argument("HelixSpec: non-finite field");
    if (!(t_step > 0.0)) throw std::invalid_argument("HelixSpec: t_step <= 0");
    if (!(t_end > t_start))
      throw std::invalid_argument("HelixSpec: t_end <= t_start");
  }

  // floor((t_end - t_start)/t_step) + 1, with an epsilon so that ranges that
  // are an exact multiple of the step in real arithmetic do not lose the last
  // sample to rounding.
  std::size_t sample_count() const {
    const double r = (t_end - t_start) / t_step;
    return static_cast<std::size_t>(std::floor(r * (1.0 + 1e-12))) + 1;
  }
};

inline PointCloud gen_helix(const HelixSpec& spec) {
  spec.validate();
  const std::size_t n = spec.sample_count();
  Matrix pts(n, 3);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = spec.t_start + static_cast<double>(k) * spec.t_step;
    pts(k, 0) = spec.radius * std::cos(t + spec.phase);
    pts(k, 1) = spec.radius * std::sin(t + spec.phase);
    pts(k, 2) = spec.pitch * t;
  }
  return PointCloud(std::move(pts));
}

// Two parallel strands around a common axis: strand 1 is strand 0 phase
// shifted by pi in x,y with identical z. Rows are strand 0 then strand 1,
// labels 0 and 1 in the same order.
inline std::pair<PointCloud, LabelSet> gen_double_helix(const HelixSpec& spec) {
  spec.validate();
  const std::size_t n = spec.sample_count();
  Matrix pts(2 * n, 3);
  LabelSet labels(2 * n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = spec.t_start + static_cast<double>(k) * spec.t_step;
    const double z = spec.pitch * t;
    pts(k, 0) = spec.radius * std::cos(t + spec.phase);
    pts(k, 1) = spec.radius * std::sin(t + spec.phase);
    pts(k, 2) = z;
    pts(n + k, 0) = spec.radius * std::cos(t + spec.phase + kPi);
    pts(n + k, 1) = spec.radius * std::sin(t + spec.phase + kPi);
    pts(n + k, 2) = z;
    labels[n + k] = 1;
  }
  return {PointCloud(std::move(pts)), std::move(labels)};
}

// Toy protein: helix A, a planar cosine arc (the sheet), helix B. Segments
// are translated so consecutive endpoints coincide exactly, giving a
// C0-continuous chain of 3*samples_per_segment points.
struct ToyProteinSpec {
  double helix_turns = 2.5;
  std::size_t sheet_periods = 1;
  std::size_t samples_per_segment = 67;
  double radius = 1.0;
  double pitch = 0.1;
  double sheet_amplitude = 1.0;
  double sheet_length = -1.0;  // < 0: use one helix's axial extent
};

inline PointCloud gen_toy_protein(const ToyProteinSpec& spec) {
  if (spec.helix_turns < 1.0)
    throw std::invalid_argument("gen_toy_protein: helix_turns < 1");
  if (spec.sheet_periods < 1 || spec.samples_per_segment < 1)
    throw std::invalid_argument("gen_toy_protein: counts must be >= 1");
  const std::size_t m = spec.samples_per_segment;
  const double t_span = spec.helix_turns * 2.0 * kPi;
  const double axial = spec.pitch * t_span;
  const double sheet_len = spec.sheet_length < 0.0 ? axial : spec.sheet_length;

  Matrix pts(3 * m, 3);
  auto helix_at = [&](double t, double* out) {
    out[0] = spec.radius * std::cos(t);
    out[1] = spec.radius * std::sin(t);
    out[2] = spec.pitch * t;
  };
  const double dt = m > 1 ? t_span / static_cast<double>(m - 1) : 0.0;

  // Helix A.
  for (std::size_t k = 0; k < m; ++k) {
    double p[3];
    helix_at(static_cast<double>(k) * dt, p);
    for (int c = 0; c < 3; ++c) pts(k, c) = p[c];
  }
  // Sheet: from A's endpoint, x advances linearly, y constant, z follows a
  // cosine in the arc parameter (zero offset at both ends).
  const double ax = pts(m - 1, 0), ay = pts(m - 1, 1), az = pts(m - 1, 2);
  for (std::size_t k = 0; k < m; ++k) {
    const double s =
        m > 1 ? static_cast<double>(k) / static_cast<double>(m - 1) : 0.0;
    pts(m + k, 0) = ax + sheet_len * s;
    pts(m + k, 1) = ay;
    pts(m + k, 2) = az + spec.sheet_amplitude *
                             (std::cos(2.0 * kPi *
                                       static_cast<double>(spec.sheet_periods) *
                                       s) -
                              1.0);
  }
  // Helix B, translated so its first point is the sheet's endpoint.
  const double bx = pts(2 * m - 1, 0), by = pts(2 * m - 1, 1),
               bz = pts(2 * m - 1, 2);
  for (std::size_t k = 0; k < m; ++k) {
    double p[3];
    helix_at(static_cast<double>(k) * dt, p);
    pts(2 * m + k, 0) = (p[0] - spec.radius) + bx;
    pts(2 * m + k, 1) = p[1] + by;
    pts(2 * m + k, 2) = p[2] + bz;
  }
  return PointCloud(std::move(pts));
}

// Ground-truth fixture: n points from a seeded uniform square, zero-padded to
// ambient_dim and rotated by a seeded random orthogonal matrix. Returns
// (high, truth); pairwise distances agree up to rounding.
inline std::pair<PointCloud, PointCloud> gen_embedded_plane(
    std::size_t n, std::size_t ambient_dim, std::uint64_t seed) {
  if (ambient_dim < 2)
    throw std::invalid_argument("gen_embedded_plane: ambient_dim < 2");
  if (n < 3) throw std::invalid_argument("gen_embedded_plane: n < 3");

  SplitMix64 rng(seed);
  Matrix truth(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    truth(i, 0) = rng.next_double();
    truth(i, 1) = rng.next_double();
  }

  // Random orthogonal matrix: Gaussian fill, then modified Gram-Schmidt.
  const std::size_t D = ambient_dim;
  Matrix q(D, D);
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) q(i, j) = rng.next_normal();
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t p = 0; p < j; ++p) {
      double proj = 0.0;
      for (std::size_t i = 0; i < D; ++i) proj += q(i, p) * q(i, j);
      for (std::size_t i = 0; i < D; ++i) q(i, j) -= proj * q(i, p);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < D; ++i) nrm += q(i, j) * q(i, j);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12)
      throw std::runtime_error("gen_embedded_plane: degenerate rotation draw");
    for (std::size_t i = 0; i < D; ++i) q(i, j) /= nrm;
  }

  // high = [truth | 0] * Q^T, so rows transform by the orthogonal map Q.
  Matrix high(n, D);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < D; ++j)
      high(i, j) = truth(i, 0) * q(j, 0) + truth(i, 1) * q(j, 1);
  return {PointCloud(std::move(high)), PointCloud(std::move(truth))};
}

}  // namespace shamap
