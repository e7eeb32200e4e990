#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shamap/error.hpp"
#include "shamap/matrix.hpp"

namespace shamap {

// n x D sample matrix. Row i is the i-th sample vector; row order is stable
// and identity-preserving. Immutable after construction.
class PointCloud {
public:
  explicit PointCloud(Matrix points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1)
      throw std::invalid_argument("PointCloud: need n >= 1 and D >= 1");
    if (!points_.all_finite())
      throw std::invalid_argument("PointCloud: non-finite coordinate");
  }

  std::size_t size() const { return points_.rows(); }
  std::size_t dim() const { return points_.cols(); }
  std::span<const double> point(std::size_t i) const { return points_.row(i); }
  const Matrix& points() const { return points_; }

private:
  Matrix points_;
};

// Integer class ids, paired with a PointCloud of the same length.
using LabelSet = std::vector<int>;

inline void check_labels(const LabelSet& labels, const PointCloud& cloud) {
  if (labels.size() != cloud.size())
    throw std::invalid_argument("LabelSet: length does not match point count");
  for (int id : labels)
    if (id < 0) throw std::invalid_argument("LabelSet: negative class id");
}

inline std::vector<double> centroid(const PointCloud& cloud) {
  std::vector<double> mean(cloud.dim(), 0.0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto row = cloud.point(i);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += row[k];
  }
  const double n = static_cast<double>(cloud.size());
  for (double& v : mean) v /= n;
  return mean;
}

// Global reference point for the angular metric. Symbolic values resolve
// against a cloud; an explicit vector passes through unchanged.
struct ReferencePoint {
  enum class Kind { Origin, Centroid, Explicit };

  Kind kind = Kind::Origin;
  std::vector<double> vec;

  static ReferencePoint origin() { return {Kind::Origin, {}}; }
  static ReferencePoint cloud_centroid() { return {Kind::Centroid, {}}; }
  static ReferencePoint explicit_vec(std::vector<double> v) {
    return {Kind::Explicit, std::move(v)};
  }
};

inline std::vector<double> resolve_reference(const ReferencePoint& ref,
                                             const PointCloud& cloud) {
  switch (ref.kind) {
    case ReferencePoint::Kind::Origin:
      return std::vector<double>(cloud.dim(), 0.0);
    case ReferencePoint::Kind::Centroid:
      return centroid(cloud);
    case ReferencePoint::Kind::Explicit:
      if (ref.vec.size() != cloud.dim())
        throw std::invalid_argument(
            "reference point has dimension " + std::to_string(ref.vec.size()) +
            ", cloud has " + std::to_string(cloud.dim()));
      for (double v : ref.vec)
        if (!std::isfinite(v))
          throw std::invalid_argument("reference point has non-finite entry");
      return ref.vec;
  }
  throw std::logic_error("unreachable");
}

}  // namespace shamap
