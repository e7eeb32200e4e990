#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace shamap;

TEST_CASE("matrix basics") {
  Matrix m(2, 3);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  for (double v : m.data()) REQUIRE(v == 0.0);
  m(1, 2) = 4.5;
  REQUIRE(m(1, 2) == 4.5);
  REQUIRE(m.row(1)[2] == 4.5);

  const Matrix id = Matrix::identity(3);
  REQUIRE(id(0, 0) == 1.0);
  REQUIRE(id(0, 1) == 0.0);
  REQUIRE(id.frobenius_norm() == Catch::Approx(std::sqrt(3.0)));
}

TEST_CASE("matrix all_finite") {
  Matrix m(2, 2);
  REQUIRE(m.all_finite());
  m(0, 1) = std::numeric_limits<double>::infinity();
  REQUIRE_FALSE(m.all_finite());
  m(0, 1) = std::nan("");
  REQUIRE_FALSE(m.all_finite());
}

TEST_CASE("span helpers") {
  Matrix m(2, 3);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  m(0, 2) = 2.0;
  m(1, 0) = 0.0;
  m(1, 1) = -1.0;
  m(1, 2) = 4.0;
  REQUIRE(dot(m.row(0), m.row(1)) == Catch::Approx(6.0));
  REQUIRE(squared_distance(m.row(0), m.row(1)) == Catch::Approx(1 + 9 + 4));
  REQUIRE(euclidean_distance(m.row(0), m.row(1)) == Catch::Approx(std::sqrt(14.0)));
  REQUIRE(norm(m.row(0)) == Catch::Approx(3.0));
}

TEST_CASE("point cloud validation") {
  REQUIRE_THROWS_AS(PointCloud(Matrix(0, 3)), std::invalid_argument);
  Matrix bad(1, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(PointCloud(bad), std::invalid_argument);

  Matrix ok(2, 2);
  ok(1, 0) = 3.0;
  const PointCloud cloud(ok);
  REQUIRE(cloud.size() == 2);
  REQUIRE(cloud.dim() == 2);
  REQUIRE(cloud.point(1)[0] == 3.0);
}

TEST_CASE("centroid") {
  Matrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 0) = 3.0;
  m(0, 1) = -2.0;
  m(1, 1) = 2.0;
  const auto c = centroid(PointCloud(m));
  REQUIRE(c[0] == 2.0);
  REQUIRE(c[1] == 0.0);
}

TEST_CASE("reference resolution") {
  Matrix m(2, 3);
  m(0, 0) = 2.0;
  const PointCloud cloud(m);

  const auto o = resolve_reference(ReferencePoint::origin(), cloud);
  REQUIRE(o == std::vector<double>{0.0, 0.0, 0.0});

  const auto c = resolve_reference(ReferencePoint::cloud_centroid(), cloud);
  REQUIRE(c[0] == 1.0);

  const auto e =
      resolve_reference(ReferencePoint::explicit_vec({1, 2, 3}), cloud);
  REQUIRE(e == std::vector<double>{1.0, 2.0, 3.0});

  REQUIRE_THROWS_AS(
      resolve_reference(ReferencePoint::explicit_vec({1, 2}), cloud),
      std::invalid_argument);
}

TEST_CASE("label checks") {
  Matrix m(2, 1);
  m(1, 0) = 1.0;
  const PointCloud cloud(m);
  check_labels({0, 1}, cloud);
  REQUIRE_THROWS_AS(check_labels({0}, cloud), std::invalid_argument);
  REQUIRE_THROWS_AS(check_labels({0, -1}, cloud), std::invalid_argument);
}

TEST_CASE("splitmix64 determinism and ranges") {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

  SplitMix64 rng(7);
  double lo = 1.0, hi = 0.0, mean = 0.0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    const double v = rng.next_double();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  mean /= trials;
  REQUIRE(lo < 0.01);
  REQUIRE(hi > 0.99);
  REQUIRE(std::abs(mean - 0.5) < 0.02);
}

TEST_CASE("splitmix64 normal moments") {
  SplitMix64 rng(11);
  double mean = 0.0, var = 0.0;
  const int trials = 20000;
  std::vector<double> xs(trials);
  for (double& x : xs) x = rng.next_normal();
  for (double x : xs) mean += x;
  mean /= trials;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= trials - 1;
  REQUIRE(std::abs(mean) < 0.05);
  REQUIRE(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) REQUIRE(h == 1);
}

TEST_CASE("results do not depend on worker count") {
  setenv("SHAMAP_THREADS", "1", 1);
  Matrix a(64, 64);
  parallel_for(64, [&](std::size_t i) {
    for (std::size_t j = 0; j < 64; ++j)
      a(i, j) = std::sin(static_cast<double>(i * 64 + j));
  });
  setenv("SHAMAP_THREADS", "5", 1);
  Matrix b(64, 64);
  parallel_for(64, [&](std::size_t i) {
    for (std::size_t j = 0; j < 64; ++j)
      b(i, j) = std::sin(static_cast<double>(i * 64 + j));
  });
  unsetenv("SHAMAP_THREADS");
  REQUIRE(a == b);
}
