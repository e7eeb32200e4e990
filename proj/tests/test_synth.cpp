#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace shamap;

TEST_CASE("helix defaults have 201 samples") {
  const PointCloud cloud = gen_helix({});
  REQUIRE(cloud.size() == 201);
  REQUIRE(cloud.dim() == 3);
}

TEST_CASE("helix first and last rows") {
  const PointCloud cloud = gen_helix({});
  REQUIRE(cloud.point(0)[0] == 1.0);
  REQUIRE(cloud.point(0)[1] == 0.0);
  REQUIRE(cloud.point(0)[2] == 0.0);
  REQUIRE(std::abs(cloud.point(200)[0] - 1.0) < 1e-12);
  REQUIRE(std::abs(cloud.point(200)[1]) < 1e-12);
  REQUIRE(std::abs(cloud.point(200)[2] - kPi) < 1e-12);
}

TEST_CASE("helix with zero pitch is a circle") {
  HelixSpec spec;
  spec.pitch = 0.0;
  spec.radius = 2.0;
  const PointCloud cloud = gen_helix(spec);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    REQUIRE(p[2] == 0.0);
    REQUIRE(std::abs(p[0] * p[0] + p[1] * p[1] - 4.0) < 1e-12);
  }
}

TEST_CASE("helix spec validation") {
  HelixSpec spec;
  spec.t_step = 0.0;
  REQUIRE_THROWS_AS(gen_helix(spec), std::invalid_argument);
  spec = {};
  spec.t_end = spec.t_start;
  REQUIRE_THROWS_AS(gen_helix(spec), std::invalid_argument);
  spec = {};
  spec.radius = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(gen_helix(spec), std::invalid_argument);
}

TEST_CASE("helix generation is pure") {
  const PointCloud a = gen_helix({}), b = gen_helix({});
  REQUIRE(a.points() == b.points());
}

TEST_CASE("double helix layout") {
  const auto [cloud, labels] = gen_double_helix({});
  REQUIRE(cloud.size() == 402);
  REQUIRE(labels.size() == 402);
  for (std::size_t i = 0; i < 201; ++i) REQUIRE(labels[i] == 0);
  for (std::size_t i = 201; i < 402; ++i) REQUIRE(labels[i] == 1);

  // strand 1 at t=0 sits opposite strand 0
  REQUIRE(cloud.point(0)[0] == 1.0);
  REQUIRE(std::abs(cloud.point(201)[0] + 1.0) < 1e-12);
  REQUIRE(std::abs(cloud.point(201)[1]) < 1e-12);

  // z matches sample-for-sample
  for (std::size_t k = 0; k < 201; ++k)
    REQUIRE(cloud.point(k)[2] == cloud.point(201 + k)[2]);
}

TEST_CASE("double helix strands are congruent under z rotation") {
  const auto [cloud, labels] = gen_double_helix({});
  for (std::size_t k = 0; k < 201; ++k) {
    const auto a = cloud.point(k), b = cloud.point(201 + k);
    // rotate strand 1 by pi about z
    REQUIRE(std::abs(-b[0] - a[0]) < 1e-12);
    REQUIRE(std::abs(-b[1] - a[1]) < 1e-12);
    REQUIRE(b[2] == a[2]);
  }
}

TEST_CASE("toy protein chain structure") {
  ToyProteinSpec spec;
  spec.samples_per_segment = 20;
  const PointCloud cloud = gen_toy_protein(spec);
  REQUIRE(cloud.size() == 60);
  REQUIRE(cloud.dim() == 3);

  // junctions are exactly continuous
  for (std::size_t k = 0; k < 3; ++k) {
    REQUIRE(cloud.point(19)[k] == cloud.point(20)[k]);
    REQUIRE(cloud.point(39)[k] == cloud.point(40)[k]);
  }
}

TEST_CASE("toy protein sheet spans one cosine period") {
  ToyProteinSpec spec;
  spec.samples_per_segment = 41;
  spec.sheet_periods = 1;
  const PointCloud cloud = gen_toy_protein(spec);
  // sheet rows: indices 41..81; z returns to its start after a full period
  const double z0 = cloud.point(41)[2];
  const double z1 = cloud.point(81)[2];
  REQUIRE(std::abs(z1 - z0) < 1e-9);
  // half-period point reaches the full amplitude swing
  double zmin = z0;
  for (std::size_t i = 41; i <= 81; ++i)
    zmin = std::min(zmin, cloud.point(i)[2]);
  REQUIRE(std::abs((z0 - zmin) - 2.0 * spec.sheet_amplitude) < 1e-9);
}

TEST_CASE("toy protein validation") {
  ToyProteinSpec spec;
  spec.samples_per_segment = 0;
  REQUIRE_THROWS_AS(gen_toy_protein(spec), std::invalid_argument);
  spec = {};
  spec.helix_turns = 0.0;
  REQUIRE_THROWS_AS(gen_toy_protein(spec), std::invalid_argument);
}

TEST_CASE("embedded plane shapes and isometry") {
  const auto [high, truth] = gen_embedded_plane(50, 6, 3);
  REQUIRE(high.size() == 50);
  REQUIRE(high.dim() == 6);
  REQUIRE(truth.size() == 50);
  REQUIRE(truth.dim() == 2);

  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = i + 1; j < 50; ++j) {
      const double dh = euclidean_distance(high.point(i), high.point(j));
      const double dt = euclidean_distance(truth.point(i), truth.point(j));
      REQUIRE(std::abs(dh - dt) < 1e-12);
    }
}

TEST_CASE("embedded plane determinism") {
  const auto [h1, t1] = gen_embedded_plane(20, 4, 9);
  const auto [h2, t2] = gen_embedded_plane(20, 4, 9);
  REQUIRE(h1.points() == h2.points());
  REQUIRE(t1.points() == t2.points());

  const auto [h3, t3] = gen_embedded_plane(20, 4, 10);
  REQUIRE_FALSE(h1.points() == h3.points());
}

TEST_CASE("embedded plane argument validation") {
  REQUIRE_THROWS_AS(gen_embedded_plane(2, 4, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(gen_embedded_plane(10, 1, 0), std::invalid_argument);
}
