#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "sectorpass/geometry.hpp"

using namespace sectorpass;

namespace {

// tangency oracle: the inscribed ball centered on the axis at (0, y) has
// radius min(y sin(beta), 1 - y); d_m maximizes it, at y sin(beta) = 1 - y
double inradius_oracle(double beta) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double y = 0.5 * (lo + hi);
    (y * std::sin(beta) < 1.0 - y ? lo : hi) = y;
  }
  const double y = 0.5 * (lo + hi);
  return std::min(y * std::sin(beta), 1.0 - y);
}

}  // namespace

TEST_CASE("sector: inradius formula against the tangency oracle") {
  CHECK(sector(1).inradius == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sector(1).incenter[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sector(2).inradius == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
  for (int m = 1; m <= 6; ++m) {
    const Sector s = sector(m);
    CHECK(s.half_angle == doctest::Approx(std::numbers::pi / (1 << m)).epsilon(1e-15));
    CHECK(s.inradius == doctest::Approx(inradius_oracle(s.half_angle)).epsilon(1e-12));
    CHECK(s.incenter[0] == 0.0);
    CHECK(s.incenter[1] == doctest::Approx(1.0 - s.inradius).epsilon(1e-15));
  }
}

TEST_CASE("sector: m = 0 is rejected (the full disk is not in the family)") {
  CHECK_THROWS_AS(sector(0), std::invalid_argument);
  CHECK_THROWS_AS(sector(-2), std::invalid_argument);
}

TEST_CASE("membership predicate: spec point checks") {
  const Sector s1 = sector(1);
  CHECK(in_sector(s1, {0.0, 0.5}));
  CHECK(!in_sector(s1, {0.5, -0.1}));
  CHECK(!in_sector(s1, {0.0, 1.0}));   // open: the arc is boundary
  CHECK(!in_sector(s1, {0.5, 0.0}));   // the straight side is boundary
  const Sector s2 = sector(2);
  CHECK(in_sector(s2, {0.0, 0.9}));
  CHECK(!in_sector(s2, {0.9, 0.1}));
}

TEST_CASE("inscribed ball: 1e4 random points of B(x_m, d_m) lie in A_m") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int m : {1, 2, 3, 4}) {
    const Sector s = sector(m);
    for (int i = 0; i < 10000; ++i) {
      const double a = angle(rng);
      const double r = s.inradius * std::sqrt(unit(rng)) * (1.0 - 1e-12);
      const Eigen::Vector2d x = s.incenter + r * Eigen::Vector2d(std::cos(a), std::sin(a));
      CHECK(in_sector(s, x));
    }
  }
}

TEST_CASE("inscribed ball is maximal: radius d_m (1 + 1e-3) never fits, any axis center") {
  for (int m : {1, 2, 3}) {
    const Sector s = sector(m);
    const double r_too_big = s.inradius * (1.0 + 1e-3);
    for (int i = 1; i < 200; ++i) {
      const double y = i / 200.0;
      // inscribed radius at (0, y): distance to the sides is y sin(beta),
      // distance to the arc is 1 - y
      const double fit = std::min(y * std::sin(s.half_angle), 1.0 - y);
      CHECK(fit < r_too_big);
    }
  }
}

TEST_CASE("reflect_point: axis case exact, involution, isometry") {
  const Eigen::Vector2d axis(0.0, 1.0);
  const Eigen::Vector2d p(0.3, 0.7);
  const Eigen::Vector2d q = reflect_point(p, axis);
  CHECK(q[0] == -0.3);
  CHECK(q[1] == 0.7);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d x(dist(rng), dist(rng));
    Eigen::Vector2d dir(dist(rng), dist(rng));
    if (dir.norm() < 1e-3) continue;
    const Eigen::Vector2d y = reflect_point(x, dir);
    CHECK((reflect_point(y, dir) - x).norm() <= 1e-15 + 1e-15 * x.norm());
    CHECK(y.norm() == doctest::Approx(x.norm()).epsilon(1e-14));
  }
}
