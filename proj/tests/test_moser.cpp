#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "sectorpass/moser.hpp"

using namespace sectorpass;

namespace {
// frozen oracles (independent high-precision quadrature)
constexpr double kL1atE = 1.4495569180141526636;    // L1(e) = 2 int_0^1 e^{2(s^2-s)} ds
constexpr double kL1at100 = 2.5692311338317850598;  // L1(1e2)
constexpr double kL1at1e6 = 2.2002882520493637688;  // L1(1e6)
}  // namespace

TEST_CASE("moser_bar: plateau, seam, support, frozen plug-in value") {
  CHECK(moser_bar_radial(16.0, 1.0) == 0.0);
  CHECK(moser_bar_radial(16.0, 1.5) == 0.0);
  // n = 16, |x| = 1/4: (1/sqrt(2 pi)) ln(4)/sqrt(ln 16)
  CHECK(moser_bar(16.0, {0.25, 0.0}) == doctest::Approx(0.33214123513398000956).epsilon(1e-14));
  // seam: the middle-branch expression evaluated at |x| = 1/n reproduces
  // the plateau value bitwise (the implementation scales the plateau by
  // log(1/rho)/ln n, which is exactly 1 there for power-of-two n)
  for (double n : {4.0, 16.0, 256.0}) {
    const double ln = std::log(n);
    const double plateau = moser_bar_radial(n, 0.0);
    const double rho = 1.0 / n;
    const double middle = plateau * (std::log(1.0 / rho) / ln);
    CHECK(middle - plateau == 0.0);
    CHECK(moser_bar_radial(n, rho) == plateau);
    // and continuity just above the seam
    CHECK(moser_bar_radial(n, rho * (1.0 + 1e-12)) ==
          doctest::Approx(plateau).epsilon(1e-10));
  }
}

TEST_CASE("moser_scaled: support in B(x_m, d_m), plateau value at the incenter") {
  const Sector s = sector(1);
  const double n = 16.0;
  CHECK(moser_scaled(s, n, s.incenter) ==
        doctest::Approx(std::sqrt(std::log(n) / (2.0 * std::numbers::pi))).epsilon(1e-15));
  // outside the inscribed ball: zero
  CHECK(moser_scaled(s, n, {0.9, 0.05}) == 0.0);
  CHECK(moser_scaled(s, n, s.incenter + Eigen::Vector2d(0.0, s.inradius * 1.0001)) == 0.0);
}

TEST_CASE("moser norm: radial quadrature of the gradient equals 1 to 1e-10") {
  for (double n : {4.0, 16.0, 256.0, 1e4, 1e6}) {
    CHECK(std::abs(moser_norm_radial(n) - 1.0) <= 1e-10);
  }
}

TEST_CASE("L1: frozen goldens and the trend toward 2") {
  CHECK(limit_L1(std::exp(1.0)) == doctest::Approx(kL1atE).epsilon(1e-11));
  CHECK(limit_L1(100.0) == doctest::Approx(kL1at100).epsilon(1e-11));
  CHECK(limit_L1(1e6) == doctest::Approx(kL1at1e6).epsilon(1e-11));
  const double e2 = std::abs(limit_L1(1e2) - 2.0);
  const double e4 = std::abs(limit_L1(1e4) - 2.0);
  const double e6 = std::abs(limit_L1(1e6) - 2.0);
  CHECK(e2 > e4);
  CHECK(e4 > e6);
}

TEST_CASE("L2: change-of-variables identity L2 = pi d^2 (1 + L1) to 1e-12") {
  for (int m : {1, 2}) {
    const Sector s = sector(m);
    const double pd2 = std::numbers::pi * s.inradius * s.inradius;
    for (double n : {4.0, 16.0, 256.0, 1e4, 1e6}) {
      const double l2 = limit_L2(s, n, 3e-14);
      const double rhs = pd2 * (1.0 + limit_L1(n, 3e-14));
      CHECK(std::abs(l2 - rhs) <= 1e-12 * std::max(1.0, std::abs(l2)));
    }
  }
}

TEST_CASE("L2: m = 1 limit value 3 pi / 4 approached from above") {
  const Sector s = sector(1);
  const double target = 3.0 * std::numbers::pi / 4.0;
  const double a = std::abs(limit_L2(s, 1e2) - target);
  const double b = std::abs(limit_L2(s, 1e4) - target);
  const double c = std::abs(limit_L2(s, 1e6) - target);
  CHECK(a > b);
  CHECK(b > c);
}

TEST_CASE("L2: independent 2-D mesh quadrature agrees within 1% at n = 10") {
  const Sector s = sector(2);
  const TriMesh sm = mesh_sector(sector(1), 0.02, 1.0);
  const TriMesh disk = build_disk_mesh(1, sm);
  const double mesh_val = limit_L2_mesh(s, 10.0, disk);
  const double radial_val = limit_L2(s, 10.0);
  CHECK(std::abs(mesh_val - radial_val) <= 0.01 * radial_val);
}

TEST_CASE("energy_scan: zero model has no ridge") {
  const Nonlinearity zero(NlModel::zero, 1.0);
  CHECK_THROWS_WITH_AS(energy_scan(zero, sector(1), 16.0), doctest::Contains("no ridge"),
                       std::runtime_error);
}

TEST_CASE("energy_scan: canonical m = 1 matches the independent scipy oracle") {
  const Nonlinearity nl(NlModel::canonical, 1.0);
  const EnergyScanResult r = energy_scan(nl, sector(1), 256.0);
  // frozen from an independent quadrature/optimizer run
  CHECK(r.max_I == doctest::Approx(0.45726940).epsilon(2e-5));
  CHECK(r.t_star == doctest::Approx(1.008016).epsilon(2e-3));
  CHECK(r.below_half);
  CHECK(r.beta_threshold == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
  CHECK(r.h3_proxy > r.beta_threshold);
}

TEST_CASE("energy_scan: larger lambda lowers the ridge") {
  const Sector s = sector(1);
  const double a = energy_scan(Nonlinearity(NlModel::canonical, 1.0), s, 256.0).max_I;
  const double b = energy_scan(Nonlinearity(NlModel::canonical, 10.0), s, 256.0).max_I;
  CHECK(b < a);
}

TEST_CASE("energy_scan_fem: resolution precondition and consistency at n = 4") {
  const Nonlinearity nl(NlModel::canonical, 1.0);
  const Sector s = sector(1);
  // too coarse for n = 256
  const TriMesh coarse = mesh_sector(s, 0.05, 1.0);
  CHECK_THROWS_WITH_AS(energy_scan_fem(nl, s, coarse, 256.0), doctest::Contains("too coarse"),
                       std::runtime_error);
  // resolvable at n = 4: FEM route within a few percent of the radial route
  const TriMesh fine = mesh_sector(s, 0.02, 1.0);
  const EnergyScanResult fem = energy_scan_fem(nl, s, fine, 4.0);
  const EnergyScanResult rad = energy_scan(nl, s, 4.0);
  CHECK(std::abs(fem.max_I - rad.max_I) <= 0.08 * rad.max_I);
}

TEST_CASE("moser_report: rows cover the n-list") {
  const Nonlinearity nl(NlModel::canonical, 1.0);
  const MoserReport rep = moser_report(nl, sector(1), {16.0, 256.0});
  CHECK(rep.rows.size() == 2);
  CHECK(rep.rows[0].n == 16.0);
  CHECK(rep.rows[1].below_half);
  CHECK(std::abs(rep.rows[0].norm - 1.0) <= 1e-10);
}
