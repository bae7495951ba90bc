#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sectorpass/fem.hpp"
#include "sectorpass/geometry.hpp"
#include "sectorpass/mesh.hpp"
#include "sectorpass/nonlinearity.hpp"

namespace sectorpass {

// Log-plateau concentration function of unit H0^1 norm:
//   (2 pi)^{-1/2} sqrt(ln n)               for |x| <= 1/n
//   (2 pi)^{-1/2} ln(1/|x|)/sqrt(ln n)     for 1/n <= |x| <= 1
//   0                                       for |x| >= 1
double moser_bar(double n, const Eigen::Vector2d& x);
double moser_bar_radial(double n, double rho);

// Rescaled copy supported in the inscribed ball B(x_m, d_m) of A_m.
double moser_scaled(const Sector& s, double n, const Eigen::Vector2d& x);

// Radial quadrature of integral |grad moser_bar|^2 (analytic value 1).
double moser_norm_radial(double n, double quad_tol = 1e-12);

// 2 ln n * integral_0^1 e^{2 ln n (s^2 - s)} ds; limit 2 as n -> infinity.
double limit_L1(double n, double quad_tol = 1e-13);

// integral over B(x_m, d_m) of e^{4 pi w_n^2}, by radial quadrature in r
// (pre-substitution form); limit 3 pi d_m^2.  Satisfies the change-of-
// variables identity L2 = pi d_m^2 (1 + L1(n)).
double limit_L2(const Sector& s, double n, double quad_tol = 1e-13);

// Independent 2-D cross-check of L2: 7-point rule over a unit-disk mesh,
// integrand evaluated directly at the quadrature points, scaled by d_m^2.
double limit_L2_mesh(const Sector& s, double n, const TriMesh& unit_disk_mesh);

struct EnergyScanResult {
  double t_star = 0.0;
  double max_I = 0.0;
  bool below_half = false;
  double beta_threshold = 0.0;  // 1/(2 pi d_m^2) from (H3)'
  double h3_proxy = 0.0;        // s f(s) e^{-4 pi s^2} at the largest safe s
};

// max over t >= 0 of I(t w_n) by exact radial quadrature: the quadratic
// term is t^2/2 exactly (unit norm), the nonlinear term is adaptive radial
// quadrature of F(t w_bar).  Throws "no ridge" when I(t w_n) has no
// interior maximum below the safe range (e.g. the zero model).
EnergyScanResult energy_scan(const Nonlinearity& nl, const Sector& s, double n);

// Mesh-interpolation route: interpolates w_n nodally and scans the FEM
// energy.  Requires local node spacing <= d_m/(3n) around the concentration
// ball; otherwise throws "mesh too coarse" rather than scanning wrongly.
EnergyScanResult energy_scan_fem(const Nonlinearity& nl, const Sector& s, const TriMesh& mesh,
                                 double n);

struct MoserRow {
  double n = 0.0;
  double norm = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  double t_star = 0.0;
  double max_I = 0.0;
  bool below_half = false;
};

struct MoserReport {
  int m = 0;
  double beta_threshold = 0.0;
  double h3_proxy = 0.0;
  std::vector<MoserRow> rows;
};

MoserReport moser_report(const Nonlinearity& nl, const Sector& s, const std::vector<double>& n_list);

}  // namespace sectorpass
