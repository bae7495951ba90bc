#include "sectorpass/moser.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sectorpass/quadrature.hpp"

namespace sectorpass {

namespace {
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
}

double moser_bar_radial(double n, double rho) {
  if (!(n >= 2.0)) throw std::invalid_argument("moser_bar: n must be >= 2");
  if (rho >= 1.0) return 0.0;
  const double ln = std::log(n);
  const double plateau = kInvSqrt2Pi * std::sqrt(ln);
  if (rho * n <= 1.0) return plateau;
  // written so that at rho = 1/n the two branches coincide bitwise
  return plateau * (std::log(1.0 / rho) / ln);
}

double moser_bar(double n, const Eigen::Vector2d& x) { return moser_bar_radial(n, x.norm()); }

double moser_scaled(const Sector& s, double n, const Eigen::Vector2d& x) {
  return moser_bar_radial(n, (x - s.incenter).norm() / s.inradius);
}

double moser_norm_radial(double n, double quad_tol) {
  if (!(n >= 2.0)) throw std::invalid_argument("moser_norm_radial: n must be >= 2");
  const double ln = std::log(n);
  // |d/dr moser_bar|^2 * 2 pi r = 1/(r ln n) on [1/n, 1]; 0 on the plateau
  return integrate_adaptive([ln](double r) { return 1.0 / (r * ln); }, 1.0 / n, 1.0, quad_tol);
}

double limit_L1(double n, double quad_tol) {
  if (!(n >= 2.0)) throw std::invalid_argument("limit_L1: n must be >= 2");
  const double a = 2.0 * std::log(n);
  const double integral =
      integrate_adaptive([a](double s) { return std::exp(a * (s * s - s)); }, 0.0, 1.0, quad_tol);
  return a * integral;
}

double limit_L2(const Sector& sec, double n, double quad_tol) {
  if (!(n >= 2.0)) throw std::invalid_argument("limit_L2: n must be >= 2");
  const double d2 = sec.inradius * sec.inradius;
  const double ln = std::log(n);
  const double pi = std::numbers::pi;
  // plateau: e^{4 pi w^2} = e^{2 ln n} over the disk of radius 1/n
  const double plateau = pi * d2 * std::exp(2.0 * ln) / (n * n);
  // annulus in the r variable (no change of variables here; the s-form
  // lives in limit_L1, so comparing the two tests the paper's substitution)
  auto integrand = [ln](double r) {
    const double w = std::log(1.0 / r);
    return std::exp(2.0 * w * w / ln) * r;
  };
  const double annulus = 2.0 * pi * d2 * integrate_adaptive(integrand, 1.0 / n, 1.0, quad_tol);
  return plateau + annulus;
}

double limit_L2_mesh(const Sector& sec, double n, const TriMesh& unit_disk_mesh) {
  if (!unit_disk_mesh.is_full_disk())
    throw std::invalid_argument("limit_L2_mesh: need a full unit-disk mesh");
  const TriangleRule& rule = TriangleRule::degree5();
  const double fourpi = 4.0 * std::numbers::pi;
  double acc = 0.0;
  for (int t = 0; t < unit_disk_mesh.num_triangles(); ++t) {
    const Eigen::Vector2d p0 = unit_disk_mesh.nodes.row(unit_disk_mesh.triangles(t, 0));
    const Eigen::Vector2d p1 = unit_disk_mesh.nodes.row(unit_disk_mesh.triangles(t, 1));
    const Eigen::Vector2d p2 = unit_disk_mesh.nodes.row(unit_disk_mesh.triangles(t, 2));
    const double area = triangle_area(unit_disk_mesh, t);
    double local = 0.0;
    for (int q = 0; q < TriangleRule::npts; ++q) {
      const Eigen::Vector2d x = rule.l1[q] * p0 + rule.l2[q] * p1 + rule.l3[q] * p2;
      const double w = moser_bar(n, x);
      local += rule.w[q] * std::exp(fourpi * w * w);
    }
    acc += area * local;
  }
  return sec.inradius * sec.inradius * acc;
}

namespace {

// I(t w_n) with the quadratic part exact (unit norm) and the nonlinear part
// by radial quadrature over the support.
double ridge_energy(const Nonlinearity& nl, const Sector& sec, double n, double t) {
  const double d2 = sec.inradius * sec.inradius;
  const double pi = std::numbers::pi;
  const double plateau_value = t * moser_bar_radial(n, 0.0);
  const double plateau = nl.F(plateau_value) * pi * d2 / (n * n);
  auto integrand = [&](double rho) { return nl.F(t * moser_bar_radial(n, rho)) * rho; };
  const double annulus = 2.0 * pi * d2 * integrate_adaptive(integrand, 1.0 / n, 1.0, 1e-12);
  return 0.5 * t * t - plateau - annulus;
}

EnergyScanResult finish_scan(const Nonlinearity& nl, const Sector& sec, double t_star, double max_I) {
  EnergyScanResult r;
  r.t_star = t_star;
  r.max_I = max_I;
  r.below_half = max_I < 0.5;
  r.beta_threshold = 1.0 / (2.0 * std::numbers::pi * sec.inradius * sec.inradius);
  const double s_hi = 0.98 * nl.safe_bound();
  r.h3_proxy = s_hi * nl.f(s_hi) * std::exp(-nl.alpha0() * s_hi * s_hi);
  return r;
}

}  // namespace

EnergyScanResult energy_scan(const Nonlinearity& nl, const Sector& sec, double n) {
  if (!(n >= 2.0)) throw std::invalid_argument("energy_scan: n must be >= 2");
  const double w_max = moser_bar_radial(n, 0.0);
  const double t_hi = 0.98 * nl.safe_bound() / w_max;

  // march until the energy turns down, then refine by golden section
  const double dt = std::min(0.005, t_hi / 64.0);
  double prev = 0.0;  // I(0) = 0
  double t_peak = -1.0;
  for (double t = dt; t <= t_hi; t += dt) {
    const double v = ridge_energy(nl, sec, n, t);
    if (v < prev) {
      t_peak = t;
      break;
    }
    prev = v;
  }
  if (t_peak < 0.0) {
    std::ostringstream os;
    os << "energy_scan: no ridge — I(t w_n) still increasing at the safe-range cap t = " << t_hi;
    throw std::runtime_error(os.str());
  }
  double lo = std::max(0.0, t_peak - 2.0 * dt), hi = t_peak;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = ridge_energy(nl, sec, n, x1), f2 = ridge_energy(nl, sec, n, x2);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = ridge_energy(nl, sec, n, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = ridge_energy(nl, sec, n, x1);
    }
  }
  const double t_star = 0.5 * (lo + hi);
  return finish_scan(nl, sec, t_star, ridge_energy(nl, sec, n, t_star));
}

EnergyScanResult energy_scan_fem(const Nonlinearity& nl, const Sector& sec, const TriMesh& mesh,
                                 double n) {
  if (!(n >= 2.0)) throw std::invalid_argument("energy_scan_fem: n must be >= 2");
  if (mesh.m != sec.m || mesh.copies != 1)
    throw std::invalid_argument("energy_scan_fem: mesh must be a sector mesh of A_m");

  // resolution precondition: edge lengths of triangles meeting the
  // concentration ball B(x_m, d_m/n) must not exceed d_m/(3n)
  const double conc = sec.inradius / n;
  const double limit = sec.inradius / (3.0 * n);
  double worst = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Vector2d p0 = mesh.nodes.row(mesh.triangles(t, 0));
    const Eigen::Vector2d p1 = mesh.nodes.row(mesh.triangles(t, 1));
    const Eigen::Vector2d p2 = mesh.nodes.row(mesh.triangles(t, 2));
    const bool meets = (p0 - sec.incenter).norm() <= conc || (p1 - sec.incenter).norm() <= conc ||
                       (p2 - sec.incenter).norm() <= conc;
    if (!meets) continue;
    worst = std::max({worst, (p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
  }
  if (worst > limit) {
    std::ostringstream os;
    os << "energy_scan_fem: mesh too coarse for n = " << n << " (local edge " << worst
       << " > d_m/(3n) = " << limit << ")";
    throw std::runtime_error(os.str());
  }

  Field w = zero_field(mesh);
  for (int i = 0; i < mesh.num_nodes(); ++i)
    w.values[i] = moser_scaled(sec, n, mesh.nodes.row(i).transpose());
  enforce_dirichlet(w);  // support is interior, so this only clears round-off

  auto I_of = [&](double t) {
    Field tw = w;
    tw.values *= t;
    return energy(nl, tw);
  };
  const double w_max = moser_bar_radial(n, 0.0);
  const double t_hi = 0.98 * nl.safe_bound() / w_max;
  const double dt = std::min(0.01, t_hi / 64.0);
  double prev = 0.0, t_peak = -1.0;
  for (double t = dt; t <= t_hi; t += dt) {
    const double v = I_of(t);
    if (v < prev) {
      t_peak = t;
      break;
    }
    prev = v;
  }
  if (t_peak < 0.0) throw std::runtime_error("energy_scan_fem: no ridge within the safe range");
  double lo = std::max(0.0, t_peak - 2.0 * dt), hi = t_peak;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = I_of(x1), f2 = I_of(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = I_of(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = I_of(x1);
    }
  }
  const double t_star = 0.5 * (lo + hi);
  return finish_scan(nl, sec, t_star, I_of(t_star));
}

MoserReport moser_report(const Nonlinearity& nl, const Sector& sec,
                         const std::vector<double>& n_list) {
  MoserReport rep;
  rep.m = sec.m;
  rep.beta_threshold = 1.0 / (2.0 * std::numbers::pi * sec.inradius * sec.inradius);
  const double s_hi = 0.98 * nl.safe_bound();
  rep.h3_proxy = s_hi * nl.f(s_hi) * std::exp(-nl.alpha0() * s_hi * s_hi);
  for (double n : n_list) {
    MoserRow row;
    row.n = n;
    row.norm = moser_norm_radial(n);
    row.L1 = limit_L1(n);
    row.L2 = limit_L2(sec, n);
    const EnergyScanResult es = energy_scan(nl, sec, n);
    row.t_star = es.t_star;
    row.max_I = es.max_I;
    row.below_half = es.below_half;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace sectorpass
