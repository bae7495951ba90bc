#include "sectorpass/mpa.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sectorpass {

MpaOptions::Mode parse_mode(const std::string& name) {
  if (name == "mpa") return MpaOptions::Mode::mpa;
  if (name == "nehari") return MpaOptions::Mode::nehari;
  throw std::invalid_argument("unknown solver mode '" + name + "'");
}

std::string to_string(MpaOptions::Mode mode) {
  return mode == MpaOptions::Mode::mpa ? "mpa" : "nehari";
}

Field bump_field(const Sector& s, const TriMesh& mesh) {
  Field phi = zero_field(mesh);
  const double radius = 0.5 * s.inradius;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const double rho = (Eigen::Vector2d(mesh.nodes.row(i)) - s.incenter).norm() / radius;
    if (rho < 1.0) phi.values[i] = std::exp(1.0 - 1.0 / (1.0 - rho * rho));
  }
  enforce_dirichlet(phi);  // support is compactly inside A_m, so this is a no-op
  return phi;
}

std::pair<double, Field> find_endpoint(const Nonlinearity& nl, const TriMesh& mesh,
                                       const Field& phi) {
  if (phi.mesh != &mesh) throw std::invalid_argument("find_endpoint: phi lives on a different mesh");
  if (phi.values.minCoeff() < 0.0 || !(phi.values.maxCoeff() > 0.0))
    throw std::invalid_argument("find_endpoint: phi must be nonnegative and nonzero");
  const double phi_norm = h1_norm(phi);
  const double phi_max = phi.values.maxCoeff();

  // mountain geometry near 0
  {
    Field small = phi;
    small.values *= 0.1 / phi_norm;
    if (!(energy(nl, small) > 0.0))
      throw std::runtime_error("find_endpoint: I(t phi) not positive for small t (no mountain geometry)");
  }

  double t = 1.0;
  while (true) {
    if (t * phi_max > nl.safe_bound()) {
      std::ostringstream os;
      os << "find_endpoint: no ridge to cross within the safe range; I(t phi) still nonnegative "
            "at the cap (t = " << t << "); increase lambda or use a finer bump";
      throw std::range_error(os.str());
    }
    Field e = phi;
    e.values *= t;
    if (energy(nl, e) < 0.0) return {t, e};
    t *= 2.0;
  }
}

std::pair<double, double> mountain_geometry_probe(const Nonlinearity& nl, const TriMesh& mesh,
                                                  unsigned long seed, int n_dirs, double r) {
  if (n_dirs < 1 || !(r > 0.0)) throw std::invalid_argument("mountain_geometry_probe: bad arguments");
  for (double radius = r; radius >= r / 1024.0; radius *= 0.5) {
    std::mt19937_64 rng(seed);  // identical direction set at every radius
    std::normal_distribution<double> gauss(0.0, 1.0);
    double rho = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_dirs; ++j) {
      Field d = zero_field(mesh);
      for (int i = 0; i < mesh.num_nodes(); ++i)
        if (!mesh.boundary[i]) d.values[i] = gauss(rng);
      d.values *= radius / h1_norm(d);
      rho = std::min(rho, energy(nl, d));
    }
    if (rho > 0.0) return {radius, rho};
  }
  throw std::runtime_error(
      "mountain_geometry_probe: no positive rho down to the smallest radius (geometry violated)");
}

double residual_check(const Nonlinearity& nl, const TriMesh& mesh, const Field& u) {
  return residual_check_fun(mesh, u, [&nl](double s) { return nl.f(s); });
}

Field mirror_field(const Field& u) {
  const TriMesh& mesh = *u.mesh;
  const NodeLocator loc(mesh);
  Field out = zero_field(mesh);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const Eigen::Vector2d p(-mesh.nodes(i, 0), mesh.nodes(i, 1));
    const int j = loc.find(p, 1e-9);
    if (j < 0) throw std::runtime_error("mirror_field: mesh is not mirror-symmetric about the axis");
    out.values[j] = u.values[i];
  }
  return out;
}

namespace {

// Shared workspace for the solver loops: stiffness, dof maps, energy and
// load evaluation on full nodal vectors.
struct Work {
  const Nonlinearity* nl;
  const TriMesh* mesh;
  SparseSpd K;

  explicit Work(const Nonlinearity& n, const TriMesh& m)
      : nl(&n), mesh(&m), K(assemble_stiffness(m)) {}

  double E(const Eigen::VectorXd& v) const {
    Field u;
    u.mesh = mesh;
    u.values = v;
    return energy(*nl, u);
  }
  Eigen::VectorXd b_of(const Eigen::VectorXd& v) const {
    Field u;
    u.mesh = mesh;
    u.values = v;
    return assemble_load_composed(u, K, [this](double s) { return nl->f(s); });
  }
  Eigen::VectorXd to_free(const Eigen::VectorXd& v) const {
    Eigen::VectorXd x(K.n_free());
    for (int f = 0; f < K.n_free(); ++f) x[f] = v[K.node_of_free[f]];
    return x;
  }
  Eigen::VectorXd to_full(const Eigen::VectorXd& x) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh->num_nodes());
    for (int f = 0; f < K.n_free(); ++f) v[K.node_of_free[f]] = x[f];
    return v;
  }
  double k_norm(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd x = to_free(v);
    return std::sqrt(std::max(0.0, x.dot(K.mat * x)));
  }
  // tangent operator K - (f'(u) phi_i, phi_j) on the free dofs
  Eigen::SparseMatrix<double> tangent(const Eigen::VectorXd& v) const {
    const TriangleRule& rule = TriangleRule::degree5();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh->num_triangles()) * 9);
    for (int t = 0; t < mesh->num_triangles(); ++t) {
      const int n0 = mesh->triangles(t, 0), n1 = mesh->triangles(t, 1), n2 = mesh->triangles(t, 2);
      const double v0 = v[n0], v1 = v[n1], v2 = v[n2];
      const double area = triangle_area(*mesh, t);
      double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
      for (int q = 0; q < TriangleRule::npts; ++q) {
        const double l[3] = {rule.l1[q], rule.l2[q], rule.l3[q]};
        const double w = rule.w[q] * nl->df(l[0] * v0 + l[1] * v1 + l[2] * v2);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) m[i][j] += w * l[i] * l[j];
      }
      const int fn[3] = {K.free_of_node[n0], K.free_of_node[n1], K.free_of_node[n2]};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (fn[i] >= 0 && fn[j] >= 0) trip.emplace_back(fn[i], fn[j], -area * m[i][j]);
    }
    Eigen::SparseMatrix<double> J = K.mat;
    Eigen::SparseMatrix<double> M(K.n_free(), K.n_free());
    M.setFromTriplets(trip.begin(), trip.end());
    J += M;
    return J;
  }
};

// Semismooth Newton on K u = b(u), seeded by the path maximizer.  Returns
// true when the natural-gradient norm meets the tolerance.
bool newton_polish(const Work& w, Eigen::VectorXd& v, double tol, double& gnorm_out) {
  Eigen::VectorXd x = w.to_free(v);
  for (int it = 0; it < 40; ++it) {
    const Eigen::VectorXd full = w.to_full(x);
    const Eigen::VectorXd r = w.K.mat * x - w.b_of(full);
    const double rn = r.norm();
    {
      const Eigen::VectorXd d = solve_spd(w.K, r, 1e-10);
      const double gnorm = std::sqrt(std::max(0.0, r.dot(d)));
      const double unorm = std::sqrt(std::max(0.0, x.dot(w.K.mat * x)));
      if (gnorm <= tol * std::max(1.0, unorm)) {
        v = full;
        gnorm_out = gnorm;
        return true;
      }
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(w.tangent(full));
    if (lu.info() != Eigen::Success) return false;
    const Eigen::VectorXd delta = lu.solve(r);
    double sigma = 1.0;
    bool moved = false;
    while (sigma >= 1e-8) {
      Eigen::VectorXd trial = x - sigma * delta;
      double trn;
      try {
        trn = (w.K.mat * trial - w.b_of(w.to_full(trial))).norm();
      } catch (const std::range_error&) {
        sigma *= 0.5;
        continue;
      }
      if (trn <= (1.0 - 1e-4 * sigma) * rn) {
        x = std::move(trial);
        moved = true;
        break;
      }
      sigma *= 0.5;
    }
    if (!moved) return false;
  }
  return false;
}

MountainPassResult finalize(const TriMesh& mesh, const MpaOptions& opts, const Eigen::VectorXd& v,
                            double level, double gnorm, int iters,
                            std::vector<std::pair<double, double>> trace, double t0) {
  MountainPassResult res;
  res.u.mesh = &mesh;
  res.u.values = v;
  res.level = level;
  res.grad_norm = gnorm;
  res.iterations = iters;
  res.path_trace = std::move(trace);
  res.endpoint_t0 = t0;
  res.min_value = res.u.values.minCoeff();
  res.positive = res.min_value >= -opts.sign_eps;
  if (!res.positive) {
    std::ostringstream os;
    os << "mountain_pass: solution failed the positivity check (min nodal value " << res.min_value
       << " < -" << opts.sign_eps << "); the truncated model should land on nonnegative states";
    throw std::runtime_error(os.str());
  }
  if (!(res.level > 0.0))
    throw std::runtime_error("mountain_pass: level is not positive (path slid off the ridge)");
  return res;
}

MountainPassResult run_mpa(const Nonlinearity& nl, const TriMesh& mesh, const MpaOptions& opts) {
  const Sector sec = sector(mesh.m);
  const Work w(nl, mesh);

  const Field phi = bump_field(sec, mesh);
  const auto [t0, e] = find_endpoint(nl, mesh, phi);

  const int P = std::max(8, opts.path_points);
  std::vector<Eigen::VectorXd> path(P + 1);
  std::vector<double> en(P + 1);
  for (int i = 0; i <= P; ++i) {
    path[i] = e.values * (static_cast<double>(i) / P);
    en[i] = w.E(path[i]);
  }

  // resample the polyline at uniform H0^1 arclength; endpoints stay fixed
  auto redistribute = [&]() {
    std::vector<double> cum(P + 1, 0.0);
    for (int i = 1; i <= P; ++i) cum[i] = cum[i - 1] + w.k_norm(path[i] - path[i - 1]);
    const double total = cum[P];
    if (!(total > 0.0)) return;
    std::vector<Eigen::VectorXd> fresh(P + 1);
    fresh[0] = path[0];
    fresh[P] = path[P];
    int seg = 1;
    for (int j = 1; j < P; ++j) {
      const double target = total * j / P;
      while (seg < P && cum[seg] < target) ++seg;
      const double w1 = cum[seg] - cum[seg - 1];
      const double a = w1 > 0.0 ? (target - cum[seg - 1]) / w1 : 0.0;
      fresh[j] = (1.0 - a) * path[seg - 1] + a * path[seg];
    }
    path = std::move(fresh);
    for (int i = 1; i < P; ++i) en[i] = w.E(path[i]);
  };

  double best_gnorm = std::numeric_limits<double>::infinity();
  int stall = 0;
  double gnorm = 0.0, level = 0.0;
  const double polish_gate = std::max(20.0 * opts.tol, 2e-2);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    {
      // refinement rule: resample whenever adjacent samples around the
      // maximizer differ in energy by more than 10% of the level, and
      // periodically regardless
      const int km = static_cast<int>(std::max_element(en.begin(), en.end()) - en.begin());
      const bool gap = (km > 0 && std::abs(en[km] - en[km - 1]) > 0.1 * std::abs(en[km])) ||
                       (km < P && std::abs(en[km + 1] - en[km]) > 0.1 * std::abs(en[km]));
      if (iter > 0 && (gap || iter % 8 == 0)) redistribute();
    }

    const int kmax = static_cast<int>(std::max_element(en.begin(), en.end()) - en.begin());
    level = en[kmax];
    if (kmax == 0 || kmax == P)
      throw std::runtime_error("mountain_pass: path maximum reached an endpoint (slid off the ridge)");
    if (level < 1e-8)
      throw std::runtime_error("mountain_pass: level collapsed toward 0 (path slid off the ridge)");

    Eigen::VectorXd u = path[kmax];
    const Eigen::VectorXd uf = w.to_free(u);
    const Eigen::VectorXd r = w.K.mat * uf - w.b_of(u);
    const Eigen::VectorXd d = solve_spd(w.K, r, 1e-10);
    const double g2 = r.dot(d);
    gnorm = std::sqrt(std::max(0.0, g2));
    const double unorm = std::sqrt(uf.dot(w.K.mat * uf));

    auto make_trace = [&]() {
      std::vector<std::pair<double, double>> trace;
      for (int i = 0; i <= P; ++i) trace.emplace_back(static_cast<double>(i) / P, en[i]);
      return trace;
    };

    if (gnorm <= opts.tol * std::max(1.0, unorm))
      return finalize(mesh, opts, u, level, gnorm, iter, make_trace(), t0);

    if (gnorm < 0.98 * best_gnorm) {
      best_gnorm = gnorm;
      stall = 0;
    } else {
      ++stall;
    }

    // once the maximizer is close to the ridge, sharpen it by a Newton
    // polish; the path located the pass, Newton removes the resolution
    // floor of the discrete path
    if (gnorm <= polish_gate * std::max(1.0, unorm) || stall >= 30) {
      Eigen::VectorXd cand = u;
      double polished_gnorm = 0.0;
      if (newton_polish(w, cand, opts.tol, polished_gnorm)) {
        const double lev = w.E(cand);
        if (lev > 1e-8) {
          path[kmax] = cand;
          en[kmax] = lev;
          return finalize(mesh, opts, cand, lev, polished_gnorm, iter, make_trace(), t0);
        }
      }
      stall = 0;  // polish not ready; keep deforming the path
    }

    // capped Armijo descent on the maximizer
    const double spacing = 0.5 * (w.k_norm(path[kmax] - path[kmax - 1]) +
                                  w.k_norm(path[kmax + 1] - path[kmax]));
    const Eigen::VectorXd dn = w.to_full(d);
    double sigma = (spacing > 0.0 && gnorm > 0.0) ? std::min(1.0, 1.5 * spacing / gnorm) : 1.0;
    bool accepted = false;
    while (sigma >= 1e-14) {
      Eigen::VectorXd trial = u - sigma * dn;
      double et;
      try {
        et = w.E(trial);
      } catch (const std::range_error&) {
        sigma *= 0.5;
        continue;
      }
      if (et <= en[kmax] - 1e-4 * sigma * g2) {
        path[kmax] = std::move(trial);
        en[kmax] = et;
        accepted = true;
        break;
      }
      sigma *= 0.5;
    }
    if (!accepted) redistribute();
  }
  std::ostringstream os;
  os << "mountain_pass: descent stalled; no convergence in " << opts.max_iters
     << " iterations; grad_norm " << gnorm << " above tol at level " << level;
  throw std::runtime_error(os.str());
}

MountainPassResult run_nehari(const Nonlinearity& nl, const TriMesh& mesh, const MpaOptions& opts) {
  const Sector sec = sector(mesh.m);
  const Work w(nl, mesh);

  // scale a nonnegative direction to the maximum of I along its ray
  auto project = [&](Eigen::VectorXd v) {
    Field uf;
    uf.mesh = &mesh;
    const double norm = w.k_norm(v);
    if (!(norm > 0.0)) throw std::runtime_error("nehari: zero direction");
    v /= norm;
    uf.values = v;
    auto ray_d = [&](double t) {  // d/dt I(t v) for the unit-norm direction
      const double pairing = integrate_composed(uf, [&](double s) { return nl.f(t * s) * s; });
      return t - pairing;
    };
    const double vmax = v.cwiseAbs().maxCoeff();
    double hi = 1.0;
    while (ray_d(hi) > 0.0) {
      hi *= 2.0;
      if (hi * vmax > nl.safe_bound())
        throw std::range_error("nehari: ray maximum beyond the safe range; increase lambda");
    }
    double lo = 0.5 * hi;
    while (lo > 1e-12 && ray_d(lo) <= 0.0) lo *= 0.5;
    if (!(ray_d(lo) > 0.0)) throw std::runtime_error("nehari: no ray maximum bracket");
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (ray_d(mid) > 0.0 ? lo : hi) = mid;
    }
    return Eigen::VectorXd(0.5 * (lo + hi) * v);
  };

  const Field phi = bump_field(sec, mesh);
  const auto [t0, e] = find_endpoint(nl, mesh, phi);
  Eigen::VectorXd u = project(phi.values);
  double eu = w.E(u);

  const double polish_gate = std::max(20.0 * opts.tol, 2e-2);
  double gnorm = 0.0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const Eigen::VectorXd uf = w.to_free(u);
    const Eigen::VectorXd r = w.K.mat * uf - w.b_of(u);
    const Eigen::VectorXd d = solve_spd(w.K, r, 1e-10);
    const double g2 = r.dot(d);
    gnorm = std::sqrt(std::max(0.0, g2));
    const double unorm = std::sqrt(uf.dot(w.K.mat * uf));

    auto ray_trace = [&]() {
      std::vector<std::pair<double, double>> trace;
      const int P = std::max(8, opts.path_points);
      const double umax = u.cwiseAbs().maxCoeff();
      double t_end = 1.0;
      while (1.25 * t_end * umax <= nl.safe_bound()) {
        t_end *= 1.25;
        if (w.E(Eigen::VectorXd(t_end * u)) < 0.0) break;
      }
      for (int i = 0; i <= P; ++i)
        trace.emplace_back(static_cast<double>(i) / P,
                           w.E(Eigen::VectorXd(t_end * i / P * u)));
      return trace;
    };

    if (gnorm <= opts.tol * std::max(1.0, unorm))
      return finalize(mesh, opts, u, eu, gnorm, iter, ray_trace(), t0);

    if (gnorm <= polish_gate * std::max(1.0, unorm)) {
      Eigen::VectorXd cand = u;
      double polished_gnorm = 0.0;
      if (newton_polish(w, cand, opts.tol, polished_gnorm)) {
        const double lev = w.E(cand);
        if (lev > 1e-8) {
          u = cand;
          eu = lev;
          return finalize(mesh, opts, u, eu, polished_gnorm, iter, ray_trace(), t0);
        }
      }
    }

    double sigma = 1.0;
    bool accepted = false;
    while (sigma >= 1e-14) {
      Eigen::VectorXd trial;
      double et;
      try {
        trial = project(u - sigma * w.to_full(d));
        et = w.E(trial);
      } catch (const std::range_error&) {
        sigma *= 0.5;
        continue;
      }
      if (et <= eu - 1e-6 * sigma * g2) {
        u = std::move(trial);
        eu = et;
        accepted = true;
        break;
      }
      sigma *= 0.5;
    }
    if (!accepted) {
      std::ostringstream os;
      os << "nehari: projected descent stalled with grad_norm " << gnorm << " at level " << eu;
      throw std::runtime_error(os.str());
    }
  }
  std::ostringstream os;
  os << "nehari: no convergence in " << opts.max_iters << " iterations; grad_norm " << gnorm;
  throw std::runtime_error(os.str());
}

}  // namespace

MountainPassResult mountain_pass(const Nonlinearity& nl, const TriMesh& mesh,
                                 const MpaOptions& opts) {
  if (!nl.truncated())
    throw std::invalid_argument(
        "mountain_pass: positive-solution mode requires the truncated nonlinearity (f = 0 on s <= 0)");
  if (mesh.copies != 1)
    throw std::invalid_argument("mountain_pass: expected a sector mesh, not a reflected union");
  return opts.mode == MpaOptions::Mode::mpa ? run_mpa(nl, mesh, opts) : run_nehari(nl, mesh, opts);
}

}  // namespace sectorpass
