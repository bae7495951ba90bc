#include "sectorpass/fem.hpp"

#include <cmath>
#include <deque>
#include <vector>

namespace sectorpass {

Field zero_field(const TriMesh& mesh) {
  Field u;
  u.mesh = &mesh;
  u.values = Eigen::VectorXd::Zero(mesh.num_nodes());
  return u;
}

void enforce_dirichlet(Field& u) {
  const TriMesh& mesh = *u.mesh;
  for (int i = 0; i < mesh.num_nodes(); ++i)
    if (mesh.boundary[i]) u.values[i] = 0.0;
}

namespace detail {

void p1_gradients(const TriMesh& mesh, int t, double& area, Eigen::Matrix<double, 2, 3>& g) {
  const Eigen::Vector2d p0 = mesh.nodes.row(mesh.triangles(t, 0));
  const Eigen::Vector2d p1 = mesh.nodes.row(mesh.triangles(t, 1));
  const Eigen::Vector2d p2 = mesh.nodes.row(mesh.triangles(t, 2));
  area = 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
  if (!(area > 1e-16)) {
    std::ostringstream os;
    os << "degenerate triangle #" << t << " (signed area " << area << ")";
    throw std::runtime_error(os.str());
  }
  const double inv2A = 1.0 / (2.0 * area);
  g(0, 0) = (p1[1] - p2[1]) * inv2A;
  g(1, 0) = (p2[0] - p1[0]) * inv2A;
  g(0, 1) = (p2[1] - p0[1]) * inv2A;
  g(1, 1) = (p0[0] - p2[0]) * inv2A;
  g(0, 2) = (p0[1] - p1[1]) * inv2A;
  g(1, 2) = (p1[0] - p0[0]) * inv2A;
}

}  // namespace detail

namespace {

void make_dof_maps(const TriMesh& mesh, Eigen::VectorXi& free_of_node, Eigen::VectorXi& node_of_free) {
  const int n = mesh.num_nodes();
  free_of_node = Eigen::VectorXi::Constant(n, -1);
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (!mesh.boundary[i]) free_of_node[i] = nf++;
  node_of_free.resize(nf);
  for (int i = 0; i < n; ++i)
    if (free_of_node[i] >= 0) node_of_free[free_of_node[i]] = i;
}

}  // namespace

SparseSpd assemble_stiffness(const TriMesh& mesh) {
  SparseSpd K;
  make_dof_maps(mesh, K.free_of_node, K.node_of_free);
  const int nf = static_cast<int>(K.node_of_free.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(mesh.num_triangles()) * 9);
  Eigen::Matrix<double, 2, 3> g;
  double area;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    detail::p1_gradients(mesh, t, area, g);
    for (int i = 0; i < 3; ++i) {
      const int fi = K.free_of_node[mesh.triangles(t, i)];
      if (fi < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int fj = K.free_of_node[mesh.triangles(t, j)];
        if (fj < 0) continue;
        trip.emplace_back(fi, fj, area * g.col(i).dot(g.col(j)));
      }
    }
  }
  K.mat.resize(nf, nf);
  K.mat.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SparseSpd assemble_mass(const TriMesh& mesh) {
  SparseSpd M;
  make_dof_maps(mesh, M.free_of_node, M.node_of_free);
  const int nf = static_cast<int>(M.node_of_free.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(mesh.num_triangles()) * 9);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = triangle_area(mesh, t);
    for (int i = 0; i < 3; ++i) {
      const int fi = M.free_of_node[mesh.triangles(t, i)];
      if (fi < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int fj = M.free_of_node[mesh.triangles(t, j)];
        if (fj < 0) continue;
        trip.emplace_back(fi, fj, area / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  M.mat.resize(nf, nf);
  M.mat.setFromTriplets(trip.begin(), trip.end());
  return M;
}

Eigen::SparseMatrix<double> assemble_stiffness_full(const TriMesh& mesh) {
  const int n = mesh.num_nodes();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(mesh.num_triangles()) * 9);
  Eigen::Matrix<double, 2, 3> g;
  double area;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    detail::p1_gradients(mesh, t, area, g);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(mesh.triangles(t, i), mesh.triangles(t, j), area * g.col(i).dot(g.col(j)));
  }
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Eigen::VectorXd restrict_free(const Field& u, const SparseSpd& dofs) {
  Eigen::VectorXd x(dofs.n_free());
  for (int f = 0; f < dofs.n_free(); ++f) x[f] = u.values[dofs.node_of_free[f]];
  return x;
}

Field scatter_free(const TriMesh& mesh, const SparseSpd& dofs, const Eigen::VectorXd& x) {
  Field u = zero_field(mesh);
  for (int f = 0; f < dofs.n_free(); ++f) u.values[dofs.node_of_free[f]] = x[f];
  return u;
}

double field_dot(const Field& a, const Field& b) { return a.values.dot(b.values); }

double stiffness_quadratic(const Field& u) {
  const TriMesh& mesh = *u.mesh;
  Eigen::Matrix<double, 2, 3> g;
  double area, acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    detail::p1_gradients(mesh, t, area, g);
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    for (int i = 0; i < 3; ++i) grad += u.values[mesh.triangles(t, i)] * g.col(i);
    acc += area * grad.squaredNorm();
  }
  return acc;
}

double h1_norm(const Field& u) { return std::sqrt(stiffness_quadratic(u)); }

EnergyParts energy_parts(const Nonlinearity& nl, const Field& u) {
  EnergyParts p;
  p.quadratic = 0.5 * stiffness_quadratic(u);
  p.nonlinear = integrate_composed(u, [&nl](double s) { return nl.F(s); });
  return p;
}

double energy(const Nonlinearity& nl, const Field& u) {
  const EnergyParts p = energy_parts(nl, u);
  return p.quadratic - p.nonlinear;
}

Field grad_energy(const Nonlinearity& nl, const Field& u, const SparseSpd& K) {
  const Eigen::VectorXd uf = restrict_free(u, K);
  const Eigen::VectorXd b = assemble_load_composed(u, K, [&nl](double s) { return nl.f(s); });
  return scatter_free(*u.mesh, K, K.mat * uf - b);
}

Field grad_energy(const Nonlinearity& nl, const Field& u) {
  const SparseSpd K = assemble_stiffness(*u.mesh);
  return grad_energy(nl, u, K);
}

Eigen::VectorXd solve_spd(const SparseSpd& K, const Eigen::VectorXd& rhs, double rel_tol, int max_iters) {
  const int n = K.n_free();
  if (rhs.size() != n) throw std::invalid_argument("solve_spd: rhs size mismatch");
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return Eigen::VectorXd::Zero(n);
  if (max_iters <= 0) max_iters = 4 * n + 200;

  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) diag[i] = K.mat.coeff(i, i);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = r.cwiseQuotient(diag);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  std::deque<double> history;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd Ap = K.mat * p;
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) throw std::runtime_error("solve_spd: matrix is not positive definite");
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    const double rel = r.norm() / rhs_norm;
    history.push_back(rel);
    if (history.size() > 12) history.pop_front();
    if (rel <= rel_tol) return x;
    z = r.cwiseQuotient(diag);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  std::ostringstream os;
  os << "solve_spd: CG did not reach relative residual " << rel_tol << " in " << max_iters
     << " iterations; residual history tail:";
  for (double h : history) os << " " << h;
  throw std::runtime_error(os.str());
}

double lambda1(const TriMesh& mesh, double target_residual) {
  const SparseSpd K = assemble_stiffness(mesh);
  const SparseSpd M = assemble_mass(mesh);
  const int n = K.n_free();
  if (n < 1) throw std::invalid_argument("lambda1: mesh has no free node");

  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  v /= std::sqrt(v.dot(M.mat * v));
  double lam = 0.0, res = 0.0;
  int worse = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd w = solve_spd(K, M.mat * v, 1e-10);
    v = w / std::sqrt(w.dot(M.mat * w));
    const Eigen::VectorXd Kv = K.mat * v;
    const Eigen::VectorXd Mv = M.mat * v;
    lam = v.dot(Kv);
    res = (Kv - lam * Mv).norm() / Kv.norm();
    if (res <= target_residual) return lam;
    worse = (res >= prev * 0.999) ? worse + 1 : 0;
    if (worse >= 6) break;
    prev = res;
  }
  std::ostringstream os;
  os << "lambda1: inverse iteration stagnated, last Rayleigh residual " << res;
  throw std::runtime_error(os.str());
}

Field zero_extend(const Field& sector_field, const TriMesh& union_mesh) {
  if (union_mesh.copy_nodes.empty())
    throw std::invalid_argument("zero_extend: target mesh is not a reflected union");
  const Eigen::VectorXi& map0 = union_mesh.copy_nodes[0];
  if (map0.size() != sector_field.mesh->num_nodes())
    throw std::invalid_argument("zero_extend: union mesh was not built from this sector mesh");
  Field out = zero_field(union_mesh);
  for (int i = 0; i < map0.size(); ++i) out.values[map0[i]] = sector_field.values[i];
  enforce_dirichlet(out);
  return out;
}

}  // namespace sectorpass
