#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <sstream>
#include <stdexcept>

#include "sectorpass/mesh.hpp"
#include "sectorpass/nonlinearity.hpp"
#include "sectorpass/quadrature.hpp"

namespace sectorpass {

// Nodal P1 coefficient vector on a TriMesh; Dirichlet entries are kept at
// exactly 0.  The mesh is referenced, not owned.
struct Field {
  const TriMesh* mesh = nullptr;
  Eigen::VectorXd values;
};

Field zero_field(const TriMesh& mesh);
void enforce_dirichlet(Field& u);

// Reduced SPD matrix on the free (non-Dirichlet) nodes, plus the dof maps.
struct SparseSpd {
  Eigen::SparseMatrix<double> mat;
  Eigen::VectorXi free_of_node;  // -1 at Dirichlet nodes
  Eigen::VectorXi node_of_free;
  int n_free() const { return static_cast<int>(mat.rows()); }
};

SparseSpd assemble_stiffness(const TriMesh& mesh);
SparseSpd assemble_mass(const TriMesh& mesh);

// Unreduced stiffness (no Dirichlet elimination); diagnostics and tests.
Eigen::SparseMatrix<double> assemble_stiffness_full(const TriMesh& mesh);

Eigen::VectorXd restrict_free(const Field& u, const SparseSpd& dofs);
Field scatter_free(const TriMesh& mesh, const SparseSpd& dofs, const Eigen::VectorXd& x);

double field_dot(const Field& a, const Field& b);

// exact per-element integral of |grad u_h|^2
double stiffness_quadratic(const Field& u);
double h1_norm(const Field& u);

namespace detail {
void p1_gradients(const TriMesh& mesh, int t, double& area, Eigen::Matrix<double, 2, 3>& g);
}

// integral of fun(u_h) over the mesh, 7-point degree-5 rule per element
template <class Fun>
double integrate_composed(const Field& u, Fun&& fun) {
  const TriMesh& mesh = *u.mesh;
  const TriangleRule& rule = TriangleRule::degree5();
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double v0 = u.values[mesh.triangles(t, 0)];
    const double v1 = u.values[mesh.triangles(t, 1)];
    const double v2 = u.values[mesh.triangles(t, 2)];
    const double area = triangle_area(mesh, t);
    double local = 0.0;
    for (int q = 0; q < TriangleRule::npts; ++q)
      local += rule.w[q] * fun(rule.l1[q] * v0 + rule.l2[q] * v1 + rule.l3[q] * v2);
    acc += area * local;
  }
  return acc;
}

// load vector b_i = integral of fun(u_h) phi_i, on the free dofs
template <class Fun>
Eigen::VectorXd assemble_load_composed(const Field& u, const SparseSpd& dofs, Fun&& fun) {
  const TriMesh& mesh = *u.mesh;
  const TriangleRule& rule = TriangleRule::degree5();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.n_free());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const int n0 = mesh.triangles(t, 0), n1 = mesh.triangles(t, 1), n2 = mesh.triangles(t, 2);
    const double v0 = u.values[n0], v1 = u.values[n1], v2 = u.values[n2];
    const double area = triangle_area(mesh, t);
    double l0 = 0.0, l1 = 0.0, l2 = 0.0;
    for (int q = 0; q < TriangleRule::npts; ++q) {
      const double fv = rule.w[q] * fun(rule.l1[q] * v0 + rule.l2[q] * v1 + rule.l3[q] * v2);
      l0 += fv * rule.l1[q];
      l1 += fv * rule.l2[q];
      l2 += fv * rule.l3[q];
    }
    const int f0 = dofs.free_of_node[n0], f1 = dofs.free_of_node[n1], f2 = dofs.free_of_node[n2];
    if (f0 >= 0) b[f0] += area * l0;
    if (f1 >= 0) b[f1] += area * l1;
    if (f2 >= 0) b[f2] += area * l2;
  }
  return b;
}

struct EnergyParts {
  double quadratic = 0.0;  // 1/2 integral |grad u|^2
  double nonlinear = 0.0;  // integral F(u)
};

EnergyParts energy_parts(const Nonlinearity& nl, const Field& u);
double energy(const Nonlinearity& nl, const Field& u);  // quadratic - nonlinear

// discrete gradient K u - b(u) scattered back to nodes (Dirichlet rows 0)
Field grad_energy(const Nonlinearity& nl, const Field& u, const SparseSpd& K);
Field grad_energy(const Nonlinearity& nl, const Field& u);

// Scaled nodal residual of the discrete equation K u = b(u) for an
// arbitrary nonlinearity fun: fresh assembly, max over free nodes of
// |(Ku - b)_i| / sum_j |K_ij|.
template <class Fun>
double residual_check_fun(const TriMesh& mesh, const Field& u, Fun&& fun) {
  const SparseSpd K = assemble_stiffness(mesh);
  const Eigen::VectorXd r =
      K.mat * restrict_free(u, K) - assemble_load_composed(u, K, std::forward<Fun>(fun));
  double worst = 0.0;
  for (int f = 0; f < K.n_free(); ++f) {
    double scale = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(K.mat, f); it; ++it)
      scale += std::abs(it.value());
    worst = std::max(worst, std::abs(r[f]) / scale);
  }
  return worst;
}

// Jacobi-preconditioned conjugate gradients; deterministic.  Throws
// std::runtime_error carrying the tail of the residual history if the
// relative residual does not reach rel_tol within the iteration cap.
Eigen::VectorXd solve_spd(const SparseSpd& K, const Eigen::VectorXd& rhs, double rel_tol = 1e-10,
                          int max_iters = 0);

// Smallest eigenvalue of K u = lambda M u (consistent mass), inverse
// iteration with CG inner solves, Rayleigh residual below target.
double lambda1(const TriMesh& mesh, double target_residual = 1e-8);

// Embeds a sector field into a reflected-union mesh by zero extension.
Field zero_extend(const Field& sector_field, const TriMesh& union_mesh);

}  // namespace sectorpass
