#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sectorpass/fem.hpp"
#include "sectorpass/mesh.hpp"
#include "sectorpass/nonlinearity.hpp"

namespace sectorpass {

// Sign-changing disk solution built from a positive sector solution by
// iterated antisymmetric reflection.
struct AssembledSolution {
  Field u;                      // on the disk mesh
  int m = 0;
  Eigen::VectorXi parity_sign;  // +-1 per sector copy, alternating
  int nodal_domains = 0;
  double interface_max = 0.0;   // max |u| over interface nodes (exact 0 by construction)
  double residual = 0.0;        // disk residual with the untruncated odd f
  double sign_eps = 0.0;        // threshold used for the nodal-domain count
};

// Antisymmetric extension onto a two-copy union mesh: u on the original
// copy, -u(Rx) on the reflection, 0 on the interface.  Values are copied
// with sign flips; no floating arithmetic is involved.
Field reflect_antisymmetric(const Field& u_sector, const TriMesh& two_copy_mesh);

// Applies all 2^m dihedral copies with signs (-1)^parity and verifies the
// result: interface trace, nodal-domain count, independent disk residual
// computed with the untruncated odd nonlinearity.  The sector solution must
// vanish on all of the sector boundary (trace above 1e-10 is an error).
AssembledSolution assemble_disk_solution(int m, const Field& u_sector, const TriMesh& disk_mesh,
                                         const Nonlinearity& nl_untruncated);

// Union-find over strictly signed triangles (all three nodal values share a
// sign and exceed eps), merged across shared edges.
int count_nodal_domains(const Field& u, double eps);

// Disk residual when f is perturbed by an even term eps*(e^{s^2}-1),
// restricted to the band of free nodes within 1.5 h of an interface line.
// With eps = 0 this reproduces the antisymmetric baseline; a nonzero even
// part breaks the interface cancellation that Proposition-style assembly
// relies on.
double oddness_ablation(int m, const Field& u_sector, const TriMesh& disk_mesh,
                        const Nonlinearity& nl_untruncated, double even_eps);

// Interface-band residual of an assembled disk field for an arbitrary f.
template <class Fun>
double interface_band_residual(const TriMesh& disk_mesh, const Field& u, Fun&& fun) {
  const SparseSpd K = assemble_stiffness(disk_mesh);
  const Eigen::VectorXd r =
      K.mat * restrict_free(u, K) - assemble_load_composed(u, K, std::forward<Fun>(fun));
  const std::vector<Eigen::Vector2d> lines = interface_directions(disk_mesh.m);
  const double band = 1.5 * std::max(disk_mesh.target_h, 1e-3);
  double worst = 0.0;
  for (int f = 0; f < K.n_free(); ++f) {
    const Eigen::Vector2d x = disk_mesh.nodes.row(K.node_of_free[f]);
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& dir : lines)
      dist = std::min(dist, std::abs(x[0] * dir[1] - x[1] * dir[0]));
    if (dist > band) continue;
    double scale = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(K.mat, f); it; ++it)
      scale += std::abs(it.value());
    worst = std::max(worst, std::abs(r[f]) / scale);
  }
  return worst;
}

}  // namespace sectorpass
