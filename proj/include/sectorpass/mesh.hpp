#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sectorpass/geometry.hpp"

namespace sectorpass {

// Conforming P1 triangulation of a sector A_m, or of a union of reflected
// copies of it (up to the whole unit disk).  Triangles are counterclockwise.
// For reflected meshes, parity(t) is the copy index of triangle t and
// copy_nodes[k] maps sector node ids to mesh node ids of copy k; values can
// therefore be transported between copies without floating arithmetic.
struct TriMesh {
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodes;
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles;
  std::vector<std::uint8_t> boundary;  // Dirichlet flag per node
  Eigen::VectorXi parity;              // per-triangle copy index (all 0 for a sector mesh)
  double target_h = 0.0;
  int m = 0;       // sector family index
  int copies = 1;  // 1 = plain sector mesh, 2..2^m = reflected union

  std::vector<Eigen::VectorXi> copy_nodes;  // empty for plain sector meshes

  int num_nodes() const { return static_cast<int>(nodes.rows()); }
  int num_triangles() const { return static_cast<int>(triangles.rows()); }
  bool is_full_disk() const { return copies == (1 << m) && copies >= 2; }
};

// Structured polar-type mesh of A_m: graded rings x uniform angular
// intervals, an apex fan at the origin, union-jack quad splitting.  The
// node set is exactly mirror-symmetric about the sector axis, arc nodes lie
// on the unit circle to round-off, and all boundary nodes are flagged
// Dirichlet.  grading >= 1 shrinks the radial spacing to h/grading near
// the origin corner and inside the concentration band around r = 1 - d_m
// (where the mountain-pass solutions localize, reaching the corner
// tangency points), and boosts the angular count so the outer arc spacing
// drops accordingly; spacing is h elsewhere.
TriMesh mesh_sector(const Sector& s, double h, double grading = 2.0);

// Union of n_copies dihedral reflections of the sector mesh, glued along
// shared interfaces without duplicate nodes.  n_copies = 2^m closes the
// disk.  Throws if the sector mesh's straight-side nodes are not
// mirror-consistent (tolerance 1e-10).
TriMesh build_reflected_union(int m, const TriMesh& sector_mesh, int n_copies);

// Full unit-disk mesh (all 2^m copies).
TriMesh build_disk_mesh(int m, const TriMesh& sector_mesh);

double triangle_area(const TriMesh& mesh, int t);
double mesh_area(const TriMesh& mesh);

// The linear dihedral unfolding map sending sector copy 0 onto copy k
// (rotation for even k, reflection for odd k).
Eigen::Matrix2d copy_transform(int m, int k);

// Interface lines of the 2^m tiling: unit directions of the lines at odd
// multiples of beta (each line listed once).  These generate the dihedral
// group of the tiling.
std::vector<Eigen::Vector2d> interface_directions(int m);

// Nearest-node lookup used by symmetry checks; returns -1 when no node is
// within tol of p.
class NodeLocator {
 public:
  explicit NodeLocator(const TriMesh& mesh);
  int find(const Eigen::Vector2d& p, double tol = 1e-9) const;

 private:
  const TriMesh& mesh_;
  std::vector<int> order_;  // node ids sorted by x
};

}  // namespace sectorpass
