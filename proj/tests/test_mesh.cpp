#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "sectorpass/mesh.hpp"

using namespace sectorpass;

namespace {

// conformity: every directed edge once; undirected edges shared by at most
// two triangles, interior ones by exactly two with opposite orientation
void check_conforming(const TriMesh& mesh) {
  std::map<std::pair<int, int>, int> undirected;
  std::set<std::pair<int, int>> directed;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int i = 0; i < 3; ++i) {
      const int a = mesh.triangles(t, i), b = mesh.triangles(t, (i + 1) % 3);
      CHECK(directed.insert({a, b}).second);  // a directed edge appears once
      ++undirected[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [e, c] : undirected) CHECK(c <= 2);
}

bool node_on_sector_boundary(const Sector& s, const Eigen::Vector2d& x, double tol) {
  const double cb = std::cos(s.half_angle), sb = std::sin(s.half_angle);
  if (x.norm() <= tol) return true;                        // origin corner
  if (std::abs(x.norm() - 1.0) <= tol) return true;        // arc
  if (std::abs(x[0] * cb + x[1] * sb) <= tol) return true; // side at -beta
  if (std::abs(x[0] * cb - x[1] * sb) <= tol) return true; // side at +beta
  return false;
}

}  // namespace

TEST_CASE("sector mesh: area, boundary predicate, positive areas, conformity") {
  const Sector s = sector(1);
  const TriMesh mesh = mesh_sector(s, 0.05, 2.0);
  const double area = mesh_area(mesh);
  CHECK(area == doctest::Approx(std::numbers::pi / 2.0).epsilon(0.005));
  for (int t = 0; t < mesh.num_triangles(); ++t) CHECK(triangle_area(mesh, t) > 0.0);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.boundary[i])
      CHECK(node_on_sector_boundary(s, mesh.nodes.row(i).transpose(), 1e-12));
  }
  check_conforming(mesh);
  // arc nodes on the unit circle to round-off
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const double r = mesh.nodes.row(i).norm();
    if (r > 0.999) CHECK(r == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("sector mesh: areas for m = 2 and 3 approach beta") {
  for (int m : {2, 3}) {
    const Sector s = sector(m);
    const TriMesh mesh = mesh_sector(s, 0.04, 1.5);
    CHECK(mesh_area(mesh) == doctest::Approx(s.half_angle).epsilon(0.005));
  }
}

TEST_CASE("sector mesh: halving h roughly quadruples the triangle count") {
  const Sector s = sector(2);
  const int n1 = mesh_sector(s, 0.08, 2.0).num_triangles();
  const int n2 = mesh_sector(s, 0.04, 2.0).num_triangles();
  const double ratio = static_cast<double>(n2) / n1;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("sector mesh: node set is exactly mirror-symmetric about the axis") {
  const TriMesh mesh = mesh_sector(sector(2), 0.07, 2.0);
  const NodeLocator loc(mesh);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const int j = loc.find({-mesh.nodes(i, 0), mesh.nodes(i, 1)}, 1e-12);
    CHECK(j >= 0);
  }
}

TEST_CASE("sector mesh: h too large to resolve the sector is an error") {
  CHECK_THROWS_AS(mesh_sector(sector(3), 0.8, 1.0), std::runtime_error);
  CHECK_THROWS_AS(mesh_sector(sector(1), 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mesh_sector(sector(1), 0.05, 0.5), std::invalid_argument);
}

TEST_CASE("disk mesh: area, merged nodes, parity classes, boundary on the circle only") {
  for (int m : {1, 2}) {
    const TriMesh sm = mesh_sector(sector(m), 0.06, 2.0);
    const TriMesh disk = build_disk_mesh(m, sm);
    const int copies = 1 << m;
    CHECK(disk.is_full_disk());
    CHECK(mesh_area(disk) == doctest::Approx(std::numbers::pi).epsilon(0.006));
    CHECK(disk.num_nodes() < copies * sm.num_nodes());  // interfaces merged
    CHECK(disk.num_triangles() == copies * sm.num_triangles());
    std::set<int> parities;
    for (int t = 0; t < disk.num_triangles(); ++t) parities.insert(disk.parity[t]);
    CHECK(static_cast<int>(parities.size()) == copies);
    for (int t = 0; t < disk.num_triangles(); ++t) CHECK(triangle_area(disk, t) > 0.0);
    for (int i = 0; i < disk.num_nodes(); ++i) {
      if (disk.boundary[i])
        CHECK(disk.nodes.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    check_conforming(disk);
  }
}

TEST_CASE("disk mesh: m = 2 has exactly 4 parity classes of equal size") {
  const TriMesh sm = mesh_sector(sector(2), 0.08, 1.0);
  const TriMesh disk = build_disk_mesh(2, sm);
  std::map<int, int> count;
  for (int t = 0; t < disk.num_triangles(); ++t) ++count[disk.parity[t]];
  CHECK(count.size() == 4);
  for (const auto& [k, c] : count) CHECK(c == sm.num_triangles());
}

TEST_CASE("disk mesh: parity-k triangles map onto parity-0 triangles under the inverse copy map") {
  const int m = 2;
  const TriMesh sm = mesh_sector(sector(m), 0.09, 1.0);
  const TriMesh disk = build_disk_mesh(m, sm);
  const NodeLocator loc(disk);
  const int nt = sm.num_triangles();
  for (int k = 1; k < (1 << m); ++k) {
    const Eigen::Matrix2d T = copy_transform(m, k);
    const Eigen::Matrix2d Tinv = T.inverse();
    for (int t : {0, nt / 2, nt - 1}) {  // spot-check a few triangles of parity k
      const int tk = k * nt + t;
      REQUIRE(disk.parity[tk] == k);
      for (int i = 0; i < 3; ++i) {
        const Eigen::Vector2d back = Tinv * Eigen::Vector2d(disk.nodes.row(disk.triangles(tk, i)));
        const int j = loc.find(back, 1e-9);
        REQUIRE(j >= 0);
        // the preimage node belongs to the parity-0 copy
        bool in_copy0 = false;
        for (int p = 0; p < disk.copy_nodes[0].size(); ++p)
          if (disk.copy_nodes[0][p] == j) in_copy0 = true;
        CHECK(in_copy0);
      }
    }
  }
}

TEST_CASE("reflected union: partial unions carry exterior Dirichlet sides") {
  const int m = 2;
  const TriMesh sm = mesh_sector(sector(m), 0.09, 1.0);
  const TriMesh uni = build_reflected_union(m, sm, 2);
  CHECK(uni.copies == 2);
  CHECK(!uni.is_full_disk());
  CHECK(mesh_area(uni) == doctest::Approx(2.0 * sector(m).half_angle).epsilon(0.01));
  // every boundary flag corresponds to arc or exterior side or apex
  int flagged = 0;
  for (int i = 0; i < uni.num_nodes(); ++i) flagged += uni.boundary[i];
  CHECK(flagged > 0);
}

TEST_CASE("build_disk_mesh: rejects meshes whose side nodes are off the sides") {
  const int m = 2;
  TriMesh sm = mesh_sector(sector(m), 0.12, 1.0);
  // find a side node and nudge it off the side line
  for (int i = 0; i < sm.num_nodes(); ++i) {
    const Eigen::Vector2d x = sm.nodes.row(i);
    if (!sm.boundary[i] || x.norm() < 0.3 || x.norm() > 0.9) continue;
    const double cb = std::cos(sector(m).half_angle), sb = std::sin(sector(m).half_angle);
    if (std::abs(x[0] * cb - x[1] * sb) <= 1e-10) {  // on side at +beta
      sm.nodes(i, 0) += 1e-6;
      break;
    }
  }
  CHECK_THROWS_AS(build_disk_mesh(m, sm), std::runtime_error);
}

TEST_CASE("copy transforms: isometries with the right parity, interfaces fixed") {
  for (int m : {1, 2, 3}) {
    for (int k = 0; k < (1 << m); ++k) {
      const Eigen::Matrix2d T = copy_transform(m, k);
      CHECK(std::abs(std::abs(T.determinant()) - 1.0) < 1e-14);
      const double expected = (k % 2 == 0) ? 1.0 : -1.0;
      CHECK(T.determinant() == doctest::Approx(expected).epsilon(1e-14));
    }
    for (const auto& dir : interface_directions(m)) {
      CHECK(dir.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(static_cast<int>(interface_directions(m).size()) == (m == 1 ? 1 : (1 << (m - 1))));
  }
}
