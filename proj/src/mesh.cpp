#include "sectorpass/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sectorpass {

namespace {

constexpr double kMergeTol = 1e-10;  // reflections are exact isometries; coincidence is round-off only

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

void push_tri_ccw(std::vector<Eigen::Vector3i>& tris, const Eigen::Matrix<double, Eigen::Dynamic, 2>& nodes,
                  int v0, int v1, int v2) {
  const Eigen::Vector2d a = nodes.row(v0), b = nodes.row(v1), c = nodes.row(v2);
  if (signed_area(a, b, c) < 0.0)
    tris.emplace_back(v0, v2, v1);
  else
    tris.emplace_back(v0, v1, v2);
}

// Node classification against the sector sides, tolerance kMergeTol.
struct SideTags {
  std::vector<std::uint8_t> on_a, on_b, on_arc;
  int origin = -1;
};

SideTags classify_sides(const TriMesh& mesh, double beta) {
  SideTags t;
  const int n = mesh.num_nodes();
  t.on_a.assign(n, 0);
  t.on_b.assign(n, 0);
  t.on_arc.assign(n, 0);
  const double cb = std::cos(beta), sb = std::sin(beta);
  for (int i = 0; i < n; ++i) {
    const double x = mesh.nodes(i, 0), y = mesh.nodes(i, 1);
    const double r = std::hypot(x, y);
    if (r <= kMergeTol) {
      t.origin = i;
      continue;
    }
    if (std::abs(x * cb + y * sb) <= kMergeTol && -x * sb + y * cb >= -kMergeTol) t.on_a[i] = 1;
    if (std::abs(x * cb - y * sb) <= kMergeTol && x * sb + y * cb >= -kMergeTol) t.on_b[i] = 1;
    if (r >= 1.0 - 1e-9) t.on_arc[i] = 1;
  }
  return t;
}

}  // namespace

TriMesh mesh_sector(const Sector& s, double h, double grading) {
  if (!(h > 0.0) || !(h < 1.0)) throw std::invalid_argument("mesh_sector: need 0 < h < 1");
  if (!(grading >= 1.0)) throw std::invalid_argument("mesh_sector: grading must be >= 1");
  const double beta = s.half_angle;
  const double g = grading;

  // Angular intervals: uniform in theta, boosted with the grading so the
  // arc spacing at the outer radii (the concentration band reaches the
  // tangency points on the sides) drops toward h/g; spacing shrinks
  // automatically with r toward the apex.
  int N = static_cast<int>(std::ceil(2.0 * beta * 0.5 * (1.0 + g) / h));
  if (N % 2) ++N;

  // Radial rings: spacing h/g near the origin corner and inside the
  // concentration band around r = 1 - d_m, spacing h elsewhere, with
  // linear blending; the outermost ring is snapped onto the unit circle.
  const double r_peak = 1.0 - s.inradius;
  const double band = 0.6 * s.inradius;
  const double blend = 0.15;
  auto local_factor = [&](double r) {
    const double w_origin = std::clamp(1.0 - r / blend, 0.0, 1.0);
    const double dist = std::abs(r - r_peak);
    const double w_peak = std::clamp((band + blend - dist) / blend, 0.0, 1.0);
    return 1.0 + (g - 1.0) * std::max(w_origin, w_peak);
  };
  std::vector<double> radii;
  {
    double r = 0.0;
    while (true) {
      const double step = h / local_factor(r);
      const double remaining = 1.0 - r;
      if (remaining <= 1.45 * step) {
        if (remaining > step) radii.push_back(r + 0.5 * remaining);
        radii.push_back(1.0);
        break;
      }
      r += step;
      radii.push_back(r);
    }
  }
  const int R = static_cast<int>(radii.size());
  if (R < 3 || N < 4) {
    std::ostringstream os;
    os << "mesh_sector: h = " << h << " too large to resolve A_" << s.m
       << " (need at least 3 rings and 4 angular intervals, got " << R << " x " << N << ")";
    throw std::runtime_error(os.str());
  }

  // Angles for k = 0..N, exactly antisymmetric: theta_{N-k} = -theta_k.
  std::vector<double> theta(N + 1);
  for (int k = 0; k <= N / 2; ++k) {
    theta[k] = -beta * (static_cast<double>(N / 2 - k) / (N / 2));
    theta[N - k] = -theta[k];
  }
  theta[N / 2] = 0.0;

  TriMesh mesh;
  mesh.m = s.m;
  mesh.target_h = h;
  mesh.copies = 1;
  const int n_nodes = 1 + R * (N + 1);
  mesh.nodes.resize(n_nodes, 2);
  mesh.boundary.assign(n_nodes, 0);
  mesh.nodes.row(0) << 0.0, 0.0;
  mesh.boundary[0] = 1;  // the origin corner is on the sector boundary

  auto node_id = [&](int i, int k) { return 1 + (i - 1) * (N + 1) + k; };
  for (int i = 1; i <= R; ++i) {
    const double r = radii[static_cast<size_t>(i) - 1];
    for (int k = 0; k <= N / 2; ++k) {
      const double x = r * std::sin(theta[k]);
      const double y = r * std::cos(theta[k]);
      mesh.nodes.row(node_id(i, k)) << x, y;
      mesh.nodes.row(node_id(i, N - k)) << -x, y;  // exact mirror image
    }
    mesh.boundary[node_id(i, 0)] = 1;
    mesh.boundary[node_id(i, N)] = 1;
    if (i == R)
      for (int k = 0; k <= N; ++k) mesh.boundary[node_id(i, k)] = 1;
  }

  std::vector<Eigen::Vector3i> tris;
  tris.reserve(static_cast<size_t>(N) * (2 * R - 1));
  for (int k = 0; k < N; ++k) push_tri_ccw(tris, mesh.nodes, 0, node_id(1, k), node_id(1, k + 1));
  for (int i = 1; i < R; ++i) {
    for (int k = 0; k < N; ++k) {
      const int p = node_id(i, k), q = node_id(i, k + 1);
      const int pp = node_id(i + 1, k), qq = node_id(i + 1, k + 1);
      if ((i + k) % 2 == 0) {
        push_tri_ccw(tris, mesh.nodes, p, q, qq);
        push_tri_ccw(tris, mesh.nodes, p, qq, pp);
      } else {
        push_tri_ccw(tris, mesh.nodes, p, q, pp);
        push_tri_ccw(tris, mesh.nodes, q, qq, pp);
      }
    }
  }
  mesh.triangles.resize(static_cast<int>(tris.size()), 3);
  for (size_t t = 0; t < tris.size(); ++t) mesh.triangles.row(static_cast<int>(t)) = tris[t];
  mesh.parity = Eigen::VectorXi::Zero(mesh.num_triangles());
  return mesh;
}

Eigen::Matrix2d copy_transform(int m, int k) {
  const double beta = std::numbers::pi / std::pow(2.0, m);
  const double delta = 2.0 * k * beta;
  const double c = std::cos(delta), sn = std::sin(delta);
  Eigen::Matrix2d T;
  if (k % 2 == 0) {
    // rotation by delta in the angle-from-axis coordinate
    T << c, sn, -sn, c;
  } else {
    // reflection across the line at angle k*beta from the axis
    T << -c, sn, sn, c;
  }
  return T;
}

std::vector<Eigen::Vector2d> interface_directions(int m) {
  const double beta = std::numbers::pi / std::pow(2.0, m);
  const int n_lines = (m == 1) ? 1 : (1 << (m - 1));
  std::vector<Eigen::Vector2d> dirs;
  dirs.reserve(n_lines);
  for (int j = 0; j < n_lines; ++j) {
    const double phi = (2.0 * j + 1.0) * beta;  // angle from the positive x2-axis
    dirs.emplace_back(std::sin(phi), std::cos(phi));
  }
  return dirs;
}

TriMesh build_reflected_union(int m, const TriMesh& sector_mesh, int n_copies) {
  if (m < 1) throw std::invalid_argument("build_reflected_union: m >= 1");
  if (sector_mesh.copies != 1 || sector_mesh.m != m)
    throw std::invalid_argument("build_reflected_union: input must be a sector mesh of A_m");
  const int total = 1 << m;
  if (n_copies < 2 || n_copies > total)
    throw std::invalid_argument("build_reflected_union: n_copies must be in [2, 2^m]");
  const bool full = (n_copies == total);
  const double beta = std::numbers::pi / std::pow(2.0, m);

  const SideTags tags = classify_sides(sector_mesh, beta);
  const int ns = sector_mesh.num_nodes();
  if (tags.origin < 0)
    throw std::runtime_error("build_reflected_union: sector mesh has no apex node at the origin");

  // Mirror-consistency of the straight-side nodes: side A must be the exact
  // mirror image of side B, and all flagged boundary nodes must lie on the
  // sides or the arc.
  {
    std::vector<int> A, B;
    for (int i = 0; i < ns; ++i) {
      if (tags.on_a[i]) A.push_back(i);
      if (tags.on_b[i]) B.push_back(i);
      if (sector_mesh.boundary[i] && !(tags.on_a[i] || tags.on_b[i] || tags.on_arc[i]) && i != tags.origin)
        throw std::runtime_error("build_reflected_union: boundary node off the sector boundary");
      if ((tags.on_a[i] || tags.on_b[i]) && !sector_mesh.boundary[i])
        throw std::runtime_error("build_reflected_union: side node not flagged Dirichlet");
    }
    if (A.size() != B.size())
      throw std::runtime_error("build_reflected_union: side nodes are not mirror-consistent (count mismatch)");
    auto by_r = [&](int i, int j) {
      return sector_mesh.nodes.row(i).norm() < sector_mesh.nodes.row(j).norm();
    };
    std::sort(A.begin(), A.end(), by_r);
    std::sort(B.begin(), B.end(), by_r);
    for (size_t i = 0; i < A.size(); ++i) {
      const Eigen::Vector2d pa = sector_mesh.nodes.row(A[i]);
      const Eigen::Vector2d pb = sector_mesh.nodes.row(B[i]);
      if ((Eigen::Vector2d(-pa[0], pa[1]) - pb).norm() > kMergeTol)
        throw std::runtime_error("build_reflected_union: side nodes are not mirror-consistent");
    }
  }

  TriMesh out;
  out.m = m;
  out.copies = n_copies;
  out.target_h = sector_mesh.target_h;

  std::vector<Eigen::Vector2d> nodes;
  nodes.reserve(static_cast<size_t>(ns) * n_copies);
  out.copy_nodes.assign(n_copies, Eigen::VectorXi::Constant(ns, -1));

  // copy 0 verbatim (bitwise), so a zero extension is exactly isometric
  for (int i = 0; i < ns; ++i) {
    nodes.emplace_back(sector_mesh.nodes.row(i));
    out.copy_nodes[0][i] = i;
  }

  for (int k = 1; k < n_copies; ++k) {
    const Eigen::Matrix2d T = copy_transform(m, k);
    const bool share_a = (k % 2 == 0);  // shares side A with copy k-1 when k is even, side B when odd
    for (int i = 0; i < ns; ++i) {
      if (i == tags.origin) {
        out.copy_nodes[k][i] = out.copy_nodes[0][i];
        continue;
      }
      const bool shared_prev = share_a ? (tags.on_a[i] != 0) : (tags.on_b[i] != 0);
      if (shared_prev) {
        out.copy_nodes[k][i] = out.copy_nodes[k - 1][i];
        continue;
      }
      if (full && k == n_copies - 1 && tags.on_a[i]) {  // wrap: last (odd) copy closes onto copy 0
        out.copy_nodes[k][i] = out.copy_nodes[0][i];
        continue;
      }
      const Eigen::Vector2d p = T * Eigen::Vector2d(sector_mesh.nodes.row(i));
      out.copy_nodes[k][i] = static_cast<int>(nodes.size());
      nodes.push_back(p);
    }
  }

  out.nodes.resize(static_cast<int>(nodes.size()), 2);
  for (size_t i = 0; i < nodes.size(); ++i) out.nodes.row(static_cast<int>(i)) = nodes[i];

  const int nt = sector_mesh.num_triangles();
  out.triangles.resize(nt * n_copies, 3);
  out.parity.resize(nt * n_copies);
  for (int k = 0; k < n_copies; ++k) {
    for (int t = 0; t < nt; ++t) {
      int v0 = out.copy_nodes[k][sector_mesh.triangles(t, 0)];
      int v1 = out.copy_nodes[k][sector_mesh.triangles(t, 1)];
      int v2 = out.copy_nodes[k][sector_mesh.triangles(t, 2)];
      if (k % 2) std::swap(v1, v2);  // reflections flip orientation
      out.triangles.row(k * nt + t) << v0, v1, v2;
      out.parity[k * nt + t] = k;
    }
  }

  // Dirichlet flags: outer circle always; for partial unions also the two
  // exterior straight sides and the apex.
  out.boundary.assign(out.num_nodes(), 0);
  for (int k = 0; k < n_copies; ++k)
    for (int i = 0; i < ns; ++i)
      if (tags.on_arc[i]) out.boundary[out.copy_nodes[k][i]] = 1;
  if (!full) {
    out.boundary[out.copy_nodes[0][tags.origin]] = 1;
    const int last = n_copies - 1;
    const bool last_exterior_is_a = (last % 2 == 1);
    for (int i = 0; i < ns; ++i) {
      if (tags.on_a[i]) out.boundary[out.copy_nodes[0][i]] = 1;
      const bool ext = last_exterior_is_a ? (tags.on_a[i] != 0) : (tags.on_b[i] != 0);
      if (ext) out.boundary[out.copy_nodes[last][i]] = 1;
    }
  }
  return out;
}

TriMesh build_disk_mesh(int m, const TriMesh& sector_mesh) {
  return build_reflected_union(m, sector_mesh, 1 << m);
}

double triangle_area(const TriMesh& mesh, int t) {
  const Eigen::Vector2d a = mesh.nodes.row(mesh.triangles(t, 0));
  const Eigen::Vector2d b = mesh.nodes.row(mesh.triangles(t, 1));
  const Eigen::Vector2d c = mesh.nodes.row(mesh.triangles(t, 2));
  return signed_area(a, b, c);
}

double mesh_area(const TriMesh& mesh) {
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) acc += triangle_area(mesh, t);
  return acc;
}

NodeLocator::NodeLocator(const TriMesh& mesh) : mesh_(mesh) {
  order_.resize(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) order_[i] = i;
  std::sort(order_.begin(), order_.end(),
            [&](int i, int j) { return mesh_.nodes(i, 0) < mesh_.nodes(j, 0); });
}

int NodeLocator::find(const Eigen::Vector2d& p, double tol) const {
  auto lo = std::lower_bound(order_.begin(), order_.end(), p[0] - tol,
                             [&](int i, double v) { return mesh_.nodes(i, 0) < v; });
  int best = -1;
  double best_d = tol;
  for (auto it = lo; it != order_.end() && mesh_.nodes(*it, 0) <= p[0] + tol; ++it) {
    const double d = (Eigen::Vector2d(mesh_.nodes.row(*it)) - p).norm();
    if (d <= best_d) {
      best_d = d;
      best = *it;
    }
  }
  return best;
}

}  // namespace sectorpass
