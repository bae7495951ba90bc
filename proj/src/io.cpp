#include "sectorpass/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <vector>

namespace sectorpass {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

}  // namespace

void write_mesh_nodes_csv(const TriMesh& mesh, const std::string& path) {
  auto out = open_out(path);
  out << "id,x,y,boundary\n";
  out << std::setprecision(17);
  for (int i = 0; i < mesh.num_nodes(); ++i)
    out << i << ',' << mesh.nodes(i, 0) << ',' << mesh.nodes(i, 1) << ','
        << int(mesh.boundary[i]) << '\n';
}

void write_mesh_triangles_csv(const TriMesh& mesh, const std::string& path) {
  auto out = open_out(path);
  out << "n0,n1,n2,parity\n";
  for (int t = 0; t < mesh.num_triangles(); ++t)
    out << mesh.triangles(t, 0) << ',' << mesh.triangles(t, 1) << ',' << mesh.triangles(t, 2)
        << ',' << mesh.parity[t] << '\n';
}

void write_field_csv(const Field& u, const std::string& path) {
  auto out = open_out(path);
  out << "node,value\n";
  out << std::setprecision(17);
  for (int i = 0; i < u.values.size(); ++i) out << i << ',' << u.values[i] << '\n';
}

void write_field_vtk(const Field& u, const std::string& path, const std::string& name) {
  const TriMesh& mesh = *u.mesh;
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(17);
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (int i = 0; i < mesh.num_nodes(); ++i)
    out << mesh.nodes(i, 0) << ' ' << mesh.nodes(i, 1) << " 0\n";
  out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t)
    out << "3 " << mesh.triangles(t, 0) << ' ' << mesh.triangles(t, 1) << ' '
        << mesh.triangles(t, 2) << '\n';
  out << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) out << "5\n";
  out << "POINT_DATA " << mesh.num_nodes() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) out << u.values[i] << '\n';
}

void write_sign_heatmap_ppm(const Field& u, const std::string& path, double eps, int size) {
  const TriMesh& mesh = *u.mesh;
  std::vector<std::uint8_t> img(static_cast<size_t>(size) * size * 3, 255);
  const double vmax = std::max(u.values.cwiseAbs().maxCoeff(), 1e-300);

  auto px_of = [&](double x) { return (x + 1.0) * 0.5 * (size - 1); };
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Vector2d p0 = mesh.nodes.row(mesh.triangles(t, 0));
    const Eigen::Vector2d p1 = mesh.nodes.row(mesh.triangles(t, 1));
    const Eigen::Vector2d p2 = mesh.nodes.row(mesh.triangles(t, 2));
    const double v0 = u.values[mesh.triangles(t, 0)];
    const double v1 = u.values[mesh.triangles(t, 1)];
    const double v2 = u.values[mesh.triangles(t, 2)];
    const int ix0 = std::max(0, static_cast<int>(std::floor(px_of(std::min({p0[0], p1[0], p2[0]})))));
    const int ix1 = std::min(size - 1, static_cast<int>(std::ceil(px_of(std::max({p0[0], p1[0], p2[0]})))));
    const int iy0 = std::max(0, static_cast<int>(std::floor(px_of(std::min({p0[1], p1[1], p2[1]})))));
    const int iy1 = std::min(size - 1, static_cast<int>(std::ceil(px_of(std::max({p0[1], p1[1], p2[1]})))));
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    if (det == 0.0) continue;
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        const double x = -1.0 + 2.0 * ix / (size - 1);
        const double y = -1.0 + 2.0 * iy / (size - 1);
        const double l1 = ((p1[0] - x) * (p2[1] - y) - (p2[0] - x) * (p1[1] - y)) / det;
        const double l2 = ((p2[0] - x) * (p0[1] - y) - (p0[0] - x) * (p2[1] - y)) / det;
        const double l3 = 1.0 - l1 - l2;
        if (l1 < -1e-12 || l2 < -1e-12 || l3 < -1e-12) continue;
        const double v = l1 * v0 + l2 * v1 + l3 * v2;
        // image rows top-down: flip y
        const size_t idx = (static_cast<size_t>(size - 1 - iy) * size + ix) * 3;
        if (std::abs(v) <= eps) {
          img[idx] = img[idx + 1] = img[idx + 2] = 255;
        } else if (v > 0.0) {
          const double s = std::min(1.0, v / vmax);
          img[idx] = 255;
          img[idx + 1] = img[idx + 2] = static_cast<std::uint8_t>(255.0 * (1.0 - s));
        } else {
          const double s = std::min(1.0, -v / vmax);
          img[idx + 2] = 255;
          img[idx] = img[idx + 1] = static_cast<std::uint8_t>(255.0 * (1.0 - s));
        }
      }
    }
  }
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P6\n" << size << ' ' << size << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data()), static_cast<std::streamsize>(img.size()));
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for checksum: '" + path + "'");
  std::uint64_t h = 1469598103934665603ull;
  char buf[65536];
  while (in.read(buf, sizeof buf), in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<std::uint8_t>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string fnv1a64_hex(const std::string& path) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64_file(path)));
  return buf;
}

}  // namespace sectorpass
