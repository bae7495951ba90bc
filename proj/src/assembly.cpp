#include "sectorpass/assembly.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sectorpass {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Disk values from sector values: +-copy per parity; interface nodes are
// visited by two copies with opposite signs, so they are set to exact 0.
Field transport_antisymmetric(const Field& u_sector, const TriMesh& union_mesh) {
  if (union_mesh.copy_nodes.empty())
    throw std::invalid_argument("antisymmetric transport: mesh has no copy maps (node mapping missing)");
  const int ns = u_sector.mesh->num_nodes();
  if (union_mesh.copy_nodes[0].size() != ns)
    throw std::invalid_argument("antisymmetric transport: union mesh was not built from this sector mesh");

  Field out = zero_field(union_mesh);
  std::vector<std::uint8_t> seen(union_mesh.num_nodes(), 0);
  for (int k = 0; k < union_mesh.copies; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const Eigen::VectorXi& map = union_mesh.copy_nodes[k];
    for (int i = 0; i < ns; ++i) {
      const int j = map[i];
      const double v = u_sector.values[i];
      out.values[j] = seen[j] ? 0.0 : (v == 0.0 ? 0.0 : sign * v);
      seen[j] = 1;
    }
  }
  enforce_dirichlet(out);
  return out;
}

double max_shared_trace(const Field& u_sector, const TriMesh& union_mesh) {
  const int ns = u_sector.mesh->num_nodes();
  std::vector<int> hits(union_mesh.num_nodes(), 0);
  for (int k = 0; k < union_mesh.copies; ++k)
    for (int i = 0; i < ns; ++i) ++hits[union_mesh.copy_nodes[k][i]];
  double worst = 0.0;
  for (int k = 0; k < union_mesh.copies; ++k)
    for (int i = 0; i < ns; ++i)
      if (hits[union_mesh.copy_nodes[k][i]] > 1)
        worst = std::max(worst, std::abs(u_sector.values[i]));
  return worst;
}

}  // namespace

Field reflect_antisymmetric(const Field& u_sector, const TriMesh& two_copy_mesh) {
  if (two_copy_mesh.copies != 2)
    throw std::invalid_argument("reflect_antisymmetric: expected a two-copy union mesh");
  return transport_antisymmetric(u_sector, two_copy_mesh);
}

int count_nodal_domains(const Field& u, double eps) {
  if (eps < 0.0) throw std::invalid_argument("count_nodal_domains: eps must be >= 0");
  const TriMesh& mesh = *u.mesh;
  const int nt = mesh.num_triangles();

  auto tri_sign = [&](int t) -> int {
    int s = 0;
    for (int i = 0; i < 3; ++i) {
      const double v = u.values[mesh.triangles(t, i)];
      if (std::abs(v) <= eps) return 0;
      const int si = v > 0.0 ? 1 : -1;
      if (s == 0)
        s = si;
      else if (s != si)
        return 0;
    }
    return s;
  };
  std::vector<int> sign(nt);
  for (int t = 0; t < nt; ++t) sign[t] = tri_sign(t);

  Dsu dsu(nt);
  std::map<std::pair<int, int>, int> edge_owner;
  for (int t = 0; t < nt; ++t) {
    if (sign[t] == 0) continue;
    for (int i = 0; i < 3; ++i) {
      int a = mesh.triangles(t, i), b = mesh.triangles(t, (i + 1) % 3);
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_owner.try_emplace(std::make_pair(a, b), t);
      if (!inserted && sign[it->second] == sign[t]) dsu.unite(it->second, t);
    }
  }
  int count = 0;
  for (int t = 0; t < nt; ++t)
    if (sign[t] != 0 && dsu.find(t) == t) ++count;
  return count;
}

AssembledSolution assemble_disk_solution(int m, const Field& u_sector, const TriMesh& disk_mesh,
                                         const Nonlinearity& nl_untruncated) {
  if (!disk_mesh.is_full_disk() || disk_mesh.m != m)
    throw std::invalid_argument("assemble_disk_solution: need the full 2^m-copy disk mesh of A_m");
  if (nl_untruncated.truncated())
    throw std::invalid_argument(
        "assemble_disk_solution: the disk residual needs the untruncated odd f");

  const double trace = max_shared_trace(u_sector, disk_mesh);
  if (trace > 1e-10) {
    std::ostringstream os;
    os << "assemble_disk_solution: sector solution has nonzero interface trace " << trace;
    throw std::runtime_error(os.str());
  }

  AssembledSolution out;
  out.m = m;
  out.u = transport_antisymmetric(u_sector, disk_mesh);
  out.parity_sign.resize(disk_mesh.copies);
  for (int k = 0; k < disk_mesh.copies; ++k) out.parity_sign[k] = (k % 2 == 0) ? 1 : -1;

  // interface nodes: shared between copies, not on the outer circle
  const int ns = u_sector.mesh->num_nodes();
  std::vector<int> hits(disk_mesh.num_nodes(), 0);
  for (int k = 0; k < disk_mesh.copies; ++k)
    for (int i = 0; i < ns; ++i) ++hits[disk_mesh.copy_nodes[k][i]];
  out.interface_max = 0.0;
  for (int j = 0; j < disk_mesh.num_nodes(); ++j)
    if (hits[j] > 1 && !disk_mesh.boundary[j])
      out.interface_max = std::max(out.interface_max, std::abs(out.u.values[j]));

  out.sign_eps = 1e-9 * out.u.values.cwiseAbs().maxCoeff();
  out.nodal_domains = count_nodal_domains(out.u, out.sign_eps);
  out.residual = residual_check_fun(disk_mesh, out.u,
                                    [&nl_untruncated](double s) { return nl_untruncated.f(s); });
  return out;
}

double oddness_ablation(int m, const Field& u_sector, const TriMesh& disk_mesh,
                        const Nonlinearity& nl_untruncated, double even_eps) {
  AssembledSolution sol =
      assemble_disk_solution(m, u_sector, disk_mesh, nl_untruncated.untruncated_variant());
  return interface_band_residual(disk_mesh, sol.u, [&](double s) {
    return nl_untruncated.f(s) + even_eps * std::expm1(s * s);
  });
}

}  // namespace sectorpass
