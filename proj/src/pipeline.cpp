#include "sectorpass/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "sectorpass/assembly.hpp"
#include "sectorpass/io.hpp"
#include "sectorpass/moser.hpp"
#include "sectorpass/mpa.hpp"

namespace sectorpass {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json witness_json(const HypoCheck& c) {
  json j;
  j["status"] = c.status;
  j["violations"] = c.violations;
  if (!c.note.empty()) j["note"] = c.note;
  json ws = json::array();
  for (const auto& w : c.witnesses) ws.push_back({{"s", w.s}, {"lhs", w.lhs}, {"rhs", w.rhs}});
  j["witnesses"] = ws;
  return j;
}

json hypotheses_json(const HypothesisReport& rep) {
  json j;
  j["f1_strict"] = witness_json(rep.f1_strict);
  j["f1_critical_growth"] = witness_json(rep.f1_critical);
  j["f2"] = witness_json(rep.f2);
  j["H1"] = witness_json(rep.h1);
  j["H2"] = witness_json(rep.h2);
  j["H3"] = witness_json(rep.h3);
  j["fitted"] = {{"C", rep.C_fit}, {"s0", rep.s0_fit}, {"M", rep.M_fit}};
  json th = json::array();
  for (const auto& t : rep.h3_thresholds)
    th.push_back({{"m", t.m}, {"threshold", t.threshold}, {"proxy", t.proxy}, {"exceeded", t.exceeded}});
  j["h3_thresholds"] = th;
  j["scan"] = {{"s_min", rep.scan_min}, {"s_max", rep.scan_max}, {"points", rep.scan_points}};
  j["s_safe"] = rep.s_safe;
  j["all_pass"] = rep.all_pass();
  return j;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["m"] = cfg.m;
  j["mesh.h"] = cfg.mesh_h;
  j["mesh.grading"] = cfg.mesh_grading;
  j["nonlinearity.model"] = to_string(cfg.model);
  j["nonlinearity.lambda"] = cfg.lambda;
  j["solver.mode"] = to_string(cfg.solver_mode);
  j["solver.tol"] = cfg.solver_tol;
  j["solver.path_points"] = cfg.solver_path_points;
  j["solver.max_iters"] = cfg.solver_max_iters;
  j["moser.n_list"] = cfg.moser_n;
  j["seed"] = cfg.seed;
  j["hypo.s_max"] = cfg.hypo_s_max;
  j["hypo.points"] = cfg.hypo_points;
  return j;
}

// bitwise antisymmetry under every interface generator, via geometric node
// matching (values themselves were copied, so equality must be exact)
bool antisymmetry_exact(const Field& u) {
  const TriMesh& mesh = *u.mesh;
  const NodeLocator loc(mesh);
  for (const auto& dir : interface_directions(mesh.m)) {
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      const Eigen::Vector2d x = mesh.nodes.row(i);
      const int j = loc.find(reflect_point(x, dir), 1e-9);
      if (j < 0) return false;
      if (!(u.values[j] == -u.values[i])) return false;
    }
  }
  return true;
}

struct StageTimer {
  using clock = std::chrono::steady_clock;
  json& out;
  bool enabled;
  void record(const std::string& name, clock::time_point t0) {
    if (!enabled) return;
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0);
    out[name] = static_cast<double>(ms.count());
  }
};

}  // namespace

json run_pipeline(const std::string& subcommand, const RunConfig& cfg, const RunOptions& opts) {
  const bool want_hypo = subcommand == "check-hypotheses" || subcommand == "full";
  const bool want_solve = subcommand == "solve-sector" || subcommand == "assemble" || subcommand == "full";
  const bool want_moser = subcommand == "moser-limits" || subcommand == "full";
  const bool want_assembly = subcommand == "assemble" || subcommand == "full";
  if (!want_hypo && !want_solve && !want_moser)
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");

  fs::create_directories(opts.out_dir);
  auto artifact = [&](const std::string& name) { return (fs::path(opts.out_dir) / name).string(); };
  std::vector<std::string> written;

  json report;
  report["tool"] = "sectorpass";
  report["subcommand"] = subcommand;
  report["config"] = config_json(cfg);

  json timings;
  StageTimer timer{timings, opts.timings};
  std::vector<std::string> failures;

  // --- hypotheses -----------------------------------------------------
  if (want_hypo) {
    const auto t0 = StageTimer::clock::now();
    try {
      const Nonlinearity nl(cfg.model, cfg.lambda, false);
      ScanGrid grid;
      grid.s_max = std::min(cfg.hypo_s_max, 0.99 * nl.safe_bound());
      grid.points = cfg.hypo_points;
      const HypothesisReport rep = check_hypotheses(nl, grid, {1, 2, 3, 4});
      report["hypotheses"] = hypotheses_json(rep);
      if (!rep.all_pass()) failures.push_back("hypotheses: a checked hypothesis failed on the scan range");
    } catch (const std::exception& e) {
      throw std::runtime_error("stage check-hypotheses: " + std::string(e.what()));
    }
    timer.record("check_hypotheses_ms", t0);
  } else {
    report["hypotheses"] = {{"skipped", true}};
  }

  // --- sector solve -----------------------------------------------------
  std::optional<TriMesh> sector_mesh;
  std::optional<Field> u_sector;
  double sector_residual = 0.0, sector_energy = 0.0;
  if (want_solve) {
    const auto t0 = StageTimer::clock::now();
    try {
      const Sector sec = sector(cfg.m);
      sector_mesh = mesh_sector(sec, cfg.mesh_h, cfg.mesh_grading);
      const Nonlinearity nl_trunc(cfg.model, cfg.lambda, true);
      const auto probe = mountain_geometry_probe(nl_trunc, *sector_mesh, cfg.seed);
      MpaOptions mo;
      mo.mode = cfg.solver_mode;
      mo.tol = cfg.solver_tol;
      mo.path_points = cfg.solver_path_points;
      mo.max_iters = cfg.solver_max_iters;
      mo.seed = cfg.seed;
      const MountainPassResult res = mountain_pass(nl_trunc, *sector_mesh, mo);
      u_sector = res.u;
      u_sector->mesh = &*sector_mesh;  // rebind to the stored mesh
      sector_residual = residual_check(nl_trunc, *sector_mesh, res.u);
      sector_energy = energy(Nonlinearity(cfg.model, cfg.lambda, false), *u_sector);

      write_mesh_nodes_csv(*sector_mesh, artifact("sector_nodes.csv"));
      written.push_back("sector_nodes.csv");
      write_mesh_triangles_csv(*sector_mesh, artifact("sector_triangles.csv"));
      written.push_back("sector_triangles.csv");
      write_field_csv(res.u, artifact("sector_solution.csv"));
      written.push_back("sector_solution.csv");
      {
        std::ofstream out(artifact("path_trace.csv"));
        out << "s,I\n" << std::setprecision(17);
        for (const auto& [s, I] : res.path_trace) out << s << ',' << I << '\n';
      }
      written.push_back("path_trace.csv");

      json s;
      s["mesh"] = {{"nodes", sector_mesh->num_nodes()},
                   {"triangles", sector_mesh->num_triangles()},
                   {"h", cfg.mesh_h},
                   {"grading", cfg.mesh_grading}};
      s["probe"] = {{"r", probe.first}, {"rho", probe.second}};
      s["level"] = res.level;
      s["grad_norm"] = res.grad_norm;
      s["iterations"] = res.iterations;
      s["endpoint_t0"] = res.endpoint_t0;
      s["min_value"] = res.min_value;
      s["positive"] = res.positive;
      s["h1_norm"] = h1_norm(res.u);
      s["residual_independent"] = sector_residual;
      report["solver"] = s;

      if (!(res.level > 0.0 && res.level < 0.5))
        failures.push_back("solver: level outside (0, 1/2)");
      if (sector_residual > 10.0 * cfg.solver_tol)
        failures.push_back("solver: independent residual above 10x tolerance");
    } catch (const std::exception& e) {
      throw std::runtime_error("stage solve-sector: " + std::string(e.what()));
    }
    timer.record("solve_sector_ms", t0);
  } else {
    report["solver"] = {{"skipped", true}};
  }

  // --- moser limits / energy-level check ---------------------------------
  if (want_moser) {
    const auto t0 = StageTimer::clock::now();
    try {
      const Sector sec = sector(cfg.m);
      const Nonlinearity nl(cfg.model, cfg.lambda, false);
      const MoserReport rep = moser_report(nl, sec, cfg.moser_n);
      {
        std::ofstream out(artifact("moser_limits.csv"));
        out << "n,norm,L1,L2,max_I,t_star,below_half\n" << std::setprecision(17);
        for (const auto& r : rep.rows)
          out << r.n << ',' << r.norm << ',' << r.L1 << ',' << r.L2 << ',' << r.max_I << ','
              << r.t_star << ',' << (r.below_half ? 1 : 0) << '\n';
      }
      written.push_back("moser_limits.csv");

      json mj;
      mj["m"] = rep.m;
      mj["beta_threshold"] = rep.beta_threshold;
      mj["h3_proxy"] = rep.h3_proxy;
      json rows = json::array();
      bool any_below = false;
      for (const auto& r : rep.rows) {
        rows.push_back({{"n", r.n},
                        {"norm", r.norm},
                        {"L1", r.L1},
                        {"L2", r.L2},
                        {"t_star", r.t_star},
                        {"max_I", r.max_I},
                        {"below_half", r.below_half}});
        any_below = any_below || r.below_half;
      }
      mj["rows"] = rows;
      mj["below_half_any"] = any_below;
      report["moser"] = mj;
      if (!any_below)
        failures.push_back("moser: max_t I(t w_n) >= 1/2 for every n in the list (level bound not certified)");
    } catch (const std::exception& e) {
      throw std::runtime_error("stage moser-limits: " + std::string(e.what()));
    }
    timer.record("moser_limits_ms", t0);
  } else {
    report["moser"] = {{"skipped", true}};
  }

  // --- assembly -----------------------------------------------------------
  if (want_assembly) {
    const auto t0 = StageTimer::clock::now();
    try {
      const Nonlinearity nl_odd(cfg.model, cfg.lambda, false);
      const TriMesh disk = build_disk_mesh(cfg.m, *sector_mesh);
      const AssembledSolution sol = assemble_disk_solution(cfg.m, *u_sector, disk, nl_odd);
      const double e_disk = energy(nl_odd, sol.u);
      const bool anti = antisymmetry_exact(sol.u);

      write_mesh_nodes_csv(disk, artifact("disk_nodes.csv"));
      written.push_back("disk_nodes.csv");
      write_mesh_triangles_csv(disk, artifact("disk_triangles.csv"));
      written.push_back("disk_triangles.csv");
      write_field_csv(sol.u, artifact("disk_solution.csv"));
      written.push_back("disk_solution.csv");
      write_field_vtk(sol.u, artifact("disk_solution.vtk"));
      written.push_back("disk_solution.vtk");
      write_sign_heatmap_ppm(sol.u, artifact("sign_pattern.ppm"), sol.sign_eps);
      written.push_back("sign_pattern.ppm");

      const int expected = 1 << cfg.m;
      json a;
      a["m"] = cfg.m;
      a["nodal_domains"] = sol.nodal_domains;
      a["expected_domains"] = expected;
      a["interface_max"] = sol.interface_max;
      a["residual_disk"] = sol.residual;
      a["residual_sector"] = sector_residual;
      a["energy_disk"] = e_disk;
      a["energy_sector"] = sector_energy;
      a["energy_ratio"] = e_disk / (expected * sector_energy);
      a["antisymmetric_exact"] = anti;
      std::vector<int> signs(sol.parity_sign.data(), sol.parity_sign.data() + sol.parity_sign.size());
      a["parity_sign"] = signs;
      a["sign_eps"] = sol.sign_eps;
      report["assembly"] = a;

      if (sol.nodal_domains != expected) failures.push_back("assembly: nodal-domain count != 2^m");
      if (sol.interface_max != 0.0) failures.push_back("assembly: nonzero interface values");
      if (!anti) failures.push_back("assembly: antisymmetry not exact");
      if (sol.residual > 10.0 * std::max(sector_residual, cfg.solver_tol))
        failures.push_back("assembly: disk residual above 10x the sector residual");
      if (std::abs(e_disk - expected * sector_energy) > 0.005 * std::abs(e_disk))
        failures.push_back("assembly: energy additivity off by more than 0.5%");
    } catch (const std::exception& e) {
      throw std::runtime_error("stage assemble: " + std::string(e.what()));
    }
    timer.record("assemble_ms", t0);
  } else {
    report["assembly"] = {{"skipped", true}};
  }

  report["invariants"] = {{"ok", failures.empty()}, {"failures", failures}};
  report["timings"] = opts.timings ? timings : json{{"skipped", true}};

  json manifest = json::array();
  for (const auto& name : written)
    manifest.push_back({{"file", name}, {"fnv1a64", fnv1a64_hex(artifact(name))}});
  report["manifest"] = manifest;

  std::ofstream out(artifact("report.json"));
  if (!out) throw std::runtime_error("cannot write report.json");
  out << report.dump(2) << '\n';
  return report;
}

}  // namespace sectorpass
