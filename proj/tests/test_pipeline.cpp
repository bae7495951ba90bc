#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sectorpass/pipeline.hpp"

using namespace sectorpass;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig fast_config() {
  RunConfig cfg;
  cfg.m = 1;
  cfg.mesh_h = 0.08;
  cfg.moser_n = {16.0, 256.0};
  cfg.hypo_points = 300;
  return cfg;
}

}  // namespace

TEST_CASE("pipeline full: report sections, artifacts, manifest checksums, invariants ok") {
  const fs::path dir = fs::temp_directory_path() / "sectorpass_test_full";
  fs::remove_all(dir);
  const auto report = run_pipeline("full", fast_config(), {dir.string(), true});

  CHECK(report["invariants"]["ok"].get<bool>());
  CHECK(!report["hypotheses"].contains("skipped"));
  CHECK(!report["solver"].contains("skipped"));
  CHECK(!report["moser"].contains("skipped"));
  CHECK(!report["assembly"].contains("skipped"));
  CHECK(report["assembly"]["nodal_domains"].get<int>() == 2);
  CHECK(report["solver"]["level"].get<double>() > 0.0);
  CHECK(report["solver"]["level"].get<double>() < 0.5);
  CHECK(report["timings"].size() > 0);

  for (const auto& entry : report["manifest"]) {
    const fs::path f = dir / entry["file"].get<std::string>();
    CHECK(fs::exists(f));
    CHECK(entry["fnv1a64"].get<std::string>().size() == 16);
  }
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "sign_pattern.ppm"));
  CHECK(fs::exists(dir / "moser_limits.csv"));
}

TEST_CASE("pipeline: subcommands mark the other sections skipped") {
  const fs::path dir = fs::temp_directory_path() / "sectorpass_test_hypo";
  fs::remove_all(dir);
  RunConfig cfg;
  cfg.hypo_points = 200;
  const auto report = run_pipeline("check-hypotheses", cfg, {dir.string(), true});
  CHECK(!report["hypotheses"].contains("skipped"));
  CHECK(report["solver"].contains("skipped"));
  CHECK(report["moser"].contains("skipped"));
  CHECK(report["assembly"].contains("skipped"));
  CHECK(report["hypotheses"]["all_pass"].get<bool>());
}

TEST_CASE("pipeline moser-limits: CSV has one row per n") {
  const fs::path dir = fs::temp_directory_path() / "sectorpass_test_moser";
  fs::remove_all(dir);
  RunConfig cfg;
  cfg.moser_n = {100.0, 10000.0};
  const auto report = run_pipeline("moser-limits", cfg, {dir.string(), true});
  CHECK(report["moser"]["rows"].size() == 2);
  const std::string csv = slurp(dir / "moser_limits.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
}

TEST_CASE("pipeline: reruns with --no-timings are byte-identical") {
  const fs::path d1 = fs::temp_directory_path() / "sectorpass_det_1";
  const fs::path d2 = fs::temp_directory_path() / "sectorpass_det_2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  RunConfig cfg = fast_config();
  cfg.mesh_h = 0.1;
  cfg.hypo_points = 150;
  run_pipeline("full", cfg, {d1.string(), false});
  run_pipeline("full", cfg, {d2.string(), false});
  CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
  CHECK(slurp(d1 / "disk_solution.csv") == slurp(d2 / "disk_solution.csv"));
}

TEST_CASE("pipeline: zero model surfaces the endpoint error with stage attribution") {
  const fs::path dir = fs::temp_directory_path() / "sectorpass_test_zero";
  fs::remove_all(dir);
  RunConfig cfg = fast_config();
  cfg.model = NlModel::zero;
  CHECK_THROWS_WITH_AS(run_pipeline("solve-sector", cfg, {dir.string(), true}),
                       doctest::Contains("stage solve-sector"), std::runtime_error);
}
