#include <CLI11.hpp>
#include <iostream>

#include "sectorpass/config.hpp"
#include "sectorpass/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "sectorpass: sign-changing solutions of -Laplace(u) = f(u) on the unit disk,\n"
      "built from sector mountain-pass solutions by antisymmetric reflection"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  bool no_timings = false;

  const char* names[] = {"check-hypotheses", "solve-sector", "moser-limits", "assemble", "full"};
  const char* descs[] = {
      "verify the nonlinearity hypotheses on a scan grid",
      "compute the positive mountain-pass solution on A_m",
      "Moser norms, the two limit computations, and the energy-level scan",
      "sector solve plus antisymmetric disk assembly and verification",
      "hypotheses -> sector solve -> energy-level check -> assembly -> verification"};
  for (int i = 0; i < 5; ++i) {
    auto* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "key = value config file (defaults when omitted)");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_flag("--no-timings", no_timings, "omit wall-clock timings from the report");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    const sectorpass::RunConfig cfg =
        config_path.empty() ? sectorpass::RunConfig{} : sectorpass::load_config_file(config_path);
    const auto report = sectorpass::run_pipeline(sub, cfg, {out_dir, !no_timings});
    const bool ok = report["invariants"]["ok"].get<bool>();
    std::cout << "sectorpass " << sub << ": wrote " << out_dir << "/report.json";
    if (report.contains("solver") && !report["solver"].contains("skipped"))
      std::cout << "  (level " << report["solver"]["level"].get<double>() << ")";
    std::cout << '\n';
    if (!ok) {
      std::cerr << "invariant failures:\n";
      for (const auto& f : report["invariants"]["failures"])
        std::cerr << "  - " << f.get<std::string>() << '\n';
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "sectorpass " << sub << ": error: " << e.what() << '\n';
    return 1;
  }
}
