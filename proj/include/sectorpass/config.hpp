#pragma once

#include <string>
#include <vector>

#include "sectorpass/mpa.hpp"
#include "sectorpass/nonlinearity.hpp"

namespace sectorpass {

// Runtime configuration, parsed from line-based "key = value" text.
// Unknown keys and out-of-range values are rejected with the line number.
struct RunConfig {
  int m = 1;
  double mesh_h = 0.02;
  double mesh_grading = 2.0;
  NlModel model = NlModel::canonical;
  double lambda = 1.0;
  MpaOptions::Mode solver_mode = MpaOptions::Mode::mpa;
  double solver_tol = 1e-6;
  int solver_path_points = 64;
  int solver_max_iters = 20000;
  std::vector<double> moser_n = {4.0, 16.0, 256.0, 1e4, 1e6};
  unsigned long seed = 12345;
  double hypo_s_max = 7.0;
  int hypo_points = 1400;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace sectorpass
