#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sectorpass/fem.hpp"
#include "sectorpass/geometry.hpp"
#include "sectorpass/mesh.hpp"
#include "sectorpass/nonlinearity.hpp"

namespace sectorpass {

struct MpaOptions {
  enum class Mode { mpa, nehari };
  Mode mode = Mode::mpa;
  double tol = 1e-6;          // gradient tolerance, relative to max(1, ||u||)
  int path_points = 64;       // initial samples on the path from 0 to e
  int max_iters = 20000;
  int max_path_points = 1024;
  double sign_eps = 1e-10;    // positivity verification threshold
  unsigned long seed = 12345; // used by the geometry probe only
};

MpaOptions::Mode parse_mode(const std::string& name);
std::string to_string(MpaOptions::Mode mode);

struct MountainPassResult {
  Field u;
  double level = 0.0;      // I(u), the c_m estimate
  double grad_norm = 0.0;  // ||K^{-1}(Ku - b)||_K at acceptance
  int iterations = 0;
  std::vector<std::pair<double, double>> path_trace;  // (path parameter, I)
  bool positive = false;
  double min_value = 0.0;
  double endpoint_t0 = 0.0;
};

// Mollified bump supported in B(x_m, d_m/2), normalized to max value 1.
Field bump_field(const Sector& s, const TriMesh& mesh);

// Doubling scan along the ray t*phi until I < 0; also verifies the
// mountain geometry I(t*phi) > 0 for small t.  Throws when the scan would
// leave the nonlinearity's safe range before the energy turns negative.
std::pair<double, Field> find_endpoint(const Nonlinearity& nl, const TriMesh& mesh,
                                       const Field& phi);

// Empirical mountain-pass geometry: min over random unit directions of
// I(r*d) must be positive; halves r until it is, errors when no radius
// works.  Returns (r, rho).
std::pair<double, double> mountain_geometry_probe(const Nonlinearity& nl, const TriMesh& mesh,
                                                  unsigned long seed = 12345, int n_dirs = 100,
                                                  double r = 0.1);

// Discrete-path mountain-pass solver (descent on the path maximizer in the
// H0^1 metric, path refinement near the ridge), or Nehari-constrained
// descent in the fallback mode.  Requires the truncated nonlinearity.
MountainPassResult mountain_pass(const Nonlinearity& nl, const TriMesh& mesh,
                                 const MpaOptions& opts = {});

// Independent residual: fresh stiffness and load assembly, max over free
// nodes of |(Ku - b(u))_i| / sum_j |K_ij|.
double residual_check(const Nonlinearity& nl, const TriMesh& mesh, const Field& u);

// Mirror image across the sector axis (x1 -> -x1); node permutation found
// geometrically, values copied.
Field mirror_field(const Field& u);

}  // namespace sectorpass
