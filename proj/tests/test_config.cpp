#include <doctest.h>

#include <stdexcept>

#include "sectorpass/config.hpp"

using namespace sectorpass;

TEST_CASE("parse_config: empty text gives all defaults") {
  const RunConfig cfg = parse_config("");
  CHECK(cfg.m == 1);
  CHECK(cfg.model == NlModel::canonical);
  CHECK(cfg.lambda == 1.0);
  CHECK(cfg.mesh_h == 0.02);
  CHECK(cfg.mesh_grading == 2.0);
  CHECK(cfg.solver_mode == MpaOptions::Mode::mpa);
  CHECK(cfg.solver_tol == 1e-6);
  CHECK(cfg.moser_n.size() == 5);
}

TEST_CASE("parse_config: keys override defaults, comments and blanks ignored") {
  const RunConfig cfg = parse_config(
      "# a comment\n"
      "\n"
      "m = 3\n"
      "mesh.h = 0.05   # trailing comment\n"
      "nonlinearity.model = cubic\n"
      "nonlinearity.lambda = 2.5\n"
      "solver.mode = nehari\n"
      "moser.n_list = 10, 100, 1000\n"
      "seed = 99\n");
  CHECK(cfg.m == 3);
  CHECK(cfg.mesh_h == 0.05);
  CHECK(cfg.model == NlModel::cubic);
  CHECK(cfg.lambda == 2.5);
  CHECK(cfg.solver_mode == MpaOptions::Mode::nehari);
  CHECK(cfg.moser_n == std::vector<double>{10.0, 100.0, 1000.0});
  CHECK(cfg.seed == 99);
}

TEST_CASE("parse_config: errors carry the line number") {
  CHECK_THROWS_WITH_AS(parse_config("m = 0\n"), doctest::Contains("line 1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("\nm = 2\nbogus.key = 1\n"), doctest::Contains("line 3"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("mesh.h = nope\n"), doctest::Contains("not a number"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("solver.tol 1e-6\n"), doctest::Contains("key = value"),
                       std::runtime_error);
  CHECK_THROWS_AS(parse_config("nonlinearity.model = quartic\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("mesh.h = 1.5\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("moser.n_list = 1, 2\n"), std::runtime_error);
}
