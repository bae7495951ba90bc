#include "sectorpass/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sectorpass {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line << ": " << msg;
  throw std::runtime_error(os.str());
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    fail(line, "value '" + v + "' for " + key + " is not a number");
  }
  if (pos != v.size()) fail(line, "trailing characters in value '" + v + "' for " + key);
  return x;
}

long parse_long(const std::string& v, int line, const std::string& key) {
  size_t pos = 0;
  long x = 0;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    fail(line, "value '" + v + "' for " + key + " is not an integer");
  }
  if (pos != v.size()) fail(line, "trailing characters in value '" + v + "' for " + key);
  return x;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty()) fail(line, "empty key or value");

    if (key == "m") {
      const long v = parse_long(val, line, key);
      if (v < 1 || v > 12) fail(line, "m out of range [1, 12]");
      cfg.m = static_cast<int>(v);
    } else if (key == "mesh.h") {
      const double v = parse_double(val, line, key);
      if (!(v > 0.0) || !(v < 1.0)) fail(line, "mesh.h out of range (0, 1)");
      cfg.mesh_h = v;
    } else if (key == "mesh.grading") {
      const double v = parse_double(val, line, key);
      if (!(v >= 1.0) || !(v <= 10.0)) fail(line, "mesh.grading out of range [1, 10]");
      cfg.mesh_grading = v;
    } else if (key == "nonlinearity.model") {
      try {
        cfg.model = parse_model(val);
      } catch (const std::exception& e) {
        fail(line, e.what());
      }
    } else if (key == "nonlinearity.lambda") {
      const double v = parse_double(val, line, key);
      if (!(v > 0.0) || !(v <= 1e12)) fail(line, "nonlinearity.lambda out of range (0, 1e12]");
      cfg.lambda = v;
    } else if (key == "solver.mode") {
      try {
        cfg.solver_mode = parse_mode(val);
      } catch (const std::exception& e) {
        fail(line, e.what());
      }
    } else if (key == "solver.tol") {
      const double v = parse_double(val, line, key);
      if (!(v > 0.0) || !(v <= 0.1)) fail(line, "solver.tol out of range (0, 0.1]");
      cfg.solver_tol = v;
    } else if (key == "solver.path_points") {
      const long v = parse_long(val, line, key);
      if (v < 8 || v > 4096) fail(line, "solver.path_points out of range [8, 4096]");
      cfg.solver_path_points = static_cast<int>(v);
    } else if (key == "solver.max_iters") {
      const long v = parse_long(val, line, key);
      if (v < 1 || v > 10000000) fail(line, "solver.max_iters out of range [1, 1e7]");
      cfg.solver_max_iters = static_cast<int>(v);
    } else if (key == "moser.n_list") {
      std::vector<double> ns;
      std::istringstream ls(val);
      std::string item;
      while (std::getline(ls, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) fail(line, "empty entry in moser.n_list");
        const double v = parse_double(t, line, key);
        if (!(v >= 2.0) || !(v <= 1e15)) fail(line, "moser.n_list entries must be in [2, 1e15]");
        ns.push_back(v);
      }
      if (ns.empty()) fail(line, "moser.n_list is empty");
      cfg.moser_n = ns;
    } else if (key == "seed") {
      const long v = parse_long(val, line, key);
      if (v < 0) fail(line, "seed must be nonnegative");
      cfg.seed = static_cast<unsigned long>(v);
    } else if (key == "hypo.s_max") {
      const double v = parse_double(val, line, key);
      if (!(v > 0.1) || !(v <= 7.3)) fail(line, "hypo.s_max out of range (0.1, 7.3]");
      cfg.hypo_s_max = v;
    } else if (key == "hypo.points") {
      const long v = parse_long(val, line, key);
      if (v < 16 || v > 1000000) fail(line, "hypo.points out of range [16, 1e6]");
      cfg.hypo_points = static_cast<int>(v);
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace sectorpass
