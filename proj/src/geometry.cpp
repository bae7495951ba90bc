#include "sectorpass/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sectorpass {

Sector sector(int m) {
  if (m < 1) throw std::invalid_argument("sector: m must be >= 1 (the full disk is not in the family)");
  if (m > 16) throw std::invalid_argument("sector: m too large to mesh sensibly (max 16)");
  Sector s;
  s.m = m;
  s.half_angle = std::numbers::pi / std::pow(2.0, m);
  const double sb = std::sin(s.half_angle);
  s.inradius = sb / (1.0 + sb);  // tangency: (1 - d) sin(beta) = d
  s.incenter = Eigen::Vector2d(0.0, 1.0 - s.inradius);
  s.axis = Eigen::Vector2d(0.0, 1.0);
  return s;
}

bool in_sector(const Sector& s, const Eigen::Vector2d& x) {
  const double cb = std::cos(s.half_angle), sb = std::sin(s.half_angle);
  return cb * std::abs(x[0]) < sb * x[1] && x.squaredNorm() < 1.0;
}

Eigen::Vector2d reflect_point(const Eigen::Vector2d& x, const Eigen::Vector2d& dir) {
  const Eigen::Vector2d u = dir.normalized();
  return 2.0 * (x.dot(u)) * u - x;
}

}  // namespace sectorpass
