#pragma once

#include <Eigen/Dense>

namespace sectorpass {

// Angular sector A_m of the unit disk, symmetric about the positive
// x2-axis, with half-angle beta = pi/2^m.  A point belongs to A_m iff
// cos(beta)|x1| < sin(beta) x2 and |x| < 1.
struct Sector {
  int m = 1;
  double half_angle = 0.0;          // beta = pi / 2^m
  double inradius = 0.0;            // d_m = sin(beta) / (1 + sin(beta))
  Eigen::Vector2d incenter;         // x_m = (0, 1 - d_m)
  Eigen::Vector2d axis;             // (0, 1)
};

Sector sector(int m);  // throws for m < 1

bool in_sector(const Sector& s, const Eigen::Vector2d& x);

// Householder reflection of x across the line through the origin with
// (unit) direction dir: an involution preserving |x|.
Eigen::Vector2d reflect_point(const Eigen::Vector2d& x, const Eigen::Vector2d& dir);

}  // namespace sectorpass
