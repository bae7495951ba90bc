#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sectorpass {

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth, double& err_acc) {
  const double m  = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double h12 = (b - a) / 12.0;
  const double left  = h12 * (fa + 4.0 * flm + fm);
  const double right = h12 * (fm + 4.0 * frm + fb);
  const double s2 = left + right;
  const double delta = s2 - whole;
  // Round-off floor: summation noise plus the uneven-midpoint noise
  // ulp(endpoint) * |f| that dominates once the panel width is far below
  // the endpoint magnitude.  Below this the Richardson estimate is noise.
  const double eps = std::numeric_limits<double>::epsilon();
  const double fmag = std::abs(fa) + 4.0 * std::abs(flm) + 2.0 * std::abs(fm) +
                      4.0 * std::abs(frm) + std::abs(fb);
  const double floor = 60.0 * eps * (std::abs(left) + std::abs(right)) +
                       2.0 * eps * std::max(std::abs(a), std::abs(b)) * fmag;
  if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= floor || m <= a || m >= b) {
    err_acc += std::abs(delta) / 15.0;
    return s2 + delta / 15.0;
  }
  if (depth <= 0) {
    std::ostringstream os;
    os << "integrate_adaptive: tolerance not met on [" << a << ", " << b
       << "], achieved error estimate " << (err_acc + std::abs(delta) / 15.0);
    throw std::runtime_error(os.str());
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err_acc) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err_acc);
}

}  // namespace detail

// Adaptive Simpson rule on [a, b] to absolute tolerance abs_tol.  The
// recursion sums panels pairwise, so accumulated round-off stays near
// machine precision even for sharply peaked integrands.  Throws
// std::runtime_error with the achieved error estimate if the tolerance
// cannot be met within max_depth bisections.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                          int max_depth = 52) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate_adaptive: abs_tol must be > 0");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double err_acc = 0.0;
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, err_acc);
}

// Composite Simpson with a fixed panel count (used where the subdivision
// is already fine enough that adaptivity would be wasted).
template <class F>
double integrate_fixed_simpson(F&& f, double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("integrate_fixed_simpson: panels >= 1");
  const double h = (b - a) / panels;
  double acc = 0.0;
  double fl = f(a);
  for (int i = 0; i < panels; ++i) {
    const double xr = (i + 1 == panels) ? b : a + (i + 1) * h;
    const double xm = a + (i + 0.5) * h;
    const double fm = f(xm), fr = f(xr);
    acc += (xr - (a + i * h)) / 6.0 * (fl + 4.0 * fm + fr);
    fl = fr;
  }
  return acc;
}

// 7-point degree-5 rule on the reference triangle (Radon/Hammer),
// barycentric coordinates; weights sum to 1 and multiply the physical
// triangle area.
struct TriangleRule {
  static constexpr int npts = 7;
  double l1[npts], l2[npts], l3[npts], w[npts];

  static const TriangleRule& degree5() {
    static const TriangleRule rule = [] {
      TriangleRule r{};
      const double s15 = std::sqrt(15.0);
      const double b1 = (6.0 - s15) / 21.0, a1 = 1.0 - 2.0 * b1;
      const double b2 = (6.0 + s15) / 21.0, a2 = 1.0 - 2.0 * b2;
      const double w0 = 9.0 / 40.0;
      const double w1 = (155.0 - s15) / 1200.0;
      const double w2 = (155.0 + s15) / 1200.0;
      const double L1[] = {1.0 / 3.0, a1, b1, b1, a2, b2, b2};
      const double L2[] = {1.0 / 3.0, b1, a1, b1, b2, a2, b2};
      const double W[]  = {w0, w1, w1, w1, w2, w2, w2};
      for (int i = 0; i < npts; ++i) {
        r.l1[i] = L1[i];
        r.l2[i] = L2[i];
        r.l3[i] = 1.0 - L1[i] - L2[i];
        r.w[i] = W[i];
      }
      return r;
    }();
    return rule;
  }
};

}  // namespace sectorpass
