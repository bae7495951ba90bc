#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sectorpass/quadrature.hpp"

using namespace sectorpass;

TEST_CASE("adaptive simpson: polynomials and smooth closed forms") {
  CHECK(integrate_adaptive([](double x) { return x * x * x; }, 0.0, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  CHECK(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("adaptive simpson: sharply peaked integrand against the erf oracle") {
  // int exp(-a (x - c)^2) dx = sqrt(pi/a)/2 * (erf(sqrt(a)(b-c)) - erf(sqrt(a)(a0-c)))
  const double a = 1000.0, c = 0.3;
  const double val = integrate_adaptive(
      [&](double x) { return std::exp(-a * (x - c) * (x - c)); }, 0.0, 1.0, 1e-14);
  const double sa = std::sqrt(a);
  const double exact = 0.5 * std::sqrt(std::numbers::pi / a) *
                       (std::erf(sa * (1.0 - c)) - std::erf(sa * (0.0 - c)));
  CHECK(val == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("adaptive simpson: throws with achieved-error message when depth is exhausted") {
  CHECK_THROWS_WITH_AS(
      integrate_adaptive([](double x) { return std::sqrt(std::abs(x - 0.37151)); }, 0.0, 1.0, 1e-15, 3),
      doctest::Contains("achieved error estimate"), std::runtime_error);
}

TEST_CASE("fixed simpson matches adaptive on a smooth integrand") {
  auto f = [](double x) { return std::cos(3.0 * x); };
  const double val = integrate_fixed_simpson(f, 0.0, 2.0, 2000);
  CHECK(val == doctest::Approx(std::sin(6.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("triangle rule: degree-5 exactness on the reference triangle") {
  // oracle: int_T x^p y^q = p! q! / (p + q + 2)!
  auto exact = [](int p, int q) {
    auto fact = [](int k) {
      double r = 1.0;
      for (int i = 2; i <= k; ++i) r *= i;
      return r;
    };
    return fact(p) * fact(q) / fact(p + q + 2);
  };
  const TriangleRule& rule = TriangleRule::degree5();
  double wsum = 0.0;
  for (int i = 0; i < TriangleRule::npts; ++i) wsum += rule.w[i];
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
  for (int p = 0; p <= 5; ++p) {
    for (int q = 0; p + q <= 5; ++q) {
      double acc = 0.0;
      for (int i = 0; i < TriangleRule::npts; ++i) {
        const double x = rule.l2[i], y = rule.l3[i];  // vertices (0,0), (1,0), (0,1)
        acc += rule.w[i] * std::pow(x, p) * std::pow(y, q);
      }
      acc *= 0.5;  // reference triangle area
      CHECK(acc == doctest::Approx(exact(p, q)).epsilon(1e-13));
    }
  }
}
