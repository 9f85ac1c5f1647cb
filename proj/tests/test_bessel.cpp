#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qprop/bessel.hpp"
#include "qprop/error.hpp"

using namespace qprop;

namespace {

// Forty terms of the power series, summed backwards in long double.
long double series40(long double nu, long double x) {
  long double terms[40];
  long double t = 1.0L / std::tgamma(nu + 1.0L);
  for (int k = 0; k < 40; ++k) {
    if (k > 0) t *= -(x * x / 4.0L) / (k * (k + nu));
    terms[k] = t;
  }
  long double s = 0.0L;
  for (int k = 39; k >= 0; --k) s += terms[k];
  return s * std::pow(x / 2.0L, nu);
}

constexpr double kOrders[] = {-0.75, -0.25, 0.25, 0.75};

}  // namespace

TEST_CASE("bessel: small-argument leading term") {
  const double x = 1e-6;
  const double lead = std::pow(x / 2.0, 0.25) / std::tgamma(1.25);
  CHECK(std::abs(bessel_j(0.25, x) / lead - 1.0) <= 1e-6);
}

TEST_CASE("bessel: extended-precision series oracle") {
  CHECK(std::abs(bessel_j(0.75, 5.0) - static_cast<double>(series40(0.75L, 5.0L))) <= 1e-14);
  for (double nu : kOrders)
    for (double x : {0.1, 0.9, 2.0, 4.5, 7.0, 10.0})
      CHECK(std::abs(bessel_j(nu, x) - static_cast<double>(series40(nu, x))) <= 1e-13);
}

TEST_CASE("bessel: agrees with Boost across the series/asymptotic switch") {
  double worst = 0.0;
  for (double nu : kOrders)
    for (double x = 0.05; x < 60.0; x *= 1.037) worst = std::max(worst, std::abs(bessel_j(nu, x) - boost::math::cyl_bessel_j(nu, x)));
  for (double nu : kOrders)
    for (double x : {11.999, 12.0, 12.001, 12.5})
      worst = std::max(worst, std::abs(bessel_j(nu, x) - boost::math::cyl_bessel_j(nu, x)));
  CAPTURE(worst);
  CHECK(worst <= 1e-12);
}

TEST_CASE("bessel: Wronskian") {
  for (double x : {0.3, 1.0, 3.7, 11.0, 13.0, 25.0}) {
    const double w = bessel_j(0.25, x) * bessel_j_prime(-0.25, x) - bessel_j(-0.25, x) * bessel_j_prime(0.25, x);
    const double expect = -2.0 * std::sin(std::numbers::pi / 4.0) / (std::numbers::pi * x);
    CAPTURE(x);
    CHECK(std::abs(w - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("bessel: derivative recurrences against finite differences") {
  for (double nu : kOrders)
    for (double x : {0.7, 3.0, 14.0}) {
      const double h = 1e-5;
      const double fd = (bessel_j(nu, x + h) - bessel_j(nu, x - h)) / (2.0 * h);
      CHECK(std::abs(bessel_j_prime(nu, x) - fd) <= 1e-8);
    }
}

TEST_CASE("bessel: domain errors") {
  CHECK_THROWS_AS(bessel_j(0.5, 1.0), Error);
  CHECK_THROWS_AS(bessel_j(0.25, 0.0), Error);
  CHECK_THROWS_AS(bessel_j(0.25, -1.0), Error);
}
