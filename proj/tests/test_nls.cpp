#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qprop/error.hpp"
#include "qprop/nls.hpp"
#include "qprop/quadrature.hpp"

using namespace qprop;
using doctest::Approx;

TEST_CASE("xi_s values and continuity in s") {
  NLSParams p;
  p.s = 1.0;
  p.mu0 = 1.0;
  p.mu1 = 1.0;
  CHECK(xi_s(p, std::exp(1.0) - 1.0) == Approx(1.0).epsilon(1e-14));
  p.s = 0.0;
  p.mu1 = 2.0;
  CHECK(xi_s(p, 3.0) == Approx(6.0).epsilon(1e-14));
  for (double s : {0.0, 0.5, 1.0, 2.5}) {
    p.s = s;
    CHECK(xi_s(p, 0.0) == 0.0);
  }
  p.mu1 = 0.7;
  p.s = 1.0;
  const double x1 = xi_s(p, 1.3);
  for (double s : {1.0 - 1e-6, 1.0 + 1e-6}) {
    p.s = s;
    CHECK(std::abs(xi_s(p, 1.3) - x1) <= 1e-5);
  }
  p.mu1 = -2.0;
  CHECK_THROWS_AS(xi_s(p, 0.6), Error);
}

TEST_CASE("simple family: modulus law and limiting case") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.1, 3.0), ss(0.0, 3.0), tt(0.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    NLSParams p;
    p.s = ss(rng);
    p.h = u(rng);
    p.mu0 = pos(rng);
    p.mu1 = u(rng);
    p.beta0 = u(rng);
    p.gamma0 = u(rng);
    p.delta0 = u(rng);
    p.eps0 = u(rng);
    p.kappa0 = u(rng);
    p.phi = u(rng);
    p.y = u(rng);
    double t = tt(rng);
    if (p.mu0 + t * p.mu1 <= 0.0) t = 0.5 * (-p.mu0 / p.mu1);
    const double x = u(rng);
    const double expect = 1.0 / std::sqrt(p.mu0 + t * p.mu1);
    CHECK(std::abs(std::abs(nls_simple_solution(p, x, t)) - expect) <= 1e-14 * expect);
  }
  NLSParams p;
  p.mu1 = 0.0;
  for (double t : {0.0, 1.0, 10.0}) CHECK(std::abs(nls_simple_solution(p, 0.4, t)) == Approx(1.0));
  p.mu1 = 1.0;
  CHECK(std::abs(nls_simple_solution(p, 0.4, 3.0)) == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("mu1 -> 0 approaches the limiting phase") {
  NLSParams p;
  p.s = 1.5;
  p.h = 0.8;
  p.mu0 = 1.3;
  p.beta0 = 0.4;
  p.delta0 = -0.2;
  p.gamma0 = 0.1;
  p.eps0 = 0.3;
  p.kappa0 = 0.05;
  p.y = 0.7;
  const double x = 0.6, t = 1.1;
  // Limiting form written directly.
  const double S = p.beta0 * x * p.y + (p.gamma0 - p.beta0 * p.beta0 * t / 2) * p.y * p.y + p.delta0 * x +
                   (p.eps0 - p.beta0 * p.delta0 * t) * p.y + p.kappa0 - p.delta0 * p.delta0 * t / 2 -
                   p.h * t / std::pow(p.mu0, p.s);
  const auto lim = std::polar(1.0 / std::sqrt(p.mu0), S);
  p.mu1 = 0.0;
  CHECK(std::abs(nls_simple_solution(p, x, t) - lim) <= 1e-14);
  p.mu1 = 1e-9;
  CHECK(std::abs(nls_simple_solution(p, x, t) - lim) <= 1e-8);
}

TEST_CASE("blow-up time") {
  NLSParams p;
  p.mu0 = 1.0;
  p.mu1 = -2.0;
  CHECK(*blowup_time(p) == 0.5);
  p.mu1 = 1.0;
  CHECK(!blowup_time(p));
  p.mu0 = 2.0;
  p.mu1 = -1.0;
  CHECK(*blowup_time(p) == 2.0);
  p.mu0 = 1.0;
  p.mu1 = -2.0;
  CHECK_NOTHROW(nls_simple_solution(p, 0.0, 0.49));
  CHECK_THROWS_AS(nls_simple_solution(p, 0.0, 0.5), Error);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.01, 5.0);
  for (int k = 0; k < 100; ++k) {
    p.mu0 = pos(rng);
    p.mu1 = -pos(rng);
    const double t0 = *blowup_time(p);
    CHECK(t0 == -p.mu0 / p.mu1);
    CHECK(std::isfinite(std::abs(nls_simple_solution(p, 0.1, t0 * (1 - 1e-9)))));
    CHECK_THROWS_AS(nls_simple_solution(p, 0.1, t0), Error);
  }
}

TEST_CASE("regularized kernel") {
  const double eps = 0.3;
  const auto g0 = nls_kernel_solution(eps, 1.2, 1.5, 0.4, -0.1, 0.0);
  const auto expect = std::exp(std::complex<double>(0.0, 0.25 / (2 * eps))) /
                      std::sqrt(std::complex<double>(0.0, 2 * std::numbers::pi * eps));
  CHECK(std::abs(g0 - expect) <= 1e-15);
  // h = 0 is the free kernel at t + eps.
  const double t = 0.7;
  const auto free = std::exp(std::complex<double>(0.0, 0.25 / (2 * (t + eps)))) /
                    std::sqrt(std::complex<double>(0.0, 2 * std::numbers::pi * (t + eps)));
  CHECK(std::abs(nls_kernel_solution(eps, 0.0, 2.0, 0.4, -0.1, t) - free) <= 1e-15);
  // s = 1: extra phase -h/(2 pi) chi_1.
  CHECK(chi_s(1.0, 1.0, std::exp(1.0) - 1.0) == Approx(1.0).epsilon(1e-14));
  const double h = 0.9, tt = std::exp(1.0) - 1.0;
  const auto with = nls_kernel_solution(1.0, h, 1.0, 0.2, 0.0, tt);
  const auto without = nls_kernel_solution(1.0, 0.0, 1.0, 0.2, 0.0, tt);
  CHECK(std::abs(with / without - std::polar(1.0, -h / (2 * std::numbers::pi))) <= 1e-14);
  CHECK(chi_s(0.5, 2.0, 0.0) == 0.0);
}

TEST_CASE("modified-oscillator family") {
  for (double x : {-1.0, 0.3}) {
    for (double y : {0.0, 2.0}) {
      CHECK(std::abs(nls_modified_oscillator(1.0, x, y, 0.0) - std::polar(1.0, x * y)) <= 1e-15);
    }
  }
  const auto ph0 = nls_mo_phase(2.0, 0.0);
  CHECK(ph0.alpha == 0.0);
  CHECK(ph0.beta == 1.0);
  CHECK(ph0.gamma == 0.0);
  CHECK(ph0.kappa == 0.0);
  const auto ph = nls_mo_phase(1.0, 0.5);
  CHECK(ph.kappa == Approx(-std::log(std::cos(0.5) * std::cosh(0.5) + std::sin(0.5) * std::sinh(0.5))).epsilon(1e-14));
  CHECK_THROWS_AS(nls_modified_oscillator(1.0, 0.0, 0.0, 2.5), Error);
}

TEST_CASE("spec residual points") {
  NLSParams p;
  p.mu0 = 1.0;
  p.mu1 = 1.0;
  p.s = 1.0;
  p.h = 1.0;
  const SpaceTimeFn simple = [&](double x, double t) { return nls_simple_solution(p, x, t); };
  CHECK(std::abs(nls_residual(nls_free_equation(1.0, 1.0), simple, 0.3, 0.4, 1e-3, 1e-3)) <=
        1e-4 * std::abs(simple(0.3, 0.4)));

  const SpaceTimeFn kernel = [](double x, double t) { return nls_kernel_solution(0.5, 1.0, 2.0, x, 0.0, t); };
  CHECK(std::abs(nls_residual(nls_free_equation(1.0, 2.0), kernel, 0.1, 0.3, 1e-3, 1e-3)) <=
        1e-4 * std::abs(kernel(0.1, 0.3)));

  const SpaceTimeFn mo = [](double x, double t) { return nls_modified_oscillator(1.0, x, 0.5, t); };
  CHECK(std::abs(nls_residual(nls_mo_equation(1.0), mo, 0.2, 0.4, 1e-3, 1e-3)) <= 1e-3 * std::abs(mo(0.2, 0.4)));
}

TEST_CASE("all three families satisfy their equations on a 10x10 sample") {
  for (double s : {0.0, 0.5, 1.0, 2.0}) {
    CAPTURE(s);
    NLSParams p;
    p.s = s;
    p.h = -0.7;
    p.mu0 = 1.2;
    p.mu1 = 0.8;
    p.beta0 = 0.6;
    p.gamma0 = -0.3;
    p.delta0 = 0.4;
    p.eps0 = 0.1;
    p.kappa0 = 0.2;
    p.phi = 0.3;
    p.y = 0.5;
    const SpaceTimeFn simple = [&](double x, double t) { return nls_simple_solution(p, x, t); };
    const SpaceTimeFn kernel = [&](double x, double t) { return nls_kernel_solution(0.5, p.h, s, x, 0.2, t); };
    const SpaceTimeFn mo = [&](double x, double t) { return nls_modified_oscillator(s, x, 0.5, t); };
    const auto eq_free = nls_free_equation(p.h, s);
    const auto eq_mo = nls_mo_equation(s);
    double worst[3] = {0, 0, 0};
    for (int i = 0; i < 10; ++i) {
      const double x = -1.0 + 2.0 * i / 9.0;
      for (int j = 0; j < 10; ++j) {
        const double t = 0.05 + 0.9 * j / 9.0;
        worst[0] = std::max(worst[0], std::abs(nls_residual(eq_free, simple, x, t, 1e-3, 1e-3)) / std::abs(simple(x, t)));
        worst[1] = std::max(worst[1], std::abs(nls_residual(eq_free, kernel, x, t, 1e-3, 1e-3)) / std::abs(kernel(x, t)));
        worst[2] = std::max(worst[2], std::abs(nls_residual(eq_mo, mo, x, t, 1e-3, 1e-3)) / std::abs(mo(x, t)));
      }
    }
    CHECK(worst[0] <= 1e-3);
    CHECK(worst[1] <= 1e-3);
    CHECK(worst[2] <= 1e-3);
  }
}

TEST_CASE("printed 1/(2 pi) phase only solves the s = 1 equation") {
  // With the closed form's -h/(2 pi) chi_s the defect for s = 2 is O(h), not O(stencil).
  const double eps = 0.5, h = 1.0, s = 2.0;
  const SpaceTimeFn printed = [&](double x, double t) {
    const double T = t + eps;
    return std::polar(1.0, x * x / (2 * T) - h / (2 * std::numbers::pi) * chi_s(eps, s, t)) /
           std::sqrt(std::complex<double>(0.0, 2 * std::numbers::pi * T));
  };
  const auto eq = nls_free_equation(h, s);
  CHECK(std::abs(nls_residual(eq, printed, 0.1, 0.3, 1e-3, 1e-3)) / std::abs(printed(0.1, 0.3)) > 1e-2);
}

TEST_CASE("regularized kernel tends to the identity as eps -> 0") {
  const auto phi = [](double y) { return std::exp(-y * y); };
  double prev = 1e300;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    double worst = 0.0;
    for (double x : {-0.8, 0.0, 0.5}) {
      const double p2 = 1.0 / (2.0 * eps), p1 = -x / eps;
      const auto pre = std::polar(1.0, x * x / (2.0 * eps)) /
                       std::sqrt(std::complex<double>(0.0, 2.0 * std::numbers::pi * eps));
      const auto v = pre * quad::integrate_chirp([&](double y) { return std::complex<double>(phi(y)); }, p2, p1, -9.0, 9.0);
      CHECK(std::abs(v - phi(x)) <= std::sqrt(eps));
      worst = std::max(worst, std::abs(v - phi(x)));
    }
    CHECK(worst < prev);
    prev = worst;
  }
}
