#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qprop/error.hpp"
#include "qprop/green1d.hpp"
#include "qprop/oracles.hpp"

using namespace qprop;
using namespace qprop::oracles;
constexpr double kPi = std::numbers::pi;

TEST_CASE("oracle point values") {
  const std::vector<double> args{0.4, 0.4, 1.0};
  CHECK(std::abs(eval_oracle({OracleId::free_sp1, {}}, args)) == doctest::Approx(1 / std::sqrt(2 * kPi)));

  const std::vector<double> sho_args{1.0, 1.0, kPi / 2};
  const auto want = std::exp(std::complex<double>(0.0, -1.0)) / std::sqrt(std::complex<double>(0.0, 2 * kPi));
  CHECK(std::abs(eval_oracle({OracleId::sho_sp3, {1.0}}, sho_args) - want) < 1e-14);

  const double mu = std::cos(0.5) * std::sinh(0.5) + std::sin(0.5) * std::cosh(0.5);
  const std::vector<double> mo_args{0.0, 0.0, 0.5};
  CHECK(std::abs(eval_oracle({OracleId::modified_osc_sp7, {}}, mo_args) -
                 1.0 / std::sqrt(std::complex<double>(0.0, 2 * kPi * mu))) < 1e-14);
}

TEST_CASE("oracle argument and caustic errors") {
  const std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(eval_oracle({OracleId::free_sp1, {}}, two), Error);
  const std::vector<double> caustic{0.0, 0.0, kPi};
  CHECK_THROWS_AS(eval_oracle({OracleId::sho_sp3, {1.0}}, caustic), Error);
  const std::vector<double> zero_t{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(eval_oracle({OracleId::free_sp1, {}}, zero_t), Error);
}

TEST_CASE("each 1D oracle satisfies its own PDE") {
  const std::vector<double> w{1.3}, F{0.7};
  struct Case {
    CoefficientSet cs;
    SpaceTimeFn psi;
  };
  const double y = 0.3;
  const Case cases[] = {
      {make_preset("free"), [y](double x, double t) { return free_kernel(x, y, t); }},
      {make_preset("constant_force", F), [y](double x, double t) { return constant_force_kernel(x, y, t, 0.7); }},
      {make_preset("sho", w), [y](double x, double t) { return sho_kernel(x, y, t, 1.3); }},
      {make_preset("modified_oscillator"), [y](double x, double t) { return modified_oscillator_kernel(x, y, t); }},
  };
  for (const auto& c : cases)
    for (double t : {0.3, 0.6, 1.0})
      for (double x : {-0.8, 0.1, 0.9}) {
        const auto r = pde_residual(c.cs, c.psi, x, t, 1e-3, 1e-3);
        CHECK(std::abs(r) <= 1e-3 * std::abs(c.psi(x, t)));
      }
}

TEST_CASE("modified oscillator and sho kernels share the free small-time limit") {
  // a(0) = 1 for the modified oscillator, so the comparable oscillator kernel
  // has hbar/(2m) = 1, i.e. m = 1/2.
  const double t = 1e-3;
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      const double x = -1.0 + 0.2 * i, y = -1.0 + 0.2 * j;
      const auto a = modified_oscillator_kernel(x, y, t);
      const auto b = sho_kernel(x, y, t, 1.0, 1.0, 0.5);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
      const double d = x - y;
      const auto lim = std::exp(std::complex<double>(0.0, d * d / (4 * t))) / std::sqrt(std::complex<double>(0.0, 4 * kPi * t));
      CHECK(std::abs(a - lim) <= 0.05 * std::abs(lim));
    }
  CHECK(worst <= 0.05);
}

TEST_CASE("constant magnetic field oracle: z factor and caustic") {
  MagneticConstants k;
  const auto gz = free_kernel(0.3, 0.3, 1.0);
  CHECK(std::abs(gz) == doctest::Approx(1 / std::sqrt(2 * kPi)));
  CHECK_THROWS_AS(magnetic_constant_kernel({0, 0, 0}, {0, 0, 0}, 2 * kPi, k), Error);
}
