#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qprop/error.hpp"
#include "qprop/time_function.hpp"

using qprop::TimeFunction;

TEST_CASE("default time function is identically zero") {
  TimeFunction z;
  CHECK(z.is_zero());
  CHECK(z(3.0) == 0.0);
  CHECK(z.derivative(3.0) == 0.0);
}

TEST_CASE("polynomial and sinusoid derivatives are exact") {
  const auto p = TimeFunction::polynomial({1.0, -2.0, 3.0});
  CHECK(p(2.0) == doctest::Approx(1.0 - 4.0 + 12.0));
  CHECK(p.derivative(2.0) == doctest::Approx(-2.0 + 12.0));
  CHECK(p.derivative_function().derivative(5.0) == doctest::Approx(6.0));

  const auto s = TimeFunction::sinusoid(0.5, 0.5, 0.0, 2.0);
  CHECK(s(0.3) == doctest::Approx(0.5 * (1.0 + std::cos(0.6))));
  CHECK(s.derivative(0.3) == doctest::Approx(-std::sin(0.6)));
}

TEST_CASE("composite derivatives match central differences to O(h^2)") {
  const auto a = TimeFunction::sinusoid(1.0, 0.3, 0.2, 1.7);
  const auto b = TimeFunction::polynomial({2.0, 0.5, -0.1});
  const TimeFunction funcs[] = {a + b, a - b, a * b, a / b, b.pow(-1.5), 3.0 * a, -b};
  for (const auto& f : funcs) {
    for (double t : {0.1, 0.7, 1.9}) {
      const double h = 1e-4;
      const double fd = (f(t + h) - f(t - h)) / (2 * h);
      CHECK(std::abs(f.derivative(t) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
      const double dd = f.derivative_function()(t);
      CHECK(dd == doctest::Approx(f.derivative(t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("tabulated spline is exact at knots and rejects out-of-domain t") {
  std::vector<double> ts, vs;
  for (int i = 0; i <= 20; ++i) {
    ts.push_back(0.1 * i);
    vs.push_back(std::sin(0.1 * i));
  }
  const auto f = TimeFunction::tabulated(ts, vs);
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(f(ts[i]) == doctest::Approx(vs[i]).epsilon(1e-14));
  CHECK(std::abs(f(0.55) - std::sin(0.55)) < 1e-4);
  CHECK(std::abs(f.derivative(1.05) - std::cos(1.05)) < 1e-3);
  CHECK_THROWS_AS(f(2.5), qprop::Error);
  CHECK_THROWS_AS(TimeFunction::tabulated({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}), qprop::Error);
}

TEST_CASE("non-finite parameters are rejected") {
  CHECK_THROWS_AS(TimeFunction::constant(std::nan("")), qprop::Error);
}
