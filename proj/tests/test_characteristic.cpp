#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qprop/characteristic.hpp"
#include "qprop/error.hpp"

using namespace qprop;
constexpr double kPi = std::numbers::pi;

TEST_CASE("sho: numeric mu is sin t with a focal time at pi") {
  const std::vector<double> w{1.0};
  const auto sol = solve_characteristic(make_preset("sho", w), kPi, 1e-10);
  CHECK(sol.source() == SolutionSource::numeric);
  CHECK(sol.mu(kPi / 2) == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(sol.focal_times().size() == 1);
  CHECK(std::abs(sol.focal_times()[0] - kPi) < 1e-9);
  CHECK(first_focal_time(sol).value() == doctest::Approx(kPi));
  REQUIRE(sol.turning_times().size() == 1);
  CHECK(std::abs(sol.turning_times()[0] - kPi / 2) < 1e-9);
}

TEST_CASE("free: mu = t and no focal time") {
  const auto sol = solve_characteristic(make_preset("free"), 2.0, 1e-10);
  for (double t : {0.0, 0.5, 1.7, 2.0}) CHECK(std::abs(sol.mu(t) - t) < 1e-12);
  CHECK(sol.focal_times().empty());
  CHECK_FALSE(first_focal_time(sol).has_value());
  const auto ten = closed_form_characteristic(Preset::free, {}, 10.0);
  CHECK_FALSE(first_focal_time(ten).has_value());
}

TEST_CASE("modified oscillator numeric mu at pi/4") {
  const auto sol = solve_characteristic(make_preset("modified_oscillator"), 1.0, 1e-10);
  const double t = kPi / 4;
  const double want = std::cos(t) * std::sinh(t) + std::sin(t) * std::cosh(t);
  CHECK(want == doctest::Approx(1.550883).epsilon(1e-6));
  CHECK(std::abs(sol.mu(t) - want) < 1e-8);
}

TEST_CASE("closed forms and their focal metadata") {
  const std::vector<double> w2{2.0};
  const auto sho2 = closed_form_characteristic(Preset::sho, w2, kPi);
  REQUIRE(sho2.focal_times().size() == 2);
  CHECK(sho2.focal_times()[0] == doctest::Approx(kPi / 2));
  CHECK(sho2.focal_times()[1] == doctest::Approx(kPi));

  const auto fr = closed_form_characteristic(Preset::free, {}, 5.0);
  for (double t : {0.0, 2.0, 5.0}) CHECK(fr.mu_prime(t) == 1.0);

  const auto mo = closed_form_characteristic(Preset::modified_oscillator, {}, 3.0);
  REQUIRE(!mo.focal_times().empty());
  const double tf = mo.focal_times()[0];
  CHECK(tf > kPi / 2);
  CHECK(tf < kPi);
  CHECK(std::abs(std::cos(tf) * std::sinh(tf) + std::sin(tf) * std::cosh(tf)) < 1e-11);

  const std::vector<double> w1{1.0};
  CHECK_FALSE(first_focal_time(closed_form_characteristic(Preset::sho, w1, 1.0)).has_value());
  CHECK_THROWS_AS(closed_form_characteristic(Preset::custom, {}, 1.0), Error);
}

TEST_CASE("numeric vs closed form over 0.9 of the first focal window") {
  const std::vector<double> w{1.0};
  struct Case {
    CoefficientSet cs;
    CharacteristicSolution cf;
    double T;
  };
  const Case cases[] = {
      {make_preset("free"), closed_form_characteristic(Preset::free, {}, 3.0), 3.0},
      {make_preset("sho", w), closed_form_characteristic(Preset::sho, w, 0.9 * kPi), 0.9 * kPi},
      {make_preset("modified_oscillator"), closed_form_characteristic(Preset::modified_oscillator, {}, 1.5),
       1.5},
  };
  for (const auto& c : cases) {
    const auto num = solve_characteristic(c.cs, c.T, 1e-10);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = c.T * i / 1000.0;
      err = std::max(err, std::abs(num.mu(t) - c.cf.mu(t)));
      scale = std::max(scale, std::abs(c.cf.mu(t)));
    }
    CHECK(err <= 1e-8 * scale);
  }
}

TEST_CASE("ODE residual, derivative consistency and initial data") {
  const std::vector<double> w{1.0};
  const double tol = 1e-10;
  const CoefficientSet sets[] = {make_preset("free"), make_preset("sho", w), make_preset("modified_oscillator")};
  for (const auto& cs : sets) {
    const double T = std::min(1.5, cs.t_max);
    const auto sol = solve_characteristic(cs, T, tol);
    CHECK(std::abs(sol.mu(0.0)) <= tol);
    CHECK(std::abs(sol.mu_prime(0.0) - 2 * cs.a(0.0)) <= tol);
    double max_mup = 0.0;
    for (int i = 0; i <= 1000; ++i) max_mup = std::max(max_mup, std::abs(sol.mu_prime(T * i / 1000.0)));
    for (int i = 0; i < 1000; ++i) {
      const double t = T * (i + 0.5) / 1000.0;
      const auto ts = tau_sigma(cs, t);
      const double mu = sol.mu(t), mup = sol.mu_prime(t);
      CHECK(std::abs(sol.mu_second(t) - ts.tau * mup + 4 * ts.sigma * mu) <=
            100 * tol * (1 + std::abs(mu) + std::abs(mup)));
      const double h = 1e-5;
      if (t > h && t < T - h)
        CHECK(std::abs((sol.mu(t + h) - sol.mu(t - h)) / (2 * h) - mup) <= 1e-6 * max_mup);
    }
  }
}

TEST_CASE("mu keeps its sign between focal times") {
  const std::vector<double> w{1.0};
  const auto sol = solve_characteristic(make_preset("sho", w), 3.5 * kPi, 1e-10);
  REQUIRE(sol.focal_times().size() == 3);
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), sol.focal_times().begin(), sol.focal_times().end());
  edges.push_back(sol.t_end());
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double sign = sol.mu(0.5 * (edges[k] + edges[k + 1])) > 0 ? 1.0 : -1.0;
    for (int i = 1; i < 50; ++i) {
      const double t = edges[k] + (edges[k + 1] - edges[k]) * i / 50.0;
      CHECK(sign * sol.mu(t) > 0.0);
    }
  }
}

TEST_CASE("coefficient singularities are errors") {
  CHECK_THROWS_AS(solve_characteristic(make_preset("modified_oscillator"), 2.0, 1e-10), Error);
  const std::vector<double> p{0.5, 0, 0, 0, 0, 0};
  auto cs = make_preset("custom", p);
  cs.a = TimeFunction::polynomial({0.5, -1.0});
  CHECK_THROWS_AS(solve_characteristic(cs, 1.0, 1e-10), Error);
  CHECK_THROWS_AS(solve_characteristic(make_preset("free"), -1.0, 1e-10), Error);
}
