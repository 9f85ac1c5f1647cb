#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "qprop/cauchy.hpp"
#include "qprop/error.hpp"

using namespace qprop;

namespace {

CharacteristicSolution solve_to(const CoefficientSet& cs, double T) {
  return solve_characteristic(cs, std::min(T, 0.999 * cs.t_max), 1e-12);
}

// Free evolution of the unit Gaussian with a = 1/2, written out by hand.
WaveFunction1D free_gaussian(const UniformGrid& grid, double t) {
  return sample(
      grid,
      [t](double x) {
        const cplx s(1.0, t);
        return std::pow(std::numbers::pi, -0.25) / std::sqrt(s) * std::exp(-x * x / (2.0 * s));
      },
      t);
}

struct Case {
  std::string name;
  CoefficientSet cs;
  double t;
};

std::vector<Case> cases() {
  const std::vector<double> w{1.0}, F{1.0};
  return {{"free", make_preset("free"), 0.5},
          {"constant_force", make_preset("constant_force", F), 0.5},
          {"sho", make_preset("sho", w), 0.5},
          {"modified_oscillator", make_preset("modified_oscillator"), 0.5}};
}

}  // namespace

TEST_CASE("grid and norm basics") {
  UniformGrid bad{0.0, 1.0, 8};
  CHECK_THROWS_AS(bad.validate(), Error);
  const UniformGrid g{-12.0, 12.0, 1024};
  const auto psi = gaussian_packet(g);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l2_error(psi, psi) == 0.0);
  auto neg = psi;
  for (auto& v : neg.values) v = -v;
  CHECK(l2_error(psi, neg) == doctest::Approx(2.0 * psi.norm()).epsilon(1e-14));
  const auto other = gaussian_packet(UniformGrid{-10.0, 10.0, 1024});
  CHECK_THROWS_AS(l2_error(psi, other), Error);
}

TEST_CASE("edge decay is enforced") {
  const auto cs = make_preset("free");
  const auto psi = gaussian_packet(UniformGrid{-4.0, 4.0, 256});
  try {
    propagate(cs, solve_to(cs, 1.0), psi, 1.0);
    FAIL("expected EDGE_DECAY");
  } catch (const Error& e) {
    CHECK(e.code() == "EDGE_DECAY");
  }
}

TEST_CASE("outside the window is rejected") {
  const std::vector<double> w{1.0};
  const auto cs = make_preset("sho", w);
  const auto psi = gaussian_packet(UniformGrid{-12.0, 12.0, 256});
  CHECK_THROWS_AS(propagate(cs, solve_to(cs, 3.0), psi, 2.0), Error);
}

TEST_CASE("free Gaussian: norm, analytic spread, Crank-Nicolson") {
  const auto cs = make_preset("free");
  const UniformGrid g{-12.0, 12.0, 1024};
  const auto psi0 = gaussian_packet(g);
  const auto psi = propagate(cs, solve_to(cs, 1.0), psi0, 1.0);
  CHECK(std::abs(psi.norm() - 1.0) <= 1e-6);
  CHECK(l2_error(psi, free_gaussian(g, 1.0)) <= 1e-8);
  const auto cn = crank_nicolson(cs, psi0, 1.0, 1e-3);
  CHECK(l2_error(cn, free_gaussian(g, 1.0)) <= 1e-4);
  CHECK(l2_error(psi, cn) <= 1e-4);
}

TEST_CASE("oscillator ground state keeps its modulus") {
  const std::vector<double> w{1.0};
  const auto cs = make_preset("sho", w);
  const UniformGrid g{-12.0, 12.0, 1024};
  const auto psi0 = gaussian_packet(g);
  const auto psi = propagate(cs, solve_to(cs, 0.5), psi0, 0.5);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n; ++i)
    worst = std::max(worst, std::abs(std::abs(psi.values[i]) - std::abs(psi0.values[i])));
  CHECK(worst <= 1e-5);
}

TEST_CASE("cross-oracle and unitarity for every preset") {
  const UniformGrid g{-12.0, 12.0, 1024};
  const auto psi0 = gaussian_packet(g);
  for (const auto& c : cases()) {
    CAPTURE(c.name);
    const auto psi = propagate(c.cs, solve_to(c.cs, c.t), psi0, c.t);
    const auto cn = crank_nicolson(c.cs, psi0, c.t, 1e-3);
    CHECK(l2_error(psi, cn) <= 1e-4);
    CHECK(std::abs(psi.norm() - psi0.norm()) <= 1e-5);
  }
}

TEST_CASE("propagation is linear") {
  const auto cs = make_preset("modified_oscillator");
  const UniformGrid g{-12.0, 12.0, 512};
  const auto p1 = gaussian_packet(g, -1.0, 0.8, 0.5);
  const auto p2 = gaussian_packet(g, 1.5, 1.2, -1.0);
  const cplx a(0.3, -1.1), b(-0.7, 0.4);
  WaveFunction1D mix = p1;
  for (std::size_t i = 0; i < g.n; ++i) mix.values[i] = a * p1.values[i] + b * p2.values[i];
  const auto sol = solve_to(cs, 0.8);
  const auto r1 = propagate(cs, sol, p1, 0.8), r2 = propagate(cs, sol, p2, 0.8);
  auto rm = propagate(cs, sol, mix, 0.8);
  WaveFunction1D comb = r1;
  for (std::size_t i = 0; i < g.n; ++i) comb.values[i] = a * r1.values[i] + b * r2.values[i];
  CHECK(l2_error(rm, comb) <= 1e-10);
}

TEST_CASE("small time is close to the identity") {
  const auto cs = make_preset("free");
  const UniformGrid g{-8.0, 8.0, 128};
  const auto psi0 = gaussian_packet(g);
  PropagateInfo info;
  const auto psi = propagate(cs, solve_to(cs, 1e-4), psi0, 1e-4, 1e-10, &info);
  CHECK(l2_error(psi, [&] { auto p = psi0; p.t = 1e-4; return p; }()) <= 1e-2);
  CHECK(info.chirp_panels > 0);
}

TEST_CASE("Crank-Nicolson conserves the norm when d = c/2") {
  const auto cs = make_preset("modified_oscillator");
  const UniformGrid g{-12.0, 12.0, 512};
  const auto psi0 = gaussian_packet(g, 0.5, 1.0, 1.0);
  const auto cn = crank_nicolson(cs, psi0, 1.0, 1e-3);
  CHECK(std::abs(cn.norm() - psi0.norm()) <= 1e-8);
}
