#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>

#include "qprop/characteristic.hpp"
#include "qprop/coefficients.hpp"
#include "qprop/quadrature.hpp"

namespace qprop {

/// S = alpha x^2 + beta x y + gamma y^2 + delta x + epsilon y + kappa at time t.
struct QuadraticPhase {
  double t = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0, epsilon = 0.0, kappa = 0.0;

  double eval(double x, double y) const {
    return (alpha * x + beta * y + delta) * x + (gamma * y + epsilon) * y + kappa;
  }
};

/// Phase coefficients on (0, t_max] for one coefficient set and one
/// characteristic solution. Every running integral is built once, so
/// evaluating many times costs a handful of cached lookups each.
///
/// With E(t) = exp(-int_0^t (c - 2d)), P = f - d g / a and M = mu delta:
///   alpha = mu'/(4 a mu) - d/(2a)
///   beta  = -E/mu
///   gamma = a E^2/(mu mu') - 4 int a sigma E^2/mu'^2
///   M     = E int E^{-1} (P mu + g mu'/(2a))
///   eps   = -2 a E M/(mu mu') + 8 int a sigma E M/mu'^2 + 2 int a E P/mu'
///   kappa = a M^2/(mu mu') - 4 int a sigma M^2/mu'^2 - 2 int a M P/mu'
/// t_max must lie inside the phase window (before the first zero of mu or mu').
class PhaseLadder {
 public:
  PhaseLadder(const CoefficientSet& cs, const CharacteristicSolution& sol, double t_max,
              double qtol = 1e-10);

  QuadraticPhase at(double t) const;
  double t_max() const { return t_max_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  double t_max_;
};

/// One-shot phase at time t (0 < t < phase window).
QuadraticPhase phase_coefficients(const CoefficientSet& cs, const CharacteristicSolution& sol,
                                  double t, double qtol = 1e-10);

enum class AmplitudeBranch { principal, restrict_to_first_focal };

struct Green1D {
  CoefficientSet cs;
  CharacteristicSolution sol;
  QuadraticPhase phase;
  double mu = 0.0;
  AmplitudeBranch amplitude_branch = AmplitudeBranch::restrict_to_first_focal;
  /// Experimental: for mu < 0 use |mu| and multiply by exp(-i pi/2) per zero
  /// of mu crossed. Off by default.
  bool maslov_continuation = false;
};

Green1D make_green(const CoefficientSet& cs, const CharacteristicSolution& sol, double t,
                   double qtol = 1e-10,
                   AmplitudeBranch branch = AmplitudeBranch::restrict_to_first_focal);

/// (2 pi i mu)^{-1/2} exp(i S(x, y)), principal square root.
std::complex<double> eval_green(const Green1D& g, double x, double y);

/// Absolute residuals of the six first-order equations for
/// (alpha, beta, gamma, delta, epsilon, kappa) at t, with d/dt by a
/// five-point central difference of the phase ladder.
std::array<double, 6> system_residuals(const CoefficientSet& cs, const CharacteristicSolution& sol,
                                       double t, double qtol = 1e-12);

using SpaceTimeFn = std::function<std::complex<double>(double x, double t)>;

/// i psi_t + a psi_xx - b x^2 psi + i (c x psi_x + d psi) + f x psi - i g psi_x
///   [- h |psi|^{2s} psi when cs.h is set]
/// by second-order central differences.
std::complex<double> pde_residual(const CoefficientSet& cs, const SpaceTimeFn& psi, double x,
                                  double t, double h_x, double h_t, double s = 1.0);

/// pde_residual of G(., y, .) built from g's coefficients and characteristic
/// solution; the phase is rebuilt at t +- h_t.
std::complex<double> pde_residual_green(const CoefficientSet& cs, const Green1D& g, double x,
                                        double y, double t, double h_x, double h_t);

}  // namespace qprop
