#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qprop/coefficients.hpp"

namespace qprop {

enum class SolutionSource { numeric, closed_form };

/// Dense representation of the characteristic function mu on [0, T] together
/// with the zeros of mu (focal times) and of mu' (turning times) in (0, T].
///
/// Numeric solutions interpolate step-end data (mu, mu', mu'') with quintic
/// Hermite polynomials; closed-form solutions evaluate exact expressions.
class CharacteristicSolution {
 public:
  struct Node {
    double t, mu, mu_prime, mu_second;
  };
  struct Exact {
    std::function<double(double)> mu, mu_prime, mu_second;
  };

  CharacteristicSolution() = default;

  static CharacteristicSolution from_nodes(std::vector<Node> nodes);
  static CharacteristicSolution from_exact(Exact exact, double t_end,
                                           std::vector<double> focal_times,
                                           std::vector<double> turning_times);

  double mu(double t) const;
  double mu_prime(double t) const;
  double mu_second(double t) const;

  double t_end() const { return t_end_; }
  SolutionSource source() const { return source_; }
  const std::vector<double>& focal_times() const { return focal_; }
  const std::vector<double>& turning_times() const { return turning_; }
  /// Upper end of the phase window: the first zero of mu or mu' in (0, T],
  /// or +inf when neither occurs.
  double phase_window() const;
  /// Number of accepted integration steps (0 for closed forms).
  std::size_t steps() const { return nodes_ ? nodes_->size() - 1 : 0; }
  /// Step ends of the numeric solution (empty for closed forms). The dense
  /// output is only C2 across them.
  std::vector<double> knots() const;

 private:
  struct Eval {
    double v, d1, d2;
  };
  Eval evaluate(double t) const;
  void check_domain(double t) const;

  SolutionSource source_ = SolutionSource::numeric;
  double t_end_ = 0.0;
  std::shared_ptr<const std::vector<Node>> nodes_;
  std::shared_ptr<const Exact> exact_;
  std::vector<double> focal_;
  std::vector<double> turning_;
};

/// Integrates mu'' = tau mu' - 4 sigma mu, mu(0) = 0, mu'(0) = 2 a(0) on [0, T]
/// with an adaptive Dormand-Prince 5(4) stepper at local tolerance tol.
CharacteristicSolution solve_characteristic(const CoefficientSet& cs, double T, double tol = 1e-10);

/// Same integration for an arbitrary right-hand side and initial slope.
CharacteristicSolution solve_linear_characteristic(const std::function<TauSigma(double)>& coeffs,
                                                   double slope0, double T, double tol,
                                                   const std::function<double(double)>& a_sign = {});

/// Closed forms: free and constant_force (mu = t), sho (mu = sin(w t)/w),
/// modified_oscillator (mu = cos t sinh t + sin t cosh t).
CharacteristicSolution closed_form_characteristic(Preset preset, std::span<const double> params,
                                                  double T);

std::optional<double> first_focal_time(const CharacteristicSolution& sol);

}  // namespace qprop
