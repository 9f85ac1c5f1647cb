#pragma once

#include <complex>
#include <optional>

#include "qprop/coefficients.hpp"
#include "qprop/green1d.hpp"

namespace qprop {

/// Parameters of the simple-case family psi = e^{i phi} mu^{-1/2} e^{i S}
/// with mu(t) = mu0 + t mu1 for  i psi_t = -psi_xx/2 + h |psi|^{2s} psi.
struct NLSParams {
  double s = 1.0;
  double h = 1.0;
  double mu0 = 1.0, mu1 = 0.0;
  double beta0 = 0.0, gamma0 = 0.0, delta0 = 0.0, eps0 = 0.0, kappa0 = 0.0;
  double phi = 0.0;
  double y = 0.0;  // spectral parameter, fixed by the caller

  /// Throws nls/INVALID_PARAMS for s < 0, mu0 <= 0 or non-finite entries.
  void validate() const;
};

/// ((mu0 + t mu1)^{1-s} - mu0^{1-s})/(1-s), or ln(1 + t mu1/mu0) at s = 1.
/// Evaluated through log1p/expm1, so it is continuous in s. Throws
/// nls/BLOWUP once mu0 + t mu1 <= 0.
double xi_s(const NLSParams& p, double t);

/// Phase coefficients of the simple case at time t.
QuadraticPhase nls_simple_phase(const NLSParams& p, double t);

/// Simple-case solution; |psi| = (mu0 + t mu1)^{-1/2}.
std::complex<double> nls_simple_solution(const NLSParams& p, double x, double t);

/// -mu0/mu1 when mu1 < 0.
std::optional<double> blowup_time(const NLSParams& p);

/// ((t+eps)^{1-s} - eps^{1-s})/(1-s), or ln(1 + t/eps) at s = 1.
double chi_s(double epsilon, double s, double t);

/// Regularized kernel for  i psi_t + psi_xx/2 = h |psi|^{2s} psi:
///   (2 pi i (t+eps))^{-1/2} exp(i (x-y)^2/(2 (t+eps)) - i h (2 pi)^{-s} chi_s(t)).
/// The (2 pi)^{-s} factor is |G|^{2s} (t+eps)^s; for s = 1 it is the 1/(2 pi)
/// of the closed form.
std::complex<double> nls_kernel_solution(double epsilon, double h, double s, double x, double y, double t);

/// mu(t) = cos t cosh t + sin t sinh t for the modified-oscillator family.
double nls_mo_mu(double t);

/// Phase coefficients (alpha, beta, gamma, kappa) of the modified-oscillator
/// family; delta = epsilon = 0. Throws nls/BLOWUP when mu <= 0.
QuadraticPhase nls_mo_phase(double s, double t);

/// mu^{-1/2} exp(i (alpha x^2 + beta x y + gamma y^2 + kappa)); e^{ixy} at t = 0.
std::complex<double> nls_modified_oscillator(double s, double x, double y, double t);

/// An equation of the form  i psi_t = H psi + h |psi|^{2s} psi.
struct NlsEquation {
  CoefficientSet cs;  // cs.h must be set
  double s = 1.0;
};

/// i psi_t = -psi_xx/2 + h |psi|^{2s} psi (simple and kernel families).
NlsEquation nls_free_equation(double h, double s);
/// The modified-oscillator equation with h(t) = 2 cos t sinh t.
NlsEquation nls_mo_equation(double s);

/// Second-order finite-difference defect of the equation at (x, t).
std::complex<double> nls_residual(const NlsEquation& eq, const SpaceTimeFn& psi, double x, double t,
                                  double h_x, double h_t);

}  // namespace qprop
