#include "qprop/nls.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qprop/error.hpp"

namespace qprop {

namespace {

// ((1 + r)^q - 1)/q, with the q -> 0 limit ln(1 + r).
double power_ratio(double r, double q) {
  const double l = std::log1p(r);
  if (q == 0.0) return l;
  return std::expm1(q * l) / q;
}

// scale is the size of the terms summed into mu, so a cancelled zero counts.
void require_positive_mu(double mu, double t, double scale = 0.0) {
  if (!(mu > 4.0 * std::numeric_limits<double>::epsilon() * scale)) {
    std::ostringstream os;
    os << "mu(t) = " << mu << " <= 0 at t=" << t << " (blow-up reached)";
    throw Error("nls", "BLOWUP", os.str());
  }
}

}  // namespace

void NLSParams::validate() const {
  const double all[] = {s, h, mu0, mu1, beta0, gamma0, delta0, eps0, kappa0, phi, y};
  for (double v : all)
    if (!std::isfinite(v)) throw Error("nls", "INVALID_PARAMS", "non-finite NLS parameter");
  if (s < 0.0) throw Error("nls", "INVALID_PARAMS", "nonlinearity exponent s must be >= 0");
  if (!(mu0 > 0.0)) throw Error("nls", "INVALID_PARAMS", "mu0 must be positive");
}

double xi_s(const NLSParams& p, double t) {
  p.validate();
  require_positive_mu(p.mu0 + t * p.mu1, t, p.mu0 + std::abs(t * p.mu1));
  return std::pow(p.mu0, 1.0 - p.s) * power_ratio(t * p.mu1 / p.mu0, 1.0 - p.s);
}

QuadraticPhase nls_simple_phase(const NLSParams& p, double t) {
  p.validate();
  const double mu = p.mu0 + t * p.mu1;
  require_positive_mu(mu, t, p.mu0 + std::abs(t * p.mu1));
  QuadraticPhase ph;
  ph.t = t;
  ph.alpha = p.mu1 / (2.0 * mu);
  ph.beta = p.mu0 * p.beta0 / mu;
  ph.delta = p.mu0 * p.delta0 / mu;
  ph.gamma = p.gamma0 - p.mu0 * p.beta0 * p.beta0 * t / (2.0 * mu);
  ph.epsilon = p.eps0 - p.mu0 * p.beta0 * p.delta0 * t / mu;
  // xi_s/mu1 stays finite as mu1 -> 0, where it tends to t mu0^{-s}.
  const double r = t * p.mu1 / p.mu0;
  const double xi_over_mu1 =
      r == 0.0 ? t * std::pow(p.mu0, -p.s) : std::pow(p.mu0, -p.s) * t * power_ratio(r, 1.0 - p.s) / r;
  ph.kappa = p.kappa0 - p.mu0 * p.delta0 * p.delta0 * t / (2.0 * mu) - p.h * xi_over_mu1;
  return ph;
}

std::complex<double> nls_simple_solution(const NLSParams& p, double x, double t) {
  const QuadraticPhase ph = nls_simple_phase(p, t);
  const double mu = p.mu0 + t * p.mu1;
  return std::polar(1.0 / std::sqrt(mu), p.phi + ph.eval(x, p.y));
}

std::optional<double> blowup_time(const NLSParams& p) {
  if (p.mu1 < 0.0) return -p.mu0 / p.mu1;
  return std::nullopt;
}

double chi_s(double epsilon, double s, double t) {
  if (!(epsilon > 0.0) || !(t >= 0.0) || s < 0.0)
    throw Error("nls", "INVALID_PARAMS", "chi_s needs epsilon > 0, t >= 0, s >= 0");
  return std::pow(epsilon, 1.0 - s) * power_ratio(t / epsilon, 1.0 - s);
}

std::complex<double> nls_kernel_solution(double epsilon, double h, double s, double x, double y, double t) {
  const double T = t + epsilon;
  const double dx = x - y;
  const double phase = dx * dx / (2.0 * T) - h * std::pow(2.0 * std::numbers::pi, -s) * chi_s(epsilon, s, t);
  return std::polar(1.0, phase) / std::sqrt(std::complex<double>(0.0, 2.0 * std::numbers::pi * T));
}

double nls_mo_mu(double t) { return std::cos(t) * std::cosh(t) + std::sin(t) * std::sinh(t); }

QuadraticPhase nls_mo_phase(double s, double t) {
  if (s < 0.0 || !std::isfinite(s)) throw Error("nls", "INVALID_PARAMS", "s must be >= 0");
  const double ct = std::cos(t), st = std::sin(t), ch = std::cosh(t), sh = std::sinh(t);
  const double mu = ct * ch + st * sh;
  require_positive_mu(mu, t, std::abs(ct * ch) + std::abs(st * sh));
  QuadraticPhase ph;
  ph.t = t;
  ph.alpha = (ct * sh - st * ch) / (2.0 * mu);
  ph.beta = 1.0 / mu;
  ph.gamma = -(ct * sh + st * ch) / (2.0 * mu);
  ph.kappa = -power_ratio(mu - 1.0, 1.0 - s);
  return ph;
}

std::complex<double> nls_modified_oscillator(double s, double x, double y, double t) {
  const QuadraticPhase ph = nls_mo_phase(s, t);
  return std::polar(1.0 / std::sqrt(nls_mo_mu(t)), ph.eval(x, y));
}

NlsEquation nls_free_equation(double h, double s) {
  NlsEquation eq;
  eq.cs = make_preset(Preset::free);
  eq.cs.h = TimeFunction::constant(h);
  eq.cs.label = "nls_free";
  eq.s = s;
  return eq;
}

NlsEquation nls_mo_equation(double s) {
  NlsEquation eq;
  eq.cs = make_preset(Preset::modified_oscillator);
  eq.cs.t_max = std::numeric_limits<double>::infinity();
  eq.cs.h = TimeFunction::sinusoid(0.0, 2.0, 0.0, 1.0) * TimeFunction::hyperbolic(0.0, 0.0, 1.0, 1.0);
  eq.cs.label = "nls_modified_oscillator";
  eq.s = s;
  return eq;
}

std::complex<double> nls_residual(const NlsEquation& eq, const SpaceTimeFn& psi, double x, double t,
                                  double h_x, double h_t) {
  if (!eq.cs.h) throw Error("nls", "INVALID_PARAMS", "NLS equation needs h(t)");
  return pde_residual(eq.cs, psi, x, t, h_x, h_t, eq.s);
}

}  // namespace qprop
