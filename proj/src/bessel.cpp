#include "qprop/bessel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qprop/error.hpp"

namespace qprop {

namespace {

constexpr double kSeriesLimit = 12.0;

bool supported(double nu) { return nu == -0.75 || nu == -0.25 || nu == 0.25 || nu == 0.75; }

double series(double nu, double x) {
  const long double q = -0.25L * static_cast<long double>(x) * x;
  long double term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + static_cast<long double>(nu)));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum) && k > 2) break;
  }
  return static_cast<double>(sum * std::pow(0.5L * static_cast<long double>(x), static_cast<long double>(nu)));
}

double hankel(double nu, double x) {
  const double m = 4.0 * nu * nu;
  double P = 0.0, Q = 0.0, term = 1.0, prev = INFINITY;
  for (int k = 0; k < 400; ++k) {
    if (k > 0) term *= (m - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    switch (k % 4) {
      case 0: P += term; break;
      case 1: Q += term; break;
      case 2: P -= term; break;
      default: Q -= term; break;
    }
    if (term == 0.0) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace

double bessel_j(double nu, double x) {
  if (!supported(nu)) {
    std::ostringstream os;
    os << "order " << nu << " is not one of -3/4, -1/4, 1/4, 3/4";
    throw Error("bessel", "INVALID_ORDER", os.str());
  }
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "bessel_j needs finite x > 0, got " << x;
    throw Error("bessel", "DOMAIN", os.str());
  }
  return x <= kSeriesLimit ? series(nu, x) : hankel(nu, x);
}

double bessel_j_prime(double nu, double x) {
  if (nu < 0.0) return -bessel_j(nu + 1.0, x) + nu / x * bessel_j(nu, x);
  return bessel_j(nu - 1.0, x) - nu / x * bessel_j(nu, x);
}

}  // namespace qprop
