#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qprop::quad {

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

/// Adaptive Gauss-Kronrod (21-point panels) integral of f over [a, b] to the
/// given absolute tolerance. Throws quadrature/NO_CONVERGENCE when the panel
/// budget is exhausted or f returns a non-finite value.
double integrate(const RealFn& f, double a, double b, double abs_tol);

/// Running integral F(t) = int_{t0}^{t} f over [t0, t1].
///
/// The panel partition is refined once at construction until every panel's
/// GK21 error estimate is below abs_tol * (panel length / (t1 - t0)). Queries
/// add the cached sum over whole panels to a 16-point Gauss-Legendre integral
/// over the last partial panel, so one evaluation costs 16 calls of f.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(RealFn f, double t0, double t1, double abs_tol);
  /// Same, but panels never straddle the given interior breakpoints (use the
  /// joints of a piecewise integrand).
  CumulativeIntegral(RealFn f, double t0, double t1, double abs_tol, std::span<const double> knots);

  double operator()(double t) const;
  double total() const { return cum_.empty() ? 0.0 : cum_.back(); }
  double lower() const { return breaks_.empty() ? 0.0 : breaks_.front(); }
  double upper() const { return breaks_.empty() ? 0.0 : breaks_.back(); }
  std::size_t panels() const { return breaks_.empty() ? 0 : breaks_.size() - 1; }

 private:
  RealFn f_;
  std::vector<double> breaks_;
  std::vector<double> cum_;
};

/// Gauss-Legendre rule on [-1, 1] with n nodes, n in {8, 16}.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const Rule& gauss_legendre(std::size_t n);

/// int_a^b amp(y) exp(i (p2 y^2 + p1 y)) dy for a smooth, slowly varying
/// amplitude. [a, b] is split so that every 16-point panel sees at most two
/// oscillations of the chirp (at least 8 nodes per cycle).
std::complex<double> integrate_chirp(const ComplexFn& amp, double p2, double p1, double a,
                                     double b);

}  // namespace qprop::quad
