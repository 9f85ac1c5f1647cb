#pragma once

#include <memory>
#include <string>
#include <vector>

namespace qprop {

/// Real-valued function of time with an analytic derivative.
///
/// Values are immutable after construction and share their expression tree,
/// so copies are cheap and concurrent evaluation is safe.
///
/// Kinds:
///  - constant:    v
///  - polynomial:  c0 + c1 t + c2 t^2 + ...
///  - sinusoid:    offset + A cos(w t) + B sin(w t)
///  - hyperbolic:  offset + A cosh(w t) + B sinh(w t)
///  - tabulated:   natural cubic spline through (t_i, v_i), exact at knots;
///                 evaluation outside [t_0, t_n] is a domain error
///  - composite:   sum, product, quotient or real power of other functions
class TimeFunction {
 public:
  enum class Kind { constant, polynomial, sinusoid, hyperbolic, tabulated, composite };

  struct Node;

  /// Identically zero.
  TimeFunction();

  static TimeFunction constant(double value);
  static TimeFunction polynomial(std::vector<double> coeffs);
  static TimeFunction sinusoid(double offset, double cos_amp, double sin_amp,
                               double omega);
  static TimeFunction hyperbolic(double offset, double cosh_amp, double sinh_amp,
                                 double omega);
  static TimeFunction tabulated(std::vector<double> knots,
                                std::vector<double> values);

  double operator()(double t) const;
  double derivative(double t) const;

  /// The derivative as a function in its own right (chain/quotient rules
  /// for composites, exact for the elementary kinds).
  TimeFunction derivative_function() const;

  TimeFunction pow(double exponent) const;

  Kind kind() const;
  /// True only for the constant kind with value exactly zero.
  bool is_zero() const;
  /// Short human-readable description, used in run manifests.
  std::string describe() const;

  friend TimeFunction operator+(const TimeFunction& lhs, const TimeFunction& rhs);
  friend TimeFunction operator-(const TimeFunction& lhs, const TimeFunction& rhs);
  friend TimeFunction operator*(const TimeFunction& lhs, const TimeFunction& rhs);
  friend TimeFunction operator/(const TimeFunction& lhs, const TimeFunction& rhs);
  friend TimeFunction operator*(double scale, const TimeFunction& f);
  friend TimeFunction operator-(const TimeFunction& f);

 private:
  explicit TimeFunction(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

}  // namespace qprop
