#pragma once

namespace qprop {

/// J_nu(x) for nu in {-3/4, -1/4, 1/4, 3/4} and x > 0.
///
/// Long-double power series up to x = 12, Hankel's asymptotic expansion
/// (truncated at its smallest term) beyond. Absolute error below 1e-12.
/// Throws bessel/INVALID_ORDER or bessel/DOMAIN.
double bessel_j(double nu, double x);

/// dJ_nu/dx by the recurrences J_{nu-1} - (nu/x) J_nu (nu > 0) and
/// -J_{nu+1} + (nu/x) J_nu (nu < 0), which stay inside the supported orders.
double bessel_j_prime(double nu, double x);

}  // namespace qprop
