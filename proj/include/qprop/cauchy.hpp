#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "qprop/characteristic.hpp"
#include "qprop/coefficients.hpp"

namespace qprop {

using cplx = std::complex<double>;

/// n equispaced points from x_min to x_max inclusive.
struct UniformGrid {
  double x_min = -12.0;
  double x_max = 12.0;
  std::size_t n = 1024;

  double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
  /// Throws cauchy/INVALID_GRID for n < 16 or x_max <= x_min.
  void validate() const;
  bool operator==(const UniformGrid&) const = default;
};

struct WaveFunction1D {
  UniformGrid grid;
  std::vector<cplx> values;
  double t = 0.0;

  /// Trapezoid-rule L2 norm.
  double norm() const;
};

WaveFunction1D sample(const UniformGrid& grid, const std::function<cplx(double)>& psi, double t = 0.0);

/// pi^{-1/4} w^{-1/2} exp(-(x - x0)^2/(2 w^2) + i k0 x), unit norm on the real line.
WaveFunction1D gaussian_packet(const UniformGrid& grid, double x0 = 0.0, double width = 1.0,
                               double k0 = 0.0);

struct PropagateInfo {
  double truncation_bound = 0.0;  // |G| times the edge mass of psi0
  std::size_t chirp_panels = 0;   // 16-point panels used, summed over x
};

/// psi(x, t) = int G(x, y, t) psi0(y) dy on psi0's grid.
///
/// psi0 is interpolated by local 8-point Lagrange polynomials and the
/// y-integral is split into blocks of at most 8 cells, each further split so
/// that every 16-point panel sees at most two oscillations of the kernel.
/// Output points are spread over hardware threads.
///
/// Throws cauchy/EDGE_DECAY when |psi0| exceeds edge_tol at either end of the
/// grid, and green1d errors when t is outside the phase window.
WaveFunction1D propagate(const CoefficientSet& cs, const CharacteristicSolution& sol,
                         const WaveFunction1D& psi0, double t, double qtol = 1e-10,
                         PropagateInfo* info = nullptr, double edge_tol = 1e-12);

/// Crank-Nicolson for the linear equation with Dirichlet zero ends.
/// Coefficients are frozen at each step's midpoint; c x d/dx is written as
/// c (x d/dx + 1/2) - c/2 with the bracket discretized skew-symmetrically.
WaveFunction1D crank_nicolson(const CoefficientSet& cs, const WaveFunction1D& psi0, double t, double dt);

/// Trapezoid-rule ||u - v||_2. Throws cauchy/GRID_MISMATCH.
double l2_error(const WaveFunction1D& u, const WaveFunction1D& v);

}  // namespace qprop
