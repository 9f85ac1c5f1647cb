#pragma once

#include <array>
#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace qprop::oracles {

// Reference kernels written straight from the closed forms. Nothing here
// calls into the engine; each function is its own arithmetic path.

using cplx = std::complex<double>;

/// sqrt(m/(2 pi i hbar t)) exp(i m (x-y)^2/(2 hbar t))
cplx free_kernel(double x, double y, double t, double hbar = 1.0, double m = 1.0);

/// Free kernel times exp(i F (x+y) t/(2 hbar) - i F^2 t^3/(24 hbar m)).
cplx constant_force_kernel(double x, double y, double t, double F, double hbar = 1.0,
                           double m = 1.0);

/// Mehler kernel sqrt(m w/(2 pi i hbar sin wt)) exp(i m w ((x^2+y^2) cos wt - 2xy)/(2 hbar sin wt)).
cplx sho_kernel(double x, double y, double t, double omega, double hbar = 1.0, double m = 1.0);

/// Modified oscillator with a = (1+cos 2t)/2, b = (1-cos 2t)/2, c = 2d = sin 2t.
cplx modified_oscillator_kernel(double x, double y, double t);

struct MagneticConstants {
  double m = 1.0, e = -1.0, c = 1.0, hbar = 1.0;
  double mu_spin = 0.0, s = 0.5, sigma = 0.5;
  double H = 1.0;
};

/// Constant perpendicular magnetic field, no electric force, spin phase included.
cplx magnetic_constant_kernel(const std::array<double, 3>& r, const std::array<double, 3>& rp,
                              double t, const MagneticConstants& k);

enum class OracleId { free_sp1, constant_force_sp2, sho_sp3, modified_osc_sp7, magnetic_const_cmf4 };

std::string_view oracle_name(OracleId id);

/// params / args per id:
///   free_sp1:            params {} or {hbar, m};         args {x, y, t}
///   constant_force_sp2:  params {F} or {F, hbar, m};     args {x, y, t}
///   sho_sp3:             params {w} or {w, hbar, m};     args {x, y, t}
///   modified_osc_sp7:    params {};                      args {x, y, t}
///   magnetic_const_cmf4: params {H} or {H, m, e, c, hbar, mu_spin, s, sigma};
///                        args {x, y, z, x', y', z', t}
struct OracleKernel {
  OracleId id;
  std::vector<double> params;
};

/// Throws oracles/FOCAL_TIME at a caustic of the chosen kernel.
cplx eval_oracle(const OracleKernel& k, std::span<const double> args);

}  // namespace qprop::oracles
