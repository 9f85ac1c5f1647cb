#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "qprop/characteristic.hpp"
#include "qprop/coefficients.hpp"
#include "qprop/green1d.hpp"
#include "qprop/time_function.hpp"

namespace qprop {

/// Physical constants of the charged spinning particle. e is signed; the
/// spin enters only through mu_spin sigma / s.
struct PhysicalConstants {
  double m = 1.0, e = -1.0, c = 1.0, hbar = 1.0;
  double mu_spin = 0.0, s = 0.5, sigma = 0.5;

  /// Throws magnetic3d/INVALID_CONSTANTS unless m, c, hbar > 0, e != 0,
  /// 2s is a non-negative integer, |sigma| <= s and sigma - s is an integer.
  void validate() const;
};

/// Magnetic field magnitude H(t) along e_z and electric force F(t) = e E_y.
struct FieldProfile {
  TimeFunction H = TimeFunction::constant(1.0);
  TimeFunction F;
  PhysicalConstants k;
  std::string label = "custom";

  static FieldProfile constant(double H0, double F0 = 0.0, PhysicalConstants k = {});
  /// H = H0 + t H1, F = F0.
  static FieldProfile linear(double H0, double H1, double F0 = 0.0, PhysicalConstants k = {});

  /// |e| H / (m c)
  double omega(double t) const;
  /// sqrt(hbar / (m omega))
  double a_H(double t) const;

  /// Constants plus H(0) > 0. A later zero of H is reported by solve_mu_H.
  void validate() const;
};

/// Per-momentum quantities of the reduction to one dimension.
struct MagneticAux {
  double t = 0.0;
  double omega_H = 0.0;
  double y0 = 0.0;  // -c p_x / (e H)
  double a_H = 0.0;
  double f = 0.0;  // a_H F / hbar
  double g = 0.0;  // y0' / a_H
  double h = 0.0;  // a_H' / a_H
};

MagneticAux magnetic_aux(const FieldProfile& profile, double p_x, double t);

/// mu'' + omega_H^2 mu = 0, mu(0) = 0, mu'(0) = omega_H(0), integrated on
/// [0, T]. Throws magnetic3d/FIELD_ZERO if H changes sign.
CharacteristicSolution solve_mu_H(const FieldProfile& profile, double T, double tol = 1e-10);

struct MuPair {
  double mu = 0.0, mu_prime = 0.0;
};

/// Bessel closed form of mu_H and mu_H' for H = H0 + t H1.
///
/// The characteristic equation depends on H1 only through H1^2 once written
/// in H, so for H1 < 0 the Bessel arguments are taken by absolute value and
/// mu' picks up sign(H1). Throws magnetic3d/INVALID_PROFILE for H1 == 0 or
/// H(t) <= 0.
MuPair linear_field_mu(double H0, double H1, const PhysicalConstants& k, double t);

/// The p_x-independent magnetic ladder at time t, plus the field and
/// characteristic values the S-polynomials need.
struct MagneticPhase {
  double t = 0.0;
  double alpha_H = 0.0, beta_H = 0.0, gamma_H = 0.0;
  double delta_F0 = 0.0, delta_H1 = 0.0;
  double eps_F0 = 0.0, eps_H1 = 0.0;
  double kappa_F0 = 0.0, kappa_F1 = 0.0, kappa_H2 = 0.0;
  /// delta_H1 from the integrated-by-parts form, for cross-checking.
  double delta_H1_by_parts = 0.0;

  double mu = 0.0, mu_prime = 0.0;
  double H = 0.0, H0 = 0.0, a_H = 0.0, a_H0 = 0.0;
  double drift_integral = 0.0;  // int_0^t F/H
  double spin_integral = 0.0;   // int_0^t H
};

/// (alpha_H, ..., kappa_H) of the reduced 1D kernel at a fixed p_x:
///   delta = a_H (dF0 + p dH1)/(hbar mu)
///   eps   = (eF0 + p eH1)/(m a_H(0))
///   kappa = (kF0 + p kF1 + p^2 kH2)/(2 hbar m)
QuadraticPhase assemble_phase(const MagneticPhase& ph, const PhysicalConstants& k, double p_x);

/// Magnetic ladder on (0, t_max]. With w = omega_H and every running
/// integral taken over tau in [0, t]:
///   gamma_H = (w(0)/2) (1/(mu mu') - int (w/mu')^2)
///   dF0 = int mu F,   dH1 = (m c/e) int mu' H'/H^2
///   eF0 = int F/mu' - dF0/(mu mu') + int (w/mu')^2 dF0(tau)
///   eH1 = -dH1/(mu mu') + int (w/mu')^2 dH1(tau)
///   kF0 = dF0^2/(mu mu') - int (w dF0(tau)/mu')^2 - 2 int F dF0(tau)/mu'
///   kF1 = 2 (dF0 dH1/(mu mu') - int (w/mu')^2 dF0 dH1 (tau) - int F dH1(tau)/mu')
///   kH2 = dH1^2/(mu mu') - int (w dH1(tau)/mu')^2
/// t_max must precede the first zero of mu and of mu'.
class MagneticLadder {
 public:
  MagneticLadder(const FieldProfile& profile, const CharacteristicSolution& sol, double t_max,
                 double qtol = 1e-10);

  MagneticPhase at(double t) const;
  double t_max() const { return t_max_; }
  const FieldProfile& profile() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  double t_max_;
};

MagneticPhase magnetic_phase(const FieldProfile& profile, const CharacteristicSolution& sol, double t,
                             double qtol = 1e-10);

/// S_H = S2(y, y') + p_x S1(y, y') + p_x^2 S0.
struct SParts {
  double s0 = 0.0;
  double s1_y = 0.0, s1_yp = 0.0, s1_c = 0.0;
  double s2_yy = 0.0, s2_yyp = 0.0, s2_ypyp = 0.0, s2_y = 0.0, s2_yp = 0.0, s2_c = 0.0;

  double s1(double y, double yp) const { return s1_y * y + s1_yp * yp + s1_c; }
  double s2(double y, double yp) const {
    return (s2_yy * y + s2_yyp * yp + s2_y) * y + (s2_ypyp * yp + s2_yp) * yp + s2_c;
  }
};

SParts s_polynomials(const MagneticPhase& ph, const PhysicalConstants& k);

/// Q = A y^2 + B y y' + C y'^2 + D y + E y' + L.
struct QCoeffs {
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0, E = 0.0, L = 0.0;

  double eval(double y, double yp) const { return (A * y + B * yp + D) * y + (C * yp + E) * yp + L; }
  std::array<double, 6> as_array() const { return {A, B, C, D, E, L}; }
};

/// Q = S1^2 - 4 S0 S2 expanded coefficient by coefficient.
QCoeffs discriminant_direct(const SParts& S);
/// The closed forms written out in terms of the ladder pieces.
QCoeffs discriminant_printed(const MagneticPhase& ph, const PhysicalConstants& k);

struct DiscriminantReport {
  QCoeffs direct, printed;
  /// |printed - direct| / max(|direct|, size of the summands of the
  /// expansion) per coefficient, in the order A, B, C, D, E, L.
  std::array<double, 6> rel_diff{};
  double max_rel_diff = 0.0;
};

/// Both paths side by side. With strict_tol set, a relative disagreement
/// above it throws magnetic3d/DISCRIMINANT_MISMATCH naming the coefficient.
DiscriminantReport discriminant_coeffs(const SParts& S, const MagneticPhase& ph,
                                       const PhysicalConstants& k,
                                       std::optional<double> strict_tol = std::nullopt);

struct Propagator3DCoeffs {
  MagneticPhase phase;
  SParts S;
  QCoeffs Q;          // direct expansion; used by eval_green3d
  QCoeffs Q_printed;  // for audit only
  double drift_integral = 0.0;
  double spin_phase_integral = 0.0;
};

Propagator3DCoeffs propagator_coeffs(const MagneticLadder& ladder, double t);
Propagator3DCoeffs propagator_coeffs(const FieldProfile& profile, const CharacteristicSolution& sol,
                                     double t, double qtol = 1e-10);

/// sqrt(m/(2 pi i hbar t)) exp(i m dz^2/(2 hbar t))
std::complex<double> free_z_kernel(double dz, double t, const PhysicalConstants& k);

using Vec3 = std::array<double, 3>;

/// G0(z - z') e^{i mu_spin sigma int H/(hbar s)} / (2 pi hbar a_H(0) sqrt(2 mu S0))
///   * exp(X^2/(4 i hbar^2 S0) + Q(y, y')/(4 i S0) + S1(y, y') X/(2 i hbar S0)),
/// X = x - x' - (c/e) int F/H, principal square root.
/// Throws magnetic3d/DEGENERATE when S0 == 0 and magnetic3d/FOCAL_TIME when mu == 0.
std::complex<double> eval_green3d(const Propagator3DCoeffs& coeffs, const Vec3& r, const Vec3& rp,
                                  const PhysicalConstants& k);

/// The reduced 1D equation as a CoefficientSet in the variable
/// eta = (y - y0)/a_H: a = b = omega_H/2, c = -h, d = 0, f = a_H F/hbar,
/// g = y0'/a_H.
CoefficientSet reduce_to_1d(const FieldProfile& profile, double p_x);

using SpaceTimeFn3 = std::function<std::complex<double>(const Vec3& r, double t)>;

/// i hbar Psi_t - H Psi with
///   H = (-i hbar d_x + e H y/c)^2/(2m) - hbar^2 (d_yy + d_zz)/(2m) - mu_spin sigma H/s - y F
/// by second-order central differences.
std::complex<double> pde_residual_3d(const FieldProfile& profile, const SpaceTimeFn3& psi, const Vec3& r,
                                     double t, double h_x, double h_t);

}  // namespace qprop
