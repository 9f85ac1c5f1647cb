#include "qprop/magnetic3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qprop/bessel.hpp"
#include "qprop/error.hpp"
#include "qprop/quadrature.hpp"

namespace qprop {

namespace {

using cplx = std::complex<double>;

bool vanishes_on(const TimeFunction& fn, double t_max) {
  if (fn.is_zero()) return true;
  for (int i = 0; i <= 64; ++i)
    if (fn(t_max * i / 64.0) != 0.0) return false;
  return true;
}

void check_window(const CharacteristicSolution& sol, double t) {
  std::ostringstream os;
  if (!(t > 0.0)) {
    os << "magnetic phase needs t > 0, got " << t;
    throw Error("magnetic3d", "WINDOW", os.str());
  }
  if (t > sol.t_end() * (1.0 + 1e-14)) {
    os << "t=" << t << " beyond the characteristic solution (T=" << sol.t_end() << ")";
    throw Error("magnetic3d", "WINDOW", os.str());
  }
  const auto focal = first_focal_time(sol);
  if (focal && t >= *focal) {
    os << "t=" << t << " at or past the first focal time " << *focal;
    throw Error("magnetic3d", "FOCAL_TIME", os.str());
  }
  if (!sol.turning_times().empty() && t >= sol.turning_times().front()) {
    os << "t=" << t << " at or past the first zero of mu_H' (" << sol.turning_times().front() << ")";
    throw Error("magnetic3d", "WINDOW", os.str());
  }
}

double sign(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

void PhysicalConstants::validate() const {
  std::ostringstream os;
  const double all[] = {m, e, c, hbar, mu_spin, s, sigma};
  for (double v : all)
    if (!std::isfinite(v)) throw Error("magnetic3d", "INVALID_CONSTANTS", "non-finite physical constant");
  if (!(m > 0.0) || !(c > 0.0) || !(hbar > 0.0)) os << "m, c and hbar must be positive. ";
  if (e == 0.0) os << "charge e must be nonzero. ";
  const double two_s = 2.0 * s;
  if (s < 0.0 || two_s != std::round(two_s)) os << "2s must be a non-negative integer. ";
  if (std::abs(sigma) > s || sigma - s != std::round(sigma - s)) os << "sigma must be one of -s, ..., s. ";
  if (!os.str().empty()) throw Error("magnetic3d", "INVALID_CONSTANTS", os.str());
}

FieldProfile FieldProfile::constant(double H0, double F0, PhysicalConstants k) {
  FieldProfile p;
  p.H = TimeFunction::constant(H0);
  p.F = F0 == 0.0 ? TimeFunction() : TimeFunction::constant(F0);
  p.k = k;
  p.label = "constant";
  return p;
}

FieldProfile FieldProfile::linear(double H0, double H1, double F0, PhysicalConstants k) {
  FieldProfile p;
  p.H = TimeFunction::polynomial({H0, H1});
  p.F = F0 == 0.0 ? TimeFunction() : TimeFunction::constant(F0);
  p.k = k;
  p.label = "linear";
  return p;
}

double FieldProfile::omega(double t) const { return std::abs(k.e) * H(t) / (k.m * k.c); }

double FieldProfile::a_H(double t) const { return std::sqrt(k.hbar / (k.m * omega(t))); }

void FieldProfile::validate() const {
  k.validate();
  if (!(H(0.0) > 0.0)) {
    std::ostringstream os;
    os << "H(0) must be positive, got " << H(0.0);
    throw Error("magnetic3d", "INVALID_PROFILE", os.str());
  }
}

MagneticAux magnetic_aux(const FieldProfile& p, double p_x, double t) {
  p.validate();
  const double H = p.H(t), dH = p.H.derivative(t);
  if (!(H > 0.0)) {
    std::ostringstream os;
    os << "H(" << t << ") = " << H << " is not positive";
    throw Error("magnetic3d", "FIELD_ZERO", os.str());
  }
  MagneticAux a;
  a.t = t;
  a.omega_H = p.omega(t);
  a.y0 = -p.k.c * p_x / (p.k.e * H);
  a.a_H = p.a_H(t);
  a.f = a.a_H * p.F(t) / p.k.hbar;
  a.g = p.k.c * p_x * dH / (p.k.e * H * H) / a.a_H;
  a.h = -0.5 * dH / H;
  return a;
}

CharacteristicSolution solve_mu_H(const FieldProfile& p, double T, double tol) {
  p.validate();
  const auto coeffs = [&p](double t) {
    const double w = p.omega(t);
    return TauSigma{0.0, 0.25 * w * w};
  };
  try {
    return solve_linear_characteristic(coeffs, p.omega(0.0), T, tol, [&p](double t) { return p.H(t); });
  } catch (const Error& err) {
    if (err.code() != "COEFFICIENT_SINGULAR") throw;
    throw Error("magnetic3d", "FIELD_ZERO", std::string("H(t) changes sign: ") + err.what());
  }
}

MuPair linear_field_mu(double H0, double H1, const PhysicalConstants& k, double t) {
  k.validate();
  const double H = H0 + t * H1;
  if (H1 == 0.0 || !(H0 > 0.0) || !(H > 0.0)) {
    std::ostringstream os;
    os << "linear field needs H1 != 0 and H > 0, got H0=" << H0 << " H1=" << H1 << " at t=" << t;
    throw Error("magnetic3d", "INVALID_PROFILE", os.str());
  }
  const double ae = std::abs(k.e);
  const double scale = ae / (2.0 * k.m * k.c * std::abs(H1));
  const double x0 = scale * H0 * H0, x = scale * H * H;
  const double jm0 = bessel_j(-0.25, x0), jp0 = bessel_j(0.25, x0);
  MuPair out;
  out.mu = std::numbers::pi * ae * std::pow(H0, 1.5) / (std::pow(2.0, 1.5) * k.m * k.c * H1) * std::sqrt(H) *
           (jm0 * bessel_j(0.25, x) - jp0 * bessel_j(-0.25, x));
  out.mu_prime = std::numbers::pi * k.e * k.e / (k.m * k.m * k.c * k.c * std::abs(H1)) *
                 std::pow(0.5 * H0 * H, 1.5) * (jp0 * bessel_j(0.75, x) + jm0 * bessel_j(-0.75, x));
  return out;
}

QuadraticPhase assemble_phase(const MagneticPhase& ph, const PhysicalConstants& k, double p_x) {
  QuadraticPhase q;
  q.t = ph.t;
  q.alpha = ph.alpha_H;
  q.beta = ph.beta_H;
  q.gamma = ph.gamma_H;
  q.delta = ph.a_H / (k.hbar * ph.mu) * (ph.delta_F0 + p_x * ph.delta_H1);
  q.epsilon = (ph.eps_F0 + p_x * ph.eps_H1) / (k.m * ph.a_H0);
  q.kappa = (ph.kappa_F0 + p_x * (ph.kappa_F1 + p_x * ph.kappa_H2)) / (2.0 * k.hbar * k.m);
  return q;
}

struct MagneticLadder::Impl {
  FieldProfile p;
  CharacteristicSolution sol;
  bool has_F = false, has_dH = false;
  quad::CumulativeIntegral gamma_int, dF0, dH1, mu_H_int, drift, spin;
  quad::CumulativeIntegral eF_force, eF_sigma, eH_sigma;
  quad::CumulativeIntegral kF0_sigma, kF0_force, kF1_sigma, kF1_force, kH2_sigma;

  double w2_over_mp2(double t) const {
    const double w = p.omega(t), mp = sol.mu_prime(t);
    return w * w / (mp * mp);
  }
  double dF(double t) const { return has_F ? dF0(t) : 0.0; }
  double dH(double t) const { return has_dH ? dH1(t) : 0.0; }
};

MagneticLadder::MagneticLadder(const FieldProfile& profile, const CharacteristicSolution& sol, double t_max,
                               double qtol)
    : t_max_(t_max) {
  profile.validate();
  if (!(qtol > 0.0)) throw Error("magnetic3d", "INVALID_ARGUMENT", "qtol must be positive");
  check_window(sol, t_max);

  auto impl = std::make_shared<Impl>();
  impl->p = profile;
  impl->sol = sol;
  const Impl* q = impl.get();
  const FieldProfile& p = q->p;
  const CharacteristicSolution& s = q->sol;
  const auto knots = s.knots();
  const double mc_e = p.k.m * p.k.c / p.k.e;
  const TimeFunction dHdt = p.H.derivative_function();

  impl->has_F = !vanishes_on(p.F, t_max);
  impl->has_dH = !vanishes_on(dHdt, t_max);

  auto cum = [&](quad::RealFn f) { return quad::CumulativeIntegral(std::move(f), 0.0, t_max, qtol, knots); };

  impl->gamma_int = cum([q](double t) { return q->w2_over_mp2(t); });
  impl->mu_H_int = cum([&s, &p](double t) { return s.mu(t) * p.H(t); });
  impl->spin = cum([&p](double t) { return p.H(t); });
  if (impl->has_F) {
    impl->dF0 = cum([&s, &p](double t) { return s.mu(t) * p.F(t); });
    impl->drift = cum([&p](double t) { return p.F(t) / p.H(t); });
    impl->eF_force = cum([&s, &p](double t) { return p.F(t) / s.mu_prime(t); });
    impl->eF_sigma = cum([q](double t) { return q->w2_over_mp2(t) * q->dF0(t); });
    impl->kF0_sigma = cum([q](double t) {
      const double d = q->dF0(t);
      return q->w2_over_mp2(t) * d * d;
    });
    impl->kF0_force = cum([q, &s, &p](double t) { return p.F(t) * q->dF0(t) / s.mu_prime(t); });
  }
  if (impl->has_dH) {
    impl->dH1 = cum([&s, &p, dHdt, mc_e](double t) {
      const double H = p.H(t);
      return mc_e * s.mu_prime(t) * dHdt(t) / (H * H);
    });
    impl->eH_sigma = cum([q](double t) { return q->w2_over_mp2(t) * q->dH1(t); });
    impl->kH2_sigma = cum([q](double t) {
      const double d = q->dH1(t);
      return q->w2_over_mp2(t) * d * d;
    });
  }
  if (impl->has_F && impl->has_dH) {
    impl->kF1_sigma = cum([q](double t) { return q->w2_over_mp2(t) * q->dF0(t) * q->dH1(t); });
    impl->kF1_force = cum([q, &s, &p](double t) { return p.F(t) * q->dH1(t) / s.mu_prime(t); });
  }
  impl_ = std::move(impl);
}

const FieldProfile& MagneticLadder::profile() const { return impl_->p; }

MagneticPhase MagneticLadder::at(double t) const {
  if (!(t > 0.0) || t > t_max_ * (1.0 + 1e-14)) {
    std::ostringstream os;
    os << "t=" << t << " outside the ladder range (0, " << t_max_ << "]";
    throw Error("magnetic3d", "WINDOW", os.str());
  }
  t = std::min(t, t_max_);
  const Impl& q = *impl_;
  const FieldProfile& p = q.p;
  const auto& k = p.k;

  MagneticPhase ph;
  ph.t = t;
  ph.mu = q.sol.mu(t);
  ph.mu_prime = q.sol.mu_prime(t);
  ph.H = p.H(t);
  ph.H0 = p.H(0.0);
  ph.a_H = p.a_H(t);
  ph.a_H0 = p.a_H(0.0);
  const double w0 = p.omega(0.0), w = p.omega(t);
  const double mm = ph.mu * ph.mu_prime;

  ph.alpha_H = ph.mu_prime / (2.0 * w * ph.mu);
  ph.beta_H = -std::sqrt(ph.H0 / ph.H) / ph.mu;
  ph.gamma_H = 0.5 * w0 * (1.0 / mm - q.gamma_int(t));

  const double dF = q.dF(t), dH = q.dH(t);
  ph.delta_F0 = dF;
  ph.delta_H1 = dH;
  ph.delta_H1_by_parts =
      sign(k.e) - k.m * k.c * ph.mu_prime / (k.e * ph.H) - k.e / (k.m * k.c) * q.mu_H_int(t);

  if (q.has_F) {
    ph.eps_F0 = q.eF_force(t) - dF / mm + q.eF_sigma(t);
    ph.kappa_F0 = dF * dF / mm - q.kF0_sigma(t) - 2.0 * q.kF0_force(t);
    ph.drift_integral = q.drift(t);
  }
  if (q.has_dH) {
    ph.eps_H1 = -dH / mm + q.eH_sigma(t);
    ph.kappa_H2 = dH * dH / mm - q.kH2_sigma(t);
  }
  if (q.has_F && q.has_dH) ph.kappa_F1 = 2.0 * (dF * dH / mm - q.kF1_sigma(t) - q.kF1_force(t));
  ph.spin_integral = q.spin(t);
  return ph;
}

MagneticPhase magnetic_phase(const FieldProfile& profile, const CharacteristicSolution& sol, double t,
                             double qtol) {
  return MagneticLadder(profile, sol, t, qtol).at(t);
}

SParts s_polynomials(const MagneticPhase& ph, const PhysicalConstants& k) {
  const double c = k.c, e = k.e, hb = k.hbar, m = k.m;
  const double a = ph.a_H, a0 = ph.a_H0, H = ph.H, H0 = ph.H0, mu = ph.mu;
  const double al = ph.alpha_H, be = ph.beta_H, ga = ph.gamma_H;
  SParts S;
  S.s0 = c * c * al / (e * e * a * a * H * H) + c * c * be / (e * e * a * a0 * H * H0) +
         c * c * ga / (e * e * a0 * a0 * H0 * H0) + c * ph.delta_H1 / (hb * e * mu * H) +
         c * ph.eps_H1 / (m * e * a0 * a0 * H0) + ph.kappa_H2 / (2.0 * hb * m);
  S.s1_y = 2.0 * c * al / (e * a * a * H) + c * be / (e * a * a0 * H0) + ph.delta_H1 / (hb * mu);
  S.s1_yp = c * be / (e * a * a0 * H) + 2.0 * c * ga / (e * a0 * a0 * H0) + ph.eps_H1 / (m * a0 * a0);
  S.s1_c = c * ph.delta_F0 / (hb * e * mu * H) + c * ph.eps_F0 / (m * e * a0 * a0 * H0) +
           ph.kappa_F1 / (2.0 * hb * m);
  S.s2_yy = al / (a * a);
  S.s2_yyp = be / (a * a0);
  S.s2_ypyp = ga / (a0 * a0);
  S.s2_y = ph.delta_F0 / (hb * mu);
  S.s2_yp = ph.eps_F0 / (m * a0 * a0);
  S.s2_c = ph.kappa_F0 / (2.0 * hb * m);
  return S;
}

QCoeffs discriminant_direct(const SParts& S) {
  const double f = 4.0 * S.s0;
  QCoeffs q;
  q.A = S.s1_y * S.s1_y - f * S.s2_yy;
  q.B = 2.0 * S.s1_y * S.s1_yp - f * S.s2_yyp;
  q.C = S.s1_yp * S.s1_yp - f * S.s2_ypyp;
  q.D = 2.0 * S.s1_y * S.s1_c - f * S.s2_y;
  q.E = 2.0 * S.s1_yp * S.s1_c - f * S.s2_yp;
  q.L = S.s1_c * S.s1_c - f * S.s2_c;
  return q;
}

QCoeffs discriminant_printed(const MagneticPhase& ph, const PhysicalConstants& k) {
  const double c = k.c, e = k.e, hb = k.hbar, m = k.m;
  const double a = ph.a_H, a0 = ph.a_H0, H = ph.H, H0 = ph.H0, mu = ph.mu;
  const double al = ph.alpha_H, be = ph.beta_H, ga = ph.gamma_H;
  const double dF = ph.delta_F0, dH = ph.delta_H1, eF = ph.eps_F0, eH = ph.eps_H1;
  const double kF0 = ph.kappa_F0, kF1 = ph.kappa_F1, kH2 = ph.kappa_H2;
  const double disc = be * be - 4.0 * al * ga;
  const double a0_2 = a0 * a0, a0_3 = a0_2 * a0, a0_4 = a0_2 * a0_2;

  QCoeffs q;
  q.A = c * c * disc / (e * e * a * a * a0_2 * H0 * H0) + 2.0 * c * be * dH / (hb * e * mu * a * a0 * H0) +
        dH * dH / (hb * hb * mu * mu) - 4.0 * c * al * eH / (m * e * a * a * a0_2 * H0) -
        2.0 * al * kH2 / (hb * m * a * a);

  q.B = -2.0 * c * c * disc / (e * e * a * a * a0_2 * H0 * H0) -
        2.0 * c * be * dH / (hb * e * mu * a * a0 * H0) + 4.0 * c * al * eH / (m * e * a * a * a0_2 * H) +
        4.0 * c * ga * dH / (hb * e * mu * a0_2 * H0) + 2.0 * dH * eH / (hb * m * mu * a0_2) -
        2.0 * c * be * eH / (m * e * a * a0_3 * H0) - 2.0 * be * kH2 / (hb * m * a * a0);

  q.C = c * c * disc / (e * e * a * a * a0_2 * H * H) + 2.0 * c * be * eH / (m * e * a * a0_3 * H) +
        eH * eH / (m * m * a0_4) - 4.0 * c * ga * dH / (hb * e * mu * a0_2 * H) -
        4.0 * ga * kH2 / (2.0 * hb * m * a0_2);

  q.D = 4.0 * c * c * al * eF / (m * e * e * a * a * a0_2 * H * H0) +
        2.0 * c * c * be * eF / (m * e * e * a * a0_3 * H0 * H0) +
        2.0 * c * (dH * eF - 2.0 * dF * eH) / (hb * m * e * mu * a0_2 * H0) +
        2.0 * c * al * kF1 / (hb * m * e * a * a * H) + c * be * kF1 / (hb * m * e * a * a0 * H0) +
        (dH * kF1 - 2.0 * dF * kH2) / (hb * hb * m * mu) -
        2.0 * c * c * be * dF / (hb * e * e * mu * a * a0 * H * H0) -
        4.0 * c * c * ga * dF / (hb * e * e * mu * a0_2 * H0 * H0) -
        2.0 * c * dF * dH / (hb * hb * e * mu * mu * H);

  q.E = 2.0 * c * c * be * dF / (hb * e * e * mu * a * a0 * H * H) +
        4.0 * c * c * ga * dF / (hb * e * e * mu * a0_2 * H * H0) +
        2.0 * c * (dF * eH - 2.0 * dH * eF) / (hb * m * e * mu * a0_2 * H) +
        c * be * kF1 / (hb * m * e * a * a0 * H) + 2.0 * c * ga * kF1 / (hb * m * e * a0_2 * H0) +
        (eH * kF1 - 2.0 * eF * kH2) / (hb * m * m * a0_2) -
        4.0 * c * c * al * eF / (m * e * e * a * a * a0_2 * H * H) -
        2.0 * c * c * be * eF / (m * e * e * a * a0_3 * H * H0) -
        2.0 * c * dF * dH / (m * m * e * a0_4 * H0);

  q.L = c * c * dF * dF / (hb * hb * e * e * mu * mu * H * H) +
        c * c * eF * eF / (m * m * e * e * a0_4 * H0 * H0) + kF1 * kF1 / (4.0 * hb * hb * m * m) +
        2.0 * c * c * dF * eF / (hb * m * e * e * mu * a0_2 * H * H0) +
        c * dF * kF1 / (hb * hb * m * e * mu * H) + c * eF * kF1 / (hb * m * m * e * a0_2 * H0) -
        2.0 * c * c * al * kF0 / (hb * m * e * e * a * a * H * H) -
        2.0 * c * c * be * kF0 / (hb * m * e * e * a * a0 * H * H0) -
        2.0 * c * c * ga * kF0 / (hb * m * e * e * a0_2 * H0 * H0) -
        2.0 * c * dH * kF0 / (hb * hb * m * e * mu * H) - 2.0 * c * eH * kF0 / (hb * m * m * e * a0_2 * H0) -
        kF0 * kH2 / (hb * hb * m * m);
  return q;
}

DiscriminantReport discriminant_coeffs(const SParts& S, const MagneticPhase& ph, const PhysicalConstants& k,
                                       std::optional<double> strict_tol) {
  DiscriminantReport r;
  r.direct = discriminant_direct(S);
  r.printed = discriminant_printed(ph, k);
  const auto d = r.direct.as_array(), p = r.printed.as_array();
  // Size of the summands in each coefficient, so a cancelled zero is not
  // compared digit by digit.
  const double f = 4.0 * std::abs(S.s0);
  const std::array<double, 6> terms{
      S.s1_y * S.s1_y + f * std::abs(S.s2_yy),
      2.0 * std::abs(S.s1_y * S.s1_yp) + f * std::abs(S.s2_yyp),
      S.s1_yp * S.s1_yp + f * std::abs(S.s2_ypyp),
      2.0 * std::abs(S.s1_y * S.s1_c) + f * std::abs(S.s2_y),
      2.0 * std::abs(S.s1_yp * S.s1_c) + f * std::abs(S.s2_yp),
      S.s1_c * S.s1_c + f * std::abs(S.s2_c)};
  static constexpr const char* kNames[] = {"A", "B", "C", "D", "E", "L"};
  for (std::size_t i = 0; i < 6; ++i) {
    const double den = std::max(std::abs(d[i]), terms[i]);
    r.rel_diff[i] = den > 0.0 ? std::abs(p[i] - d[i]) / den : 0.0;
    r.max_rel_diff = std::max(r.max_rel_diff, r.rel_diff[i]);
    if (strict_tol && r.rel_diff[i] > *strict_tol) {
      std::ostringstream os;
      os << "coefficient " << kNames[i] << ": printed " << p[i] << " vs expanded " << d[i] << " at t=" << ph.t;
      throw Error("magnetic3d", "DISCRIMINANT_MISMATCH", os.str());
    }
  }
  return r;
}

Propagator3DCoeffs propagator_coeffs(const MagneticLadder& ladder, double t) {
  Propagator3DCoeffs out;
  out.phase = ladder.at(t);
  const auto& k = ladder.profile().k;
  out.S = s_polynomials(out.phase, k);
  out.Q = discriminant_direct(out.S);
  out.Q_printed = discriminant_printed(out.phase, k);
  out.drift_integral = out.phase.drift_integral;
  out.spin_phase_integral = out.phase.spin_integral;
  return out;
}

Propagator3DCoeffs propagator_coeffs(const FieldProfile& profile, const CharacteristicSolution& sol, double t,
                                     double qtol) {
  return propagator_coeffs(MagneticLadder(profile, sol, t, qtol), t);
}

cplx free_z_kernel(double dz, double t, const PhysicalConstants& k) {
  if (!(t > 0.0)) throw Error("magnetic3d", "WINDOW", "free z-propagator needs t > 0");
  return std::sqrt(k.m / (2.0 * std::numbers::pi * cplx(0.0, 1.0) * k.hbar * t)) *
         std::polar(1.0, k.m * dz * dz / (2.0 * k.hbar * t));
}

cplx eval_green3d(const Propagator3DCoeffs& co, const Vec3& r, const Vec3& rp, const PhysicalConstants& k) {
  const auto& ph = co.phase;
  const double S0 = co.S.s0;
  if (ph.mu == 0.0) throw Error("magnetic3d", "FOCAL_TIME", "mu_H(t) = 0");
  if (S0 == 0.0 || !std::isfinite(S0))
    throw Error("magnetic3d", "DEGENERATE", "S_H0(t) = 0: the p_x Gaussian integral degenerates");

  const double hb = k.hbar;
  const double X = r[0] - rp[0] - k.c / k.e * co.drift_integral;
  const double y = r[1], yp = rp[1];
  const double S1 = co.S.s1(y, yp);
  const double spin = k.s == 0.0 ? 0.0 : k.mu_spin * k.sigma * co.spin_phase_integral / (hb * k.s);
  // exp(u/(4 i S0)) = exp(-i u/(4 S0)) for real u.
  const double phase = spin - X * X / (4.0 * hb * hb * S0) - co.Q.eval(y, yp) / (4.0 * S0) -
                       S1 * X / (2.0 * hb * S0);
  const cplx amp = free_z_kernel(r[2] - rp[2], ph.t, k) /
                   (2.0 * std::numbers::pi * hb * ph.a_H0 * std::sqrt(cplx(2.0 * ph.mu * S0, 0.0)));
  return amp * std::polar(1.0, phase);
}

CoefficientSet reduce_to_1d(const FieldProfile& p, double p_x) {
  p.validate();
  const auto& k = p.k;
  const double ae = std::abs(k.e);
  CoefficientSet cs;
  cs.a = (0.5 * ae / (k.m * k.c)) * p.H;
  cs.b = cs.a;
  const bool constant_H = p.H.kind() == TimeFunction::Kind::constant;
  if (!constant_H) {
    const TimeFunction dH = p.H.derivative_function();
    cs.c = 0.5 * (dH / p.H);
    cs.g = (k.c * p_x / k.e * std::sqrt(ae / (k.hbar * k.c))) * (dH * p.H.pow(-1.5));
  }
  if (!p.F.is_zero()) cs.f = (std::sqrt(k.hbar * k.c / ae) / k.hbar) * (p.F * p.H.pow(-0.5));
  cs.label = "magnetic_reduced_" + p.label;
  return cs;
}

std::complex<double> pde_residual_3d(const FieldProfile& p, const SpaceTimeFn3& psi, const Vec3& r, double t,
                                     double hx, double ht) {
  const auto& k = p.k;
  const cplx I{0.0, 1.0};
  const cplx u = psi(r, t);
  auto at = [&](int axis, double d) {
    Vec3 q = r;
    q[static_cast<std::size_t>(axis)] += d;
    return psi(q, t);
  };
  const cplx ut = (psi(r, t + ht) - psi(r, t - ht)) / (2.0 * ht);
  cplx d1[3], d2[3];
  for (int i = 0; i < 3; ++i) {
    const cplx up = at(i, hx), um = at(i, -hx);
    d1[i] = (up - um) / (2.0 * hx);
    d2[i] = (up - 2.0 * u + um) / (hx * hx);
  }
  const double H = p.H(t);
  const double ky = k.e * H / k.c * r[1];
  // (-i hbar d_x + ky)^2 = -hbar^2 d_xx - 2 i hbar ky d_x + ky^2
  const cplx kinetic_x = -k.hbar * k.hbar * d2[0] - 2.0 * I * k.hbar * ky * d1[0] + ky * ky * u;
  const cplx Hpsi = (kinetic_x - k.hbar * k.hbar * (d2[1] + d2[2])) / (2.0 * k.m) -
                    (k.s == 0.0 ? 0.0 : k.mu_spin * k.sigma / k.s) * H * u - r[1] * p.F(t) * u;
  return I * k.hbar * ut - Hpsi;
}

}  // namespace qprop
