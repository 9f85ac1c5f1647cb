#include "qprop/oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qprop/error.hpp"

namespace qprop::oracles {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

void require(bool ok, const char* code, const std::string& what) {
  if (!ok) throw Error("oracles", code, what);
}

double param(const OracleKernel& k, std::size_t i, double fallback) {
  return i < k.params.size() ? k.params[i] : fallback;
}

}  // namespace

cplx free_kernel(double x, double y, double t, double hbar, double m) {
  require(t > 0.0, "FOCAL_TIME", "free kernel needs t > 0");
  const double dx = x - y;
  return std::sqrt(m / (2.0 * kPi * kI * hbar * t)) * expi(m * dx * dx / (2.0 * hbar * t));
}

cplx constant_force_kernel(double x, double y, double t, double F, double hbar, double m) {
  return free_kernel(x, y, t, hbar, m) *
         expi(F * (x + y) * t / (2.0 * hbar) - F * F * t * t * t / (24.0 * hbar * m));
}

cplx sho_kernel(double x, double y, double t, double omega, double hbar, double m) {
  const double sn = std::sin(omega * t);
  require(std::abs(sn) > 1e-12 && t > 0.0, "FOCAL_TIME", "oscillator kernel is singular at sin(wt) = 0");
  const double cs = std::cos(omega * t);
  return std::sqrt(m * omega / (2.0 * kPi * kI * hbar * sn)) *
         expi(m * omega / (2.0 * hbar * sn) * ((x * x + y * y) * cs - 2.0 * x * y));
}

cplx modified_oscillator_kernel(double x, double y, double t) {
  const double ct = std::cos(t), st = std::sin(t), ch = std::cosh(t), sh = std::sinh(t);
  const double mu = ct * sh + st * ch;
  require(std::abs(mu) > 1e-12 && t > 0.0, "FOCAL_TIME", "modified oscillator kernel is singular at mu = 0");
  const double num = (x * x - y * y) * st * sh + 2.0 * x * y - (x * x + y * y) * ct * ch;
  return std::exp(num / (2.0 * kI * mu)) / std::sqrt(2.0 * kPi * kI * mu);
}

cplx magnetic_constant_kernel(const std::array<double, 3>& r, const std::array<double, 3>& rp,
                              double t, const MagneticConstants& k) {
  const double w = std::abs(k.e) * k.H / (k.m * k.c);
  const double half = std::sin(w * t / 2.0);
  require(std::abs(half) > 1e-12 && t > 0.0, "FOCAL_TIME", "magnetic kernel is singular at sin(wt/2) = 0");
  const double sgn = k.e / std::abs(k.e);
  const double dx = r[0] - rp[0], dy = r[1] - rp[1], sy = r[1] + rp[1];
  const double cot_half = std::cos(w * t / 2.0) / half;
  const cplx gz = free_kernel(r[2], rp[2], t, k.hbar, k.m);
  const cplx spin = expi(k.mu_spin * k.sigma * k.H * t / (k.hbar * k.s));
  const cplx amp = k.m * w / (4.0 * kPi * kI * k.hbar * half);
  const double phase = k.m * w / (4.0 * k.hbar) * ((dx * dx + dy * dy) * cot_half - 2.0 * sgn * dx * sy);
  return gz * spin * amp * expi(phase);
}

std::string_view oracle_name(OracleId id) {
  switch (id) {
    case OracleId::free_sp1: return "free_sp1";
    case OracleId::constant_force_sp2: return "constant_force_sp2";
    case OracleId::sho_sp3: return "sho_sp3";
    case OracleId::modified_osc_sp7: return "modified_osc_sp7";
    case OracleId::magnetic_const_cmf4: return "magnetic_const_cmf4";
  }
  return "unknown";
}

cplx eval_oracle(const OracleKernel& k, std::span<const double> args) {
  const bool three_d = k.id == OracleId::magnetic_const_cmf4;
  const std::size_t want = three_d ? 7 : 3;
  if (args.size() != want) {
    std::ostringstream os;
    os << oracle_name(k.id) << " expects " << want << " arguments, got " << args.size();
    throw Error("oracles", "INVALID_ARGUMENT", os.str());
  }
  switch (k.id) {
    case OracleId::free_sp1:
      return free_kernel(args[0], args[1], args[2], param(k, 0, 1.0), param(k, 1, 1.0));
    case OracleId::constant_force_sp2:
      return constant_force_kernel(args[0], args[1], args[2], param(k, 0, 1.0), param(k, 1, 1.0),
                                   param(k, 2, 1.0));
    case OracleId::sho_sp3:
      return sho_kernel(args[0], args[1], args[2], param(k, 0, 1.0), param(k, 1, 1.0), param(k, 2, 1.0));
    case OracleId::modified_osc_sp7:
      return modified_oscillator_kernel(args[0], args[1], args[2]);
    case OracleId::magnetic_const_cmf4: {
      MagneticConstants mc;
      mc.H = param(k, 0, mc.H);
      mc.m = param(k, 1, mc.m);
      mc.e = param(k, 2, mc.e);
      mc.c = param(k, 3, mc.c);
      mc.hbar = param(k, 4, mc.hbar);
      mc.mu_spin = param(k, 5, mc.mu_spin);
      mc.s = param(k, 6, mc.s);
      mc.sigma = param(k, 7, mc.sigma);
      return magnetic_constant_kernel({args[0], args[1], args[2]}, {args[3], args[4], args[5]}, args[6], mc);
    }
  }
  throw Error("oracles", "INVALID_ARGUMENT", "unknown oracle id");
}

}  // namespace qprop::oracles
