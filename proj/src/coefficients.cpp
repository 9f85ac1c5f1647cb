#include "qprop/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qprop/error.hpp"

namespace qprop {

std::optional<Preset> parse_preset(std::string_view name) {
  if (name == "free") return Preset::free;
  if (name == "constant_force") return Preset::constant_force;
  if (name == "sho") return Preset::sho;
  if (name == "modified_oscillator") return Preset::modified_oscillator;
  if (name == "custom") return Preset::custom;
  return std::nullopt;
}

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::free: return "free";
    case Preset::constant_force: return "constant_force";
    case Preset::sho: return "sho";
    case Preset::modified_oscillator: return "modified_oscillator";
    case Preset::custom: return "custom";
  }
  return "custom";
}

void CoefficientSet::validate() const {
  if (a(0.0) == 0.0)
    throw Error("coefficients", "INVALID_SET", "a(0) must be nonzero", "label=" + label);
  if (!(t_max > 0.0))
    throw Error("coefficients", "INVALID_SET", "t_max must be positive", "label=" + label);
}

namespace {

double param_or(std::span<const double> params, std::size_t i, double fallback) {
  return i < params.size() ? params[i] : fallback;
}

void expect_at_most(std::span<const double> params, std::size_t n, std::string_view name) {
  if (params.size() > n) {
    std::ostringstream os;
    os << "preset '" << name << "' takes at most " << n << " parameter(s), got "
       << params.size();
    throw Error("coefficients", "INVALID_PARAMS", os.str());
  }
}

}  // namespace

CoefficientSet make_preset(Preset preset, std::span<const double> params) {
  CoefficientSet cs;
  cs.label = std::string(preset_name(preset));
  switch (preset) {
    case Preset::free:
      expect_at_most(params, 0, cs.label);
      break;
    case Preset::constant_force: {
      expect_at_most(params, 1, cs.label);
      cs.f = TimeFunction::constant(param_or(params, 0, 1.0));
      break;
    }
    case Preset::sho: {
      expect_at_most(params, 1, cs.label);
      const double omega = param_or(params, 0, 1.0);
      if (!(omega > 0.0) || !std::isfinite(omega))
        throw Error("coefficients", "INVALID_PARAMS", "sho frequency must be positive");
      cs.b = TimeFunction::constant(0.5 * omega * omega);
      break;
    }
    case Preset::modified_oscillator:
      expect_at_most(params, 0, cs.label);
      cs.a = TimeFunction::sinusoid(0.5, 0.5, 0.0, 2.0);
      cs.b = TimeFunction::sinusoid(0.5, -0.5, 0.0, 2.0);
      cs.c = TimeFunction::sinusoid(0.0, 0.0, 1.0, 2.0);
      cs.d = TimeFunction::sinusoid(0.0, 0.0, 0.5, 2.0);
      cs.t_max = std::numbers::pi / 2;
      break;
    case Preset::custom: {
      if (params.size() != 6 && params.size() != 7)
        throw Error("coefficients", "INVALID_PARAMS",
                    "custom preset needs constants [a,b,c,d,f,g] or [a,b,c,d,f,g,h]");
      cs.a = TimeFunction::constant(params[0]);
      cs.b = TimeFunction::constant(params[1]);
      cs.c = TimeFunction::constant(params[2]);
      cs.d = TimeFunction::constant(params[3]);
      cs.f = TimeFunction::constant(params[4]);
      cs.g = TimeFunction::constant(params[5]);
      if (params.size() == 7) cs.h = TimeFunction::constant(params[6]);
      break;
    }
  }
  cs.validate();
  return cs;
}

CoefficientSet make_preset(std::string_view name, std::span<const double> params) {
  auto p = parse_preset(name);
  if (!p) throw Error("coefficients", "UNKNOWN_PRESET", "unknown preset '" + std::string(name) + "'");
  return make_preset(*p, params);
}

TauSigma tau_sigma(const CoefficientSet& cs, double t) {
  const double a = cs.a(t);
  if (a == 0.0 || !std::isfinite(a)) {
    std::ostringstream os;
    os << "a(t) vanishes at t=" << t;
    throw Error("coefficients", "COEFFICIENT_SINGULAR", os.str(), "label=" + cs.label);
  }
  const double ap = cs.a.derivative(t);
  const double b = cs.b(t);
  const double c = cs.c(t);
  const double d = cs.d(t);
  const double dp = cs.d.derivative(t);
  TauSigma ts;
  ts.tau = ap / a - 2.0 * c + 4.0 * d;
  ts.sigma = a * b - c * d + d * d + ap * d / (2.0 * a) - 0.5 * dp;
  if (!std::isfinite(ts.tau) || !std::isfinite(ts.sigma)) {
    std::ostringstream os;
    os << "characteristic coefficients not finite at t=" << t;
    throw Error("coefficients", "COEFFICIENT_SINGULAR", os.str(), "label=" + cs.label);
  }
  return ts;
}

}  // namespace qprop
