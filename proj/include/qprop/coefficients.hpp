#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qprop/time_function.hpp"

namespace qprop {

enum class UnitsMode { natural, physical };

enum class Preset { free, constant_force, sho, modified_oscillator, custom };

std::optional<Preset> parse_preset(std::string_view name);
std::string_view preset_name(Preset p);

/// Coefficients of the quadratic Hamiltonian
///
///   i psi_t = -a psi_xx + b x^2 psi - i (c x psi_x + d psi) - f x psi + i g psi_x
///             [+ h |psi|^{2s} psi]
///
/// in natural units (hbar = m = 1). `h` is only used by the nonlinear solutions.
/// All members share the domain [0, t_max); t_max marks the first coefficient
/// singularity, or +inf.
struct CoefficientSet {
  TimeFunction a = TimeFunction::constant(0.5);
  TimeFunction b, c, d, f, g;
  std::optional<TimeFunction> h;
  UnitsMode units = UnitsMode::natural;
  double t_max = std::numeric_limits<double>::infinity();
  std::string label = "custom";

  /// Throws coefficients/INVALID_SET when a(0) == 0.
  void validate() const;
};

/// Presets in natural units:
///  - free:                 a = 1/2
///  - constant_force [F]:   a = 1/2, f = F            (F defaults to 1)
///  - sho [omega]:          a = 1/2, b = omega^2 / 2  (omega > 0, defaults to 1)
///  - modified_oscillator:  a = (1 + cos 2t)/2, b = (1 - cos 2t)/2,
///                          c = sin 2t, d = sin(2t)/2, t_max = pi/2
///  - custom [a,b,c,d,f,g(,h)]: constant coefficients
CoefficientSet make_preset(Preset preset, std::span<const double> params = {});
CoefficientSet make_preset(std::string_view name, std::span<const double> params = {});

struct TauSigma {
  double tau = 0.0;
  double sigma = 0.0;
};

/// Coefficients of the characteristic equation mu'' - tau mu' + 4 sigma mu = 0:
///   tau   = a'/a - 2c + 4d
///   sigma = ab - cd + d^2 + a'd/(2a) - d'/2
/// The sigma form has no 1/d term, so d == 0 is regular.
TauSigma tau_sigma(const CoefficientSet& cs, double t);

}  // namespace qprop
