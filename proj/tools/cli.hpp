#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qprop/magnetic3d.hpp"
#include "qprop/nls.hpp"
#include "qprop/validation.hpp"

namespace qprop::cli {

using nlohmann::json;

/// lo:hi:n, n >= 2 points inclusive.
struct Axis {
  double lo = 0.0, hi = 1.0;
  std::size_t n = 2;

  double at(std::size_t i) const { return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1); }
};

/// "lo:hi:n[,lo:hi:n...]"
std::vector<Axis> parse_grid(const std::string& text);

struct PropagateSpec {
  std::string input;  // CSV x,re,im; empty means a Gaussian on the first grid axis
  double x0 = 0.0, width = 1.0, k0 = 0.0;
  bool compare_cn = false;
  double dt = 1e-3;
};

struct NlsSpec {
  std::string family = "simple";  // simple | kernel | modified_oscillator
  NLSParams p;
  double epsilon = 0.5;  // kernel regularization
};

struct MagneticSpec {
  std::string H = "const:1";
  std::string F = "zero";
  PhysicalConstants k;
};

struct RunConfig {
  std::string command;
  std::string preset = "free";
  std::vector<double> params;
  std::optional<json> coefficients;  // custom {a: {kind, params}, ...}
  double t = 1.0;
  std::vector<Axis> grid;  // empty: command default
  double tol = 1e-10, qtol = 1e-10;
  std::string out = "out";
  std::uint64_t seed = 20240611;
  bool plot = false;
  PropagateSpec propagate;
  NlsSpec nls;
  MagneticSpec magnetic;
  std::vector<int> only;  // validate subset

  /// Throws cli/CONFIG_INVALID.
  void validate() const;
  /// Complete, re-runnable echo.
  json to_json() const;
};

/// Reads a config document (or a manifest, whose "config" member is used)
/// onto cfg. Unknown keys are rejected.
void apply_json(RunConfig& cfg, const json& doc);

CoefficientSet build_coefficients(const RunConfig& cfg);
FieldProfile build_profile(const MagneticSpec& spec);

json report_to_json(const validation::Report& rep);

/// 17 significant digits.
std::string fmt(double v);

/// Executes cfg.command and writes its artifacts under cfg.out. Returns the
/// process exit status; validate returns 1 when a criterion fails.
int run(const RunConfig& cfg, std::ostream& log);

/// {code, module, message, context}
json error_json(const std::string& module, const std::string& code, const std::string& message,
                const std::string& context = {});

}  // namespace qprop::cli
