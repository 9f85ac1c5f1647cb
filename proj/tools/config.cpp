#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "qprop/error.hpp"

namespace qprop::cli {

namespace {

[[noreturn]] void invalid(const std::string& msg, const std::string& ctx = {}) {
  throw Error("cli", "CONFIG_INVALID", msg, ctx);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) invalid(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) invalid("unknown key '" + key + "'", where);
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    invalid(std::string("bad value for '") + key + "': " + e.what(), where);
  }
}

template <class T>
void maybe(const json& obj, const char* key, T& dst, const std::string& where) {
  if (obj.contains(key)) dst = get<T>(obj, key, where);
}

TimeFunction parse_function(const json& j, const std::string& where) {
  if (j.is_number()) return TimeFunction::constant(j.get<double>());
  check_keys(j, {"kind", "params", "knots", "values"}, where);
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "tabulated")
    return TimeFunction::tabulated(get<std::vector<double>>(j, "knots", where),
                                   get<std::vector<double>>(j, "values", where));
  const auto p = j.contains("params") ? get<std::vector<double>>(j, "params", where) : std::vector<double>{};
  if (kind == "constant") {
    if (p.size() != 1) invalid("constant takes one parameter", where);
    return TimeFunction::constant(p[0]);
  }
  if (kind == "polynomial") return TimeFunction::polynomial(p);
  if (kind == "sinusoid" || kind == "hyperbolic") {
    if (p.size() != 4) invalid(kind + " takes [offset, A, B, omega]", where);
    return kind == "sinusoid" ? TimeFunction::sinusoid(p[0], p[1], p[2], p[3])
                              : TimeFunction::hyperbolic(p[0], p[1], p[2], p[3]);
  }
  invalid("unknown function kind '" + kind + "'", where);
}

std::pair<std::string, std::vector<double>> split_profile(const std::string& text) {
  const auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::vector<double> vals;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        invalid("bad number '" + item + "'", text);
      }
    }
  }
  return {head, vals};
}

json axis_json(const Axis& a) { return {{"lo", a.lo}, {"hi", a.hi}, {"n", a.n}}; }

}  // namespace

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Axis> parse_grid(const std::string& text) {
  std::vector<Axis> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    Axis a;
    char c1 = 0, c2 = 0;
    long long n = 0;
    std::istringstream is(part);
    if (!(is >> a.lo >> c1 >> a.hi >> c2 >> n) || c1 != ':' || c2 != ':' || !(is >> std::ws).eof())
      invalid("grid axis must be lo:hi:n", part);
    if (n < 2) invalid("grid counts must be >= 2", part);
    a.n = static_cast<std::size_t>(n);
    out.push_back(a);
  }
  if (out.empty()) invalid("empty grid", text);
  return out;
}

void apply_json(RunConfig& cfg, const json& doc_in) {
  const json& doc = doc_in.contains("config") && doc_in.contains("versions") ? doc_in.at("config") : doc_in;
  const std::string w = "config";
  check_keys(doc, {"command", "preset", "params", "coefficients", "t", "grid", "tol", "qtol", "out", "seed",
                   "plot", "propagate", "nls", "magnetic", "validate"},
             w);
  if (doc.contains("command")) {
    const auto c = get<std::string>(doc, "command", w);
    if (!cfg.command.empty() && c != cfg.command) invalid("config command '" + c + "' does not match '" + cfg.command + "'");
    cfg.command = c;
  }
  maybe(doc, "preset", cfg.preset, w);
  maybe(doc, "params", cfg.params, w);
  if (doc.contains("coefficients") && !doc.at("coefficients").is_null()) cfg.coefficients = doc.at("coefficients");
  maybe(doc, "t", cfg.t, w);
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    if (g.is_string()) {
      cfg.grid = parse_grid(g.get<std::string>());
    } else if (g.is_array()) {
      cfg.grid.clear();
      for (const auto& a : g) {
        check_keys(a, {"lo", "hi", "n"}, "grid");
        const auto n = get<long long>(a, "n", "grid");
        if (n < 2) invalid("grid counts must be >= 2", "grid");
        cfg.grid.push_back({get<double>(a, "lo", "grid"), get<double>(a, "hi", "grid"), static_cast<std::size_t>(n)});
      }
    } else {
      invalid("grid must be a string or an array of axes");
    }
  }
  maybe(doc, "tol", cfg.tol, w);
  maybe(doc, "qtol", cfg.qtol, w);
  maybe(doc, "out", cfg.out, w);
  maybe(doc, "seed", cfg.seed, w);
  maybe(doc, "plot", cfg.plot, w);
  if (doc.contains("propagate")) {
    const auto& j = doc.at("propagate");
    const std::string pw = "propagate";
    check_keys(j, {"input", "x0", "width", "k0", "compare_cn", "dt"}, pw);
    auto& p = cfg.propagate;
    maybe(j, "input", p.input, pw);
    maybe(j, "x0", p.x0, pw);
    maybe(j, "width", p.width, pw);
    maybe(j, "k0", p.k0, pw);
    maybe(j, "compare_cn", p.compare_cn, pw);
    maybe(j, "dt", p.dt, pw);
  }
  if (doc.contains("nls")) {
    const auto& j = doc.at("nls");
    const std::string nw = "nls";
    check_keys(j, {"family", "s", "h", "mu0", "mu1", "beta0", "gamma0", "delta0", "eps0", "kappa0", "phi", "y",
                   "epsilon"},
               nw);
    auto& n = cfg.nls;
    maybe(j, "family", n.family, nw);
    maybe(j, "s", n.p.s, nw);
    maybe(j, "h", n.p.h, nw);
    maybe(j, "mu0", n.p.mu0, nw);
    maybe(j, "mu1", n.p.mu1, nw);
    maybe(j, "beta0", n.p.beta0, nw);
    maybe(j, "gamma0", n.p.gamma0, nw);
    maybe(j, "delta0", n.p.delta0, nw);
    maybe(j, "eps0", n.p.eps0, nw);
    maybe(j, "kappa0", n.p.kappa0, nw);
    maybe(j, "phi", n.p.phi, nw);
    maybe(j, "y", n.p.y, nw);
    maybe(j, "epsilon", n.epsilon, nw);
  }
  if (doc.contains("magnetic")) {
    const auto& j = doc.at("magnetic");
    const std::string mw = "magnetic";
    check_keys(j, {"H", "F", "constants"}, mw);
    maybe(j, "H", cfg.magnetic.H, mw);
    maybe(j, "F", cfg.magnetic.F, mw);
    if (j.contains("constants")) {
      const auto& c = j.at("constants");
      check_keys(c, {"m", "e", "c", "hbar", "mu_spin", "s", "sigma"}, "magnetic.constants");
      auto& k = cfg.magnetic.k;
      maybe(c, "m", k.m, mw);
      maybe(c, "e", k.e, mw);
      maybe(c, "c", k.c, mw);
      maybe(c, "hbar", k.hbar, mw);
      maybe(c, "mu_spin", k.mu_spin, mw);
      maybe(c, "s", k.s, mw);
      maybe(c, "sigma", k.sigma, mw);
    }
  }
  if (doc.contains("validate")) {
    const auto& j = doc.at("validate");
    check_keys(j, {"only"}, "validate");
    maybe(j, "only", cfg.only, "validate");
  }
}

void RunConfig::validate() const {
  static const std::set<std::string> commands{"characteristic", "green1d", "propagate", "nls", "magnetic3d",
                                              "validate"};
  if (!commands.count(command)) invalid("unknown command '" + command + "'");
  if (!(tol > 0.0) || !std::isfinite(tol)) invalid("tol must be positive", "tol=" + fmt(tol));
  if (!(qtol > 0.0) || !std::isfinite(qtol)) invalid("qtol must be positive", "qtol=" + fmt(qtol));
  if (!std::isfinite(t)) invalid("t must be finite");
  if (command != "validate" && !(t > 0.0)) invalid("t must be positive", "t=" + fmt(t));
  for (const auto& a : grid) {
    if (a.n < 2) invalid("grid counts must be >= 2");
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) invalid("grid bounds must be finite");
  }
  if (!(propagate.dt > 0.0)) invalid("propagate.dt must be positive");
  if (!(propagate.width > 0.0)) invalid("propagate.width must be positive");
  for (int id : only)
    if (id < 1 || id > 11) invalid("validate.only entries must be in 1..11", std::to_string(id));
  if (command == "nls" && nls.family != "simple" && nls.family != "kernel" && nls.family != "modified_oscillator")
    invalid("nls.family must be simple, kernel or modified_oscillator", nls.family);
  if (out.empty()) invalid("output directory must be given");

  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  const auto probe = std::filesystem::path(out) / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) invalid("output directory is not writable", out);
  }
  std::filesystem::remove(probe, ec);
}

json RunConfig::to_json() const {
  json g = json::array();
  for (const auto& a : grid) g.push_back(axis_json(a));
  const auto& k = magnetic.k;
  const auto& p = nls.p;
  return {
      {"command", command},
      {"preset", preset},
      {"params", params},
      {"coefficients", coefficients ? *coefficients : json(nullptr)},
      {"t", t},
      {"grid", g},
      {"tol", tol},
      {"qtol", qtol},
      {"out", out},
      {"seed", seed},
      {"plot", plot},
      {"propagate",
       {{"input", propagate.input},
        {"x0", propagate.x0},
        {"width", propagate.width},
        {"k0", propagate.k0},
        {"compare_cn", propagate.compare_cn},
        {"dt", propagate.dt}}},
      {"nls",
       {{"family", nls.family}, {"s", p.s}, {"h", p.h}, {"mu0", p.mu0}, {"mu1", p.mu1}, {"beta0", p.beta0},
        {"gamma0", p.gamma0}, {"delta0", p.delta0}, {"eps0", p.eps0}, {"kappa0", p.kappa0}, {"phi", p.phi},
        {"y", p.y}, {"epsilon", nls.epsilon}}},
      {"magnetic",
       {{"H", magnetic.H},
        {"F", magnetic.F},
        {"constants",
         {{"m", k.m}, {"e", k.e}, {"c", k.c}, {"hbar", k.hbar}, {"mu_spin", k.mu_spin}, {"s", k.s},
          {"sigma", k.sigma}}}}},
      {"validate", {{"only", only}}},
  };
}

CoefficientSet build_coefficients(const RunConfig& cfg) {
  if (!cfg.coefficients) return make_preset(cfg.preset, cfg.params);
  const json& j = *cfg.coefficients;
  check_keys(j, {"a", "b", "c", "d", "f", "g", "t_max", "label"}, "coefficients");
  CoefficientSet cs;
  cs.label = j.value("label", std::string("custom"));
  if (j.contains("a")) cs.a = parse_function(j.at("a"), "coefficients.a");
  if (j.contains("b")) cs.b = parse_function(j.at("b"), "coefficients.b");
  if (j.contains("c")) cs.c = parse_function(j.at("c"), "coefficients.c");
  if (j.contains("d")) cs.d = parse_function(j.at("d"), "coefficients.d");
  if (j.contains("f")) cs.f = parse_function(j.at("f"), "coefficients.f");
  if (j.contains("g")) cs.g = parse_function(j.at("g"), "coefficients.g");
  if (j.contains("t_max")) cs.t_max = get<double>(j, "t_max", "coefficients");
  cs.validate();
  return cs;
}

FieldProfile build_profile(const MagneticSpec& spec) {
  const auto [hk, hv] = split_profile(spec.H);
  const auto [fk, fv] = split_profile(spec.F);
  double F0 = 0.0;
  if (fk == "const" && fv.size() == 1) F0 = fv[0];
  else if (!(fk == "zero" && fv.empty())) invalid("F must be const:F0 or zero", spec.F);
  FieldProfile p;
  if (hk == "const" && hv.size() == 1) p = FieldProfile::constant(hv[0], F0, spec.k);
  else if (hk == "linear" && hv.size() == 2) p = FieldProfile::linear(hv[0], hv[1], F0, spec.k);
  else invalid("H must be const:H0 or linear:H0,H1", spec.H);
  p.validate();
  return p;
}

json report_to_json(const validation::Report& rep) {
  json crit = json::array();
  for (const auto& c : rep.criteria) {
    json checks = json::array();
    for (const auto& k : c.checks)
      checks.push_back({{"label", k.label}, {"measured", k.measured}, {"threshold", k.threshold},
                        {"status", k.pass ? "pass" : "fail"}});
    crit.push_back({{"id", c.id}, {"title", c.title}, {"status", c.pass ? "pass" : "fail"}, {"checks", checks}});
  }
  json audit = json::array();
  for (const auto& a : rep.audit) audit.push_back({{"label", a.label}, {"value", a.value}, {"note", a.note}});
  return {{"seed", rep.seed},
          {"status", rep.all_pass() ? "pass" : "fail"},
          {"criteria", crit},
          {"audit", audit}};
}

json error_json(const std::string& module, const std::string& code, const std::string& message,
                const std::string& context) {
  return {{"code", code}, {"module", module}, {"message", message}, {"context", context}};
}

}  // namespace qprop::cli
