#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "qprop/cauchy.hpp"
#include "qprop/error.hpp"
#include "qprop/green1d.hpp"

namespace qprop::cli {

namespace {

namespace fs = std::filesystem;
using cplx = std::complex<double>;

constexpr const char* kVersion = "0.1.0";

class Csv {
 public:
  Csv(const fs::path& path, const std::string& header) : f_(path) {
    if (!f_) throw Error("cli", "OUTPUT_FAILED", "cannot open " + path.string());
    f_ << header << '\n';
  }
  Csv& row(std::initializer_list<double> vals) {
    bool first = true;
    for (double v : vals) {
      if (!first) f_ << ',';
      f_ << fmt(v);
      first = false;
    }
    f_ << '\n';
    return *this;
  }
  std::ofstream& raw() { return f_; }

 private:
  std::ofstream f_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw Error("cli", "OUTPUT_FAILED", "cannot open " + path.string());
  f << j.dump(2) << '\n';
}

Axis axis_or(const RunConfig& cfg, std::size_t i, Axis fallback) {
  if (cfg.grid.empty()) return fallback;
  return cfg.grid[std::min(i, cfg.grid.size() - 1)];
}

json phase_json(const QuadraticPhase& p) {
  return {{"t", p.t},         {"alpha", p.alpha},     {"beta", p.beta},  {"gamma", p.gamma},
          {"delta", p.delta}, {"epsilon", p.epsilon}, {"kappa", p.kappa}};
}

json characteristic_json(const CharacteristicSolution& sol) {
  const double w = sol.phase_window();
  return {{"source", sol.source() == SolutionSource::numeric ? "numeric" : "closed_form"},
          {"t_end", sol.t_end()},
          {"steps", sol.steps()},
          {"focal_times", sol.focal_times()},
          {"turning_times", sol.turning_times()},
          {"phase_window", std::isfinite(w) ? json(w) : json(nullptr)}};
}

json coefficients_json(const CoefficientSet& cs) {
  return {{"label", cs.label},          {"a", cs.a.describe()}, {"b", cs.b.describe()},
          {"c", cs.c.describe()},       {"d", cs.d.describe()}, {"f", cs.f.describe()},
          {"g", cs.g.describe()},       {"t_max", std::isfinite(cs.t_max) ? json(cs.t_max) : json(nullptr)}};
}

struct Outcome {
  json metadata;
  std::vector<std::string> files;
  int status = 0;
};

Outcome run_characteristic(const RunConfig& cfg) {
  const auto cs = build_coefficients(cfg);
  const auto sol = solve_characteristic(cs, cfg.t, cfg.tol);
  const Axis ax = axis_or(cfg, 0, {0.0, cfg.t, 201});
  Csv csv(fs::path(cfg.out) / "characteristic.csv", "t,mu,mu_prime");
  for (std::size_t i = 0; i < ax.n; ++i) {
    const double t = ax.at(i);
    csv.row({t, sol.mu(t), sol.mu_prime(t)});
  }
  return {{{"coefficients", coefficients_json(cs)}, {"characteristic", characteristic_json(sol)}},
          {"characteristic.csv"}};
}

Outcome run_green1d(const RunConfig& cfg) {
  const auto cs = build_coefficients(cfg);
  const auto sol = solve_characteristic(cs, cfg.t, cfg.tol);
  const auto g = make_green(cs, sol, cfg.t, cfg.qtol);
  const Axis ax = axis_or(cfg, 0, {-2.0, 2.0, 21}), ay = axis_or(cfg, 1, ax);
  std::vector<cplx> vals(ax.n * ay.n);
  for (std::size_t i = 0; i < ax.n; ++i)
    for (std::size_t j = 0; j < ay.n; ++j) vals[i * ay.n + j] = eval_green(g, ax.at(i), ay.at(j));
  {
    Csv csv(fs::path(cfg.out) / "green1d.csv", "x,y,re_G,im_G");
    for (std::size_t i = 0; i < ax.n; ++i)
      for (std::size_t j = 0; j < ay.n; ++j) {
        const cplx v = vals[i * ay.n + j];
        csv.row({ax.at(i), ay.at(j), v.real(), v.imag()});
      }
  }
  Outcome o;
  o.files = {"green1d.csv", "phase.json"};
  const json phase = phase_json(g.phase);
  write_json(fs::path(cfg.out) / "phase.json", phase);
  if (cfg.plot) {
    Csv plot(fs::path(cfg.out) / "plot.csv", "# |G| rows x, columns y");
    plot.raw() << "x";
    for (std::size_t j = 0; j < ay.n; ++j) plot.raw() << ',' << fmt(ay.at(j));
    plot.raw() << '\n';
    for (std::size_t i = 0; i < ax.n; ++i) {
      plot.raw() << fmt(ax.at(i));
      for (std::size_t j = 0; j < ay.n; ++j) plot.raw() << ',' << fmt(std::abs(vals[i * ay.n + j]));
      plot.raw() << '\n';
    }
    o.files.push_back("plot.csv");
  }
  o.metadata = {{"coefficients", coefficients_json(cs)},
                {"characteristic", characteristic_json(sol)},
                {"phase", phase},
                {"mu", g.mu},
                {"mu_prime", sol.mu_prime(cfg.t)}};
  return o;
}

WaveFunction1D read_psi(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cli", "INPUT_INVALID", "cannot read " + path);
  std::string line;
  std::getline(f, line);
  if (line.rfind("x,re,im", 0) != 0) throw Error("cli", "INPUT_INVALID", "expected header x,re,im", path);
  std::vector<double> xs;
  std::vector<cplx> vs;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    double x, re, im;
    char c1, c2;
    if (!(is >> x >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',')
      throw Error("cli", "INPUT_INVALID", "bad row '" + line + "'", path);
    xs.push_back(x);
    vs.emplace_back(re, im);
  }
  if (xs.size() < 16) throw Error("cli", "INPUT_INVALID", "need at least 16 samples", path);
  WaveFunction1D psi;
  psi.grid = {xs.front(), xs.back(), xs.size()};
  const double dx = psi.grid.dx();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - psi.grid.x(i)) > 1e-9 * std::max(1.0, std::abs(dx) * xs.size()))
      throw Error("cli", "INPUT_INVALID", "x must be equispaced", path);
  psi.values = std::move(vs);
  return psi;
}

Outcome run_propagate(const RunConfig& cfg) {
  const auto cs = build_coefficients(cfg);
  const auto& spec = cfg.propagate;
  WaveFunction1D psi0;
  if (spec.input.empty()) {
    const Axis ax = axis_or(cfg, 0, {-12.0, 12.0, 1024});
    psi0 = gaussian_packet(UniformGrid{ax.lo, ax.hi, ax.n}, spec.x0, spec.width, spec.k0);
  } else {
    psi0 = read_psi(spec.input);
  }
  const auto sol = solve_characteristic(cs, cfg.t, cfg.tol);
  PropagateInfo info;
  const auto psi = propagate(cs, sol, psi0, cfg.t, cfg.qtol, &info);
  Outcome o;
  {
    Csv csv(fs::path(cfg.out) / "psi.csv", "x,re,im");
    for (std::size_t i = 0; i < psi.grid.n; ++i) csv.row({psi.grid.x(i), psi.values[i].real(), psi.values[i].imag()});
  }
  o.files = {"psi.csv"};
  if (cfg.plot) {
    Csv plot(fs::path(cfg.out) / "plot.csv", "x,abs_psi0,abs_psi");
    for (std::size_t i = 0; i < psi.grid.n; ++i)
      plot.row({psi.grid.x(i), std::abs(psi0.values[i]), std::abs(psi.values[i])});
    o.files.push_back("plot.csv");
  }
  o.metadata = {{"coefficients", coefficients_json(cs)},
                {"characteristic", characteristic_json(sol)},
                {"phase", phase_json(phase_coefficients(cs, sol, cfg.t, cfg.qtol))},
                {"grid", {{"x_min", psi.grid.x_min}, {"x_max", psi.grid.x_max}, {"n", psi.grid.n}}},
                {"norm_initial", psi0.norm()},
                {"norm_final", psi.norm()},
                {"norm_drift", std::abs(psi.norm() - psi0.norm())},
                {"truncation_bound", info.truncation_bound},
                {"chirp_panels", info.chirp_panels}};
  if (spec.compare_cn) {
    const auto cn = crank_nicolson(cs, psi0, cfg.t, spec.dt);
    o.metadata["crank_nicolson"] = {{"dt", spec.dt}, {"l2_difference", l2_error(psi, cn)}};
  }
  return o;
}

Outcome run_nls(const RunConfig& cfg) {
  const auto& spec = cfg.nls;
  spec.p.validate();
  const Axis ax = axis_or(cfg, 0, {-1.0, 1.0, 21});
  const Axis at = axis_or(cfg, 1, {0.0, cfg.t, 11});
  std::function<cplx(double, double)> psi;
  json meta{{"family", spec.family}};
  if (spec.family == "simple") {
    psi = [&](double x, double t) { return nls_simple_solution(spec.p, x, t); };
    const auto t0 = blowup_time(spec.p);
    meta["blowup_time"] = t0 ? json(*t0) : json(nullptr);
    meta["phase_at_t"] = phase_json(nls_simple_phase(spec.p, cfg.t));
  } else if (spec.family == "kernel") {
    psi = [&](double x, double t) { return nls_kernel_solution(spec.epsilon, spec.p.h, spec.p.s, x, spec.p.y, t); };
    meta["blowup_time"] = nullptr;
    meta["epsilon"] = spec.epsilon;
  } else {
    psi = [&](double x, double t) { return nls_modified_oscillator(spec.p.s, x, spec.p.y, t); };
    meta["blowup_time"] = nullptr;
    meta["phase_at_t"] = phase_json(nls_mo_phase(spec.p.s, cfg.t));
  }
  std::vector<cplx> vals(ax.n * at.n);
  for (std::size_t i = 0; i < ax.n; ++i)
    for (std::size_t j = 0; j < at.n; ++j) vals[i * at.n + j] = psi(ax.at(i), at.at(j));
  {
    Csv csv(fs::path(cfg.out) / "nls.csv", "x,t,re,im,abs");
    for (std::size_t i = 0; i < ax.n; ++i)
      for (std::size_t j = 0; j < at.n; ++j) {
        const cplx v = vals[i * at.n + j];
        csv.row({ax.at(i), at.at(j), v.real(), v.imag(), std::abs(v)});
      }
  }
  Outcome o;
  o.files = {"nls.csv"};
  if (cfg.plot) {
    Csv plot(fs::path(cfg.out) / "plot.csv", "# |psi| rows x, columns t");
    plot.raw() << "x";
    for (std::size_t j = 0; j < at.n; ++j) plot.raw() << ',' << fmt(at.at(j));
    plot.raw() << '\n';
    for (std::size_t i = 0; i < ax.n; ++i) {
      plot.raw() << fmt(ax.at(i));
      for (std::size_t j = 0; j < at.n; ++j) plot.raw() << ',' << fmt(std::abs(vals[i * at.n + j]));
      plot.raw() << '\n';
    }
    o.files.push_back("plot.csv");
  }
  o.metadata = meta;
  return o;
}

Outcome run_magnetic3d(const RunConfig& cfg) {
  const auto profile = build_profile(cfg.magnetic);
  const auto& k = profile.k;
  const auto sol = solve_mu_H(profile, cfg.t, cfg.tol);
  const auto co = propagator_coeffs(profile, sol, cfg.t, cfg.qtol);
  if (!cfg.grid.empty() && cfg.grid.size() != 1 && cfg.grid.size() != 6)
    throw Error("cli", "CONFIG_INVALID", "magnetic3d takes one grid axis (shared) or six");
  Axis axes[6];
  for (std::size_t i = 0; i < 6; ++i) axes[i] = axis_or(cfg, i, {-1.0, 1.0, 3});
  {
    Csv csv(fs::path(cfg.out) / "green3d.csv", "x,y,z,xp,yp,zp,re_G,im_G");
    std::size_t idx[6] = {0, 0, 0, 0, 0, 0};
    while (true) {
      const Vec3 r{axes[0].at(idx[0]), axes[1].at(idx[1]), axes[2].at(idx[2])};
      const Vec3 rp{axes[3].at(idx[3]), axes[4].at(idx[4]), axes[5].at(idx[5])};
      const cplx v = eval_green3d(co, r, rp, k);
      csv.row({r[0], r[1], r[2], rp[0], rp[1], rp[2], v.real(), v.imag()});
      int d = 5;
      while (d >= 0 && ++idx[d] == axes[d].n) idx[d--] = 0;
      if (d < 0) break;
    }
  }
  const auto& ph = co.phase;
  const auto rep = discriminant_coeffs(co.S, ph, k);
  const auto q = [](const QCoeffs& c) {
    return json{{"A", c.A}, {"B", c.B}, {"C", c.C}, {"D", c.D}, {"E", c.E}, {"L", c.L}};
  };
  json meta{
      {"profile", {{"H", profile.H.describe()}, {"F", profile.F.describe()}, {"label", profile.label}}},
      {"characteristic", characteristic_json(sol)},
      {"ladder",
       {{"t", ph.t},
        {"alpha_H", ph.alpha_H},
        {"beta_H", ph.beta_H},
        {"gamma_H", ph.gamma_H},
        {"delta_F0", ph.delta_F0},
        {"delta_H1", ph.delta_H1},
        {"delta_H1_by_parts", ph.delta_H1_by_parts},
        {"eps_F0", ph.eps_F0},
        {"eps_H1", ph.eps_H1},
        {"kappa_F0", ph.kappa_F0},
        {"kappa_F1", ph.kappa_F1},
        {"kappa_H2", ph.kappa_H2},
        {"mu", ph.mu},
        {"mu_prime", ph.mu_prime},
        {"H", ph.H},
        {"H0", ph.H0},
        {"a_H", ph.a_H},
        {"a_H0", ph.a_H0}}},
      {"S",
       {{"s0", co.S.s0},
        {"s1_y", co.S.s1_y},
        {"s1_yp", co.S.s1_yp},
        {"s1_c", co.S.s1_c},
        {"s2_yy", co.S.s2_yy},
        {"s2_yyp", co.S.s2_yyp},
        {"s2_ypyp", co.S.s2_ypyp},
        {"s2_y", co.S.s2_y},
        {"s2_yp", co.S.s2_yp},
        {"s2_c", co.S.s2_c}}},
      {"Q_direct", q(co.Q)},
      {"Q_printed", q(co.Q_printed)},
      {"Q_rel_diff", rep.rel_diff},
      {"drift_integral", co.drift_integral},
      {"spin_phase_integral", co.spin_phase_integral}};
  return {meta, {"green3d.csv"}};
}

Outcome run_validate(const RunConfig& cfg, std::ostream& log) {
  validation::Options opt;
  opt.seed = cfg.seed;
  opt.only = cfg.only;
  json timing = json::object();
  const auto rep = validation::run_suite(opt, [&](const validation::CriterionResult& c) {
    log << (c.pass ? "PASS " : "FAIL ") << c.id << ' ' << c.title << '\n';
    for (const auto& k : c.checks)
      log << "     " << (k.pass ? "ok   " : "FAIL ") << k.label << "  " << fmt(k.measured) << " <= " << fmt(k.threshold)
          << '\n';
    timing[std::to_string(c.id)] = c.seconds;
  });
  write_json(fs::path(cfg.out) / "report.json", report_to_json(rep));
  Outcome o;
  o.files = {"report.json"};
  o.metadata = {{"criterion_seconds", timing}, {"all_pass", rep.all_pass()}};
  o.status = rep.all_pass() ? 0 : 1;
  return o;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  if (cfg.command == "characteristic") o = run_characteristic(cfg);
  else if (cfg.command == "green1d") o = run_green1d(cfg);
  else if (cfg.command == "propagate") o = run_propagate(cfg);
  else if (cfg.command == "nls") o = run_nls(cfg);
  else if (cfg.command == "magnetic3d") o = run_magnetic3d(cfg);
  else o = run_validate(cfg, log);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  o.metadata["command"] = cfg.command;
  o.metadata["t"] = cfg.t;
  o.metadata["tolerances"] = {{"tol", cfg.tol}, {"qtol", cfg.qtol}};
  o.metadata["timing_seconds"] = seconds;
  write_json(fs::path(cfg.out) / "metadata.json", o.metadata);
  o.files.push_back("metadata.json");

  const json manifest{{"config", cfg.to_json()},
                      {"versions",
                       {{"qprop", kVersion},
                        {"compiler", __VERSION__},
                        {"cxx_standard", static_cast<long>(__cplusplus)},
                        {"boost", BOOST_LIB_VERSION},
                        {"nlohmann_json",
                         std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                             "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                        {"cli11", CLI11_VERSION}}},
                      {"outputs", o.files},
                      {"rerun", "qprop " + cfg.command + " --config <this manifest>"}};
  write_json(fs::path(cfg.out) / "manifest.json", manifest);
  log << "wrote " << cfg.out << '\n';
  return o.status;
}

}  // namespace qprop::cli
