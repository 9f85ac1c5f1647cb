#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cli.hpp"
#include "qprop/error.hpp"

using namespace qprop;
using namespace qprop::cli;

namespace {

struct Flags {
  std::string config, out, grid, preset, input, family, H, F;
  std::optional<double> t, tol, qtol;
  std::optional<std::uint64_t> seed;
  std::vector<double> params;
  std::optional<double> x0, width, k0, dt;
  std::optional<double> s, h, mu0, mu1, y, epsilon;
  std::optional<double> m, e, c, hbar, mu_spin, spin, sigma;
  std::vector<int> only;
  bool plot = false, compare_cn = false;
};

void common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config (or a manifest.json from an earlier run)");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--tol", f.tol, "ODE tolerance");
  sub->add_option("--qtol", f.qtol, "quadrature tolerance");
  sub->add_option("--grid", f.grid, "lo:hi:n[,lo:hi:n...]");
  sub->add_option("--t", f.t, "time");
  sub->add_option("--seed", f.seed, "seed for randomized suites");
  sub->add_flag("--plot", f.plot, "also write plot.csv");
}

void coeff_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--preset", f.preset, "free | constant_force | sho | modified_oscillator | custom");
  sub->add_option("--params", f.params, "preset parameters")->delimiter(',');
}

int fail(const json& err, const std::string& out, int status) {
  std::cerr << err.dump() << '\n';
  if (!out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    std::ofstream f(std::filesystem::path(out) / "error.json");
    if (f) f << err.dump(2) << '\n';
  }
  return status;
}

template <class T>
void set(std::optional<T> src, T& dst) {
  if (src) dst = *src;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact propagators of quadratic Hamiltonians"};
  app.require_subcommand(1);
  Flags f;

  auto* ch = app.add_subcommand("characteristic", "dump t, mu, mu' as CSV");
  auto* g1 = app.add_subcommand("green1d", "evaluate G(x, y, t) on a grid");
  auto* pr = app.add_subcommand("propagate", "solve the Cauchy problem by kernel convolution");
  auto* nl = app.add_subcommand("nls", "closed-form NLS solutions on an (x, t) grid");
  auto* mg = app.add_subcommand("magnetic3d", "3D kernel in perpendicular H and E fields");
  auto* va = app.add_subcommand("validate", "run the acceptance suite");
  for (auto* s : {ch, g1, pr, nl, mg, va}) common(s, f);
  for (auto* s : {ch, g1, pr}) coeff_flags(s, f);

  pr->add_option("--input", f.input, "initial state CSV x,re,im");
  pr->add_option("--x0", f.x0);
  pr->add_option("--width", f.width);
  pr->add_option("--k0", f.k0);
  pr->add_flag("--compare-cn", f.compare_cn, "also run Crank-Nicolson and report the L2 difference");
  pr->add_option("--dt", f.dt, "Crank-Nicolson step");

  nl->add_option("--family", f.family, "simple | kernel | modified_oscillator");
  nl->add_option("--s", f.s);
  nl->add_option("--strength", f.h, "nonlinearity h");
  nl->add_option("--mu0", f.mu0);
  nl->add_option("--mu1", f.mu1);
  nl->add_option("--y", f.y, "spectral parameter");
  nl->add_option("--epsilon", f.epsilon, "kernel regularization");

  mg->add_option("--H", f.H, "const:H0 | linear:H0,H1");
  mg->add_option("--F", f.F, "const:F0 | zero");
  mg->add_option("--m", f.m);
  mg->add_option("--e", f.e, "signed charge");
  mg->add_option("--c", f.c);
  mg->add_option("--hbar", f.hbar);
  mg->add_option("--mu-spin", f.mu_spin);
  mg->add_option("--spin", f.spin, "s");
  mg->add_option("--sigma", f.sigma);

  va->add_option("--only", f.only, "criteria to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(error_json("cli", "CONFIG_INVALID", e.what()), {}, 2);
  }

  RunConfig cfg;
  for (auto* s : app.get_subcommands()) cfg.command = s->get_name();
  try {
    if (!f.config.empty()) {
      std::ifstream in(f.config);
      if (!in) throw Error("cli", "CONFIG_INVALID", "cannot read config", f.config);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw Error("cli", "CONFIG_INVALID", e.what(), f.config);
      }
      apply_json(cfg, doc);
    }
    if (!f.out.empty()) cfg.out = f.out;
    if (!f.grid.empty()) cfg.grid = parse_grid(f.grid);
    if (!f.preset.empty()) cfg.preset = f.preset;
    if (!f.params.empty()) cfg.params = f.params;
    if (f.plot) cfg.plot = true;
    set(f.t, cfg.t);
    set(f.tol, cfg.tol);
    set(f.qtol, cfg.qtol);
    set(f.seed, cfg.seed);

    if (!f.input.empty()) cfg.propagate.input = f.input;
    set(f.x0, cfg.propagate.x0);
    set(f.width, cfg.propagate.width);
    set(f.k0, cfg.propagate.k0);
    set(f.dt, cfg.propagate.dt);
    if (f.compare_cn) cfg.propagate.compare_cn = true;

    if (!f.family.empty()) cfg.nls.family = f.family;
    set(f.s, cfg.nls.p.s);
    set(f.h, cfg.nls.p.h);
    set(f.mu0, cfg.nls.p.mu0);
    set(f.mu1, cfg.nls.p.mu1);
    set(f.y, cfg.nls.p.y);
    set(f.epsilon, cfg.nls.epsilon);

    if (!f.H.empty()) cfg.magnetic.H = f.H;
    if (!f.F.empty()) cfg.magnetic.F = f.F;
    auto& k = cfg.magnetic.k;
    set(f.m, k.m);
    set(f.e, k.e);
    set(f.c, k.c);
    set(f.hbar, k.hbar);
    set(f.mu_spin, k.mu_spin);
    set(f.spin, k.s);
    set(f.sigma, k.sigma);

    if (!f.only.empty()) cfg.only = f.only;

    return run(cfg, std::cout);
  } catch (const Error& e) {
    const int status = e.code() == "CONFIG_INVALID" ? 2 : 1;
    return fail(error_json(e.module(), e.code(), e.what(), e.context()), cfg.out, status);
  } catch (const std::exception& e) {
    return fail(error_json("cli", "INTERNAL", e.what()), cfg.out, 1);
  }
}
