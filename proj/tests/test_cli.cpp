#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "doctest.h"
#include "qprop/error.hpp"

using namespace qprop;
using namespace qprop::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "qprop_cli_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(f, l);) out.push_back(l);
  return out;
}

int run_quiet(const RunConfig& cfg) {
  std::ostringstream log;
  return run(cfg, log);
}

RunConfig sho_green(const fs::path& out) {
  RunConfig cfg;
  cfg.command = "green1d";
  cfg.preset = "sho";
  cfg.params = {1.0};
  cfg.t = std::numbers::pi / 4;
  cfg.grid = parse_grid("-2:2:21");
  cfg.out = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("grid parsing") {
  const auto g = parse_grid("-2:2:21,0:1:5");
  REQUIRE(g.size() == 2);
  CHECK(g[0].lo == -2.0);
  CHECK(g[0].n == 21);
  CHECK(g[0].at(20) == 2.0);
  CHECK(g[1].at(1) == 0.25);
  CHECK_THROWS_AS(parse_grid("0:1:1"), Error);
  CHECK_THROWS_AS(parse_grid("0:1"), Error);
  CHECK_THROWS_AS(parse_grid("0:1:5x"), Error);
}

TEST_CASE("green1d sho at t = pi/4 on a 21x21 grid") {
  const auto out = scratch("green_sho");
  REQUIRE(run_quiet(sho_green(out)) == 0);
  const auto rows = lines(out / "green1d.csv");
  REQUIRE(rows.size() == 442);
  CHECK(rows[0] == "x,y,re_G,im_G");
  const auto phase = json::parse(slurp(out / "phase.json"));
  CHECK(phase["alpha"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(phase["gamma"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(phase["beta"].get<double>() == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-9));

  // 17 significant digits round-trip; compare one row with the Mehler kernel.
  std::istringstream is(rows[1]);
  double x, y, re, im;
  char c;
  is >> x >> c >> y >> c >> re >> c >> im;
  CHECK(x == -2.0);
  CHECK(y == -2.0);
  const double t = std::numbers::pi / 4;
  const auto want = std::sqrt(1.0 / std::complex<double>(0.0, 2 * std::numbers::pi * std::sin(t))) *
                    std::polar(1.0, ((x * x + y * y) * std::cos(t) - 2 * x * y) / (2 * std::sin(t)));
  CHECK(std::abs(std::complex<double>(re, im) - want) <= 1e-9);

  for (const char* f : {"metadata.json", "manifest.json"}) CHECK(fs::exists(out / f));
  const auto meta = json::parse(slurp(out / "metadata.json"));
  CHECK(meta.contains("timing_seconds"));
  CHECK(meta["tolerances"]["qtol"].get<double>() == 1e-10);
}

TEST_CASE("identical config gives byte-identical CSV; the manifest reruns the job") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run_quiet(sho_green(a)) == 0);
  REQUIRE(run_quiet(sho_green(b)) == 0);
  CHECK(slurp(a / "green1d.csv") == slurp(b / "green1d.csv"));
  CHECK(slurp(a / "phase.json") == slurp(b / "phase.json"));

  const auto manifest = json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["versions"].contains("boost"));
  RunConfig again;
  again.command = "green1d";
  apply_json(again, manifest);
  const auto c = scratch("det_c");
  again.out = c.string();
  REQUIRE(run_quiet(again) == 0);
  CHECK(slurp(a / "green1d.csv") == slurp(c / "green1d.csv"));
}

TEST_CASE("config errors are CONFIG_INVALID") {
  auto cfg = sho_green(scratch("bad"));
  cfg.tol = -1e-10;
  try {
    run_quiet(cfg);
    FAIL("expected CONFIG_INVALID");
  } catch (const Error& e) {
    CHECK(e.code() == "CONFIG_INVALID");
    CHECK(e.module() == "cli");
  }
  cfg.tol = 1e-10;
  cfg.qtol = 0.0;
  CHECK_THROWS_AS(run_quiet(cfg), Error);

  RunConfig r;
  CHECK_THROWS_AS(apply_json(r, json{{"tolerance", 1e-3}}), Error);
  CHECK_THROWS_AS(apply_json(r, json{{"grid", json::array({json{{"lo", 0}, {"hi", 1}, {"n", 1}}})}}), Error);
  CHECK_THROWS_AS(apply_json(r, json{{"t", "soon"}}), Error);
  r.command = "green1d";
  CHECK_THROWS_AS(apply_json(r, json{{"command", "nls"}}), Error);

  const auto j = error_json("cli", "CONFIG_INVALID", "tol must be positive", "tol=-1");
  for (const char* key : {"code", "module", "message", "context"}) CHECK(j.contains(key));
}

TEST_CASE("custom coefficients from {kind, params}") {
  RunConfig cfg;
  cfg.coefficients = json{{"a", {{"kind", "constant"}, {"params", {0.5}}}},
                          {"b", {{"kind", "sinusoid"}, {"params", {0.5, 0.0, 0.0, 1.0}}}},
                          {"f", 0.0}};
  const auto cs = build_coefficients(cfg);
  CHECK(cs.a(0.3) == 0.5);
  CHECK(cs.b(1.7) == 0.5);
  cfg.coefficients = json{{"a", {{"kind", "cubic"}, {"params", {1.0}}}}};
  CHECK_THROWS_AS(build_coefficients(cfg), Error);
  cfg.coefficients = json{{"a", 0.5}, {"z", 1.0}};
  CHECK_THROWS_AS(build_coefficients(cfg), Error);
}

TEST_CASE("characteristic CSV") {
  RunConfig cfg;
  cfg.command = "characteristic";
  cfg.preset = "sho";
  cfg.params = {1.0};
  cfg.t = 2.0;
  cfg.grid = parse_grid("0:2:11");
  cfg.out = scratch("char").string();
  REQUIRE(run_quiet(cfg) == 0);
  const auto rows = lines(fs::path(cfg.out) / "characteristic.csv");
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == "t,mu,mu_prime");
  std::istringstream is(rows.back());
  double t, mu, mup;
  char c;
  is >> t >> c >> mu >> c >> mup;
  CHECK(t == 2.0);
  CHECK(std::abs(mu - std::sin(2.0)) <= 1e-8);
  CHECK(std::abs(mup - std::cos(2.0)) <= 1e-8);
}

TEST_CASE("propagate reads and writes x,re,im") {
  const auto dir = scratch("prop");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "psi0.csv");
    f << "x,re,im\n";
    for (int i = 0; i < 256; ++i) {
      const double x = -10.0 + 20.0 * i / 255.0;
      f << fmt(x) << ',' << fmt(std::pow(std::numbers::pi, -0.25) * std::exp(-x * x / 2)) << ",0\n";
    }
  }
  RunConfig cfg;
  cfg.command = "propagate";
  cfg.preset = "free";
  cfg.t = 0.5;
  cfg.propagate.input = (dir / "psi0.csv").string();
  cfg.out = (dir / "out").string();
  cfg.plot = true;
  REQUIRE(run_quiet(cfg) == 0);
  const auto rows = lines(dir / "out" / "psi.csv");
  CHECK(rows.size() == 257);
  CHECK(rows[0] == "x,re,im");
  const auto meta = json::parse(slurp(dir / "out" / "metadata.json"));
  CHECK(meta["norm_drift"].get<double>() <= 1e-6);
  CHECK(fs::exists(dir / "out" / "plot.csv"));

  {
    std::ofstream f(dir / "bad.csv");
    f << "x,re,im\n0,1,0\n";
  }
  cfg.propagate.input = (dir / "bad.csv").string();
  CHECK_THROWS_AS(run_quiet(cfg), Error);
}

TEST_CASE("nls CSV and blow-up metadata") {
  RunConfig cfg;
  cfg.command = "nls";
  cfg.nls.p.mu0 = 1.0;
  cfg.nls.p.mu1 = -0.5;
  cfg.t = 1.0;
  cfg.out = scratch("nls").string();
  REQUIRE(run_quiet(cfg) == 0);
  const auto meta = json::parse(slurp(fs::path(cfg.out) / "metadata.json"));
  CHECK(meta["blowup_time"].get<double>() == 2.0);
  const auto rows = lines(fs::path(cfg.out) / "nls.csv");
  CHECK(rows.size() == 1 + 21 * 11);
  CHECK(rows[0] == "x,t,re,im,abs");

  cfg.t = 2.5;
  try {
    run_quiet(cfg);
    FAIL("expected BLOWUP");
  } catch (const Error& e) {
    CHECK(e.module() == "nls");
    CHECK(e.code() == "BLOWUP");
  }
}

TEST_CASE("magnetic3d CSV and ladder metadata") {
  RunConfig cfg;
  cfg.command = "magnetic3d";
  cfg.magnetic.H = "linear:1,0.5";
  cfg.magnetic.F = "const:0.2";
  cfg.t = 0.8;
  cfg.grid = parse_grid("-1:1:2");
  cfg.out = scratch("mag").string();
  REQUIRE(run_quiet(cfg) == 0);
  const auto rows = lines(fs::path(cfg.out) / "green3d.csv");
  CHECK(rows.size() == 1 + 64);
  CHECK(rows[0] == "x,y,z,xp,yp,zp,re_G,im_G");
  const auto meta = json::parse(slurp(fs::path(cfg.out) / "metadata.json"));
  for (const char* key : {"alpha_H", "beta_H", "gamma_H", "delta_F0", "delta_H1", "eps_F0", "eps_H1", "kappa_F0",
                          "kappa_F1", "kappa_H2"})
    CHECK(meta["ladder"].contains(key));
  CHECK(meta["Q_rel_diff"].size() == 6);

  cfg.magnetic.H = "quadratic:1,2,3";
  CHECK_THROWS_AS(run_quiet(cfg), Error);
  cfg.magnetic.H = "const:1";
  cfg.magnetic.F = "const:";
  CHECK_THROWS_AS(run_quiet(cfg), Error);
}

TEST_CASE("validate subset report is deterministic") {
  RunConfig cfg;
  cfg.command = "validate";
  cfg.only = {7, 9};
  cfg.out = scratch("val_a").string();
  CHECK(run_quiet(cfg) == 0);
  const auto a = slurp(fs::path(cfg.out) / "report.json");
  cfg.out = scratch("val_b").string();
  CHECK(run_quiet(cfg) == 0);
  CHECK(a == slurp(fs::path(cfg.out) / "report.json"));
  const auto rep = json::parse(a);
  CHECK(rep["criteria"].size() == 2);
  CHECK(rep["status"] == "pass");
  CHECK(rep.dump().find("seconds") == std::string::npos);
}
