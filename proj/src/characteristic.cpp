#include "qprop/characteristic.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qprop/error.hpp"

namespace qprop {

namespace {

using State = std::array<double, 2>;
using Fn = std::function<double(double)>;

constexpr std::size_t kMaxSteps = 5'000'000;

// Quintic Hermite basis on [0, 1] and its first two derivatives.
struct Basis {
  double h[6], d1[6], d2[6];
};

Basis quintic(double s) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  Basis b{};
  b.h[0] = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  b.h[1] = s - 6 * s3 + 8 * s4 - 3 * s5;
  b.h[2] = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  b.h[3] = 10 * s3 - 15 * s4 + 6 * s5;
  b.h[4] = -4 * s3 + 7 * s4 - 3 * s5;
  b.h[5] = 0.5 * s3 - s4 + 0.5 * s5;

  b.d1[0] = -30 * s2 + 60 * s3 - 30 * s4;
  b.d1[1] = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  b.d1[2] = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
  b.d1[3] = 30 * s2 - 60 * s3 + 30 * s4;
  b.d1[4] = -12 * s2 + 28 * s3 - 15 * s4;
  b.d1[5] = 1.5 * s2 - 4 * s3 + 2.5 * s4;

  b.d2[0] = -60 * s + 180 * s2 - 120 * s3;
  b.d2[1] = -36 * s + 96 * s2 - 60 * s3;
  b.d2[2] = 1 - 9 * s + 18 * s2 - 10 * s3;
  b.d2[3] = 60 * s - 180 * s2 + 120 * s3;
  b.d2[4] = -24 * s + 84 * s2 - 60 * s3;
  b.d2[5] = 3 * s - 12 * s2 + 10 * s3;
  return b;
}

double refine_root(const Fn& f, const Fn& df, double lo, double hi) {
  double flo = f(lo);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double slope = df(mid);
  if (slope != 0.0) {
    const double polished = mid - f(mid) / slope;
    if (polished >= lo - 1e-12 && polished <= hi + 1e-12 && std::abs(f(polished)) <= std::abs(f(mid)))
      return polished;
  }
  return mid;
}

// Zeros of f in (0, T] given a bracketing grid ts (ts.front() == 0, ts.back() == T).
std::vector<double> find_roots(const std::vector<double>& ts, const Fn& f, const Fn& df) {
  std::vector<double> roots;
  auto push = [&](double r) {
    if (roots.empty() || r - roots.back() > 1e-10) roots.push_back(r);
  };
  double prev = f(ts.front());
  for (std::size_t k = 1; k < ts.size(); ++k) {
    const double cur = f(ts[k]);
    if (cur == 0.0) {
      push(ts[k]);
    } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
      push(refine_root(f, df, ts[k - 1], ts[k]));
    }
    prev = cur;
  }
  // A zero a hair beyond T (e.g. sin at T = pi) is reported at T.
  const double T = ts.back();
  const double v = f(T);
  const double s = df(T);
  if (v != 0.0 && s != 0.0 && (roots.empty() || T - roots.back() > 1e-10)) {
    const double ahead = -v / s;
    if (ahead > 0.0 && ahead <= 1e-9 * std::max(1.0, T)) push(T);
  }
  return roots;
}

std::vector<double> sample_grid(double T, std::size_t per_unit) {
  const auto n = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(T * per_unit)));
  std::vector<double> ts(n + 1);
  for (std::size_t i = 0; i <= n; ++i) ts[i] = T * static_cast<double>(i) / static_cast<double>(n);
  ts.back() = T;
  return ts;
}

void check_T(double T, const char* what) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    std::ostringstream os;
    os << what << ": T must be positive and finite, got " << T;
    throw Error("characteristic", "INVALID_ARGUMENT", os.str());
  }
}

}  // namespace

CharacteristicSolution CharacteristicSolution::from_nodes(std::vector<Node> nodes) {
  if (nodes.size() < 2) throw Error("characteristic", "INVALID_ARGUMENT", "need at least two nodes");
  CharacteristicSolution sol;
  sol.source_ = SolutionSource::numeric;
  sol.t_end_ = nodes.back().t;
  std::vector<double> ts;
  ts.reserve(nodes.size());
  for (const auto& n : nodes) ts.push_back(n.t);
  sol.nodes_ = std::make_shared<const std::vector<Node>>(std::move(nodes));
  const Fn mu = [&sol](double t) { return sol.mu(t); };
  const Fn mup = [&sol](double t) { return sol.mu_prime(t); };
  const Fn mupp = [&sol](double t) { return sol.mu_second(t); };
  sol.focal_ = find_roots(ts, mu, mup);
  sol.turning_ = find_roots(ts, mup, mupp);
  return sol;
}

CharacteristicSolution CharacteristicSolution::from_exact(Exact exact, double t_end,
                                                          std::vector<double> focal_times,
                                                          std::vector<double> turning_times) {
  CharacteristicSolution sol;
  sol.source_ = SolutionSource::closed_form;
  sol.t_end_ = t_end;
  sol.exact_ = std::make_shared<const Exact>(std::move(exact));
  sol.focal_ = std::move(focal_times);
  sol.turning_ = std::move(turning_times);
  return sol;
}

void CharacteristicSolution::check_domain(double t) const {
  const double slack = 1e-12 * std::max(1.0, t_end_);
  if (!(t >= -slack && t <= t_end_ + slack)) {
    std::ostringstream os;
    os << "t=" << t << " outside [0, " << t_end_ << "]";
    throw Error("characteristic", "OUT_OF_DOMAIN", os.str());
  }
}

CharacteristicSolution::Eval CharacteristicSolution::evaluate(double t) const {
  check_domain(t);
  if (exact_) return {exact_->mu(t), exact_->mu_prime(t), exact_->mu_second(t)};
  if (!nodes_) throw Error("characteristic", "EMPTY", "solution has no data");
  const auto& n = *nodes_;
  t = std::clamp(t, 0.0, t_end_);
  auto it = std::upper_bound(n.begin(), n.end(), t, [](double v, const Node& nd) { return v < nd.t; });
  std::size_t k = it == n.begin() ? 0 : static_cast<std::size_t>(it - n.begin()) - 1;
  if (k + 1 >= n.size()) k = n.size() - 2;
  const Node& p = n[k];
  const Node& q = n[k + 1];
  const double h = q.t - p.t;
  const Basis b = quintic((t - p.t) / h);
  // Taylor polynomial at the left node plus the Hermite correction that meets
  // the right node. The corrections are O(h^3), so nothing large cancels.
  const double r0 = q.mu - p.mu - h * p.mu_prime - 0.5 * h * h * p.mu_second;
  const double r1 = h * (q.mu_prime - p.mu_prime) - h * h * p.mu_second;
  const double r2 = h * h * (q.mu_second - p.mu_second);
  const double dt = t - p.t;
  return {p.mu + dt * p.mu_prime + 0.5 * dt * dt * p.mu_second + r0 * b.h[3] + r1 * b.h[4] + r2 * b.h[5],
          p.mu_prime + dt * p.mu_second + (r0 * b.d1[3] + r1 * b.d1[4] + r2 * b.d1[5]) / h,
          p.mu_second + (r0 * b.d2[3] + r1 * b.d2[4] + r2 * b.d2[5]) / (h * h)};
}

double CharacteristicSolution::mu(double t) const { return evaluate(t).v; }
double CharacteristicSolution::mu_prime(double t) const { return evaluate(t).d1; }
double CharacteristicSolution::mu_second(double t) const { return evaluate(t).d2; }

std::vector<double> CharacteristicSolution::knots() const {
  std::vector<double> ts;
  if (!nodes_) return ts;
  ts.reserve(nodes_->size());
  for (const auto& n : *nodes_) ts.push_back(n.t);
  return ts;
}

double CharacteristicSolution::phase_window() const {
  double w = std::numeric_limits<double>::infinity();
  if (!focal_.empty()) w = std::min(w, focal_.front());
  if (!turning_.empty()) w = std::min(w, turning_.front());
  return w;
}

CharacteristicSolution solve_linear_characteristic(const std::function<TauSigma(double)>& coeffs,
                                                   double slope0, double T, double tol,
                                                   const std::function<double(double)>& a_sign) {
  namespace odeint = boost::numeric::odeint;
  check_T(T, "solve_characteristic");
  if (!(tol > 0.0)) throw Error("characteristic", "INVALID_ARGUMENT", "tol must be positive");
  if (slope0 == 0.0 || !std::isfinite(slope0))
    throw Error("characteristic", "INVALID_ARGUMENT", "initial slope must be finite and nonzero");

  auto rhs = [&coeffs](const State& x, State& dx, double t) {
    const TauSigma ts = coeffs(t);
    dx[0] = x[1];
    dx[1] = ts.tau * x[1] - 4.0 * ts.sigma * x[0];
  };
  auto second = [&coeffs](double t, const State& x) {
    const TauSigma ts = coeffs(t);
    return ts.tau * x[1] - 4.0 * ts.sigma * x[0];
  };

  // A tenth of tol keeps the interpolated second derivative inside the same budget.
  auto stepper = odeint::make_controlled(0.1 * tol, 0.1 * tol, odeint::runge_kutta_dopri5<State>());
  State x{0.0, slope0};
  double t = 0.0;
  double dt = std::min(T, 1e-3);
  const double dt_min = 1e-14 * std::max(1.0, T);
  const double sign0 = a_sign ? a_sign(0.0) : 1.0;

  std::vector<CharacteristicSolution::Node> nodes;
  nodes.push_back({0.0, 0.0, slope0, second(0.0, x)});
  while (T - t > 1e-14 * T) {
    if (t + dt > T) dt = T - t;
    const double t_prev = t;
    const auto res = stepper.try_step(rhs, x, t, dt);
    if (res == odeint::fail) {
      if (dt < dt_min) {
        std::ostringstream os;
        os << "step size underflow near t=" << t;
        throw Error("characteristic", "STEP_UNDERFLOW", os.str());
      }
      continue;
    }
    if (T - t <= 1e-13 * T) t = T;
    if (a_sign && (a_sign(t) < 0.0) != (sign0 < 0.0)) {
      std::ostringstream os;
      os << "a(t) changes sign in [" << t_prev << ", " << t << "]";
      throw Error("characteristic", "COEFFICIENT_SINGULAR", os.str());
    }
    if (!std::isfinite(x[0]) || !std::isfinite(x[1]))
      throw Error("characteristic", "DIVERGED", "solution is not finite");
    nodes.push_back({t, x[0], x[1], second(t, x)});
    if (nodes.size() > kMaxSteps) throw Error("characteristic", "STEP_UNDERFLOW", "step budget exhausted");
  }
  return CharacteristicSolution::from_nodes(std::move(nodes));
}

CharacteristicSolution solve_characteristic(const CoefficientSet& cs, double T, double tol) {
  cs.validate();
  check_T(T, "solve_characteristic");
  if (T > cs.t_max) {
    std::ostringstream os;
    os << "T=" << T << " exceeds the coefficient domain t_max=" << cs.t_max;
    throw Error("characteristic", "COEFFICIENT_SINGULAR", os.str(), "label=" + cs.label);
  }
  return solve_linear_characteristic([&cs](double t) { return tau_sigma(cs, t); }, 2.0 * cs.a(0.0), T,
                                     tol, [&cs](double t) { return cs.a(t); });
}

CharacteristicSolution closed_form_characteristic(Preset preset, std::span<const double> params,
                                                  double T) {
  check_T(T, "closed_form_characteristic");
  using Exact = CharacteristicSolution::Exact;
  switch (preset) {
    case Preset::free:
    case Preset::constant_force: {
      Exact e{[](double t) { return t; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
      return CharacteristicSolution::from_exact(std::move(e), T, {}, {});
    }
    case Preset::sho: {
      const double w = params.empty() ? 1.0 : params[0];
      if (!(w > 0.0) || !std::isfinite(w))
        throw Error("characteristic", "INVALID_PARAMS", "sho frequency must be positive");
      Exact e{[w](double t) { return std::sin(w * t) / w; }, [w](double t) { return std::cos(w * t); },
              [w](double t) { return -w * std::sin(w * t); }};
      std::vector<double> focal, turning;
      const double slack = 1e-14 * std::max(1.0, T);
      for (int k = 1; k * std::numbers::pi / w <= T + slack; ++k) focal.push_back(k * std::numbers::pi / w);
      for (int k = 0; (k + 0.5) * std::numbers::pi / w <= T + slack; ++k)
        turning.push_back((k + 0.5) * std::numbers::pi / w);
      return CharacteristicSolution::from_exact(std::move(e), T, std::move(focal), std::move(turning));
    }
    case Preset::modified_oscillator: {
      Exact e{[](double t) { return std::cos(t) * std::sinh(t) + std::sin(t) * std::cosh(t); },
              [](double t) { return 2.0 * std::cos(t) * std::cosh(t); },
              [](double t) { return 2.0 * (std::cos(t) * std::sinh(t) - std::sin(t) * std::cosh(t)); }};
      const auto ts = sample_grid(T, 256);
      auto focal = find_roots(ts, e.mu, e.mu_prime);
      std::vector<double> turning;
      const double slack = 1e-14 * std::max(1.0, T);
      for (int k = 0; (k + 0.5) * std::numbers::pi <= T + slack; ++k) turning.push_back((k + 0.5) * std::numbers::pi);
      return CharacteristicSolution::from_exact(std::move(e), T, std::move(focal), std::move(turning));
    }
    case Preset::custom:
      break;
  }
  throw Error("characteristic", "NO_CLOSED_FORM",
              "preset '" + std::string(preset_name(preset)) + "' has no closed-form characteristic");
}

std::optional<double> first_focal_time(const CharacteristicSolution& sol) {
  if (sol.focal_times().empty()) return std::nullopt;
  return sol.focal_times().front();
}

}  // namespace qprop
