#include "qprop/green1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qprop/error.hpp"

namespace qprop {

namespace {

bool vanishes_on(const TimeFunction& fn, double t_max) {
  if (fn.is_zero()) return true;
  for (int i = 0; i <= 64; ++i)
    if (fn(t_max * i / 64.0) != 0.0) return false;
  return true;
}

void check_window(const CoefficientSet& cs, const CharacteristicSolution& sol, double t) {
  std::ostringstream os;
  if (!(t > 0.0)) {
    os << "phase coefficients need t > 0, got " << t;
    throw Error("green1d", "WINDOW", os.str());
  }
  if (t > sol.t_end() * (1.0 + 1e-14)) {
    os << "t=" << t << " beyond the characteristic solution (T=" << sol.t_end() << ")";
    throw Error("green1d", "WINDOW", os.str());
  }
  if (t > cs.t_max) {
    os << "t=" << t << " beyond the coefficient domain t_max=" << cs.t_max;
    throw Error("green1d", "WINDOW", os.str());
  }
  const auto focal = first_focal_time(sol);
  if (focal && t >= *focal) {
    os << "t=" << t << " at or past the first focal time " << *focal;
    throw Error("green1d", "FOCAL_TIME", os.str());
  }
  if (!sol.turning_times().empty() && t >= sol.turning_times().front()) {
    os << "t=" << t << " at or past the first zero of mu' (" << sol.turning_times().front()
       << "); the integral forms are capped there";
    throw Error("green1d", "WINDOW", os.str());
  }
}

}  // namespace

struct PhaseLadder::Impl {
  CoefficientSet cs;
  CharacteristicSolution sol;
  bool drift_free = true;   // c - 2d identically zero
  bool source_free = true;  // f and g identically zero
  quad::CumulativeIntegral drift, source, gamma_int, eps_sigma, eps_force, kappa_sigma, kappa_force;

  double E(double t) const { return drift_free ? 1.0 : std::exp(-drift(t)); }
  double M(double t) const { return source_free ? 0.0 : E(t) * source(t); }
};

PhaseLadder::PhaseLadder(const CoefficientSet& cs, const CharacteristicSolution& sol, double t_max,
                         double qtol)
    : t_max_(t_max) {
  cs.validate();
  if (!(qtol > 0.0)) throw Error("green1d", "INVALID_ARGUMENT", "qtol must be positive");
  check_window(cs, sol, t_max);

  auto impl = std::make_shared<Impl>();
  impl->cs = cs;
  impl->sol = sol;
  // Integrands hold a pointer into the shared state, which never moves.
  const Impl* p = impl.get();
  const CoefficientSet& c = p->cs;
  const CharacteristicSolution& s = p->sol;

  const std::vector<double> knots = s.knots();
  const TimeFunction drift = c.c - 2.0 * c.d;
  impl->drift_free = vanishes_on(drift, t_max);
  impl->source_free = c.f.is_zero() && c.g.is_zero();
  if (!impl->drift_free)
    impl->drift = quad::CumulativeIntegral([drift](double t) { return drift(t); }, 0.0, t_max, qtol, knots);

  impl->gamma_int = quad::CumulativeIntegral(
      [p, &c, &s](double t) {
        const double mup = s.mu_prime(t);
        const double e = p->E(t);
        return c.a(t) * tau_sigma(c, t).sigma * e * e / (mup * mup);
      },
      0.0, t_max, qtol, knots);

  if (!impl->source_free) {
    impl->source = quad::CumulativeIntegral(
        [p, &c, &s](double t) {
          const double a = c.a(t);
          const double g = c.g(t);
          const double f = c.f(t) - c.d(t) * g / a;
          return (f * s.mu(t) + g * s.mu_prime(t) / (2.0 * a)) / p->E(t);
        },
        0.0, t_max, qtol, knots);
    impl->eps_sigma = quad::CumulativeIntegral(
        [p, &c, &s](double t) {
          const double mup = s.mu_prime(t);
          return c.a(t) * tau_sigma(c, t).sigma * p->E(t) * p->M(t) / (mup * mup);
        },
        0.0, t_max, qtol, knots);
    impl->eps_force = quad::CumulativeIntegral(
        [p, &c, &s](double t) {
          const double a = c.a(t);
          return a * p->E(t) * (c.f(t) - c.d(t) * c.g(t) / a) / s.mu_prime(t);
        },
        0.0, t_max, qtol, knots);
    impl->kappa_sigma = quad::CumulativeIntegral(
        [p, &c, &s](double t) {
          const double mup = s.mu_prime(t);
          const double m = p->M(t);
          return c.a(t) * tau_sigma(c, t).sigma * m * m / (mup * mup);
        },
        0.0, t_max, qtol, knots);
    impl->kappa_force = quad::CumulativeIntegral(
        [p, &c, &s](double t) {
          const double a = c.a(t);
          return a * p->M(t) * (c.f(t) - c.d(t) * c.g(t) / a) / s.mu_prime(t);
        },
        0.0, t_max, qtol, knots);
  }
  impl_ = std::move(impl);
}

QuadraticPhase PhaseLadder::at(double t) const {
  if (!(t > 0.0) || t > t_max_ * (1.0 + 1e-14)) {
    std::ostringstream os;
    os << "t=" << t << " outside the ladder range (0, " << t_max_ << "]";
    throw Error("green1d", "WINDOW", os.str());
  }
  t = std::min(t, t_max_);
  const Impl& p = *impl_;
  const double mu = p.sol.mu(t);
  const double mup = p.sol.mu_prime(t);
  const double a = p.cs.a(t);
  const double d = p.cs.d(t);
  const double e = p.E(t);

  QuadraticPhase ph;
  ph.t = t;
  ph.alpha = mup / (4.0 * a * mu) - d / (2.0 * a);
  ph.beta = -e / mu;
  ph.gamma = a * e * e / (mu * mup) - 4.0 * p.gamma_int(t);
  if (!p.source_free) {
    const double m = p.M(t);
    ph.delta = m / mu;
    ph.epsilon = -2.0 * a * e * m / (mu * mup) + 8.0 * p.eps_sigma(t) + 2.0 * p.eps_force(t);
    ph.kappa = a * m * m / (mu * mup) - 4.0 * p.kappa_sigma(t) - 2.0 * p.kappa_force(t);
  }
  return ph;
}

QuadraticPhase phase_coefficients(const CoefficientSet& cs, const CharacteristicSolution& sol,
                                  double t, double qtol) {
  return PhaseLadder(cs, sol, t, qtol).at(t);
}

Green1D make_green(const CoefficientSet& cs, const CharacteristicSolution& sol, double t, double qtol,
                   AmplitudeBranch branch) {
  Green1D g;
  g.cs = cs;
  g.sol = sol;
  g.phase = phase_coefficients(cs, sol, t, qtol);
  g.mu = sol.mu(t);
  g.amplitude_branch = branch;
  return g;
}

std::complex<double> eval_green(const Green1D& g, double x, double y) {
  if (g.mu == 0.0 || !std::isfinite(g.mu)) {
    std::ostringstream os;
    os << "mu(t) = 0 at t=" << g.phase.t;
    throw Error("green1d", "FOCAL_TIME", os.str());
  }
  const double s = g.phase.eval(x, y);
  const std::complex<double> phase(std::cos(s), std::sin(s));
  if (g.maslov_continuation && g.mu < 0.0) {
    const auto crossed = std::count_if(g.sol.focal_times().begin(), g.sol.focal_times().end(),
                                       [&](double tf) { return tf < g.phase.t; });
    const std::complex<double> maslov = std::polar(1.0, -0.5 * std::numbers::pi * crossed);
    return maslov * phase / std::sqrt(std::complex<double>(0.0, 2.0 * std::numbers::pi * -g.mu));
  }
  return phase / std::sqrt(std::complex<double>(0.0, 2.0 * std::numbers::pi * g.mu));
}

std::array<double, 6> system_residuals(const CoefficientSet& cs, const CharacteristicSolution& sol,
                                       double t, double qtol) {
  const double window = std::min({sol.phase_window(), sol.t_end(), cs.t_max});
  // alpha ~ 1/(2t) near the origin, so the step shrinks with t.
  double h = std::min({1e-3, 3e-3 * t, 0.2 * (window - t)});
  if (!(h > 1e-7)) {
    std::ostringstream os;
    os << "t=" << t << " too close to 0 or to the window end " << window << " for differencing";
    throw Error("green1d", "STENCIL_DOMAIN", os.str());
  }
  const PhaseLadder ladder(cs, sol, t + 2.0 * h, qtol);
  const QuadraticPhase m2 = ladder.at(t - 2.0 * h), m1 = ladder.at(t - h), p0 = ladder.at(t),
                       p1 = ladder.at(t + h), p2 = ladder.at(t + 2.0 * h);
  auto d = [&](double QuadraticPhase::*field) {
    return (-(p2.*field) + 8.0 * (p1.*field) - 8.0 * (m1.*field) + (m2.*field)) / (12.0 * h);
  };
  const double a = cs.a(t), b = cs.b(t), c = cs.c(t), f = cs.f(t), g = cs.g(t);
  const double al = p0.alpha, be = p0.beta, de = p0.delta;
  return {
      std::abs(d(&QuadraticPhase::alpha) + b + 2.0 * c * al + 4.0 * a * al * al),
      std::abs(d(&QuadraticPhase::beta) + (c + 4.0 * a * al) * be),
      std::abs(d(&QuadraticPhase::gamma) + a * be * be),
      std::abs(d(&QuadraticPhase::delta) + (c + 4.0 * a * al) * de - f - 2.0 * al * g),
      std::abs(d(&QuadraticPhase::epsilon) - (g - 2.0 * a * de) * be),
      std::abs(d(&QuadraticPhase::kappa) - g * de + a * de * de),
  };
}

std::complex<double> pde_residual(const CoefficientSet& cs, const SpaceTimeFn& psi, double x, double t,
                                  double h_x, double h_t, double s) {
  if (!(h_x > 0.0) || !(h_t > 0.0) || !(t - h_t >= 0.0))
    throw Error("green1d", "STENCIL_DOMAIN", "stencil steps must be positive and t - h_t >= 0");
  const std::complex<double> I(0.0, 1.0);
  const auto u = psi(x, t);
  const auto ut = (psi(x, t + h_t) - psi(x, t - h_t)) / (2.0 * h_t);
  const auto up = psi(x + h_x, t);
  const auto um = psi(x - h_x, t);
  const auto ux = (up - um) / (2.0 * h_x);
  const auto uxx = (up - 2.0 * u + um) / (h_x * h_x);
  std::complex<double> r = I * ut + cs.a(t) * uxx - cs.b(t) * x * x * u +
                           I * (cs.c(t) * x * ux + cs.d(t) * u) + cs.f(t) * x * u - I * cs.g(t) * ux;
  if (cs.h) r -= (*cs.h)(t) * std::pow(std::abs(u), 2.0 * s) * u;
  return r;
}

std::complex<double> pde_residual_green(const CoefficientSet& cs, const Green1D& g, double x, double y,
                                        double t, double h_x, double h_t) {
  const PhaseLadder ladder(cs, g.sol, t + h_t, 1e-12);
  const SpaceTimeFn psi = [&](double xx, double tt) {
    Green1D at = g;
    at.phase = ladder.at(tt);
    at.mu = g.sol.mu(tt);
    return eval_green(at, xx, y);
  };
  return pde_residual(cs, psi, x, t, h_x, h_t);
}

}  // namespace qprop
