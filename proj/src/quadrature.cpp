#include "qprop/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qprop/error.hpp"

namespace qprop::quad {

namespace {

constexpr std::size_t kMaxPanels = 1u << 16;

template <std::size_t N>
Rule expand_rule() {
  static_assert(N % 2 == 0, "only even rules are tabulated here");
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  Rule r;
  for (std::size_t i = x.size(); i-- > 0;) {
    r.nodes.push_back(-x[i]);
    r.weights.push_back(w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.nodes.push_back(x[i]);
    r.weights.push_back(w[i]);
  }
  return r;
}

struct Panel {
  double value;
  double error;
};

Panel gk21(const RealFn& f, double a, double b) {
  // Boost leaves the error estimate in [-1, 1] units, so the map is done here.
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double err = 0.0;
  const double v = half * boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
                              [&](double x) { return f(mid + half * x); }, -1.0, 1.0, 0, 0.0, &err);
  err *= half;
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "integrand not finite on [" << a << ", " << b << "]";
    throw Error("quadrature", "NO_CONVERGENCE", os.str());
  }
  return {v, err};
}

double gl16(const RealFn& f, double a, double b) {
  const Rule& r = gauss_legendre(16);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  return s * half;
}

// Depth-first bisection, so accepted panels arrive left to right.
void refine(const RealFn& f, double a, double b, double density, double min_width,
            std::vector<double>& breaks, std::vector<double>& values) {
  struct Job {
    double a, b;
  };
  std::vector<Job> stack{{a, b}};
  while (!stack.empty()) {
    const Job job = stack.back();
    stack.pop_back();
    const Panel p = gk21(f, job.a, job.b);
    const double width = job.b - job.a;
    // GK error estimates bottom out near rounding level, so that is accepted too.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(p.value);
    if (p.error <= std::max(density * width, floor)) {
      breaks.push_back(job.b);
      values.push_back(p.value);
      if (values.size() > kMaxPanels)
        throw Error("quadrature", "NO_CONVERGENCE", "panel budget exhausted");
      continue;
    }
    if (width <= min_width) {
      std::ostringstream os;
      os << "no convergence near t=" << job.a << " (error " << p.error << ")";
      throw Error("quadrature", "NO_CONVERGENCE", os.str());
    }
    const double mid = 0.5 * (job.a + job.b);
    stack.push_back({mid, job.b});
    stack.push_back({job.a, mid});
  }
}

}  // namespace

const Rule& gauss_legendre(std::size_t n) {
  static const Rule r8 = expand_rule<8>();
  static const Rule r16 = expand_rule<16>();
  if (n == 8) return r8;
  if (n == 16) return r16;
  throw Error("quadrature", "INVALID_RULE", "only 8- and 16-point rules are available");
}

double integrate(const RealFn& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, abs_tol);
  std::vector<double> breaks{a};
  std::vector<double> values;
  refine(f, a, b, abs_tol / (b - a), 1e-13 * std::max(1.0, std::abs(b - a)), breaks, values);
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

CumulativeIntegral::CumulativeIntegral(RealFn f, double t0, double t1, double abs_tol)
    : CumulativeIntegral(std::move(f), t0, t1, abs_tol, {}) {}

CumulativeIntegral::CumulativeIntegral(RealFn f, double t0, double t1, double abs_tol,
                                       std::span<const double> knots)
    : f_(std::move(f)) {
  if (!(t1 > t0)) throw Error("quadrature", "INVALID_RANGE", "cumulative integral needs t1 > t0");
  if (!(abs_tol > 0.0)) throw Error("quadrature", "INVALID_TOLERANCE", "tolerance must be positive");
  const double min_width = 1e-13 * std::max(1.0, t1 - t0);
  std::vector<double> cuts{t0};
  for (double k : knots)
    if (k > cuts.back() + min_width && k < t1 - min_width) cuts.push_back(k);
  cuts.push_back(t1);
  breaks_.push_back(t0);
  std::vector<double> values;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    refine(f_, cuts[i], cuts[i + 1], abs_tol / (t1 - t0), min_width, breaks_, values);
  cum_.reserve(breaks_.size());
  cum_.push_back(0.0);
  for (double v : values) cum_.push_back(cum_.back() + v);
}

double CumulativeIntegral::operator()(double t) const {
  if (breaks_.empty()) return 0.0;
  const double lo = breaks_.front();
  const double hi = breaks_.back();
  const double slack = 1e-12 * std::max(1.0, hi - lo);
  if (t < lo - slack || t > hi + slack) {
    std::ostringstream os;
    os << "t=" << t << " outside [" << lo << ", " << hi << "]";
    throw Error("quadrature", "OUT_OF_RANGE", os.str());
  }
  t = std::clamp(t, lo, hi);
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  if (k + 1 >= breaks_.size() || t == breaks_[k]) return cum_[k];
  return cum_[k] + gl16(f_, breaks_[k], t);
}

std::complex<double> integrate_chirp(const ComplexFn& amp, double p2, double p1, double a,
                                     double b) {
  if (b <= a) return {0.0, 0.0};
  // Local wavenumber |2 p2 y + p1| is linear in y, so its maximum is at an end.
  const double k_max = std::max(std::abs(2.0 * p2 * a + p1), std::abs(2.0 * p2 * b + p1));
  const double cycles = k_max * (b - a) / (2.0 * std::numbers::pi);
  const auto n = static_cast<std::size_t>(std::ceil(cycles / 2.0)) + 1;
  const Rule& r = gauss_legendre(16);
  const double h = (b - a) / static_cast<double>(n);
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t p = 0; p < n; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    std::complex<double> part{0.0, 0.0};
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double y = mid + 0.5 * h * r.nodes[i];
      const double ph = (p2 * y + p1) * y;
      part += r.weights[i] * amp(y) * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    sum += part * (0.5 * h);
  }
  return sum;
}

}  // namespace qprop::quad
