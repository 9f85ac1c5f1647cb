#include "qprop/cauchy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "qprop/error.hpp"
#include "qprop/green1d.hpp"
#include "qprop/quadrature.hpp"

namespace qprop {

namespace {

constexpr int kStencil = 8;
constexpr std::size_t kBlockCells = 8;

// Barycentric weights for equispaced nodes: (-1)^j C(7, j).
constexpr std::array<double, kStencil> kBary{1, -7, 21, -35, 35, -21, 7, -1};

class Interpolant {
 public:
  explicit Interpolant(const WaveFunction1D& w) : w_(w), dx_(w.grid.dx()) {}

  cplx operator()(double y) const {
    const auto& g = w_.grid;
    const double s = (y - g.x_min) / dx_;
    const auto last = static_cast<long>(g.n) - kStencil;
    const long j0 = std::clamp(static_cast<long>(std::floor(s)) - kStencil / 2 + 1, 0L, last);
    cplx num{0.0, 0.0};
    double den = 0.0;
    for (int j = 0; j < kStencil; ++j) {
      const double r = s - static_cast<double>(j0 + j);
      if (r == 0.0) return w_.values[static_cast<std::size_t>(j0 + j)];
      const double q = kBary[j] / r;
      num += q * w_.values[static_cast<std::size_t>(j0 + j)];
      den += q;
    }
    return num / den;
  }

 private:
  const WaveFunction1D& w_;
  double dx_;
};

// Interior tridiagonal system: lower, diag, upper, solved in place.
void thomas(const std::vector<cplx>& lo, std::vector<cplx> diag, const std::vector<cplx>& up,
            std::vector<cplx>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == cplx{0.0, 0.0})
      throw Error("cauchy", "SINGULAR_SYSTEM", "zero pivot in the Crank-Nicolson solve");
    const cplx m = lo[i] / diag[i - 1];
    diag[i] -= m * up[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  if (diag[n - 1] == cplx{0.0, 0.0})
    throw Error("cauchy", "SINGULAR_SYSTEM", "zero pivot in the Crank-Nicolson solve");
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

void UniformGrid::validate() const {
  if (n < 16 || !(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    std::ostringstream os;
    os << "grid needs n >= 16 and x_max > x_min, got n=" << n << " on [" << x_min << ", " << x_max << "]";
    throw Error("cauchy", "INVALID_GRID", os.str());
  }
}

double WaveFunction1D::norm() const {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  s -= 0.5 * (std::norm(values.front()) + std::norm(values.back()));
  return std::sqrt(s * grid.dx());
}

WaveFunction1D sample(const UniformGrid& grid, const std::function<cplx(double)>& psi, double t) {
  grid.validate();
  WaveFunction1D w{grid, std::vector<cplx>(grid.n), t};
  for (std::size_t i = 0; i < grid.n; ++i) w.values[i] = psi(grid.x(i));
  return w;
}

WaveFunction1D gaussian_packet(const UniformGrid& grid, double x0, double width, double k0) {
  if (!(width > 0.0)) throw Error("cauchy", "INVALID_ARGUMENT", "packet width must be positive");
  const double norm = std::pow(std::numbers::pi, -0.25) / std::sqrt(width);
  return sample(grid, [=](double x) {
    const double u = (x - x0) / width;
    return norm * std::exp(cplx(-0.5 * u * u, k0 * x));
  });
}

WaveFunction1D propagate(const CoefficientSet& cs, const CharacteristicSolution& sol,
                         const WaveFunction1D& psi0, double t, double qtol, PropagateInfo* info,
                         double edge_tol) {
  const auto& grid = psi0.grid;
  grid.validate();
  if (psi0.values.size() != grid.n)
    throw Error("cauchy", "GRID_MISMATCH", "value count does not match the grid");

  double peak = 0.0;
  for (const auto& v : psi0.values) peak = std::max(peak, std::abs(v));
  const double edge = std::max(std::abs(psi0.values.front()), std::abs(psi0.values.back()));
  if (edge > edge_tol * std::max(1.0, peak)) {
    std::ostringstream os;
    os << "|psi0| = " << edge << " at the grid edge exceeds " << edge_tol;
    throw Error("cauchy", "EDGE_DECAY", os.str());
  }

  const QuadraticPhase ph = phase_coefficients(cs, sol, t, qtol);
  const double mu = sol.mu(t);
  const cplx amp = 1.0 / std::sqrt(cplx(0.0, 2.0 * std::numbers::pi * mu));

  // Cells where psi0 is below rounding of its peak contribute nothing.
  std::size_t lo = 0, hi = grid.n - 1;
  const double negligible = 1e-17 * peak;
  while (lo < hi && std::abs(psi0.values[lo]) <= negligible) ++lo;
  while (hi > lo && std::abs(psi0.values[hi]) <= negligible) --hi;
  lo = lo > kBlockCells ? lo - kBlockCells : 0;
  hi = std::min(grid.n - 1, hi + kBlockCells);

  const Interpolant interp(psi0);
  const quad::ComplexFn f = [&interp](double y) { return interp(y); };
  const double dx = grid.dx();
  const double k_scale = 1.0 / (2.0 * std::numbers::pi);

  WaveFunction1D out{grid, std::vector<cplx>(grid.n), t};
  std::vector<std::size_t> panels(grid.n, 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = grid.x(i);
      const double p1 = ph.beta * x + ph.epsilon;
      cplx sum{0.0, 0.0};
      for (std::size_t b = lo; b < hi; b += kBlockCells) {
        const std::size_t e = std::min(hi, b + kBlockCells);
        const double ya = grid.x(b), yb = grid.x(e);
        const double k = std::max(std::abs(2.0 * ph.gamma * ya + p1), std::abs(2.0 * ph.gamma * yb + p1));
        panels[i] += static_cast<std::size_t>(std::ceil(k * (yb - ya) * k_scale / 2.0)) + 1;
        sum += quad::integrate_chirp(f, ph.gamma, p1, ya, yb);
      }
      const double outer = (ph.alpha * x + ph.delta) * x + ph.kappa;
      out.values[i] = amp * std::polar(1.0, outer) * sum;
    }
  };

  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, grid.n / 64));
  if (threads == 1) {
    work(0, grid.n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (grid.n + threads - 1) / threads;
    for (std::size_t k = 0; k < threads; ++k) {
      const std::size_t b = k * chunk, e = std::min(grid.n, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }

  if (info) {
    info->truncation_bound = std::abs(amp) * edge * dx;
    info->chirp_panels = 0;
    for (auto p : panels) info->chirp_panels += p;
  }
  return out;
}

WaveFunction1D crank_nicolson(const CoefficientSet& cs, const WaveFunction1D& psi0, double t, double dt) {
  const auto& grid = psi0.grid;
  grid.validate();
  if (psi0.values.size() != grid.n)
    throw Error("cauchy", "GRID_MISMATCH", "value count does not match the grid");
  if (!(dt > 0.0) || !(t >= 0.0)) throw Error("cauchy", "INVALID_ARGUMENT", "need dt > 0 and t >= 0");

  const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
  WaveFunction1D w = psi0;
  w.values.front() = w.values.back() = 0.0;
  if (steps == 0) {
    w.t = psi0.t + t;
    return w;
  }
  const double h = t / static_cast<double>(steps);
  const double dx = grid.dx();
  const std::size_t m = grid.n - 2;
  const cplx I{0.0, 1.0};

  std::vector<cplx> lo(m), diag(m), up(m), rhs(m);
  std::vector<cplx> hl(m), hd(m), hu(m);
  for (std::size_t s = 0; s < steps; ++s) {
    const double tm = psi0.t + (static_cast<double>(s) + 0.5) * h;
    const double a = cs.a(tm), b = cs.b(tm), c = cs.c(tm), d = cs.d(tm), f = cs.f(tm), g = cs.g(tm);
    // H = -a D2 + b x^2 - f x - i c K - i (d - c/2) + i g D1, K skew, D1 central.
    for (std::size_t j = 0; j < m; ++j) {
      const double x = grid.x(j + 1);
      const double xr = x + 0.5 * dx, xl = x - 0.5 * dx;
      hd[j] = 2.0 * a / (dx * dx) + b * x * x - f * x - I * (d - 0.5 * c);
      hu[j] = -a / (dx * dx) - I * c * xr / (2.0 * dx) + I * g / (2.0 * dx);
      hl[j] = -a / (dx * dx) + I * c * xl / (2.0 * dx) - I * g / (2.0 * dx);
    }
    const cplx k = 0.5 * I * h;
    for (std::size_t j = 0; j < m; ++j) {
      cplx r = (1.0 - k * hd[j]) * w.values[j + 1];
      if (j > 0) r -= k * hl[j] * w.values[j];
      if (j + 1 < m) r -= k * hu[j] * w.values[j + 2];
      rhs[j] = r;
      diag[j] = 1.0 + k * hd[j];
      lo[j] = k * hl[j];
      up[j] = k * hu[j];
    }
    thomas(lo, diag, up, rhs);
    for (std::size_t j = 0; j < m; ++j) w.values[j + 1] = rhs[j];
  }
  w.t = psi0.t + t;
  return w;
}

double l2_error(const WaveFunction1D& u, const WaveFunction1D& v) {
  if (!(u.grid == v.grid) || u.values.size() != v.values.size()) {
    throw Error("cauchy", "GRID_MISMATCH", "l2_error needs identical grids");
  }
  if (std::abs(u.t - v.t) > 1e-12 * std::max(1.0, std::abs(u.t))) {
    std::ostringstream os;
    os << "l2_error needs equal times, got " << u.t << " and " << v.t;
    throw Error("cauchy", "GRID_MISMATCH", os.str());
  }
  WaveFunction1D diff{u.grid, std::vector<cplx>(u.values.size()), u.t};
  for (std::size_t i = 0; i < u.values.size(); ++i) diff.values[i] = u.values[i] - v.values[i];
  return diff.norm();
}

}  // namespace qprop
