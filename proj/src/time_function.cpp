#include "qprop/time_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qprop/error.hpp"

namespace qprop {

struct TimeFunction::Node {
  virtual ~Node() = default;
  virtual Kind kind() const = 0;
  virtual double value(double t) const = 0;
  virtual double slope(double t) const = 0;
  virtual std::shared_ptr<const Node> derivative() const = 0;
  virtual std::string describe() const = 0;
  virtual const double* constant_value() const { return nullptr; }
};

namespace {

using NodePtr = std::shared_ptr<const TimeFunction::Node>;
using Kind = TimeFunction::Kind;

struct ConstantNode final : TimeFunction::Node {
  double v;
  explicit ConstantNode(double value) : v(value) {}
  Kind kind() const override { return Kind::constant; }
  double value(double) const override { return v; }
  double slope(double) const override { return 0.0; }
  NodePtr derivative() const override { return std::make_shared<ConstantNode>(0.0); }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }
  const double* constant_value() const override { return &v; }
};

NodePtr make_constant(double v) { return std::make_shared<ConstantNode>(v); }

struct PolynomialNode final : TimeFunction::Node {
  std::vector<double> c;
  explicit PolynomialNode(std::vector<double> coeffs) : c(std::move(coeffs)) {}
  Kind kind() const override { return Kind::polynomial; }
  double value(double t) const override {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
  }
  double slope(double t) const override {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * c[k];
    return acc;
  }
  NodePtr derivative() const override {
    if (c.size() <= 1) return make_constant(0.0);
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    return std::make_shared<PolynomialNode>(std::move(d));
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "poly[";
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
    os << "]";
    return os.str();
  }
};

struct SinusoidNode final : TimeFunction::Node {
  double offset, a, b, w;
  SinusoidNode(double off, double cos_amp, double sin_amp, double omega)
      : offset(off), a(cos_amp), b(sin_amp), w(omega) {}
  Kind kind() const override { return Kind::sinusoid; }
  double value(double t) const override {
    return offset + a * std::cos(w * t) + b * std::sin(w * t);
  }
  double slope(double t) const override {
    return -a * w * std::sin(w * t) + b * w * std::cos(w * t);
  }
  NodePtr derivative() const override {
    return std::make_shared<SinusoidNode>(0.0, b * w, -a * w, w);
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "sin[" << offset << "," << a << "," << b << "," << w << "]";
    return os.str();
  }
};

struct HyperbolicNode final : TimeFunction::Node {
  double offset, a, b, w;
  HyperbolicNode(double off, double cosh_amp, double sinh_amp, double omega)
      : offset(off), a(cosh_amp), b(sinh_amp), w(omega) {}
  Kind kind() const override { return Kind::hyperbolic; }
  double value(double t) const override {
    return offset + a * std::cosh(w * t) + b * std::sinh(w * t);
  }
  double slope(double t) const override {
    return a * w * std::sinh(w * t) + b * w * std::cosh(w * t);
  }
  NodePtr derivative() const override {
    return std::make_shared<HyperbolicNode>(0.0, b * w, a * w, w);
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "sinh[" << offset << "," << a << "," << b << "," << w << "]";
    return os.str();
  }
};

// Natural cubic spline; `order` selects which derivative of the spline the
// node represents (0 = the spline itself).
struct SplineNode final : TimeFunction::Node {
  struct Data {
    std::vector<double> t, v, m;  // knots, values, second derivatives
  };
  std::shared_ptr<const Data> data;
  int order;

  SplineNode(std::shared_ptr<const Data> d, int ord) : data(std::move(d)), order(ord) {}

  Kind kind() const override { return Kind::tabulated; }

  std::size_t locate(double t) const {
    const auto& k = data->t;
    if (t < k.front() || t > k.back() || !std::isfinite(t)) {
      std::ostringstream os;
      os << "t=" << t << " outside tabulated range [" << k.front() << ", " << k.back() << "]";
      throw Error("coefficients", "DOMAIN", os.str());
    }
    auto it = std::upper_bound(k.begin(), k.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(k.begin(), it));
    return std::min(i == 0 ? 0 : i - 1, k.size() - 2);
  }

  double eval(double t, int ord) const {
    const std::size_t i = locate(t);
    const auto& d = *data;
    const double h = d.t[i + 1] - d.t[i];
    const double l = d.t[i + 1] - t;
    const double r = t - d.t[i];
    const double mi = d.m[i], mj = d.m[i + 1];
    switch (ord) {
      case 0:
        return mi * l * l * l / (6 * h) + mj * r * r * r / (6 * h) +
               (d.v[i] / h - mi * h / 6) * l + (d.v[i + 1] / h - mj * h / 6) * r;
      case 1:
        return -mi * l * l / (2 * h) + mj * r * r / (2 * h) - (d.v[i] / h - mi * h / 6) +
               (d.v[i + 1] / h - mj * h / 6);
      case 2:
        return mi * l / h + mj * r / h;
      case 3:
        return (mj - mi) / h;
      default:
        return 0.0;
    }
  }

  double value(double t) const override { return eval(t, order); }
  double slope(double t) const override { return eval(t, order + 1); }
  NodePtr derivative() const override {
    return std::make_shared<SplineNode>(data, order + 1);
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "table[" << data->t.size() << " knots";
    if (order > 0) os << ", d" << order;
    os << "]";
    return os.str();
  }
};

struct SumNode final : TimeFunction::Node {
  NodePtr l, r;
  SumNode(NodePtr a, NodePtr b) : l(std::move(a)), r(std::move(b)) {}
  Kind kind() const override { return Kind::composite; }
  double value(double t) const override { return l->value(t) + r->value(t); }
  double slope(double t) const override { return l->slope(t) + r->slope(t); }
  NodePtr derivative() const override;
  std::string describe() const override {
    return "(" + l->describe() + " + " + r->describe() + ")";
  }
};

struct ProductNode final : TimeFunction::Node {
  NodePtr l, r;
  ProductNode(NodePtr a, NodePtr b) : l(std::move(a)), r(std::move(b)) {}
  Kind kind() const override { return Kind::composite; }
  double value(double t) const override { return l->value(t) * r->value(t); }
  double slope(double t) const override {
    return l->slope(t) * r->value(t) + l->value(t) * r->slope(t);
  }
  NodePtr derivative() const override;
  std::string describe() const override {
    return "(" + l->describe() + " * " + r->describe() + ")";
  }
};

struct QuotientNode final : TimeFunction::Node {
  NodePtr n, d;
  QuotientNode(NodePtr num, NodePtr den) : n(std::move(num)), d(std::move(den)) {}
  Kind kind() const override { return Kind::composite; }
  double value(double t) const override { return n->value(t) / d->value(t); }
  double slope(double t) const override {
    const double dv = d->value(t);
    return (n->slope(t) * dv - n->value(t) * d->slope(t)) / (dv * dv);
  }
  NodePtr derivative() const override;
  std::string describe() const override {
    return "(" + n->describe() + " / " + d->describe() + ")";
  }
};

struct PowerNode final : TimeFunction::Node {
  NodePtr base;
  double p;
  PowerNode(NodePtr b, double exponent) : base(std::move(b)), p(exponent) {}
  Kind kind() const override { return Kind::composite; }
  double value(double t) const override { return std::pow(base->value(t), p); }
  double slope(double t) const override {
    return p * std::pow(base->value(t), p - 1.0) * base->slope(t);
  }
  NodePtr derivative() const override;
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "(" << base->describe() << ")^" << p;
    return os.str();
  }
};

bool is_const(const NodePtr& n, double v) {
  const double* c = n->constant_value();
  return c && *c == v;
}

NodePtr add(const NodePtr& a, const NodePtr& b) {
  const double* ca = a->constant_value();
  const double* cb = b->constant_value();
  if (ca && cb) return make_constant(*ca + *cb);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return std::make_shared<SumNode>(a, b);
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
  const double* ca = a->constant_value();
  const double* cb = b->constant_value();
  if (ca && cb) return make_constant(*ca * *cb);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return std::make_shared<ProductNode>(a, b);
}

NodePtr divide(const NodePtr& a, const NodePtr& b) {
  const double* ca = a->constant_value();
  const double* cb = b->constant_value();
  if (ca && cb) return make_constant(*ca / *cb);
  if (is_const(a, 0.0)) return make_constant(0.0);
  if (is_const(b, 1.0)) return a;
  return std::make_shared<QuotientNode>(a, b);
}

NodePtr power(const NodePtr& a, double p) {
  if (const double* ca = a->constant_value()) return make_constant(std::pow(*ca, p));
  if (p == 0.0) return make_constant(1.0);
  if (p == 1.0) return a;
  return std::make_shared<PowerNode>(a, p);
}

NodePtr SumNode::derivative() const { return add(l->derivative(), r->derivative()); }

NodePtr ProductNode::derivative() const {
  return add(mul(l->derivative(), r), mul(l, r->derivative()));
}

NodePtr QuotientNode::derivative() const {
  NodePtr num = add(mul(n->derivative(), d), mul(make_constant(-1.0), mul(n, d->derivative())));
  return divide(num, mul(d, d));
}

NodePtr PowerNode::derivative() const {
  return mul(mul(make_constant(p), power(base, p - 1.0)), base->derivative());
}

}  // namespace

TimeFunction::TimeFunction() : node_(make_constant(0.0)) {}

TimeFunction::TimeFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

TimeFunction TimeFunction::constant(double value) {
  if (!std::isfinite(value)) throw Error("coefficients", "INVALID_FUNCTION", "non-finite constant");
  return TimeFunction(make_constant(value));
}

TimeFunction TimeFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) return constant(0.0);
  for (double c : coeffs)
    if (!std::isfinite(c))
      throw Error("coefficients", "INVALID_FUNCTION", "non-finite polynomial coefficient");
  if (coeffs.size() == 1) return constant(coeffs[0]);
  return TimeFunction(std::make_shared<PolynomialNode>(std::move(coeffs)));
}

TimeFunction TimeFunction::sinusoid(double offset, double cos_amp, double sin_amp, double omega) {
  if (!std::isfinite(offset) || !std::isfinite(cos_amp) || !std::isfinite(sin_amp) ||
      !std::isfinite(omega))
    throw Error("coefficients", "INVALID_FUNCTION", "non-finite sinusoid parameter");
  return TimeFunction(std::make_shared<SinusoidNode>(offset, cos_amp, sin_amp, omega));
}

TimeFunction TimeFunction::hyperbolic(double offset, double cosh_amp, double sinh_amp, double omega) {
  if (!std::isfinite(offset) || !std::isfinite(cosh_amp) || !std::isfinite(sinh_amp) ||
      !std::isfinite(omega))
    throw Error("coefficients", "INVALID_FUNCTION", "non-finite hyperbolic parameter");
  return TimeFunction(std::make_shared<HyperbolicNode>(offset, cosh_amp, sinh_amp, omega));
}

TimeFunction TimeFunction::tabulated(std::vector<double> knots, std::vector<double> values) {
  const std::size_t n = knots.size();
  if (n < 2 || values.size() != n)
    throw Error("coefficients", "INVALID_FUNCTION",
                "tabulated function needs >= 2 knots and matching values");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(knots[i]) || !std::isfinite(values[i]))
      throw Error("coefficients", "INVALID_FUNCTION", "non-finite table entry");
    if (i > 0 && !(knots[i] > knots[i - 1]))
      throw Error("coefficients", "INVALID_FUNCTION", "tabulated knots must increase strictly");
  }
  // Natural spline: M_0 = M_{n-1} = 0, tridiagonal solve for the interior.
  std::vector<double> m(n, 0.0);
  if (n > 2) {
    std::vector<double> diag(n - 2), upper(n - 2), rhs(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = knots[i] - knots[i - 1];
      const double h1 = knots[i + 1] - knots[i];
      diag[i - 1] = (h0 + h1) / 3.0;
      upper[i - 1] = h1 / 6.0;
      rhs[i - 1] = (values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0;
    }
    for (std::size_t k = 1; k < n - 2; ++k) {
      const double lower = (knots[k + 1] - knots[k]) / 6.0;
      const double w = lower / diag[k - 1];
      diag[k] -= w * upper[k - 1];
      rhs[k] -= w * rhs[k - 1];
    }
    m[n - 2] = rhs[n - 3] / diag[n - 3];
    for (std::size_t k = n - 3; k-- > 0;) m[k + 1] = (rhs[k] - upper[k] * m[k + 2]) / diag[k];
  }
  auto data = std::make_shared<SplineNode::Data>();
  data->t = std::move(knots);
  data->v = std::move(values);
  data->m = std::move(m);
  return TimeFunction(std::make_shared<SplineNode>(std::move(data), 0));
}

double TimeFunction::operator()(double t) const { return node_->value(t); }
double TimeFunction::derivative(double t) const { return node_->slope(t); }
TimeFunction TimeFunction::derivative_function() const { return TimeFunction(node_->derivative()); }
TimeFunction TimeFunction::pow(double exponent) const { return TimeFunction(power(node_, exponent)); }
TimeFunction::Kind TimeFunction::kind() const { return node_->kind(); }
bool TimeFunction::is_zero() const { return is_const(node_, 0.0); }
std::string TimeFunction::describe() const { return node_->describe(); }

TimeFunction operator+(const TimeFunction& lhs, const TimeFunction& rhs) {
  return TimeFunction(add(lhs.node_, rhs.node_));
}
TimeFunction operator-(const TimeFunction& lhs, const TimeFunction& rhs) {
  return TimeFunction(add(lhs.node_, mul(make_constant(-1.0), rhs.node_)));
}
TimeFunction operator*(const TimeFunction& lhs, const TimeFunction& rhs) {
  return TimeFunction(mul(lhs.node_, rhs.node_));
}
TimeFunction operator/(const TimeFunction& lhs, const TimeFunction& rhs) {
  return TimeFunction(divide(lhs.node_, rhs.node_));
}
TimeFunction operator*(double scale, const TimeFunction& f) {
  return TimeFunction(mul(make_constant(scale), f.node_));
}
TimeFunction operator-(const TimeFunction& f) {
  return TimeFunction(mul(make_constant(-1.0), f.node_));
}

}  // namespace qprop
