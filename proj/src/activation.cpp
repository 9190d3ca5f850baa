#include "momrl/activation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "momrl/errors.hpp"

namespace momrl {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// n-point Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
struct GlRule {
  std::vector<double> nodes, weights;
};

const GlRule& gl_rule(int n) {
  static std::mutex mu;
  static std::unordered_map<int, GlRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GlRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double integrate_panel(double a, double b, const GlRule& rule,
                       double (*f)(double, const void*), const void* ctx, int j) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double z = mid + half * rule.nodes[i];
    double powz = 1.0;
    for (int t = 0; t < j; ++t) powz *= z;
    acc += rule.weights[i] * f(z, ctx) * powz * kInvSqrt2Pi * std::exp(-0.5 * z * z);
  }
  return acc * half;
}

struct SigmaCtx {
  const Activation* act;
  double s;
  int which;  // 0: sigma, 1: sigma', 2: sigma'^2
};

double sigma_eval(double z, const void* ctx) {
  const auto* c = static_cast<const SigmaCtx*>(ctx);
  double v;
  switch (c->which) {
    case 0:
      v = c->act->value(c->s * z);
      break;
    case 1:
      v = c->act->derivative(c->s * z);
      break;
    default: {
      double d = c->act->derivative(c->s * z);
      v = d * d;
    }
  }
  return v;
}

}  // namespace

double gaussian_weighted_moment(const std::vector<double>& kinks,
                                double (*f)(double, const void*), const void* ctx,
                                int j, int nodes_per_side) {
  // Breakpoints plus +-12 sigma cutoff (tail mass < 1e-31).
  std::vector<double> pts{-12.0, 12.0};
  for (double k : kinks)
    if (k > -12.0 && k < 12.0) pts.push_back(k);
  std::sort(pts.begin(), pts.end());
  const int panels = 10;
  const GlRule& rule = gl_rule(std::max(4, nodes_per_side / panels));
  double total = 0.0;
  for (size_t seg = 0; seg + 1 < pts.size(); ++seg) {
    double a = pts[seg], b = pts[seg + 1];
    for (int p = 0; p < panels; ++p) {
      double pa = a + (b - a) * p / panels;
      double pb = a + (b - a) * (p + 1) / panels;
      total += integrate_panel(pa, pb, rule, f, ctx, j);
    }
  }
  return total;
}

Activation::Activation(Kind kind, double param) : kind_(kind), param_(param) {
  switch (kind_) {
    case Kind::relu:
      p_ = 0;
      l1_ = 1.0;
      kinks_ = {0.0};
      break;
    case Kind::leaky_relu:
      p_ = 0;
      l1_ = 1.0;
      kinks_ = {0.0};
      break;
    case Kind::squared_relu:
      p_ = 1;
      l1_ = 2.0;
      kinks_ = {0.0};
      break;
    case Kind::power: {
      int q = static_cast<int>(param_);
      if (q < 1) throw ValidationError("power activation requires degree >= 1");
      p_ = q - 1;
      l1_ = q;
      kinks_ = {};
      break;
    }
  }
}

Activation Activation::relu() { return Activation(Kind::relu, 0.0); }
Activation Activation::leaky_relu(double slope) {
  return Activation(Kind::leaky_relu, slope);
}
Activation Activation::squared_relu() {
  return Activation(Kind::squared_relu, 0.0);
}
Activation Activation::power(int degree) {
  return Activation(Kind::power, degree);
}

std::string Activation::name() const {
  switch (kind_) {
    case Kind::relu:
      return "relu";
    case Kind::leaky_relu:
      return "leaky_relu";
    case Kind::squared_relu:
      return "squared_relu";
    case Kind::power:
      return "power" + std::to_string(static_cast<int>(param_));
  }
  return "?";
}

double Activation::value(double z) const {
  switch (kind_) {
    case Kind::relu:
      return z > 0.0 ? z : 0.0;
    case Kind::leaky_relu:
      return z > 0.0 ? z : param_ * z;
    case Kind::squared_relu:
      return z > 0.0 ? z * z : 0.0;
    case Kind::power: {
      double r = 1.0;
      for (int i = 0; i < static_cast<int>(param_); ++i) r *= z;
      return r;
    }
  }
  return 0.0;
}

double Activation::derivative(double z) const {
  switch (kind_) {
    case Kind::relu:
      return z > 0.0 ? 1.0 : 0.0;
    case Kind::leaky_relu:
      return z > 0.0 ? 1.0 : param_;
    case Kind::squared_relu:
      return z > 0.0 ? 2.0 * z : 0.0;
    case Kind::power: {
      int q = static_cast<int>(param_);
      double r = q;
      for (int i = 0; i < q - 1; ++i) r *= z;
      return r;
    }
  }
  return 0.0;
}

double Activation::gamma(int j, double s) const {
  if (s <= 0.0) throw ValidationError("gamma requires s > 0");
  if (j < 0 || j > 4) throw ValidationError("gamma index out of range");
  SigmaCtx ctx{this, s, 0};
  return gaussian_weighted_moment(kinks_, &sigma_eval, &ctx, j);
}

double Activation::m_coeff(int j, double s) const {
  switch (j) {
    case 1:
      return gamma(1, s);
    case 2:
      return gamma(2, s) - gamma(0, s);
    case 3:
      return gamma(3, s) - 3.0 * gamma(1, s);
    case 4:
      return gamma(4, s) + 3.0 * gamma(0, s) - 6.0 * gamma(2, s);
    default:
      throw ValidationError("m_coeff index out of range");
  }
}

std::array<double, 4> Activation::c_constants() const {
  return {m_coeff(1, 1.0), m_coeff(2, 1.0), m_coeff(3, 1.0), m_coeff(4, 1.0)};
}

double Activation::alpha_q(int q, double z) const {
  if (z <= 0.0) throw ValidationError("alpha_q requires z > 0");
  SigmaCtx ctx{this, z, 1};
  return gaussian_weighted_moment(kinks_, &sigma_eval, &ctx, q);
}

double Activation::beta_q(int q, double z) const {
  if (z <= 0.0) throw ValidationError("beta_q requires z > 0");
  SigmaCtx ctx{this, z, 2};
  return gaussian_weighted_moment(kinks_, &sigma_eval, &ctx, q);
}

double Activation::rho(double z) const {
  double a0 = alpha_q(0, z), a1 = alpha_q(1, z), a2 = alpha_q(2, z);
  double b0 = beta_q(0, z), b2 = beta_q(2, z);
  return std::min({b0 - a0 * a0 - a1 * a1, b2 - a1 * a1 - a2 * a2,
                   a0 * a2 - a1 * a1});
}

}  // namespace momrl
