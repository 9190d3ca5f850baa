#pragma once

#include <array>
#include <string>
#include <vector>

namespace momrl {

// Homogeneous activations used by the planted networks and the moment
// machinery. All four kinds satisfy sigma(c z) = c^{p+1} sigma(z) for c > 0,
// where p is the growth exponent of sigma'.
class Activation {
 public:
  enum class Kind { relu, leaky_relu, squared_relu, power };

  static Activation relu();
  static Activation leaky_relu(double slope = 0.01);
  static Activation squared_relu();
  static Activation power(int degree);  // sigma(z) = z^degree

  Kind kind() const { return kind_; }
  std::string name() const;

  double value(double z) const;       // sigma
  double derivative(double z) const;  // sigma' (0 at the ReLU kink)

  // sigma'(x) <= l1_constant * |x|^growth_exponent
  int growth_exponent() const { return p_; }
  double l1_constant() const { return l1_; }

  // Breakpoints where sigma is not smooth; quadrature splits there.
  const std::vector<double>& kinks() const { return kinks_; }

  // gamma_j(s) = E_{z~N(0,1)}[sigma(s z) z^j], j in 0..4
  double gamma(int j, double s) const;

  // m_1 = g1, m_2 = g2 - g0, m_3 = g3 - 3 g1, m_4 = g4 + 3 g0 - 6 g2
  double m_coeff(int j, double s) const;

  // c_j with m_j(s) = c_j s^{p+1}
  std::array<double, 4> c_constants() const;

  // alpha_q(z) = E[sigma'(z x) x^q], beta_q(z) = E[sigma'^2(z x) x^q]
  double alpha_q(int q, double z) const;
  double beta_q(int q, double z) const;
  // rho(z) = min{b0 - a0^2 - a1^2, b2 - a1^2 - a2^2, a0 a2 - a1^2}
  double rho(double z) const;

 private:
  Activation(Kind kind, double param);

  Kind kind_;
  double param_ = 0.0;  // leaky slope or power degree
  int p_ = 0;
  double l1_ = 1.0;
  std::vector<double> kinks_;
};

// E_{z~N(0,1)}[f(z) z^j] by composite Gauss-Legendre against the Gaussian
// weight, split at the given breakpoints; nodes_per_side ~ 200 keeps the
// absolute error below 1e-10 for piecewise-polynomial f.
double gaussian_weighted_moment(const std::vector<double>& kinks,
                                double (*f)(double, const void*), const void* ctx,
                                int j, int nodes_per_side = 200);

}  // namespace momrl
