#include "momrl/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "momrl/errors.hpp"

namespace momrl {

Tensor3& Tensor3::operator+=(const Tensor3& o) {
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double c) {
  for (double& x : data_) x *= c;
  return *this;
}

Eigen::VectorXd Tensor3::contract2(const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
  for (int a = 0; a < n_; ++a) {
    double acc = 0.0;
    for (int b = 0; b < n_; ++b) {
      double ub = u[b];
      if (ub == 0.0) continue;
      for (int c = 0; c < n_; ++c) acc += (*this)(a, b, c) * ub * v[c];
    }
    out[a] = acc;
  }
  return out;
}

double Tensor3::contract3(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                          const Eigen::VectorXd& w) const {
  double acc = 0.0;
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c) acc += (*this)(a, b, c) * u[a] * v[b] * w[c];
  return acc;
}

void Tensor3::add_outer3(const Eigen::VectorXd& u, double scale) {
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c) (*this)(a, b, c) += scale * u[a] * u[b] * u[c];
}

void Tensor3::symmetrize() {
  Tensor3 s(n_);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c) {
        double v = (*this)(a, b, c) + (*this)(a, c, b) + (*this)(b, a, c) +
                   (*this)(b, c, a) + (*this)(c, a, b) + (*this)(c, b, a);
        s(a, b, c) = v / 6.0;
      }
  *this = s;
}

double Tensor3::frobenius_norm() const {
  double acc = 0.0;
  for (double x : data_) acc += x * x;
  return std::sqrt(acc);
}

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double Tensor4::frobenius_norm() const {
  double acc = 0.0;
  for (double x : data_) acc += x * x;
  return std::sqrt(acc);
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Tensor3 outer_tilde_vector(const Eigen::VectorXd& v) {
  const int d = static_cast<int>(v.size());
  Tensor3 t(d);
  for (int j = 0; j < d; ++j) {
    for (int a = 0; a < d; ++a) {
      t(a, j, j) += v[a];
      t(j, a, j) += v[a];
      t(j, j, a) += v[a];
    }
  }
  return t;
}

Tensor4 outer_tilde_matrix(const Eigen::MatrixXd& m, double* asymmetry) {
  if (m.rows() != m.cols()) throw ValidationError("outer_tilde_matrix: square input required");
  double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry) *asymmetry = asym;
  Eigen::MatrixXd s = 0.5 * (m + m.transpose());
  const int d = static_cast<int>(s.rows());
  Tensor4 t(d);
  // Summing the six A_{l,i,j} placements over any decomposition of M reduces
  // to the six (M, delta) slot patterns.
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double v = 0.0;
          if (c == e) v += s(a, b);
          if (b == e) v += s(a, c);
          if (b == c) v += s(a, e);
          if (a == e) v += s(b, c);
          if (a == c) v += s(b, e);
          if (a == b) v += s(c, e);
          t(a, b, c, e) = v;
        }
  return t;
}

}  // namespace momrl
