#include "momrl/two_layer_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "momrl/errors.hpp"
#include "momrl/rng.hpp"

namespace momrl {

TwoLayerNet::TwoLayerNet(Eigen::VectorXi signs, Eigen::MatrixXd weights,
                         Activation act)
    : signs_(std::move(signs)), weights_(std::move(weights)), act_(std::move(act)) {
  if (signs_.size() != weights_.rows())
    throw ValidationError("TwoLayerNet: sign/weight row mismatch");
  for (int i = 0; i < signs_.size(); ++i)
    if (signs_[i] != 1 && signs_[i] != -1)
      throw ValidationError("TwoLayerNet: signs must be +-1");
}

double TwoLayerNet::eval(const Eigen::VectorXd& x) const {
  double acc = 0.0;
  for (int i = 0; i < width(); ++i)
    acc += signs_[i] * act_.value(weights_.row(i).dot(x));
  return acc;
}

Eigen::VectorXd TwoLayerNet::eval_batch(const Eigen::MatrixXd& x_rows) const {
  Eigen::MatrixXd z = x_rows * weights_.transpose();  // n x k
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x_rows.rows());
  for (int i = 0; i < width(); ++i) {
    double s = signs_[i];
    for (int r = 0; r < z.rows(); ++r) out[r] += s * act_.value(z(r, i));
  }
  return out;
}

TwoLayerNet::Conditioning TwoLayerNet::conditioning() const {
  Conditioning c;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(weights_);
  c.singular_values = svd.singularValues();
  c.frobenius = weights_.norm();
  double smin = c.singular_values[c.singular_values.size() - 1];
  double smax = c.singular_values[0];
  c.full_row_rank = smin > 1e-12 * std::max(1.0, smax);
  if (c.full_row_rank) {
    c.kappa = smax / smin;
    double prod = 1.0;
    for (int i = 0; i < c.singular_values.size(); ++i) prod *= c.singular_values[i] / smin;
    c.lambda = prod;
  }
  return c;
}

namespace {

int first_nonzero_sign(const Eigen::VectorXd& row, double tol = 1e-12) {
  for (int j = 0; j < row.size(); ++j) {
    if (std::abs(row[j]) > tol) return row[j] > 0 ? 1 : -1;
  }
  return 0;
}

bool row_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  int sa = first_nonzero_sign(a), sb = first_nonzero_sign(b);
  if (sa != sb) return sa > sb;  // positive-leading rows first
  for (int j = 0; j < a.size(); ++j) {
    if (a[j] != b[j]) return a[j] < b[j];
  }
  return false;
}

}  // namespace

TwoLayerNet TwoLayerNet::canonical() const {
  std::vector<int> order(width());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return row_less(weights_.row(i), weights_.row(j));
  });
  Eigen::MatrixXd w(width(), dim());
  Eigen::VectorXi s(width());
  for (int i = 0; i < width(); ++i) {
    w.row(i) = weights_.row(order[i]);
    s[i] = signs_[order[i]];
  }
  return TwoLayerNet(std::move(s), std::move(w), act_);
}

TwoLayerNet random_planted_net(int k, int d, const Eigen::VectorXi& signs,
                               const Eigen::VectorXd& row_norms, const Activation& act,
                               std::mt19937_64& rng, bool orthogonal_rows) {
  if (k > d) throw ValidationError("random_planted_net: k must be <= d");
  Eigen::MatrixXd g = gaussian_matrix(d, k, rng);
  Eigen::MatrixXd w(k, d);
  if (orthogonal_rows) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
    w = q.transpose();
  } else {
    for (int i = 0; i < k; ++i) w.row(i) = g.col(i).normalized().transpose();
  }
  for (int i = 0; i < k; ++i) w.row(i) *= row_norms[i];
  return TwoLayerNet(signs, std::move(w), act);
}

NetComparison compare_nets(const TwoLayerNet& planted, const TwoLayerNet& recovered) {
  NetComparison out;
  TwoLayerNet a = planted.canonical();
  TwoLayerNet b = recovered.canonical();
  const int k = a.width();
  out.row_errors.resize(k);
  for (int i = 0; i < k; ++i) {
    double denom = std::max(a.weights().row(i).norm(), 1e-300);
    out.row_errors[i] = (a.weights().row(i) - b.weights().row(i)).norm() / denom;
  }
  out.max_row_error = out.row_errors.maxCoeff();
  out.rel_frobenius = (a.weights() - b.weights()).norm() / std::max(a.weights().norm(), 1e-300);
  out.signs_match = (a.signs() == b.signs());
  return out;
}

}  // namespace momrl
