#pragma once

#include <random>

#include <Eigen/Dense>

#include "momrl/activation.hpp"

namespace momrl {

// f(x) = sum_i v_i sigma(w_i^T x), v in {+-1}^k, rows w_i of W.
class TwoLayerNet {
 public:
  TwoLayerNet(Eigen::VectorXi signs, Eigen::MatrixXd weights, Activation act);

  int width() const { return static_cast<int>(weights_.rows()); }
  int dim() const { return static_cast<int>(weights_.cols()); }
  const Eigen::VectorXi& signs() const { return signs_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Activation& activation() const { return act_; }

  double eval(const Eigen::VectorXd& x) const;
  Eigen::VectorXd eval_batch(const Eigen::MatrixXd& x_rows) const;

  struct Conditioning {
    Eigen::VectorXd singular_values;  // descending
    double kappa = 0.0;               // s_max / s_min
    double lambda = 0.0;              // prod s_i / s_min^k
    double frobenius = 0.0;
    bool full_row_rank = false;
  };
  Conditioning conditioning() const;

  // Rows reordered by (sign of first nonzero coordinate, lexicographic),
  // signs permuted along. Recovered/planted pairs sorted this way compare
  // row by row.
  TwoLayerNet canonical() const;

 private:
  Eigen::VectorXi signs_;
  Eigen::MatrixXd weights_;
  Activation act_;
};

// Random planted net with near-orthonormal rows scaled to the given norms.
TwoLayerNet random_planted_net(int k, int d, const Eigen::VectorXi& signs,
                               const Eigen::VectorXd& row_norms, const Activation& act,
                               std::mt19937_64& rng, bool orthogonal_rows = true);

struct NetComparison {
  Eigen::VectorXd row_errors;      // ||w_hat_i - w_i|| / ||w_i|| after canonical sort
  double max_row_error = 0.0;
  double rel_frobenius = 0.0;      // ||W_hat - W||_F / ||W||_F
  bool signs_match = false;
};

NetComparison compare_nets(const TwoLayerNet& planted, const TwoLayerNet& recovered);

}  // namespace momrl
