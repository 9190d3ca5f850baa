#pragma once

#include <vector>

#include <Eigen/Dense>

namespace momrl {

// Small dense symmetric-ish tensors (k and d stay desk-scale).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int a, int b, int c) { return data_[(static_cast<size_t>(a) * n_ + b) * n_ + c]; }
  double operator()(int a, int b, int c) const { return data_[(static_cast<size_t>(a) * n_ + b) * n_ + c]; }

  Tensor3& operator+=(const Tensor3& o);
  Tensor3& operator-=(const Tensor3& o);
  Tensor3& operator*=(double c);
  Tensor3 operator+(const Tensor3& o) const { Tensor3 r = *this; r += o; return r; }
  Tensor3 operator-(const Tensor3& o) const { Tensor3 r = *this; r -= o; return r; }
  Tensor3 operator*(double c) const { Tensor3 r = *this; r *= c; return r; }

  // T(I, u, v)_a = sum_{b,c} T_{abc} u_b v_c
  Eigen::VectorXd contract2(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  // T(u, v, w)
  double contract3(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                   const Eigen::VectorXd& w) const;

  void add_outer3(const Eigen::VectorXd& u, double scale);  // += scale * u^{x3}
  void symmetrize();
  double frobenius_norm() const;
  double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n)
      : n_(n), data_(static_cast<size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int a, int b, int c, int d) {
    return data_[((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return data_[((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d];
  }

  double frobenius_norm() const;
  double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

// v ~ox I: sum_j [v x e_j x e_j + e_j x v x e_j + e_j x e_j x v]
Tensor3 outer_tilde_vector(const Eigen::VectorXd& v);

// M ~ox I for symmetric M: six placements of (M, I) over four slots, summed
// over the eigendecomposition of M; decomposition-independent. Input is
// symmetrized; *asymmetry (optional) reports max |M - M^T| seen.
Tensor4 outer_tilde_matrix(const Eigen::MatrixXd& m, double* asymmetry = nullptr);

}  // namespace momrl
