#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "momrl/rng.hpp"
#include "momrl/tensor.hpp"

using namespace momrl;

namespace {

// literal triple-loop construction of v ~ox I
Tensor3 loop_outer_tilde_vector(const Eigen::VectorXd& v) {
  const int d = static_cast<int>(v.size());
  Tensor3 t(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double val = 0.0;
        if (b == c) val += v[a];
        if (a == c) val += v[b];
        if (a == b) val += v[c];
        t(a, b, c) = val;
      }
  return t;
}

// literal construction of M ~ox I from an explicit eigendecomposition
Tensor4 loop_outer_tilde_matrix(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const int d = static_cast<int>(m.rows());
  Tensor4 t(d);
  for (int i = 0; i < d; ++i) {
    double s = es.eigenvalues()[i];
    Eigen::VectorXd v = es.eigenvectors().col(i);
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(d, j);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c)
            for (int f = 0; f < d; ++f) {
              double acc = v[a] * v[b] * e[c] * e[f];  // A1
              acc += v[a] * e[b] * v[c] * e[f];        // A2
              acc += e[a] * v[b] * v[c] * e[f];        // A3
              acc += v[a] * e[b] * e[c] * v[f];        // A4
              acc += e[a] * v[b] * e[c] * v[f];        // A5
              acc += e[a] * e[b] * v[c] * v[f];        // A6
              t(a, b, c, f) += s * acc;
            }
    }
  }
  return t;
}

double max_diff3(const Tensor3& a, const Tensor3& b) {
  double m = 0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k)
        m = std::max(m, std::abs(a(i, j, k) - b(i, j, k)));
  return m;
}

double max_diff4(const Tensor4& a, const Tensor4& b) {
  double m = 0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k)
        for (int l = 0; l < a.dim(); ++l)
          m = std::max(m, std::abs(a(i, j, k, l) - b(i, j, k, l)));
  return m;
}

}  // namespace

TEST_CASE("outer_tilde_vector: d=1 scalar is 3c") {
  Eigen::VectorXd v(1);
  v << 1.7;
  Tensor3 t = outer_tilde_vector(v);
  CHECK(t(0, 0, 0) == doctest::Approx(3 * 1.7));
}

TEST_CASE("outer_tilde_vector matches the literal loop on random vectors") {
  std::mt19937_64 rng(3);
  for (int d : {2, 3, 5}) {
    Eigen::VectorXd v = gaussian_vector(d, rng);
    CHECK(max_diff3(outer_tilde_vector(v), loop_outer_tilde_vector(v)) < 1e-12);
  }
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2, 0);
  CHECK(max_diff3(outer_tilde_vector(e1), loop_outer_tilde_vector(e1)) < 1e-15);
}

TEST_CASE("outer_tilde_vector of zero is zero") {
  Tensor3 t = outer_tilde_vector(Eigen::VectorXd::Zero(3));
  CHECK(t.max_abs() == 0.0);
}

TEST_CASE("outer_tilde_matrix: I in d=1 gives 6") {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(1, 1);
  Tensor4 t = outer_tilde_matrix(id);
  CHECK(t(0, 0, 0, 0) == doctest::Approx(6.0));
}

TEST_CASE("outer_tilde_matrix matches the eigendecomposition loop") {
  std::mt19937_64 rng(11);
  Eigen::MatrixXd e11 = Eigen::MatrixXd::Zero(2, 2);
  e11(0, 0) = 1.0;
  CHECK(max_diff4(outer_tilde_matrix(e11), loop_outer_tilde_matrix(e11)) < 1e-12);
  for (int d : {2, 4}) {
    Eigen::MatrixXd g = gaussian_matrix(d, d, rng);
    Eigen::MatrixXd m = 0.5 * (g + g.transpose());
    CHECK(max_diff4(outer_tilde_matrix(m), loop_outer_tilde_matrix(m)) < 1e-10);
  }
}

TEST_CASE("outer_tilde_matrix of zero is zero, asymmetry reported") {
  Tensor4 t = outer_tilde_matrix(Eigen::MatrixXd::Zero(3, 3));
  CHECK(t.max_abs() == 0.0);
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.5, 0.1, 2.0;
  double asym = 0;
  outer_tilde_matrix(m, &asym);
  CHECK(asym == doctest::Approx(0.4));
}

TEST_CASE("tensor3 contraction helpers") {
  std::mt19937_64 rng(5);
  Tensor3 t(3);
  Eigen::VectorXd u = gaussian_vector(3, rng);
  t.add_outer3(u, 2.0);
  Eigen::VectorXd w = t.contract2(u, u);
  double u2 = u.squaredNorm();
  CHECK((w - 2.0 * u2 * u2 * u).norm() < 1e-12);
  CHECK(t.contract3(u, u, u) == doctest::Approx(2.0 * u2 * u2 * u2));
}
