#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they check: closed-form Gaussian moments from half-normal algebra, moment
// tensors assembled by literal loops, and finite-difference gradients.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "momrl/sample_batch.hpp"
#include "momrl/tensor.hpp"

namespace oracle {

inline constexpr double kSq2Pi = 2.5066282746310005024;

// E[z^m 1{z>0}] for z ~ N(0,1): E0 = 1/2, E1 = 1/sqrt(2 pi),
// Em = (m-1) E_{m-2}.
inline double half_moment(int m) {
  if (m == 0) return 0.5;
  if (m == 1) return 1.0 / kSq2Pi;
  return (m - 1) * half_moment(m - 2);
}

// gamma_j(s) = E[sigma(s z) z^j] for relu / leaky relu / squared relu /
// integer power, via half moments.
inline double gamma_relu(int j, double s) { return s * half_moment(j + 1); }

inline double gamma_leaky(int j, double s, double slope) {
  // sigma(sz) = s z on z > 0, slope * s * z on z < 0
  double pos = s * half_moment(j + 1);
  double neg = slope * s * half_moment(j + 1) * ((j % 2 == 0) ? -1.0 : 1.0);
  return pos + neg;
}

inline double gamma_squared_relu(int j, double s) { return s * s * half_moment(j + 2); }

inline double gamma_power(int j, double s, int q) {
  int m = j + q;
  double full = (m % 2 == 1) ? 0.0 : 2.0 * half_moment(m);
  return std::pow(s, q) * full;
}

inline double m_from_gammas(int j, double g0, double g1, double g2, double g3,
                            double g4) {
  switch (j) {
    case 1:
      return g1;
    case 2:
      return g2 - g0;
    case 3:
      return g3 - 3 * g1;
    default:
      return g4 + 3 * g0 - 6 * g2;
  }
}

// Full moment tensors of one sample by literal loops (Hermite-style
// centering; the order-4 identity term uses the three distinct pairings).
inline Eigen::MatrixXd m2_tensor(const Eigen::VectorXd& x, double y) {
  const int d = static_cast<int>(x.size());
  Eigen::MatrixXd t(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) t(a, b) = y * (x[a] * x[b] - (a == b ? 1.0 : 0.0));
  return t;
}

inline momrl::Tensor3 m3_tensor(const Eigen::VectorXd& x, double y) {
  const int d = static_cast<int>(x.size());
  momrl::Tensor3 t(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double v = x[a] * x[b] * x[c];
        v -= x[a] * (b == c ? 1.0 : 0.0);
        v -= x[b] * (a == c ? 1.0 : 0.0);
        v -= x[c] * (a == b ? 1.0 : 0.0);
        t(a, b, c) = y * v;
      }
  return t;
}

inline momrl::Tensor4 m4_tensor(const Eigen::VectorXd& x, double y) {
  const int d = static_cast<int>(x.size());
  momrl::Tensor4 t(d);
  auto dl = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double v = x[a] * x[b] * x[c] * x[e];
          v -= x[a] * x[b] * dl(c, e) + x[a] * x[c] * dl(b, e) +
               x[a] * x[e] * dl(b, c) + x[b] * x[c] * dl(a, e) +
               x[b] * x[e] * dl(a, c) + x[c] * x[e] * dl(a, b);
          v += dl(a, b) * dl(c, e) + dl(a, c) * dl(b, e) + dl(a, e) * dl(b, c);
          t(a, b, c, e) = y * v;
        }
  return t;
}

struct LoopMoments {
  Eigen::VectorXd m1;
  Eigen::MatrixXd m2;
  momrl::Tensor3 m3;
  momrl::Tensor4 m4;
};

inline LoopMoments loop_moments(const momrl::SampleBatch& b) {
  const int d = b.dim();
  LoopMoments m;
  m.m1 = Eigen::VectorXd::Zero(d);
  m.m2 = Eigen::MatrixXd::Zero(d, d);
  m.m3 = momrl::Tensor3(d);
  m.m4 = momrl::Tensor4(d);
  for (int i = 0; i < b.size(); ++i) {
    Eigen::VectorXd x = b.x.row(i).transpose();
    double y = b.y[i];
    m.m1 += y * x;
    m.m2 += m2_tensor(x, y);
    momrl::Tensor3 t3 = m3_tensor(x, y);
    momrl::Tensor4 t4 = m4_tensor(x, y);
    for (int a = 0; a < d; ++a)
      for (int bb = 0; bb < d; ++bb)
        for (int c = 0; c < d; ++c) {
          m.m3(a, bb, c) += t3(a, bb, c);
          for (int e = 0; e < d; ++e) m.m4(a, bb, c, e) += t4(a, bb, c, e);
        }
  }
  double inv = 1.0 / b.size();
  m.m1 *= inv;
  m.m2 *= inv;
  m.m3 *= inv;
  for (int a = 0; a < d; ++a)
    for (int bb = 0; bb < d; ++bb)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) m.m4(a, bb, c, e) *= inv;
  return m;
}

// Contractions of the loop tensors (all tensors here are fully symmetric,
// so slot choice does not matter).
Eigen::MatrixXd contract_p2(const LoopMoments& m, int j2, const Eigen::VectorXd& alpha);
momrl::Tensor3 contract_r3(const LoopMoments& m, int j3, const Eigen::VectorXd& alpha,
                           const Eigen::MatrixXd& v);
Eigen::VectorXd contract_q1(const LoopMoments& m, int l1, const Eigen::VectorXd& alpha);
Eigen::MatrixXd contract_q2(const LoopMoments& m, int l2, const Eigen::VectorXd& alpha,
                            const Eigen::MatrixXd& v);

inline Eigen::MatrixXd contract_p2(const LoopMoments& m, int j2,
                                   const Eigen::VectorXd& alpha) {
  const int d = static_cast<int>(m.m1.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  if (j2 == 2) return m.m2;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      if (j2 == 3) {
        for (int c = 0; c < d; ++c) acc += m.m3(a, b, c) * alpha[c];
      } else {
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e) acc += m.m4(a, b, c, e) * alpha[c] * alpha[e];
      }
      out(a, b) = acc;
    }
  return out;
}

inline momrl::Tensor3 contract_r3(const LoopMoments& m, int j3,
                                  const Eigen::VectorXd& alpha,
                                  const Eigen::MatrixXd& v) {
  const int d = static_cast<int>(m.m1.size());
  const int k = static_cast<int>(v.cols());
  momrl::Tensor3 out(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        double acc = 0.0;
        for (int p = 0; p < d; ++p)
          for (int q = 0; q < d; ++q)
            for (int r = 0; r < d; ++r) {
              if (j3 == 3) {
                acc += m.m3(p, q, r) * v(p, a) * v(q, b) * v(r, c);
              } else {
                for (int s = 0; s < d; ++s)
                  acc += m.m4(p, q, r, s) * v(p, a) * v(q, b) * v(r, c) * alpha[s];
              }
            }
        out(a, b, c) = acc;
      }
  return out;
}

inline Eigen::VectorXd contract_q1(const LoopMoments& m, int l1,
                                   const Eigen::VectorXd& alpha) {
  const int d = static_cast<int>(m.m1.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  switch (l1) {
    case 1:
      return m.m1;
    case 2:
      return m.m2 * alpha;
    case 3:
      for (int a = 0; a < d; ++a) {
        double acc = 0.0;
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c) acc += m.m3(a, b, c) * alpha[b] * alpha[c];
        out[a] = acc;
      }
      return out;
    default:
      for (int a = 0; a < d; ++a) {
        double acc = 0.0;
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c)
            for (int e = 0; e < d; ++e)
              acc += m.m4(a, b, c, e) * alpha[b] * alpha[c] * alpha[e];
        out[a] = acc;
      }
      return out;
  }
}

inline Eigen::MatrixXd contract_q2(const LoopMoments& m, int l2,
                                   const Eigen::VectorXd& alpha,
                                   const Eigen::MatrixXd& v) {
  const int d = static_cast<int>(m.m1.size());
  const int k = static_cast<int>(v.cols());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double acc = 0.0;
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
          if (l2 == 2) {
            acc += m.m2(p, q) * v(p, a) * v(q, b);
          } else if (l2 == 3) {
            for (int r = 0; r < d; ++r)
              acc += m.m3(p, q, r) * v(p, a) * v(q, b) * alpha[r];
          } else {
            for (int r = 0; r < d; ++r)
              for (int s = 0; s < d; ++s)
                acc += m.m4(p, q, r, s) * v(p, a) * v(q, b) * alpha[r] * alpha[s];
          }
        }
      out(a, b) = acc;
    }
  return out;
}

// Central finite differences of a scalar function of a matrix.
template <typename F>
Eigen::MatrixXd fd_gradient(const F& f, const Eigen::MatrixXd& w, double h = 1e-6) {
  Eigen::MatrixXd g(w.rows(), w.cols());
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.cols(); ++j) {
      Eigen::MatrixXd wp = w, wm = w;
      wp(i, j) += h;
      wm(i, j) -= h;
      g(i, j) = (f(wp) - f(wm)) / (2 * h);
    }
  return g;
}

}  // namespace oracle
