#include "momrl/moment_estimators.hpp"

#include <cmath>
#include <ostream>

#include "momrl/errors.hpp"

namespace momrl {

MomentIndices MomentIndices::select(const Activation& act, double zero_tol) {
  MomentIndices idx;
  auto c = act.c_constants();
  idx.c = c;
  for (int j = 0; j < 4; ++j) idx.nonzero[j] = std::abs(c[j]) > zero_tol;
  auto first_nonzero = [&](std::initializer_list<int> js) {
    for (int j : js)
      if (idx.nonzero[j - 1]) return j;
    return 0;
  };
  idx.j2 = first_nonzero({2, 3, 4});
  idx.j3 = first_nonzero({3, 4});
  if (idx.j2 == 0) throw ValidationError("moment selection: all of M2..M4 vanish");
  if (idx.j3 == 0)
    throw ValidationError("moment selection: both M3 and M4 vanish");
  if (!idx.nonzero[0] && !idx.nonzero[2]) {
    // even activation
    idx.l1 = idx.l2 = first_nonzero({2, 4});
  } else if (!idx.nonzero[1] && !idx.nonzero[3]) {
    // odd activation
    idx.l1 = first_nonzero({1, 3});
    idx.l2 = 3;
  } else {
    idx.l1 = first_nonzero({1, 3});
    idx.l2 = first_nonzero({2, 4});
  }
  if (idx.l1 == 0 || idx.l2 == 0)
    throw ValidationError("moment selection: no usable Q1/Q2 order");
  return idx;
}

double orthonormality_defect(const Eigen::MatrixXd& v) {
  Eigen::MatrixXd g = v.transpose() * v;
  g -= Eigen::MatrixXd::Identity(v.cols(), v.cols());
  return g.cwiseAbs().maxCoeff();
}

namespace {

void require_nonempty(const SampleBatch& b, const char* who) {
  if (b.size() == 0) throw ValidationError(std::string(who) + ": empty batch");
}

void require_orthonormal(const Eigen::MatrixXd& v, const char* who) {
  if (orthonormality_defect(v) > 1e-8)
    throw ValidationError(std::string(who) + ": V is not orthonormal");
}

}  // namespace

Eigen::MatrixXd estimate_p2(const SampleBatch& s1, const Eigen::VectorXd& alpha,
                            const MomentIndices& idx) {
  require_nonempty(s1, "estimate_p2");
  const int n = s1.size(), d = s1.dim();
  const Eigen::MatrixXd& x = s1.x;
  const Eigen::VectorXd& y = s1.y;
  Eigen::MatrixXd p2(d, d);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  switch (idx.j2) {
    case 2: {
      // y (x x^T - I)
      p2 = x.transpose() * y.asDiagonal() * x / n - y.mean() * id;
      break;
    }
    case 3: {
      // y (t x x^T - x a^T - a x^T - t I),  t = x^T a
      Eigen::VectorXd t = x * alpha;
      Eigen::VectorXd yt = y.cwiseProduct(t);
      Eigen::VectorXd xy = x.transpose() * y / n;
      p2 = x.transpose() * yt.asDiagonal() * x / n;
      p2 -= xy * alpha.transpose() + alpha * xy.transpose();
      p2 -= yt.mean() * id;
      break;
    }
    case 4: {
      // y (t^2 x x^T - t^2 I - 2 t (x a^T + a x^T) - x x^T + 2 a a^T + I)
      Eigen::VectorXd t = x * alpha;
      Eigen::VectorXd yt = y.cwiseProduct(t);
      Eigen::VectorXd yt2 = yt.cwiseProduct(t);
      p2 = x.transpose() * yt2.asDiagonal() * x / n;
      p2 -= yt2.mean() * id;
      Eigen::VectorXd xyt = x.transpose() * yt / n;
      p2 -= 2.0 * (xyt * alpha.transpose() + alpha * xyt.transpose());
      p2 -= x.transpose() * y.asDiagonal() * x / n;
      p2 += y.mean() * (2.0 * alpha * alpha.transpose() + id);
      break;
    }
    default:
      throw ValidationError("estimate_p2: unsupported j2");
  }
  return 0.5 * (p2 + p2.transpose());
}

Tensor3 estimate_r3(const SampleBatch& s2, const Eigen::VectorXd& alpha,
                    const Eigen::MatrixXd& v, const MomentIndices& idx) {
  require_nonempty(s2, "estimate_r3");
  require_orthonormal(v, "estimate_r3");
  const int n = s2.size();
  const int k = static_cast<int>(v.cols());
  Eigen::MatrixXd u = s2.x * v;  // n x k
  const Eigen::VectorXd& y = s2.y;
  Tensor3 t3(k);
  if (idx.j3 == 3) {
    // y (u^{x3} - u ~ox I_k)
    Eigen::VectorXd uy = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < n; ++i) {
      double yi = y[i];
      if (yi == 0.0) continue;
      for (int a = 0; a < k; ++a) {
        double ya = yi * u(i, a);
        for (int b = 0; b < k; ++b) {
          double yab = ya * u(i, b);
          for (int c = 0; c < k; ++c) t3(a, b, c) += yab * u(i, c);
        }
      }
    }
    t3 *= 1.0 / n;
    uy = u.transpose() * y / n;
    t3 -= outer_tilde_vector(uy);
  } else if (idx.j3 == 4) {
    // y (t u^{x3} - sym3(beta; u u^T) - t (u ~ox I_k) + beta ~ox I_k)
    Eigen::VectorXd t = s2.x * alpha;
    Eigen::VectorXd beta = v.transpose() * alpha;
    Eigen::VectorXd yt = y.cwiseProduct(t);
    for (int i = 0; i < n; ++i) {
      double c0 = yt[i];
      if (c0 == 0.0) continue;
      for (int a = 0; a < k; ++a) {
        double ca = c0 * u(i, a);
        for (int b = 0; b < k; ++b) {
          double cab = ca * u(i, b);
          for (int c = 0; c < k; ++c) t3(a, b, c) += cab * u(i, c);
        }
      }
    }
    t3 *= 1.0 / n;
    Eigen::MatrixXd s = u.transpose() * y.asDiagonal() * u / n;  // E[y u u^T]
    Eigen::VectorXd uyt = u.transpose() * yt / n;                // E[y t u]
    double ym = y.mean();
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) {
          double val = beta[a] * s(b, c) + beta[b] * s(a, c) + beta[c] * s(a, b);
          t3(a, b, c) -= val;
        }
    t3 -= outer_tilde_vector(uyt);
    Tensor3 bt = outer_tilde_vector(beta);
    bt *= ym;
    t3 += bt;
  } else {
    throw ValidationError("estimate_r3: unsupported j3");
  }
  t3.symmetrize();
  return t3;
}

Eigen::VectorXd estimate_q1(const SampleBatch& s3, const Eigen::VectorXd& alpha,
                            const MomentIndices& idx) {
  require_nonempty(s3, "estimate_q1");
  const int n = s3.size();
  const Eigen::MatrixXd& x = s3.x;
  const Eigen::VectorXd& y = s3.y;
  switch (idx.l1) {
    case 1:
      return x.transpose() * y / n;
    case 2: {
      Eigen::VectorXd t = x * alpha;
      Eigen::VectorXd yt = y.cwiseProduct(t);
      return x.transpose() * yt / n - y.mean() * alpha;
    }
    case 3: {
      // y (t^2 x - x - 2 t a)
      Eigen::VectorXd t = x * alpha;
      Eigen::VectorXd yt = y.cwiseProduct(t);
      Eigen::VectorXd yt2 = yt.cwiseProduct(t);
      return x.transpose() * yt2 / n - x.transpose() * y / n - 2.0 * yt.mean() * alpha;
    }
    case 4: {
      // y (t^3 x - 3 t x - 3 t^2 a + 3 a)
      Eigen::VectorXd t = x * alpha;
      Eigen::VectorXd yt = y.cwiseProduct(t);
      Eigen::VectorXd yt2 = yt.cwiseProduct(t);
      Eigen::VectorXd yt3 = yt2.cwiseProduct(t);
      return x.transpose() * yt3 / n - 3.0 * x.transpose() * yt / n -
             3.0 * yt2.mean() * alpha + 3.0 * y.mean() * alpha;
    }
    default:
      throw ValidationError("estimate_q1: unsupported l1");
  }
}

Eigen::MatrixXd estimate_q2(const SampleBatch& s4, const Eigen::VectorXd& alpha,
                            const Eigen::MatrixXd& v, const MomentIndices& idx) {
  require_nonempty(s4, "estimate_q2");
  require_orthonormal(v, "estimate_q2");
  const int n = s4.size();
  const int k = static_cast<int>(v.cols());
  Eigen::MatrixXd u = s4.x * v;
  const Eigen::VectorXd& y = s4.y;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(k, k);
  Eigen::MatrixXd q2(k, k);
  switch (idx.l2) {
    case 2: {
      q2 = u.transpose() * y.asDiagonal() * u / n - y.mean() * id;
      break;
    }
    case 3: {
      Eigen::VectorXd t = s4.x * alpha;
      Eigen::VectorXd beta = v.transpose() * alpha;
      Eigen::VectorXd yt = y.cwiseProduct(t);
      Eigen::VectorXd uy = u.transpose() * y / n;
      q2 = u.transpose() * yt.asDiagonal() * u / n;
      q2 -= uy * beta.transpose() + beta * uy.transpose();
      q2 -= yt.mean() * id;
      break;
    }
    case 4: {
      Eigen::VectorXd t = s4.x * alpha;
      Eigen::VectorXd beta = v.transpose() * alpha;
      Eigen::VectorXd yt = y.cwiseProduct(t);
      Eigen::VectorXd yt2 = yt.cwiseProduct(t);
      Eigen::VectorXd uyt = u.transpose() * yt / n;
      q2 = u.transpose() * yt2.asDiagonal() * u / n;
      q2 -= u.transpose() * y.asDiagonal() * u / n;
      q2 -= 2.0 * (uyt * beta.transpose() + beta * uyt.transpose());
      q2 -= yt2.mean() * id;
      q2 += y.mean() * (id + 2.0 * beta * beta.transpose());
      break;
    }
    default:
      throw ValidationError("estimate_q2: unsupported l2");
  }
  return 0.5 * (q2 + q2.transpose());
}

void dump_moment_set(std::ostream& os, const MomentSet& m) {
  os.precision(12);
  os << "alpha: " << m.alpha.transpose() << "\n";
  os << "indices: j2=" << m.indices.j2 << " j3=" << m.indices.j3
     << " l1=" << m.indices.l1 << " l2=" << m.indices.l2 << "\n";
  os << "partition: " << m.partition_sizes[0] << " " << m.partition_sizes[1]
     << " " << m.partition_sizes[2] << " " << m.partition_sizes[3] << "\n";
  os << "P2:\n" << m.p2 << "\n";
  os << "V:\n" << m.subspace << "\n";
  os << "R3 (flattened a-major):\n";
  const int k = m.r3.dim();
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      for (int c = 0; c < k; ++c) os << m.r3(a, b, c) << " ";
    }
    os << "\n";
  }
  os << "Q1: " << m.q1.transpose() << "\n";
  os << "Q2:\n" << m.q2 << "\n";
}

}  // namespace momrl
