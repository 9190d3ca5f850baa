#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "momrl/activation.hpp"
#include "momrl/sample_batch.hpp"
#include "momrl/tensor.hpp"

namespace momrl {

// Moment orders driving the contracted estimators, selected from the
// activation's universal constants c_j (m_j(s) = c_j s^{p+1}).
struct MomentIndices {
  int j2 = 0;  // min{j >= 2 : c_j != 0} -> P2 order
  int j3 = 0;  // min{j >= 3 : c_j != 0} -> P3/R3 order
  int l1 = 0;  // Q1 order
  int l2 = 0;  // Q2 order
  std::array<double, 4> c{};  // c[j-1] = c_j
  std::array<bool, 4> nonzero{};

  static MomentIndices select(const Activation& act, double zero_tol = 1e-8);
};

// Empirical contracted moments, per-sample closed forms (never materializes
// the d^4 tensor). All estimators are means of per-sample integrands, so
// shard means merge by weighted average.

// P2 = M_{j2}(I, I, alpha, ..., alpha), d x d symmetric.
Eigen::MatrixXd estimate_p2(const SampleBatch& s1, const Eigen::VectorXd& alpha,
                            const MomentIndices& idx);

// R3 = P3(V, V, V) = M_{j3}(V, V, V, alpha, ...), k x k x k, symmetrized.
Tensor3 estimate_r3(const SampleBatch& s2, const Eigen::VectorXd& alpha,
                    const Eigen::MatrixXd& v, const MomentIndices& idx);

// Q1 = M_{l1}(I, alpha, ..., alpha), length d.
Eigen::VectorXd estimate_q1(const SampleBatch& s3, const Eigen::VectorXd& alpha,
                            const MomentIndices& idx);

// Q2 = M_{l2}(V, V, alpha, ..., alpha), k x k, symmetrized.
Eigen::MatrixXd estimate_q2(const SampleBatch& s4, const Eigen::VectorXd& alpha,
                            const Eigen::MatrixXd& v, const MomentIndices& idx);

// Everything the recovery pipeline derives from one batch, dumpable for
// debugging.
struct MomentSet {
  Eigen::VectorXd alpha;
  Eigen::MatrixXd p2;
  Eigen::MatrixXd subspace;  // d x k orthonormal columns
  Tensor3 r3;
  Eigen::VectorXd q1;
  Eigen::MatrixXd q2;
  MomentIndices indices;
  std::array<int, 4> partition_sizes{};
};

void dump_moment_set(std::ostream& os, const MomentSet& m);

// max |V^T V - I|; estimators over V require this <= tol.
double orthonormality_defect(const Eigen::MatrixXd& v);

}  // namespace momrl
