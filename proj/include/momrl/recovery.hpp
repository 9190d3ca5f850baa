#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "momrl/moment_estimators.hpp"
#include "momrl/sample_batch.hpp"
#include "momrl/tensor.hpp"
#include "momrl/two_layer_net.hpp"

namespace momrl {

struct RecoveryConfig {
  int power_iterations = 150;      // T
  int tensor_restarts = 0;         // L; 0 -> 100 k log(k+1)
  int tensor_inner_iterations = 100;
  double tensor_tolerance = 1e-10;
  int tensor_refine_sweeps = 3;
  double target_precision = 0.1;   // epsilon; success bar for rel row error
  int probe_attempts = 5;          // alpha draws
  double truncation_radius = 0.0;  // 0 -> default(d)
  double zero_moment_tolerance = 1e-8;
  double spectral_gap_tolerance = 1e-3;
  double gram_condition_limit = 1e6;
  double alignment_tolerance = 1e-8;   // |alpha^T V u_i| below this is fatal
  double probe_snr_gate = 5.5;         // weakest weight / tensor noise
  // below this SNR the weakest component is not statistically stable
  double probe_snr_degraded = 2.0;
  bool center_labels = true;
  bool probe_in_subspace = true;
  // gradient refinement (exact_recover)
  double gd_step = 1.0;
  int gd_max_iterations = 10000;
  double gd_stop_loss = 1e-16;

  void validate() const;
};

enum class RecoveryStatus { success, degraded, failed };

std::string to_string(RecoveryStatus s);

struct SubspaceResult {
  Eigen::MatrixXd v;        // d x k orthonormal
  Eigen::VectorXd scores;   // 2k candidate scores, descending
  double spectral_gap = 0.0;  // scores[k-1] - scores[k]
  bool gap_ok = true;
};

// Two shifted power iterations (C I + P2, C I - P2), TopK across branches,
// branch-2 columns orthogonalized against branch 1.
SubspaceResult estimate_subspace(const Eigen::MatrixXd& p2, int k, int iterations,
                                 std::mt19937_64& rng, double gap_tolerance = 1e-3);

struct TensorComponents {
  Eigen::MatrixXd units;    // k x k, row i = u_i (unit norm)
  Eigen::VectorXd weights;  // lambda_i
  double residual_norm = 0.0;  // ||T - sum lambda u^{x3}||_F
  int found = 0;
  bool ok = true;
};

TensorComponents tensor_decompose(const Tensor3& t, int k, int restarts,
                                  std::mt19937_64& rng, int inner_iterations = 100,
                                  double tolerance = 1e-10, int refine_sweeps = 3);

struct LinearSystems {
  Eigen::VectorXd z;
  Eigen::VectorXd r;
  double residual_z = 0.0;
  double residual_r = 0.0;
  double cond_z = 0.0;
  double cond_r = 0.0;
  bool ok = true;
  std::string message;
};

LinearSystems solve_linear_systems(const Eigen::MatrixXd& units,
                                   const Eigen::MatrixXd& v,
                                   const Eigen::VectorXd& q1,
                                   const Eigen::MatrixXd& q2);

// v_i = sign(r_i c_{l2}); s_i = sign(v_i z_i c_{l1});
// w_i = s_i |z_i / (c_{l1} (a^T V u_i)^{l1-1})|^{1/(p+1)} V u_i
TwoLayerNet assemble_network(const Eigen::VectorXd& z, const Eigen::VectorXd& r,
                             const Eigen::MatrixXd& units, const Eigen::MatrixXd& v,
                             const Eigen::VectorXd& alpha, const MomentIndices& idx,
                             const Activation& act);

struct RecoveryReport {
  RecoveryStatus status = RecoveryStatus::failed;
  std::string reason;
  std::optional<TwoLayerNet> net;
  MomentIndices indices;
  // stage diagnostics
  double p2_spectral_gap = 0.0;
  double subspace_defect = 0.0;      // orthonormality defect of V
  double subspace_residual = -1.0;   // max_i ||(I-VV^T) w_i|| (planted ref only)
  double tensor_residual = 0.0;
  double tensor_noise = 0.0;         // quarter-split standard error scale
  double probe_snr = 0.0;
  double min_alignment = 0.0;        // min_i |alpha^T V u_i|
  int probe_draws = 0;
  double cond_z = 0.0, cond_r = 0.0;
  double label_offset = 0.0;         // mean removed from labels
  double final_loss = -1.0;          // exact_recover only
  int gd_iterations = 0;
  bool gd_monotone = true;
  // planted comparison (when a reference is given)
  double max_row_error = -1.0;
  double rel_frobenius_error = -1.0;
  bool signs_match = false;
};

// Algorithm: partition -> P2 -> subspace -> probe attempts (R3 + tensor
// decomposition, quality-gated) -> Q1/Q2 -> linear systems -> assembly.
RecoveryReport noisy_recover(const SampleBatch& batch, int k, const Activation& act,
                             const RecoveryConfig& config, std::mt19937_64& rng,
                             const TwoLayerNet* planted = nullptr);

// L_n(W) = 1/(2n) sum (f(x_i) - y_i)^2 over untruncated rows; gradient wrt W.
std::pair<double, Eigen::MatrixXd> empirical_loss_and_gradient(
    const TwoLayerNet& net, const SampleBatch& batch);

struct RefineResult {
  TwoLayerNet net;
  double loss = 0.0;
  int iterations = 0;
  bool monotone = true;
};

// Backtracking (Armijo) gradient descent on the empirical loss, signs fixed.
RefineResult gradient_refine(const TwoLayerNet& init, const SampleBatch& batch,
                             const RecoveryConfig& config);

// noisy_recover for initialization, then backtracking gradient descent on the
// empirical loss of the untruncated subsample.
RecoveryReport exact_recover(const SampleBatch& batch, int k, const Activation& act,
                             const RecoveryConfig& config, std::mt19937_64& rng,
                             const TwoLayerNet* planted = nullptr);

void write_report(std::ostream& os, const RecoveryReport& report);

}  // namespace momrl
