#pragma once

#include <functional>
#include <optional>

#include "momrl/dp.hpp"
#include "momrl/mdp.hpp"
#include "momrl/recovery.hpp"

namespace momrl {

struct NeuralRlConfig {
  int width = 2;                   // known k
  int samples_per_level = 100000;  // n
  double epsilon = 0.2;            // target suboptimality (completeness variants)
  double gap_rho = 0.0;            // gap variant
  double exploration_radius = 0.0; // delta_phi; 0 -> default_truncation_radius(d)
  bool antithetic = true;
  Activation activation = Activation::relu();
  RecoveryConfig recovery;

  void validate() const;
};

enum class LabelMode { rollout, backup };

// Gaussian feature exploration at one level: in-radius samples are realized
// through the preimage and labelled by a tail-policy rollout or by
// r + V_next(s'); out-of-radius samples keep label 0 and a truncated flag.
SampleBatch explore_level(SimulatorAccess& sim, int level, const Policy& tail, int n,
                          double radius, std::mt19937_64& rng, LabelMode mode,
                          const std::function<double(State)>& v_next,
                          bool antithetic = true);

struct LevelResult {
  int level = 0;
  std::optional<TwoLayerNet> net;
  double offset = 0.0;  // tracked additive constant of Q_hat
  RecoveryReport report;
  int truncated_samples = 0;
  long queries = 0;
  bool candidate_outside_ball = false;
};

struct LearnedValueStack {
  std::vector<LevelResult> levels;  // [h-1]
  Policy policy;
  bool ok = false;
  int failed_level = 0;
  std::string reason;
  long total_queries = 0;
  // gap diagnostics (gap variant only)
  double measured_gap = 0.0;
  bool gap_violation = false;

  double q_hat(int level, const Eigen::VectorXd& feature) const;
  double v_hat(int level, State s, const Mdp& mdp) const;
};

// Deterministic realizable Q*: rollout labels + exact recovery per level.
LearnedValueStack learn_deterministic(const Mdp& mdp, const NeuralRlConfig& cfg,
                                      std::mt19937_64& rng);

// Policy-complete class: rollout labels give unbiased estimates of the tail
// policy's Q; noisy recovery at per-level precision eps/(2H); label constants
// tracked explicitly.
LearnedValueStack learn_policy_complete(const Mdp& mdp, const NeuralRlConfig& cfg,
                                        std::mt19937_64& rng);

// Bellman-complete class: backup labels r + V_hat_{h+1}(s').
LearnedValueStack learn_bellman_complete(const Mdp& mdp, const NeuralRlConfig& cfg,
                                         std::mt19937_64& rng);

// Gap variant: the policy-complete loop run at per-level precision rho/4.
LearnedValueStack learn_with_gap(const Mdp& mdp, const NeuralRlConfig& cfg,
                                 std::mt19937_64& rng);

}  // namespace momrl
