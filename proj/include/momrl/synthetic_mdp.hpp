#pragma once

#include <memory>
#include <string>

#include "momrl/mdp.hpp"
#include "momrl/two_layer_net.hpp"

namespace momrl {

// Deterministic single-state family whose optimal Q at every level is
// exactly a planted two-layer net of the feature: actions are identified
// with feature vectors, r_h(x) = f_h(x) - V*_{h+1}, and planning runs over
// a finite stored candidate set.
class PlantedNetMdp : public Mdp {
 public:
  PlantedNetMdp(std::vector<TwoLayerNet> nets_per_level, Eigen::MatrixXd candidates);

  int horizon() const override { return static_cast<int>(nets_.size()); }
  int num_states() const override { return 1; }
  State initial_state() const override { return 0; }
  int feature_dim() const override { return static_cast<int>(candidates_.cols()); }
  bool deterministic() const override { return true; }
  double feature_bound() const override { return feature_bound_; }
  int num_actions(int level) const override;
  Eigen::VectorXd feature(int level, State s, int a) const override;
  double reward(int level, State s, int a) const override;
  Eigen::VectorXd transition_probs(int level, State s, int a) const override;

  bool has_feature_surface() const override { return true; }
  State feature_preimage_state(int level, const Eigen::VectorXd& x) const override;
  double reward_at_feature(int level, State s, const Eigen::VectorXd& x) const override;

  const TwoLayerNet& planted_net(int level) const { return nets_[level - 1]; }
  double qstar_at_feature(int level, const Eigen::VectorXd& x) const;
  double optimal_value(int level) const { return v_star_[level - 1]; }
  const Eigen::MatrixXd& candidates() const { return candidates_; }

  std::string to_json(std::uint64_t seed = 0) const;

 private:
  std::vector<TwoLayerNet> nets_;
  Eigen::MatrixXd candidates_;     // m x d, row per candidate action
  std::vector<double> v_star_;     // v_star_[h-1] = max_cand f_h; + v_star_[H] = 0
  double feature_bound_ = 0.0;
};

struct PlantedInstanceConfig {
  int d = 10;
  int k = 2;
  int horizon = 2;
  int num_candidates = 16;
  double candidate_scale = 1.0;  // candidates drawn N(0, scale^2 I)
  Activation activation = Activation::relu();
};

PlantedNetMdp make_planted_net_mdp(const PlantedInstanceConfig& cfg, std::mt19937_64& rng);

// Same family rescaled so that the optimality gap over the candidate set is
// exactly the target (rescaling candidates scales every planted value by
// c^{p+1}).
PlantedNetMdp make_gap_instance(const PlantedInstanceConfig& cfg, double target_gap,
                                std::mt19937_64& rng);

// Stochastic family with action-independent transitions: the next-state law
// depends only on the level, features are phi_h(s, a) = a + offset_h(s), and
// rewards equal a planted net of the feature. Every Q^pi (and every Bellman
// backup of a feature function) is then the planted net plus a per-level
// constant, so policy and Bellman completeness hold up to constants that the
// learners track explicitly.
class OffsetFeatureMdp : public Mdp {
 public:
  OffsetFeatureMdp(std::vector<TwoLayerNet> nets_per_level,
                   std::vector<std::vector<Eigen::VectorXd>> offsets,  // [h-1][s]
                   std::vector<Eigen::VectorXd> next_state_law,        // [h-1]
                   Eigen::MatrixXd candidates);

  int horizon() const override { return static_cast<int>(nets_.size()); }
  int num_states() const override { return static_cast<int>(offsets_[0].size()); }
  State initial_state() const override { return 0; }
  int feature_dim() const override { return static_cast<int>(candidates_.cols()); }
  bool deterministic() const override { return deterministic_; }
  double feature_bound() const override { return feature_bound_; }
  int num_actions(int level) const override;
  Eigen::VectorXd feature(int level, State s, int a) const override;
  double reward(int level, State s, int a) const override;
  Eigen::VectorXd transition_probs(int level, State s, int a) const override;

  bool has_feature_surface() const override { return true; }
  State feature_preimage_state(int level, const Eigen::VectorXd& x) const override;
  double reward_at_feature(int level, State s, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd transition_probs_at_feature(int level, State s,
                                              const Eigen::VectorXd& x) const override;

  const TwoLayerNet& planted_net(int level) const { return nets_[level - 1]; }
  const Eigen::MatrixXd& candidates() const { return candidates_; }

  std::string to_json(std::uint64_t seed = 0) const;

 private:
  std::vector<TwoLayerNet> nets_;
  std::vector<std::vector<Eigen::VectorXd>> offsets_;
  std::vector<Eigen::VectorXd> law_;
  Eigen::MatrixXd candidates_;
  double feature_bound_ = 0.0;
  bool deterministic_ = false;
};

struct CompletenessInstanceConfig {
  int d = 8;
  int k = 2;
  int horizon = 2;
  int num_states = 3;
  int num_candidates = 12;
  double candidate_scale = 1.0;
  double offset_scale = 0.5;
  bool deterministic_transitions = false;
  Activation activation = Activation::relu();
};

OffsetFeatureMdp make_completeness_instance(const CompletenessInstanceConfig& cfg,
                                            std::mt19937_64& rng);

}  // namespace momrl
