#pragma once

#include <string>

#include "momrl/mdp.hpp"

namespace momrl {

// Explicit finite MDP: per-level reward and kernel tables, optional feature
// vectors per (level, state, action). Rewards are validated on construction
// so that every H-step return stays in [0, H] unless bounds checking is
// disabled.
class TabularMdp : public Mdp {
 public:
  struct Level {
    std::vector<std::vector<double>> reward;              // [s][a]
    std::vector<std::vector<Eigen::VectorXd>> probs;      // [s][a] -> S
    std::vector<std::vector<Eigen::VectorXd>> features;   // optional
  };

  TabularMdp(int num_states, State initial, std::vector<Level> levels,
             bool validate_bounds = true);

  int horizon() const override { return static_cast<int>(levels_.size()); }
  int num_states() const override { return num_states_; }
  State initial_state() const override { return initial_; }
  int feature_dim() const override { return feature_dim_; }
  bool deterministic() const override { return deterministic_; }
  double feature_bound() const override { return feature_bound_; }
  int num_actions(int level) const override;
  Eigen::VectorXd feature(int level, State s, int a) const override;
  double reward(int level, State s, int a) const override;
  Eigen::VectorXd transition_probs(int level, State s, int a) const override;

  std::string to_json(std::uint64_t seed = 0) const;
  static TabularMdp from_json(const std::string& text);

 private:
  int num_states_;
  State initial_;
  std::vector<Level> levels_;
  int feature_dim_ = 0;
  double feature_bound_ = 0.0;
  bool deterministic_ = true;
};

// Deterministic chain s -> s+1 (capped) with given rewards; handy in tests.
TabularMdp deterministic_chain(const std::vector<std::vector<double>>& rewards_per_level);

}  // namespace momrl
