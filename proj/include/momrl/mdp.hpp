#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "momrl/errors.hpp"

namespace momrl {

using State = int;

// Episodic MDP over levels h = 1..H with a finite candidate action set per
// level for planning. Synthetic families additionally answer queries
// addressed by feature vectors (the exploration surface), with a trivial
// preimage.
class Mdp {
 public:
  virtual ~Mdp() = default;

  virtual int horizon() const = 0;
  virtual int num_states() const = 0;
  virtual State initial_state() const = 0;
  virtual int feature_dim() const = 0;
  virtual bool deterministic() const = 0;
  virtual double feature_bound() const = 0;  // B_phi

  virtual int num_actions(int level) const = 0;
  virtual Eigen::VectorXd feature(int level, State s, int a) const = 0;
  virtual double reward(int level, State s, int a) const = 0;
  // probabilities over all states
  virtual Eigen::VectorXd transition_probs(int level, State s, int a) const = 0;

  // feature-addressed surface
  virtual bool has_feature_surface() const { return false; }
  virtual State feature_preimage_state(int /*level*/, const Eigen::VectorXd& /*x*/) const {
    throw PreimageError("this MDP has no feature preimage");
  }
  virtual double reward_at_feature(int /*level*/, State /*s*/,
                                   const Eigen::VectorXd& /*x*/) const {
    throw PreimageError("this MDP has no feature-addressed rewards");
  }
  virtual Eigen::VectorXd transition_probs_at_feature(int level, State s,
                                                      const Eigen::VectorXd& /*x*/) const {
    return transition_probs(level, s, 0);
  }

  void check_level(int level) const {
    if (level < 1 || level > horizon())
      throw InvalidLevelError("level " + std::to_string(level) + " outside [1, " +
                              std::to_string(horizon()) + "]");
  }
};

// Per-level state -> candidate action index.
struct Policy {
  std::vector<std::vector<int>> actions;  // [level-1][state]

  int horizon() const { return static_cast<int>(actions.size()); }
  int at(int level, State s) const { return actions[level - 1][s]; }
};

struct TrajectoryStep {
  int level = 0;
  State state = 0;
  int action = -1;  // -1 when the action was addressed by feature
  double reward = 0.0;
};

struct Trajectory {
  int start_level = 1;
  std::vector<TrajectoryStep> steps;
  State terminal_state = 0;

  double total_reward() const {
    double acc = 0.0;
    for (const auto& s : steps) acc += s.reward;
    return acc;
  }
};

enum class AccessMode { generative, online };

// Query surface with mode enforcement and monotone counters. Every episode
// or query stream derives its RNG from (seed, counter), so replays are
// order-independent within a stream kind.
class SimulatorAccess {
 public:
  SimulatorAccess(const Mdp& mdp, AccessMode mode, std::uint64_t seed);

  AccessMode mode() const { return mode_; }
  const Mdp& mdp() const { return mdp_; }

  struct QueryResult {
    double reward;
    State next_state;
  };

  // Generative-only surfaces.
  QueryResult query(int level, State s, int a);
  QueryResult query_feature(int level, const Eigen::VectorXd& x);

  // Start at (s, a) or a feature at the given level, then follow the tail
  // policy. Generative-only unless level == 1 and s is the initial state.
  Trajectory rollout(int level, State s, int a, const Policy& tail);
  Trajectory rollout_feature(int level, const Eigen::VectorXd& x, const Policy& tail);

  // Full episode from the initial state (allowed in both modes).
  Trajectory run_episode(const Policy& policy);
  // Episode playing fixed prefix actions, then one feature-addressed action
  // at level `probe_level`; the remainder of the episode is irrelevant to
  // the callers and is cut short. Allowed in both modes.
  QueryResult episode_probe(const std::vector<int>& prefix_actions, int probe_level,
                            const Eigen::VectorXd& x);

  long queries_at(int level) const { return query_counts_[level - 1]; }
  long total_queries() const;
  long episodes() const { return episode_count_; }

 private:
  State sample_next(int level, State s, int a, std::mt19937_64& rng);
  State sample_next_feature(int level, State s, const Eigen::VectorXd& x,
                            std::mt19937_64& rng);
  void require_generative(const char* what) const;

  const Mdp& mdp_;
  AccessMode mode_;
  std::uint64_t seed_;
  std::vector<long> query_counts_;
  long episode_count_ = 0;
  std::uint64_t stream_counter_ = 0;
};

State sample_from_probs(const Eigen::VectorXd& probs, std::mt19937_64& rng);

// CSV with one record per step: episode, level, state, action, reward.
void write_trajectory_log(std::ostream& os, const std::vector<Trajectory>& episodes);

}  // namespace momrl
