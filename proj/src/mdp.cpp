#include "momrl/mdp.hpp"

#include <cmath>
#include <ostream>

#include "momrl/rng.hpp"

namespace momrl {

State sample_from_probs(const Eigen::VectorXd& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  double acc = 0.0;
  for (int s = 0; s < probs.size(); ++s) {
    acc += probs[s];
    if (r <= acc) return s;
  }
  return static_cast<State>(probs.size() - 1);
}

SimulatorAccess::SimulatorAccess(const Mdp& mdp, AccessMode mode, std::uint64_t seed)
    : mdp_(mdp), mode_(mode), seed_(seed), query_counts_(mdp.horizon(), 0) {}

void SimulatorAccess::require_generative(const char* what) const {
  if (mode_ != AccessMode::generative)
    throw WrongModeError(std::string(what) + " requires generative access");
}

State SimulatorAccess::sample_next(int level, State s, int a, std::mt19937_64& rng) {
  if (mdp_.deterministic()) {
    Eigen::VectorXd p = mdp_.transition_probs(level, s, a);
    int best = 0;
    p.maxCoeff(&best);
    return best;
  }
  return sample_from_probs(mdp_.transition_probs(level, s, a), rng);
}

State SimulatorAccess::sample_next_feature(int level, State s, const Eigen::VectorXd& x,
                                           std::mt19937_64& rng) {
  Eigen::VectorXd p = mdp_.transition_probs_at_feature(level, s, x);
  if (mdp_.deterministic()) {
    int best = 0;
    p.maxCoeff(&best);
    return best;
  }
  return sample_from_probs(p, rng);
}

SimulatorAccess::QueryResult SimulatorAccess::query(int level, State s, int a) {
  require_generative("query");
  mdp_.check_level(level);
  auto rng = make_rng(seed_, "query", stream_counter_++);
  ++query_counts_[level - 1];
  return {mdp_.reward(level, s, a), sample_next(level, s, a, rng)};
}

SimulatorAccess::QueryResult SimulatorAccess::query_feature(int level,
                                                            const Eigen::VectorXd& x) {
  require_generative("query_feature");
  mdp_.check_level(level);
  State s = mdp_.feature_preimage_state(level, x);
  auto rng = make_rng(seed_, "query", stream_counter_++);
  ++query_counts_[level - 1];
  return {mdp_.reward_at_feature(level, s, x), sample_next_feature(level, s, x, rng)};
}

Trajectory SimulatorAccess::rollout(int level, State s, int a, const Policy& tail) {
  mdp_.check_level(level);
  if (mode_ == AccessMode::online &&
      !(level == 1 && s == mdp_.initial_state()))
    throw WrongModeError("rollout from an interior (level, state) requires generative access");
  auto rng = make_rng(seed_, "episode", stream_counter_++);
  ++query_counts_[level - 1];
  Trajectory traj;
  traj.start_level = level;
  double r = mdp_.reward(level, s, a);
  traj.steps.push_back({level, s, a, r});
  State cur = sample_next(level, s, a, rng);
  for (int h = level + 1; h <= mdp_.horizon(); ++h) {
    int act = tail.at(h, cur);
    double rh = mdp_.reward(h, cur, act);
    traj.steps.push_back({h, cur, act, rh});
    cur = sample_next(h, cur, act, rng);
  }
  traj.terminal_state = cur;
  return traj;
}

Trajectory SimulatorAccess::rollout_feature(int level, const Eigen::VectorXd& x,
                                            const Policy& tail) {
  require_generative("rollout_feature");
  mdp_.check_level(level);
  State s = mdp_.feature_preimage_state(level, x);
  auto rng = make_rng(seed_, "episode", stream_counter_++);
  ++query_counts_[level - 1];
  Trajectory traj;
  traj.start_level = level;
  double r = mdp_.reward_at_feature(level, s, x);
  traj.steps.push_back({level, s, -1, r});
  State cur = sample_next_feature(level, s, x, rng);
  for (int h = level + 1; h <= mdp_.horizon(); ++h) {
    int act = tail.at(h, cur);
    double rh = mdp_.reward(h, cur, act);
    traj.steps.push_back({h, cur, act, rh});
    cur = sample_next(h, cur, act, rng);
  }
  traj.terminal_state = cur;
  return traj;
}

Trajectory SimulatorAccess::run_episode(const Policy& policy) {
  auto rng = make_rng(seed_, "episode", stream_counter_++);
  ++episode_count_;
  Trajectory traj;
  traj.start_level = 1;
  State cur = mdp_.initial_state();
  for (int h = 1; h <= mdp_.horizon(); ++h) {
    int act = policy.at(h, cur);
    double rh = mdp_.reward(h, cur, act);
    traj.steps.push_back({h, cur, act, rh});
    cur = sample_next(h, cur, act, rng);
  }
  traj.terminal_state = cur;
  return traj;
}

SimulatorAccess::QueryResult SimulatorAccess::episode_probe(
    const std::vector<int>& prefix_actions, int probe_level, const Eigen::VectorXd& x) {
  mdp_.check_level(probe_level);
  if (static_cast<int>(prefix_actions.size()) != probe_level - 1)
    throw ValidationError("episode_probe: prefix must cover levels 1..h-1");
  auto rng = make_rng(seed_, "episode", stream_counter_++);
  ++episode_count_;
  State cur = mdp_.initial_state();
  for (int h = 1; h < probe_level; ++h) {
    int act = prefix_actions[h - 1];
    cur = sample_next(h, cur, act, rng);
  }
  double r = mdp_.reward_at_feature(probe_level, cur, x);
  State next = sample_next_feature(probe_level, cur, x, rng);
  return {r, next};
}

long SimulatorAccess::total_queries() const {
  long acc = 0;
  for (long c : query_counts_) acc += c;
  return acc;
}

void write_trajectory_log(std::ostream& os, const std::vector<Trajectory>& episodes) {
  os << "episode,level,state,action,reward\n";
  os.precision(17);
  for (size_t e = 0; e < episodes.size(); ++e) {
    for (const auto& st : episodes[e].steps) {
      os << e << ',' << st.level << ',' << st.state << ',' << st.action << ','
         << st.reward << '\n';
    }
  }
}

}  // namespace momrl
