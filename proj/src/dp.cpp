#include "momrl/dp.hpp"

#include <cmath>

#include "momrl/rng.hpp"

namespace momrl {

namespace {

void check_cap(const Mdp& mdp, std::size_t cap, const char* who) {
  std::size_t max_a = 0;
  for (int h = 1; h <= mdp.horizon(); ++h)
    max_a = std::max(max_a, static_cast<std::size_t>(mdp.num_actions(h)));
  std::size_t size = static_cast<std::size_t>(mdp.num_states()) * max_a *
                     static_cast<std::size_t>(mdp.horizon());
  if (size > cap)
    throw EnumerationCapError(std::string(who) + ": |S| * |A| * H = " +
                              std::to_string(size) + " exceeds cap " +
                              std::to_string(cap));
}

}  // namespace

DpSolution exact_dp_solve(const Mdp& mdp, std::size_t cap) {
  check_cap(mdp, cap, "exact_dp_solve");
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  DpSolution sol;
  sol.q.resize(H);
  sol.v.resize(H);
  sol.policy.actions.assign(H, {});
  Eigen::VectorXd v_next = Eigen::VectorXd::Zero(S);
  for (int h = H; h >= 1; --h) {
    const int A = mdp.num_actions(h);
    Eigen::MatrixXd q(S, A);
    Eigen::VectorXd v(S);
    std::vector<int> act(S, 0);
    for (State s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        double val = mdp.reward(h, s, a);
        if (h < H) val += mdp.transition_probs(h, s, a).dot(v_next);
        q(s, a) = val;
        if (val > best) {
          best = val;
          best_a = a;
        }
      }
      v[s] = best;
      act[s] = best_a;
    }
    sol.q[h - 1] = std::move(q);
    sol.v[h - 1] = v;
    sol.policy.actions[h - 1] = std::move(act);
    v_next = std::move(v);
  }
  return sol;
}

Policy greedy_policy(const QFunction& q, const Mdp& mdp) {
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  Policy pi;
  pi.actions.assign(H, {});
  for (int h = 1; h <= H; ++h) {
    const int A = mdp.num_actions(h);
    if (A == 0) throw ValidationError("greedy_policy: empty action set");
    pi.actions[h - 1].assign(S, 0);
    for (State s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        double val = q(h, s, a);
        if (val > best) {
          best = val;
          best_a = a;
        }
      }
      pi.actions[h - 1][s] = best_a;
    }
  }
  return pi;
}

std::vector<Eigen::VectorXd> policy_values(const Mdp& mdp, const Policy& policy) {
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  std::vector<Eigen::VectorXd> v(H + 1, Eigen::VectorXd::Zero(S));
  for (int h = H; h >= 1; --h) {
    for (State s = 0; s < S; ++s) {
      int a = policy.at(h, s);
      double val = mdp.reward(h, s, a);
      if (h < H) val += mdp.transition_probs(h, s, a).dot(v[h]);
      v[h - 1][s] = val;
    }
  }
  v.pop_back();
  return v;  // v[h-1][s] = V^pi_h(s)
}

std::vector<Eigen::MatrixXd> policy_q_values(const Mdp& mdp, const Policy& policy) {
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  std::vector<Eigen::VectorXd> v = policy_values(mdp, policy);
  std::vector<Eigen::MatrixXd> q(H);
  for (int h = 1; h <= H; ++h) {
    const int A = mdp.num_actions(h);
    q[h - 1].resize(S, A);
    for (State s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        double val = mdp.reward(h, s, a);
        if (h < H) val += mdp.transition_probs(h, s, a).dot(v[h]);
        q[h - 1](s, a) = val;
      }
  }
  return q;
}

PolicyValue evaluate_policy(const Mdp& mdp, const Policy& policy, int n_episodes,
                            std::uint64_t seed, bool force_monte_carlo,
                            std::size_t cap) {
  if (n_episodes < 1) throw ValidationError("evaluate_policy: n_episodes >= 1 required");
  std::size_t max_a = 0;
  for (int h = 1; h <= mdp.horizon(); ++h)
    max_a = std::max(max_a, static_cast<std::size_t>(mdp.num_actions(h)));
  std::size_t size = static_cast<std::size_t>(mdp.num_states()) * max_a *
                     static_cast<std::size_t>(mdp.horizon());
  if (!force_monte_carlo && size <= cap) {
    PolicyValue out;
    out.value = policy_values(mdp, policy)[0][mdp.initial_state()];
    out.exact = true;
    return out;
  }
  SimulatorAccess sim(mdp, AccessMode::online, seed);
  double sum = 0.0, sum2 = 0.0;
  for (int e = 0; e < n_episodes; ++e) {
    double r = sim.run_episode(policy).total_reward();
    sum += r;
    sum2 += r * r;
  }
  PolicyValue out;
  out.value = sum / n_episodes;
  if (n_episodes > 1) {
    double var = (sum2 - sum * sum / n_episodes) / (n_episodes - 1);
    out.std_error = std::sqrt(std::max(var, 0.0) / n_episodes);
  }
  return out;
}

double measure_gap(const Mdp& mdp, std::size_t cap, double tie_tolerance) {
  DpSolution sol = exact_dp_solve(mdp, cap);
  double gap = std::numeric_limits<double>::infinity();
  for (int h = 1; h <= mdp.horizon(); ++h) {
    for (State s = 0; s < mdp.num_states(); ++s) {
      double vstar = sol.v[h - 1][s];
      for (int a = 0; a < mdp.num_actions(h); ++a) {
        double diff = vstar - sol.q[h - 1](s, a);
        if (diff > tie_tolerance) gap = std::min(gap, diff);
      }
    }
  }
  return gap;
}

}  // namespace momrl
