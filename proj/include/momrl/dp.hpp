#pragma once

#include <functional>
#include <limits>

#include "momrl/mdp.hpp"

namespace momrl {

inline constexpr std::size_t kDefaultDpCap = 1'000'000;

struct DpSolution {
  std::vector<Eigen::MatrixXd> q;  // [level-1] S x A
  std::vector<Eigen::VectorXd> v;  // [level-1] S
  Policy policy;                   // greedy, lowest index on ties

  double optimal_value() const { return v[0][0]; }  // caller uses v[0][s1]
};

// Backward induction over the candidate action sets. Throws
// EnumerationCapError when |S| * max|A| * H exceeds the cap.
DpSolution exact_dp_solve(const Mdp& mdp, std::size_t cap = kDefaultDpCap);

// Greedy policy for an arbitrary Q evaluator over the candidate sets.
using QFunction = std::function<double(int level, State s, int action)>;
Policy greedy_policy(const QFunction& q, const Mdp& mdp);

struct PolicyValue {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
};

// Exact backward evaluation when the MDP fits under the cap, otherwise a
// Monte Carlo estimate over n_episodes rollouts.
PolicyValue evaluate_policy(const Mdp& mdp, const Policy& policy, int n_episodes,
                            std::uint64_t seed, bool force_monte_carlo = false,
                            std::size_t cap = kDefaultDpCap);

// Exact V^pi at every (level, state) by backward recursion.
std::vector<Eigen::VectorXd> policy_values(const Mdp& mdp, const Policy& policy);
// Exact Q^pi (the policy acting from level+1 on).
std::vector<Eigen::MatrixXd> policy_q_values(const Mdp& mdp, const Policy& policy);

// min over (level, state) of V*(s) - best strictly-suboptimal Q*(s, a);
// +infinity when every action is optimal everywhere.
double measure_gap(const Mdp& mdp, std::size_t cap = kDefaultDpCap,
                   double tie_tolerance = 1e-9);

}  // namespace momrl
