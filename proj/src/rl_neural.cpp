#include "momrl/rl_neural.hpp"

#include <cmath>

#include "momrl/rng.hpp"

namespace momrl {

void NeuralRlConfig::validate() const {
  if (width < 1) throw ValidationError("rl config: width must be >= 1");
  if (samples_per_level < 1) throw ValidationError("rl config: n must be >= 1");
  if (epsilon <= 0 && gap_rho <= 0)
    throw ValidationError("rl config: need epsilon > 0 or gap rho > 0");
  recovery.validate();
}

SampleBatch explore_level(SimulatorAccess& sim, int level, const Policy& tail, int n,
                          double radius, std::mt19937_64& rng, LabelMode mode,
                          const std::function<double(State)>& v_next,
                          bool antithetic) {
  const Mdp& mdp = sim.mdp();
  const int d = mdp.feature_dim();
  SampleBatch batch;
  batch.radius = radius;
  batch.x = sample_gaussian_features(n, d, antithetic, rng);
  batch.y = Eigen::VectorXd::Zero(n);
  batch.truncated.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = batch.x.row(i).transpose();
    if (x.norm() > radius) {
      batch.truncated[i] = 1;
      continue;
    }
    if (mode == LabelMode::rollout) {
      batch.y[i] = sim.rollout_feature(level, x, tail).total_reward();
    } else {
      auto [r, next] = sim.query_feature(level, x);
      batch.y[i] = r + v_next(next);
    }
  }
  return batch;
}

double LearnedValueStack::q_hat(int level, const Eigen::VectorXd& feature) const {
  const LevelResult& lr = levels.at(level - 1);
  if (!lr.net) throw ValidationError("q_hat: level has no recovered net");
  return lr.net->eval(feature) + lr.offset;
}

double LearnedValueStack::v_hat(int level, State s, const Mdp& mdp) const {
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < mdp.num_actions(level); ++a)
    best = std::max(best, q_hat(level, mdp.feature(level, s, a)));
  return best;
}

namespace {

enum class Variant { deterministic, policy_complete, bellman_complete, gap };

LearnedValueStack run_levelwise(const Mdp& mdp, const NeuralRlConfig& cfg,
                                Variant variant, std::mt19937_64& rng) {
  cfg.validate();
  if (variant == Variant::deterministic && !mdp.deterministic())
    throw ValidationError("learn_deterministic requires deterministic transitions");
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  const int d = mdp.feature_dim();
  const double radius = cfg.exploration_radius > 0 ? cfg.exploration_radius
                                                   : default_truncation_radius(d);

  RecoveryConfig rcfg = cfg.recovery;
  rcfg.truncation_radius = radius;
  if (variant == Variant::policy_complete || variant == Variant::bellman_complete)
    rcfg.target_precision = std::min(0.999, cfg.epsilon / (2.0 * H));
  if (variant == Variant::gap)
    rcfg.target_precision = std::min(0.999, cfg.gap_rho / 4.0);
  const bool exact = variant == Variant::deterministic;
  const LabelMode mode = variant == Variant::bellman_complete ? LabelMode::backup
                                                              : LabelMode::rollout;
  const bool track_offset =
      variant == Variant::policy_complete || variant == Variant::bellman_complete;

  LearnedValueStack stack;
  stack.levels.resize(H);
  stack.policy.actions.assign(H, std::vector<int>(S, 0));
  SimulatorAccess sim(mdp, AccessMode::generative, derive_seed(rng(), "sim"));

  if (variant == Variant::gap) {
    try {
      stack.measured_gap = measure_gap(mdp);
      stack.gap_violation = stack.measured_gap < cfg.gap_rho - 1e-12;
    } catch (const EnumerationCapError&) {
      stack.measured_gap = -1.0;  // not enumerable; no diagnostic
    }
  }

  for (int h = H; h >= 1; --h) {
    LevelResult& lr = stack.levels[h - 1];
    lr.level = h;
    auto v_next = [&](State s) -> double {
      return h < H ? stack.v_hat(h + 1, s, mdp) : 0.0;
    };
    SampleBatch batch;
    try {
      batch = explore_level(sim, h, stack.policy, cfg.samples_per_level, radius, rng,
                            mode, v_next, cfg.antithetic);
    } catch (const Error& e) {
      stack.ok = false;
      stack.failed_level = h;
      stack.reason = std::string("exploration failed: ") + e.what();
      return stack;
    }
    lr.truncated_samples = batch.truncated_count();
    lr.queries = sim.queries_at(h);

    lr.report = exact ? exact_recover(batch, cfg.width, cfg.activation, rcfg, rng)
                      : noisy_recover(batch, cfg.width, cfg.activation, rcfg, rng);
    if (!lr.report.net.has_value() || lr.report.status == RecoveryStatus::failed) {
      stack.ok = false;
      stack.failed_level = h;
      stack.reason = "recovery failed: " + lr.report.reason;
      return stack;
    }
    lr.net = lr.report.net;
    if (track_offset) {
      // label mean offset: the sign-constrained class cannot absorb additive
      // constants, so Q_hat = net + c with c re-estimated from the batch
      double acc = 0.0;
      int cnt = 0;
      for (int i = 0; i < batch.size(); ++i) {
        if (batch.truncated[i]) continue;
        acc += batch.y[i] - lr.net->eval(batch.x.row(i).transpose());
        ++cnt;
      }
      lr.offset = cnt > 0 ? acc / cnt : 0.0;
    }
    for (State s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      int best_a = 0;
      for (int a = 0; a < mdp.num_actions(h); ++a) {
        Eigen::VectorXd f = mdp.feature(h, s, a);
        if (f.norm() > radius) lr.candidate_outside_ball = true;
        double q = lr.net->eval(f);
        if (q > best) {
          best = q;
          best_a = a;
        }
      }
      stack.policy.actions[h - 1][s] = best_a;
    }
  }
  stack.ok = true;
  stack.total_queries = sim.total_queries();
  return stack;
}

}  // namespace

LearnedValueStack learn_deterministic(const Mdp& mdp, const NeuralRlConfig& cfg,
                                      std::mt19937_64& rng) {
  return run_levelwise(mdp, cfg, Variant::deterministic, rng);
}

LearnedValueStack learn_policy_complete(const Mdp& mdp, const NeuralRlConfig& cfg,
                                        std::mt19937_64& rng) {
  return run_levelwise(mdp, cfg, Variant::policy_complete, rng);
}

LearnedValueStack learn_bellman_complete(const Mdp& mdp, const NeuralRlConfig& cfg,
                                         std::mt19937_64& rng) {
  return run_levelwise(mdp, cfg, Variant::bellman_complete, rng);
}

LearnedValueStack learn_with_gap(const Mdp& mdp, const NeuralRlConfig& cfg,
                                 std::mt19937_64& rng) {
  return run_levelwise(mdp, cfg, Variant::gap, rng);
}

}  // namespace momrl
