#include "momrl/synthetic_mdp.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "momrl/dp.hpp"
#include "momrl/rng.hpp"

namespace momrl {

using nlohmann::json;

namespace {

json net_to_json(const TwoLayerNet& net) {
  json j;
  j["activation"] = net.activation().name();
  j["signs"] = std::vector<int>(net.signs().data(), net.signs().data() + net.signs().size());
  json rows = json::array();
  for (int i = 0; i < net.width(); ++i) {
    rows.push_back(std::vector<double>(net.weights().row(i).data(),
                                       net.weights().row(i).data() + net.dim()));
  }
  j["weights"] = rows;
  return j;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i)
    rows.push_back(std::vector<double>(m.row(i).data(), m.row(i).data() + m.cols()));
  return rows;
}

}  // namespace

PlantedNetMdp::PlantedNetMdp(std::vector<TwoLayerNet> nets_per_level,
                             Eigen::MatrixXd candidates)
    : nets_(std::move(nets_per_level)), candidates_(std::move(candidates)) {
  if (nets_.empty()) throw ValidationError("PlantedNetMdp: horizon must be >= 1");
  if (candidates_.rows() == 0) throw ValidationError("PlantedNetMdp: empty candidate set");
  for (const auto& net : nets_)
    if (net.dim() != candidates_.cols())
      throw ValidationError("PlantedNetMdp: net/candidate dimension mismatch");
  for (int i = 0; i < candidates_.rows(); ++i)
    feature_bound_ = std::max(feature_bound_, candidates_.row(i).norm());
  const int H = horizon();
  v_star_.assign(H + 1, 0.0);
  for (int h = H; h >= 1; --h) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < candidates_.rows(); ++a)
      best = std::max(best, nets_[h - 1].eval(candidates_.row(a).transpose()));
    v_star_[h - 1] = best;
  }
}

int PlantedNetMdp::num_actions(int level) const {
  check_level(level);
  return static_cast<int>(candidates_.rows());
}

Eigen::VectorXd PlantedNetMdp::feature(int level, State, int a) const {
  check_level(level);
  return candidates_.row(a).transpose();
}

double PlantedNetMdp::reward(int level, State s, int a) const {
  check_level(level);
  return reward_at_feature(level, s, candidates_.row(a).transpose());
}

Eigen::VectorXd PlantedNetMdp::transition_probs(int, State, int) const {
  return Eigen::VectorXd::Ones(1);
}

State PlantedNetMdp::feature_preimage_state(int level, const Eigen::VectorXd&) const {
  check_level(level);
  return 0;
}

double PlantedNetMdp::reward_at_feature(int level, State, const Eigen::VectorXd& x) const {
  check_level(level);
  return nets_[level - 1].eval(x) - v_star_[level];
}

double PlantedNetMdp::qstar_at_feature(int level, const Eigen::VectorXd& x) const {
  check_level(level);
  return nets_[level - 1].eval(x);
}

std::string PlantedNetMdp::to_json(std::uint64_t seed) const {
  json j;
  j["schema"] = "momrl/mdp/1";
  j["kind"] = "planted_net";
  j["seed"] = seed;
  j["candidates"] = matrix_to_json(candidates_);
  json nets = json::array();
  for (const auto& n : nets_) nets.push_back(net_to_json(n));
  j["nets"] = nets;
  return j.dump(2);
}

PlantedNetMdp make_planted_net_mdp(const PlantedInstanceConfig& cfg, std::mt19937_64& rng) {
  std::vector<TwoLayerNet> nets;
  for (int h = 0; h < cfg.horizon; ++h) {
    Eigen::VectorXi signs(cfg.k);
    for (int i = 0; i < cfg.k; ++i) signs[i] = (rng() & 1) ? 1 : -1;
    signs[0] = 1;
    nets.push_back(random_planted_net(cfg.k, cfg.d, signs,
                                      Eigen::VectorXd::Ones(cfg.k), cfg.activation, rng));
  }
  Eigen::MatrixXd cand = cfg.candidate_scale * gaussian_matrix(cfg.num_candidates, cfg.d, rng);
  return PlantedNetMdp(std::move(nets), std::move(cand));
}

PlantedNetMdp make_gap_instance(const PlantedInstanceConfig& cfg, double target_gap,
                                std::mt19937_64& rng) {
  PlantedNetMdp base = make_planted_net_mdp(cfg, rng);
  double gap = measure_gap(base);
  if (!std::isfinite(gap) || gap <= 0)
    throw ValidationError("make_gap_instance: degenerate base instance");
  // value scale is homogeneous of degree p+1 in the candidate scale
  double degree = cfg.activation.growth_exponent() + 1.0;
  double factor = std::pow(target_gap / gap, 1.0 / degree);
  std::vector<TwoLayerNet> nets;
  for (int h = 1; h <= base.horizon(); ++h) nets.push_back(base.planted_net(h));
  return PlantedNetMdp(std::move(nets), factor * base.candidates());
}

OffsetFeatureMdp::OffsetFeatureMdp(std::vector<TwoLayerNet> nets_per_level,
                                   std::vector<std::vector<Eigen::VectorXd>> offsets,
                                   std::vector<Eigen::VectorXd> next_state_law,
                                   Eigen::MatrixXd candidates)
    : nets_(std::move(nets_per_level)),
      offsets_(std::move(offsets)),
      law_(std::move(next_state_law)),
      candidates_(std::move(candidates)) {
  if (nets_.empty() || offsets_.size() != nets_.size() || law_.size() != nets_.size())
    throw ValidationError("OffsetFeatureMdp: per-level arrays must match the horizon");
  const int S = static_cast<int>(offsets_[0].size());
  for (const auto& lvl : offsets_)
    if (static_cast<int>(lvl.size()) != S)
      throw ValidationError("OffsetFeatureMdp: offset table ragged");
  deterministic_ = true;
  for (const auto& p : law_) {
    if (p.size() != S) throw ValidationError("OffsetFeatureMdp: law has wrong state count");
    if (std::abs(p.sum() - 1.0) > 1e-9)
      throw ValidationError("OffsetFeatureMdp: law is not a distribution");
    if (p.maxCoeff() < 1.0 - 1e-12) deterministic_ = false;
  }
  for (int i = 0; i < candidates_.rows(); ++i)
    feature_bound_ = std::max(feature_bound_, candidates_.row(i).norm());
  for (const auto& lvl : offsets_)
    for (const auto& o : lvl) feature_bound_ = std::max(feature_bound_, o.norm());
}

int OffsetFeatureMdp::num_actions(int level) const {
  check_level(level);
  return static_cast<int>(candidates_.rows());
}

Eigen::VectorXd OffsetFeatureMdp::feature(int level, State s, int a) const {
  check_level(level);
  return candidates_.row(a).transpose() + offsets_[level - 1][s];
}

double OffsetFeatureMdp::reward(int level, State s, int a) const {
  return nets_[level - 1].eval(feature(level, s, a));
}

Eigen::VectorXd OffsetFeatureMdp::transition_probs(int level, State, int) const {
  check_level(level);
  return law_[level - 1];
}

State OffsetFeatureMdp::feature_preimage_state(int level, const Eigen::VectorXd&) const {
  check_level(level);
  return 0;  // a = x - offset_h(0) realizes the feature from state 0
}

double OffsetFeatureMdp::reward_at_feature(int level, State, const Eigen::VectorXd& x) const {
  check_level(level);
  return nets_[level - 1].eval(x);
}

Eigen::VectorXd OffsetFeatureMdp::transition_probs_at_feature(int level, State,
                                                              const Eigen::VectorXd&) const {
  check_level(level);
  return law_[level - 1];
}

std::string OffsetFeatureMdp::to_json(std::uint64_t seed) const {
  json j;
  j["schema"] = "momrl/mdp/1";
  j["kind"] = "offset_feature";
  j["seed"] = seed;
  j["candidates"] = matrix_to_json(candidates_);
  json nets = json::array();
  for (const auto& n : nets_) nets.push_back(net_to_json(n));
  j["nets"] = nets;
  json offs = json::array();
  for (const auto& lvl : offsets_) {
    json row = json::array();
    for (const auto& o : lvl)
      row.push_back(std::vector<double>(o.data(), o.data() + o.size()));
    offs.push_back(row);
  }
  j["offsets"] = offs;
  json law = json::array();
  for (const auto& p : law_)
    law.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  j["law"] = law;
  return j.dump(2);
}

OffsetFeatureMdp make_completeness_instance(const CompletenessInstanceConfig& cfg,
                                            std::mt19937_64& rng) {
  std::vector<TwoLayerNet> nets;
  std::vector<std::vector<Eigen::VectorXd>> offsets(cfg.horizon);
  std::vector<Eigen::VectorXd> law(cfg.horizon);
  for (int h = 0; h < cfg.horizon; ++h) {
    Eigen::VectorXi signs(cfg.k);
    for (int i = 0; i < cfg.k; ++i) signs[i] = (rng() & 1) ? 1 : -1;
    signs[0] = 1;
    nets.push_back(random_planted_net(cfg.k, cfg.d, signs,
                                      Eigen::VectorXd::Ones(cfg.k), cfg.activation, rng));
    offsets[h].resize(cfg.num_states);
    for (int s = 0; s < cfg.num_states; ++s)
      offsets[h][s] = cfg.offset_scale * gaussian_vector(cfg.d, rng);
    if (cfg.deterministic_transitions) {
      Eigen::VectorXd p = Eigen::VectorXd::Zero(cfg.num_states);
      p[static_cast<int>(rng() % cfg.num_states)] = 1.0;
      law[h] = p;
    } else {
      Eigen::VectorXd p(cfg.num_states);
      std::exponential_distribution<double> e(1.0);
      for (int s = 0; s < cfg.num_states; ++s) p[s] = e(rng) + 0.1;
      law[h] = p / p.sum();
    }
  }
  Eigen::MatrixXd cand = cfg.candidate_scale * gaussian_matrix(cfg.num_candidates, cfg.d, rng);
  return OffsetFeatureMdp(std::move(nets), std::move(offsets), std::move(law),
                          std::move(cand));
}

}  // namespace momrl
