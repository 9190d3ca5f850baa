#include "momrl/tabular_mdp.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace momrl {

using nlohmann::json;

TabularMdp::TabularMdp(int num_states, State initial, std::vector<Level> levels,
                       bool validate_bounds)
    : num_states_(num_states), initial_(initial), levels_(std::move(levels)) {
  if (num_states_ <= 0) throw ValidationError("TabularMdp: need at least one state");
  if (initial_ < 0 || initial_ >= num_states_)
    throw ValidationError("TabularMdp: initial state out of range");
  if (levels_.empty()) throw ValidationError("TabularMdp: horizon must be >= 1");
  double max_step_reward = 0.0;
  for (auto& lvl : levels_) {
    if (static_cast<int>(lvl.reward.size()) != num_states_)
      throw ValidationError("TabularMdp: reward table must cover all states");
    for (State s = 0; s < num_states_; ++s) {
      if (lvl.reward[s].size() != lvl.probs[s].size())
        throw ValidationError("TabularMdp: reward/kernel action mismatch");
      for (size_t a = 0; a < lvl.probs[s].size(); ++a) {
        const Eigen::VectorXd& p = lvl.probs[s][a];
        if (p.size() != num_states_)
          throw ValidationError("TabularMdp: kernel row has wrong state count");
        if (std::abs(p.sum() - 1.0) > 1e-9 || p.minCoeff() < -1e-12)
          throw ValidationError("TabularMdp: kernel row is not a distribution");
        if ((p.array() > 1.0 - 1e-12).count() == 0) deterministic_ = false;
        max_step_reward = std::max(max_step_reward, std::abs(lvl.reward[s][a]));
      }
      if (!lvl.features.empty()) {
        for (const auto& f : lvl.features[s]) {
          feature_dim_ = static_cast<int>(f.size());
          feature_bound_ = std::max(feature_bound_, f.norm());
        }
      }
    }
  }
  if (validate_bounds) {
    const double H = static_cast<double>(levels_.size());
    for (auto& lvl : levels_)
      for (State s = 0; s < num_states_; ++s)
        for (double r : lvl.reward[s])
          if (r < -1e-12 || r > H + 1e-12)
            throw ValidationError("TabularMdp: rewards must lie in [0, H]");
    // worst-case return over all behaviours must stay within [0, H]
    Eigen::VectorXd worst = Eigen::VectorXd::Zero(num_states_);
    for (int h = static_cast<int>(levels_.size()); h >= 1; --h) {
      Eigen::VectorXd next = worst;
      for (State s = 0; s < num_states_; ++s) {
        double best = 0.0;
        const auto& lvl = levels_[h - 1];
        for (size_t a = 0; a < lvl.reward[s].size(); ++a)
          best = std::max(best, lvl.reward[s][a] + lvl.probs[s][a].dot(next));
        worst[s] = best;
      }
    }
    if (worst.maxCoeff() > H + 1e-9)
      throw ValidationError("TabularMdp: some return exceeds H");
  }
}

int TabularMdp::num_actions(int level) const {
  check_level(level);
  return static_cast<int>(levels_[level - 1].reward[0].size());
}

Eigen::VectorXd TabularMdp::feature(int level, State s, int a) const {
  check_level(level);
  const auto& lvl = levels_[level - 1];
  if (lvl.features.empty()) return Eigen::VectorXd::Zero(feature_dim_);
  return lvl.features[s][a];
}

double TabularMdp::reward(int level, State s, int a) const {
  check_level(level);
  return levels_[level - 1].reward[s][a];
}

Eigen::VectorXd TabularMdp::transition_probs(int level, State s, int a) const {
  check_level(level);
  return levels_[level - 1].probs[s][a];
}

std::string TabularMdp::to_json(std::uint64_t seed) const {
  json j;
  j["schema"] = "momrl/mdp/1";
  j["kind"] = "tabular";
  j["states"] = num_states_;
  j["initial"] = initial_;
  j["seed"] = seed;
  json lv = json::array();
  for (const auto& lvl : levels_) {
    json l;
    l["reward"] = lvl.reward;
    json pk = json::array();
    for (State s = 0; s < num_states_; ++s) {
      json row = json::array();
      for (const auto& p : lvl.probs[s])
        row.push_back(std::vector<double>(p.data(), p.data() + p.size()));
      pk.push_back(row);
    }
    l["kernel"] = pk;
    if (!lvl.features.empty()) {
      json fk = json::array();
      for (State s = 0; s < num_states_; ++s) {
        json row = json::array();
        for (const auto& f : lvl.features[s])
          row.push_back(std::vector<double>(f.data(), f.data() + f.size()));
        fk.push_back(row);
      }
      l["features"] = fk;
    }
    lv.push_back(l);
  }
  j["levels"] = lv;
  return j.dump(2);
}

TabularMdp TabularMdp::from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("kind", "") != "tabular")
    throw ValidationError("TabularMdp::from_json: kind mismatch");
  int states = j.at("states").get<int>();
  State initial = j.at("initial").get<State>();
  std::vector<Level> levels;
  for (const auto& l : j.at("levels")) {
    Level lvl;
    lvl.reward = l.at("reward").get<std::vector<std::vector<double>>>();
    for (const auto& srow : l.at("kernel")) {
      std::vector<Eigen::VectorXd> row;
      for (const auto& p : srow) {
        auto v = p.get<std::vector<double>>();
        row.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), v.size()));
      }
      lvl.probs.push_back(std::move(row));
    }
    if (l.contains("features")) {
      for (const auto& srow : l.at("features")) {
        std::vector<Eigen::VectorXd> row;
        for (const auto& f : srow) {
          auto v = f.get<std::vector<double>>();
          row.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), v.size()));
        }
        lvl.features.push_back(std::move(row));
      }
    }
    levels.push_back(std::move(lvl));
  }
  return TabularMdp(states, initial, std::move(levels), /*validate_bounds=*/false);
}

TabularMdp deterministic_chain(const std::vector<std::vector<double>>& rewards_per_level) {
  const int H = static_cast<int>(rewards_per_level.size());
  int states = H + 1;
  std::vector<TabularMdp::Level> levels(H);
  for (int h = 0; h < H; ++h) {
    auto& lvl = levels[h];
    const int A = static_cast<int>(rewards_per_level[h].size());
    lvl.reward.assign(states, std::vector<double>(A, 0.0));
    lvl.probs.assign(states, {});
    for (State s = 0; s < states; ++s) {
      lvl.reward[s] = rewards_per_level[h];
      for (int a = 0; a < A; ++a) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(states);
        p[std::min(s + 1, states - 1)] = 1.0;
        lvl.probs[s].push_back(p);
      }
    }
  }
  return TabularMdp(states, 0, std::move(levels), /*validate_bounds=*/false);
}

}  // namespace momrl
