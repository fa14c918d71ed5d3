#ifndef RELREWARD_RL_CONFIG_HPP_
#define RELREWARD_RL_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace relreward::rl {

using Json = nlohmann::ordered_json;

// PPO + GAE settings. Defaults follow the reference Atari configuration
// (8 envs x 128 steps, 4 minibatches, 4 epochs, clip 0.1) at a desk-scale
// step budget.
struct TrainingConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_coef = 0.1;
  int batch_size = 1024;
  int minibatch_size = 256;
  double learning_rate = 2.5e-4;
  bool anneal_lr = true;
  std::int64_t total_steps = 300000;
  int num_envs = 8;
  std::vector<std::uint64_t> seeds{42, 73, 91};
  std::uint64_t seed = 42;  // seed of this run
  int update_epochs = 4;
  double ent_coef = 0.01;
  double vf_coef = 0.5;
  double max_grad_norm = 0.5;
  bool clip_vloss = true;
  bool norm_adv = true;
  double adam_eps = 1e-5;
  std::vector<int> hidden{64, 64};
  int workers = 0;  // rollout threads; 0 = one per hardware thread, at most num_envs

  int steps_per_env() const { return batch_size / num_envs; }
  std::int64_t num_updates() const { return total_steps / batch_size; }

  void validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("training config: " + m); };
    if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must be in (0, 1]");
    if (!(gae_lambda > 0.0 && gae_lambda <= 1.0)) fail("gae_lambda must be in (0, 1]");
    if (!(clip_coef > 0.0)) fail("clip_coef must be > 0");
    if (num_envs <= 0 || batch_size <= 0 || minibatch_size <= 0) fail("sizes must be positive");
    if (batch_size % minibatch_size != 0) fail("batch_size must be divisible by minibatch_size");
    if (batch_size % num_envs != 0) fail("batch_size must be divisible by num_envs");
    if (total_steps < 0) fail("total_steps must be >= 0");
    if (update_epochs <= 0) fail("update_epochs must be positive");
    if (!(learning_rate > 0.0) || !(adam_eps > 0.0) || !(max_grad_norm > 0.0)) {
      fail("learning_rate, adam_eps and max_grad_norm must be > 0");
    }
    if (hidden.empty()) fail("hidden must list at least one layer");
    for (int h : hidden) {
      if (h <= 0) fail("hidden layer sizes must be positive");
    }
    if (workers < 0) fail("workers must be >= 0");
  }
};

inline Json to_json(const TrainingConfig& c) {
  Json j;
  j["gamma"] = c.gamma;
  j["gae_lambda"] = c.gae_lambda;
  j["clip_coef"] = c.clip_coef;
  j["batch_size"] = c.batch_size;
  j["minibatch_size"] = c.minibatch_size;
  j["learning_rate"] = c.learning_rate;
  j["anneal_lr"] = c.anneal_lr;
  j["total_steps"] = c.total_steps;
  j["num_envs"] = c.num_envs;
  j["seeds"] = c.seeds;
  j["seed"] = c.seed;
  j["update_epochs"] = c.update_epochs;
  j["ent_coef"] = c.ent_coef;
  j["vf_coef"] = c.vf_coef;
  j["max_grad_norm"] = c.max_grad_norm;
  j["clip_vloss"] = c.clip_vloss;
  j["norm_adv"] = c.norm_adv;
  j["adam_eps"] = c.adam_eps;
  j["hidden"] = c.hidden;
  j["workers"] = c.workers;
  return j;
}

// Unknown keys are rejected so that typos do not silently fall back to defaults.
inline TrainingConfig training_config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("training config must be a JSON object");
  TrainingConfig c;
  Json known = to_json(c);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.contains(it.key())) {
      throw std::invalid_argument("training config: unknown field '" + it.key() + "'");
    }
  }
  auto get = [&](const char* key, auto& field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    bool numeric_field = known[key].is_number();
    if (numeric_field != it->is_number() || (known[key].is_boolean() && !it->is_boolean())) {
      throw std::invalid_argument(std::string("training config: field '") + key +
                                  "' has the wrong type");
    }
    try {
      it->get_to(field);
    } catch (const Json::exception&) {
      throw std::invalid_argument(std::string("training config: field '") + key +
                                  "' has the wrong type");
    }
  };
  get("gamma", c.gamma);
  get("gae_lambda", c.gae_lambda);
  get("clip_coef", c.clip_coef);
  get("batch_size", c.batch_size);
  get("minibatch_size", c.minibatch_size);
  get("learning_rate", c.learning_rate);
  get("anneal_lr", c.anneal_lr);
  get("total_steps", c.total_steps);
  get("num_envs", c.num_envs);
  get("seeds", c.seeds);
  get("seed", c.seed);
  get("update_epochs", c.update_epochs);
  get("ent_coef", c.ent_coef);
  get("vf_coef", c.vf_coef);
  get("max_grad_norm", c.max_grad_norm);
  get("clip_vloss", c.clip_vloss);
  get("norm_adv", c.norm_adv);
  get("adam_eps", c.adam_eps);
  get("hidden", c.hidden);
  get("workers", c.workers);
  c.validate();
  return c;
}

}  // namespace relreward::rl

#endif  // RELREWARD_RL_CONFIG_HPP_
