#ifndef RELREWARD_RL_TRAIN_HPP_
#define RELREWARD_RL_TRAIN_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "relreward/dsl/evaluator.hpp"
#include "relreward/envs.hpp"
#include "relreward/metrics.hpp"
#include "relreward/rl/config.hpp"
#include "relreward/rl/gae.hpp"
#include "relreward/rl/observe.hpp"
#include "relreward/rl/ppo.hpp"

namespace relreward::rl {

using EnvFactory = std::function<std::unique_ptr<env::Environment>(const env::EnvConfig&)>;

// Seed for stream `stream` of a run, mixed through std::seed_seq so nearby
// run seeds give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline int sample_categorical(const VectorXd& logits, std::mt19937_64& rng) {
  VectorXd p = (logits.array() - logits.maxCoeff()).exp();
  double u = env::unit_uniform(rng) * p.sum();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    acc += p(k);
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(p.size() - 1);
}

struct TrainResult {
  ActorCritic policy;
  std::vector<MetricRow> metrics;
  std::int64_t reward_traps = 0;
  std::int64_t episodes = 0;
};

// Called after every update with (update index from 1, number of updates).
using TrainProgress = std::function<void(std::int64_t, std::int64_t, const LossStats&)>;

// PPO training on `num_envs` copies of the environment. The synthesized reward
// for a transition is evaluate(program, next snapshot); a trapped evaluation
// gives 0.0 and is counted. The environment's true score is only logged.
//
// Metrics (step = global transition counter, unique per row and metric):
//   episode_return, episode_true_score, episode_length, episode_traps
//   policy_loss, value_loss, entropy, approx_kl, clipfrac, learning_rate,
//   reward_traps (cumulative), logged after every update.
inline TrainResult train(const env::EnvConfig& env_cfg, const dsl::RewardProgram& program,
                         const TrainingConfig& cfg, const EnvFactory& factory = env::make_env,
                         const TrainProgress& progress = {}) {
  cfg.validate();
  if (env_cfg.game != "freeway" && env_cfg.game != "pong") {
    throw std::invalid_argument("training needs a simulated game (freeway or pong), got '" +
                                env_cfg.game + "'");
  }
  const ObservationLayout layout =
      observation_layout(env_cfg.game, env_cfg.screen_width, env_cfg.screen_height);
  const int E = cfg.num_envs;
  const int T = cfg.steps_per_env();
  const std::int64_t updates = cfg.num_updates();
  const auto seed = static_cast<std::int64_t>(cfg.seed);

  struct Slot {
    std::unique_ptr<env::Environment> env;
    Snapshot snap;
    std::mt19937_64 rng;
    double ep_return = 0.0, ep_true = 0.0;
    std::int64_t ep_len = 0, ep_traps = 0;
    std::int64_t traps = 0;
    std::vector<MetricRow> finished;
  };
  std::vector<Slot> slots(E);
  for (int e = 0; e < E; ++e) {
    env::EnvConfig c = env_cfg;
    c.seed = derive_seed(cfg.seed, 2 * e);
    slots[e].env = factory(c);
    slots[e].rng.seed(derive_seed(cfg.seed, 2 * e + 1));
    slots[e].snap = slots[e].env->reset();
  }

  TrainResult result;
  result.policy = ActorCritic::make(layout.size(), slots[0].env->num_actions(), cfg.hidden,
                                    derive_seed(cfg.seed, 1u << 20));
  ActorCritic& ac = result.policy;
  PpoOptimizer opt(ac, cfg.adam_eps);
  std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, (1u << 20) + 1));

  RolloutBatch batch;
  batch.obs.resize(layout.size(), cfg.batch_size);
  batch.actions.assign(cfg.batch_size, 0);
  batch.logp.resize(cfg.batch_size);
  batch.values.resize(cfg.batch_size);
  batch.rewards.resize(cfg.batch_size);
  batch.true_score_deltas.resize(cfg.batch_size);
  batch.dones.assign(cfg.batch_size, 0);
  batch.advantages.resize(cfg.batch_size);
  batch.returns.resize(cfg.batch_size);
  std::vector<double> bootstrap(E);

  unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(E));

  for (std::int64_t u = 0; u < updates; ++u) {
    const std::int64_t base = u * cfg.batch_size;

    // Rollout: envs are independent, the policy is read-only.
    auto run_env = [&](int e) {
      Slot& s = slots[e];
      VectorXd x(layout.size());
      for (int t = 0; t < T; ++t) {
        const int i = t * E + e;
        observe_into(s.snap, layout, x.data());
        batch.obs.col(i) = x;
        VectorXd logits = ac.actor.forward(x);
        double value = ac.critic.forward(x)(0, 0);
        int a = sample_categorical(logits, s.rng);
        MatrixXd lp = log_softmax(logits);
        env::StepResult sr = s.env->step(a);
        dsl::EvalResult r = dsl::evaluate(program, sr.snapshot);
        batch.actions[i] = a;
        batch.logp(i) = lp(a, 0);
        batch.values(i) = value;
        batch.rewards(i) = r.value;
        batch.true_score_deltas(i) = sr.true_score_delta;
        batch.dones[i] = sr.done ? 1 : 0;
        s.ep_return += r.value;
        s.ep_true += sr.true_score_delta;
        s.ep_len += 1;
        if (r.trapped()) {
          ++s.ep_traps;
          ++s.traps;
        }
        if (sr.done) {
          const std::int64_t step = base + static_cast<std::int64_t>(t) * E + e + 1;
          s.finished.push_back({step, "episode_return", s.ep_return, seed});
          s.finished.push_back({step, "episode_true_score", s.ep_true, seed});
          s.finished.push_back({step, "episode_length", static_cast<double>(s.ep_len), seed});
          s.finished.push_back({step, "episode_traps", static_cast<double>(s.ep_traps), seed});
          s.ep_return = s.ep_true = 0.0;
          s.ep_len = s.ep_traps = 0;
          s.snap = s.env->reset();
        } else {
          s.snap = std::move(sr.snapshot);
        }
      }
      observe_into(s.snap, layout, x.data());
      bootstrap[e] = ac.critic.forward(x)(0, 0);
    };
    if (workers <= 1) {
      for (int e = 0; e < E; ++e) run_env(e);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (int e = static_cast<int>(w); e < E; e += static_cast<int>(workers)) run_env(e);
        });
      }
      for (auto& th : pool) th.join();
    }

    // Episode rows in global step order (env-major interleaving keeps steps unique).
    std::vector<MetricRow> episodes;
    for (auto& s : slots) {
      episodes.insert(episodes.end(), s.finished.begin(), s.finished.end());
      s.finished.clear();
    }
    std::stable_sort(episodes.begin(), episodes.end(),
                     [](const MetricRow& a, const MetricRow& b) { return a.step < b.step; });
    result.episodes += static_cast<std::int64_t>(episodes.size() / 4);
    result.metrics.insert(result.metrics.end(), episodes.begin(), episodes.end());

    // Advantages per env from the synthesized rewards only.
    for (int e = 0; e < E; ++e) {
      std::vector<double> r(T), v(T);
      std::vector<bool> d(T);
      for (int t = 0; t < T; ++t) {
        r[t] = batch.rewards(t * E + e);
        v[t] = batch.values(t * E + e);
        d[t] = batch.dones[t * E + e] != 0;
      }
      GaeResult g = compute_gae(r, v, d, bootstrap[e], cfg.gamma, cfg.gae_lambda);
      for (int t = 0; t < T; ++t) {
        batch.advantages(t * E + e) = g.advantages[t];
        batch.returns(t * E + e) = g.returns[t];
      }
    }

    double frac = cfg.anneal_lr ? 1.0 - static_cast<double>(u) / static_cast<double>(updates) : 1.0;
    double lr = frac * cfg.learning_rate;
    LossStats st = ppo_update(batch, ac, opt, cfg, lr, shuffle_rng);

    std::int64_t traps = 0;
    for (const auto& s : slots) traps += s.traps;
    result.reward_traps = traps;
    const std::int64_t step = base + cfg.batch_size;
    for (auto [name, value] : {std::pair<const char*, double>{"policy_loss", st.policy_loss},
                               {"value_loss", st.value_loss},
                               {"entropy", st.entropy},
                               {"approx_kl", st.approx_kl},
                               {"clipfrac", st.clipfrac},
                               {"learning_rate", lr},
                               {"reward_traps", static_cast<double>(traps)}}) {
      result.metrics.push_back({step, name, value, seed});
    }
    if (progress) progress(u + 1, updates, st);
  }
  return result;
}

// Greedy or sampled action for a single snapshot, for evaluating a trained policy.
inline int act(const ActorCritic& ac, const ObservationLayout& layout, const Snapshot& s,
               std::mt19937_64* rng = nullptr) {
  VectorXd x(layout.size());
  observe_into(s, layout, x.data());
  VectorXd logits = ac.actor.forward(x);
  if (rng) return sample_categorical(logits, *rng);
  Eigen::Index best = 0;
  logits.maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace relreward::rl

#endif  // RELREWARD_RL_TRAIN_HPP_
