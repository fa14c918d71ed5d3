#ifndef RELREWARD_RL_PPO_HPP_
#define RELREWARD_RL_PPO_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "relreward/rl/config.hpp"
#include "relreward/rl/mlp.hpp"

namespace relreward::rl {

// Separate actor (action logits) and critic (state value) networks.
struct ActorCritic {
  Mlp actor;
  Mlp critic;

  static ActorCritic make(int obs_dim, int num_actions, const std::vector<int>& hidden,
                          std::uint64_t seed) {
    std::vector<int> a{obs_dim}, c{obs_dim};
    a.insert(a.end(), hidden.begin(), hidden.end());
    c.insert(c.end(), hidden.begin(), hidden.end());
    a.push_back(num_actions);
    c.push_back(1);
    ActorCritic ac{Mlp(a), Mlp(c)};
    std::mt19937_64 rng(seed);
    ac.actor.orthogonal_init(rng, std::sqrt(2.0), 0.01);
    ac.critic.orthogonal_init(rng, std::sqrt(2.0), 1.0);
    return ac;
  }

  int obs_dim() const { return actor.input_size(); }
  int num_actions() const { return actor.output_size(); }
};

// Row-wise log-softmax of a (actions x batch) logit matrix.
inline MatrixXd log_softmax(const MatrixXd& logits) {
  MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    double m = logits.col(j).maxCoeff();
    double lse = m + std::log((logits.col(j).array() - m).exp().sum());
    out.col(j) = logits.col(j).array() - lse;
  }
  return out;
}

// The per-sample clipped surrogate min(r * A, clip(r, 1 - eps, 1 + eps) * A).
inline double clipped_objective(double ratio, double advantage, double eps) {
  return std::min(ratio * advantage, std::clamp(ratio, 1.0 - eps, 1.0 + eps) * advantage);
}

struct Minibatch {
  MatrixXd obs;  // obs_dim x n
  std::vector<int> actions;
  VectorXd old_logp;
  VectorXd advantages;
  VectorXd returns;
  VectorXd old_values;
};

struct LossStats {
  double loss = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clipfrac = 0.0;
};

// PPO loss = policy_loss - ent_coef * entropy + vf_coef * value_loss, with
// optional per-minibatch advantage normalisation and value clipping. When
// gradient outputs are given they receive d loss / d params.
inline LossStats ppo_loss(const ActorCritic& ac, const Minibatch& mb, const TrainingConfig& cfg,
                          VectorXd* actor_grad = nullptr, VectorXd* critic_grad = nullptr) {
  const Eigen::Index n = mb.obs.cols();
  if (n == 0 || static_cast<Eigen::Index>(mb.actions.size()) != n || mb.old_logp.size() != n ||
      mb.advantages.size() != n || mb.returns.size() != n || mb.old_values.size() != n) {
    throw std::invalid_argument("ppo_loss: minibatch arrays differ in length");
  }
  const double eps = cfg.clip_coef;
  VectorXd adv = mb.advantages;
  if (cfg.norm_adv && n > 1) {
    double mean = adv.mean();
    double sd = std::sqrt((adv.array() - mean).square().sum() / static_cast<double>(n - 1));
    adv = (adv.array() - mean) / (sd + 1e-8);
  }

  Mlp::Cache acache, ccache;
  MatrixXd logits = ac.actor.forward(mb.obs, &acache);
  MatrixXd values = ac.critic.forward(mb.obs, &ccache);
  MatrixXd logp = log_softmax(logits);
  MatrixXd probs = logp.array().exp();

  LossStats st;
  MatrixXd dlogits = MatrixXd::Zero(logits.rows(), n);
  MatrixXd dvalues = MatrixXd::Zero(1, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    int a = mb.actions[i];
    double logratio = logp(a, i) - mb.old_logp(i);
    double ratio = std::exp(logratio);
    double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
    double unclipped_term = -adv(i) * ratio;
    double clipped_term = -adv(i) * clipped;
    st.policy_loss += std::max(unclipped_term, clipped_term) * inv_n;
    st.approx_kl += ((ratio - 1.0) - logratio) * inv_n;
    st.clipfrac += (std::abs(ratio - 1.0) > eps ? 1.0 : 0.0) * inv_n;

    // d policy_loss / d logp_a
    double g_logp = 0.0;
    if (unclipped_term >= clipped_term) {
      g_logp = -adv(i) * ratio;
    } else if (ratio > 1.0 - eps && ratio < 1.0 + eps) {
      g_logp = -adv(i) * ratio;
    }
    g_logp *= inv_n;

    double h = -(probs.col(i).array() * logp.col(i).array()).sum();
    st.entropy += h * inv_n;
    for (Eigen::Index k = 0; k < logits.rows(); ++k) {
      double onehot = k == a ? 1.0 : 0.0;
      dlogits(k, i) = g_logp * (onehot - probs(k, i)) +
                      cfg.ent_coef * inv_n * probs(k, i) * (logp(k, i) + h);
    }

    double v = values(0, i);
    double resid = v - mb.returns(i);
    double g_v = resid;
    double vl = resid * resid;
    if (cfg.clip_vloss) {
      double dv = v - mb.old_values(i);
      double vclip = mb.old_values(i) + std::clamp(dv, -eps, eps);
      double cresid = vclip - mb.returns(i);
      if (cresid * cresid > vl) {
        vl = cresid * cresid;
        g_v = (dv > -eps && dv < eps) ? cresid : 0.0;
      }
    }
    st.value_loss += 0.5 * vl * inv_n;
    dvalues(0, i) = cfg.vf_coef * g_v * inv_n;
  }
  st.loss = st.policy_loss - cfg.ent_coef * st.entropy + cfg.vf_coef * st.value_loss;
  if (!std::isfinite(st.loss)) {
    throw std::runtime_error("ppo: non-finite loss; update aborted");
  }
  if (actor_grad) *actor_grad = ac.actor.backward(acache, dlogits);
  if (critic_grad) *critic_grad = ac.critic.backward(ccache, dvalues);
  return st;
}

// Optimizer state for both networks; the gradient-norm cap is global.
struct PpoOptimizer {
  Adam actor;
  Adam critic;

  PpoOptimizer() = default;
  PpoOptimizer(const ActorCritic& ac, double eps)
      : actor(ac.actor.params.size(), eps), critic(ac.critic.params.size(), eps) {}
};

// Flat rollout storage, index = t * num_envs + env.
struct RolloutBatch {
  MatrixXd obs;
  std::vector<int> actions;
  VectorXd logp;
  VectorXd values;
  VectorXd rewards;
  VectorXd true_score_deltas;  // logged only; never read by the update
  std::vector<std::uint8_t> dones;  // bytes, not vector<bool>: workers write concurrently
  VectorXd advantages;
  VectorXd returns;

  Eigen::Index size() const { return obs.cols(); }
};

// Epochs x shuffled minibatches of clipped-surrogate updates. Returns the
// loss statistics averaged over all minibatches.
inline LossStats ppo_update(const RolloutBatch& batch, ActorCritic& ac, PpoOptimizer& opt,
                            const TrainingConfig& cfg, double lr, std::mt19937_64& rng) {
  const Eigen::Index n = batch.size();
  if (n != cfg.batch_size) throw std::invalid_argument("ppo_update: batch has the wrong size");
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  LossStats mean;
  int count = 0;
  const Eigen::Index m = cfg.minibatch_size;
  Minibatch mb;
  mb.obs.resize(batch.obs.rows(), m);
  mb.actions.resize(m);
  mb.old_logp.resize(m);
  mb.advantages.resize(m);
  mb.returns.resize(m);
  mb.old_values.resize(m);
  for (int epoch = 0; epoch < cfg.update_epochs; ++epoch) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (Eigen::Index start = 0; start < n; start += m) {
      for (Eigen::Index k = 0; k < m; ++k) {
        Eigen::Index s = idx[start + k];
        mb.obs.col(k) = batch.obs.col(s);
        mb.actions[k] = batch.actions[s];
        mb.old_logp(k) = batch.logp(s);
        mb.advantages(k) = batch.advantages(s);
        mb.returns(k) = batch.returns(s);
        mb.old_values(k) = batch.values(s);
      }
      VectorXd ga, gc;
      LossStats st = ppo_loss(ac, mb, cfg, &ga, &gc);
      double norm = std::sqrt(ga.squaredNorm() + gc.squaredNorm());
      if (!std::isfinite(norm)) throw std::runtime_error("ppo: non-finite gradient; update aborted");
      if (norm > cfg.max_grad_norm) {
        double scale = cfg.max_grad_norm / (norm + 1e-6);
        ga *= scale;
        gc *= scale;
      }
      opt.actor.step(ac.actor.params, ga, lr);
      opt.critic.step(ac.critic.params, gc, lr);
      mean.loss += st.loss;
      mean.policy_loss += st.policy_loss;
      mean.value_loss += st.value_loss;
      mean.entropy += st.entropy;
      mean.approx_kl += st.approx_kl;
      mean.clipfrac += st.clipfrac;
      ++count;
    }
  }
  if (count > 0) {
    for (double* f : {&mean.loss, &mean.policy_loss, &mean.value_loss, &mean.entropy,
                      &mean.approx_kl, &mean.clipfrac}) {
      *f /= count;
    }
  }
  return mean;
}

}  // namespace relreward::rl

#endif  // RELREWARD_RL_PPO_HPP_
