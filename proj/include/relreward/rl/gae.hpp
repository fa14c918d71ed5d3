#ifndef RELREWARD_RL_GAE_HPP_
#define RELREWARD_RL_GAE_HPP_

#include <stdexcept>
#include <vector>

namespace relreward::rl {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// One environment's rollout, oldest first. dones[t] marks that the episode
// ended with transition t, so v_{t+1} (or the bootstrap value after the last
// step) does not contribute:
//   delta_t = r_t + gamma * v_{t+1} * (1 - done_t) - v_t
//   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
inline GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                             const std::vector<bool>& dones, double bootstrap_value, double gamma,
                             double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) {
    throw std::invalid_argument("compute_gae: rewards, values and dones differ in length");
  }
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_adv = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    double next_value = i + 1 < n ? values[i + 1] : bootstrap_value;
    double live = dones[i] ? 0.0 : 1.0;
    double delta = rewards[i] + gamma * next_value * live - values[i];
    next_adv = delta + gamma * lambda * live * next_adv;
    out.advantages[i] = next_adv;
    out.returns[i] = next_adv + values[i];
  }
  return out;
}

}  // namespace relreward::rl

#endif  // RELREWARD_RL_GAE_HPP_
