#ifndef RELREWARD_RL_HPP_
#define RELREWARD_RL_HPP_

#include "relreward/rl/checkpoint.hpp"
#include "relreward/rl/config.hpp"
#include "relreward/rl/gae.hpp"
#include "relreward/rl/mlp.hpp"
#include "relreward/rl/observe.hpp"
#include "relreward/rl/ppo.hpp"
#include "relreward/rl/train.hpp"

#endif  // RELREWARD_RL_HPP_
