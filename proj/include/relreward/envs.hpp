#ifndef RELREWARD_ENVS_HPP_
#define RELREWARD_ENVS_HPP_

#include <memory>
#include <stdexcept>

#include "relreward/env/core.hpp"
#include "relreward/env/freeway.hpp"
#include "relreward/env/pong.hpp"
#include "relreward/env/replay.hpp"

namespace relreward::env {

inline std::unique_ptr<Environment> make_env(const EnvConfig& cfg) {
  if (cfg.game == "freeway") return std::make_unique<MiniFreeway>(cfg);
  if (cfg.game == "pong") return std::make_unique<MiniPong>(cfg);
  if (cfg.game == "replay") {
    if (cfg.trace_path.empty()) throw std::invalid_argument("replay env needs trace_path");
    return std::make_unique<ReplayEnv>(load_trace(cfg.trace_path));
  }
  throw std::invalid_argument("unknown game id '" + cfg.game + "'");
}

}  // namespace relreward::env

#endif  // RELREWARD_ENVS_HPP_
