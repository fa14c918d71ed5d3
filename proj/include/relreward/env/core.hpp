#ifndef RELREWARD_ENV_CORE_HPP_
#define RELREWARD_ENV_CORE_HPP_

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "relreward/object_model.hpp"

namespace relreward::env {

enum Action : int { kNoop = 0, kUp = 1, kDown = 2 };

struct EnvConfig {
  std::string game = "freeway";  // "freeway" | "pong" | "replay"
  std::uint64_t seed = 42;
  int horizon = 0;  // 0 picks the game default
  double screen_width = 160.0;
  double screen_height = 160.0;
  // Freeway
  int lanes = 10;
  double chicken_step = 2.0;
  std::vector<double> car_speeds{1.0, 2.0, 3.0, 4.0};
  // Pong
  double paddle_speed = 3.0;
  double enemy_speed = 1.5;
  double ball_speed = 2.0;
  int respawn_delay = 16;
  int points_to_win = 5;
  // Replay
  std::string trace_path;

  int effective_horizon() const {
    if (horizon > 0) return horizon;
    return game == "pong" ? 4096 : 2048;
  }
};

inline Json to_json(const EnvConfig& c) {
  Json j;
  j["game"] = c.game;
  j["seed"] = c.seed;
  j["horizon"] = c.horizon;
  j["screen_width"] = c.screen_width;
  j["screen_height"] = c.screen_height;
  j["lanes"] = c.lanes;
  j["chicken_step"] = c.chicken_step;
  j["car_speeds"] = c.car_speeds;
  j["paddle_speed"] = c.paddle_speed;
  j["enemy_speed"] = c.enemy_speed;
  j["ball_speed"] = c.ball_speed;
  j["respawn_delay"] = c.respawn_delay;
  j["points_to_win"] = c.points_to_win;
  j["trace_path"] = c.trace_path;
  return j;
}

// Missing keys keep their defaults; present keys must have the right type.
inline EnvConfig env_config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("env config must be a JSON object");
  EnvConfig c;
  auto get = [&](const char* key, auto& field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
      it->get_to(field);
    } catch (const Json::exception&) {
      throw std::invalid_argument(std::string("env config field '") + key + "' has the wrong type");
    }
  };
  get("game", c.game);
  get("seed", c.seed);
  get("horizon", c.horizon);
  get("screen_width", c.screen_width);
  get("screen_height", c.screen_height);
  get("lanes", c.lanes);
  get("chicken_step", c.chicken_step);
  get("car_speeds", c.car_speeds);
  get("paddle_speed", c.paddle_speed);
  get("enemy_speed", c.enemy_speed);
  get("ball_speed", c.ball_speed);
  get("respawn_delay", c.respawn_delay);
  get("points_to_win", c.points_to_win);
  get("trace_path", c.trace_path);
  if (c.game != "freeway" && c.game != "pong" && c.game != "replay") {
    throw std::invalid_argument("unknown game id '" + c.game + "'");
  }
  if (c.horizon < 0 || c.lanes <= 0 || c.car_speeds.empty() || c.screen_width <= 0 ||
      c.screen_height <= 0 || c.respawn_delay < 0 || c.points_to_win <= 0) {
    throw std::invalid_argument("env config out of range");
  }
  return c;
}

struct StepResult {
  Snapshot snapshot;
  double true_score_delta = 0.0;  // hidden from reward programs
  bool done = false;
  std::map<std::string, double> info;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual Snapshot reset() = 0;
  virtual StepResult step(int action) = 0;
  virtual int num_actions() const { return 3; }
  virtual bool done() const = 0;
  virtual const EnvConfig& config() const = 0;
};

// Uniform double in [0, 1) taken from the top 53 bits, so the stream is the
// same on every standard library (std::uniform_real_distribution is not).
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Episode traces

struct TraceRecord {
  Snapshot snapshot;
  int action = -1;  // action whose step produced this snapshot; -1 for reset
  double true_score_delta = 0.0;
  bool done = false;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct EpisodeTrace {
  EnvConfig config;
  std::vector<TraceRecord> records;
};

// Checks records[i].snapshot.t == i and that only the final record is done.
inline void validate_trace(const EpisodeTrace& tr) {
  for (std::size_t i = 0; i < tr.records.size(); ++i) {
    if (tr.records[i].snapshot.t != static_cast<std::int64_t>(i)) {
      throw std::invalid_argument("trace record " + std::to_string(i) + " has t = " +
                                  std::to_string(tr.records[i].snapshot.t));
    }
    if (tr.records[i].done && i + 1 != tr.records.size()) {
      throw std::invalid_argument("trace record " + std::to_string(i) +
                                  " is done but not final");
    }
  }
}

// Header line {"config": {...}} followed by one record per line.
inline std::string to_jsonl(const EpisodeTrace& tr) {
  std::string out = Json{{"config", to_json(tr.config)}}.dump() + "\n";
  for (const auto& r : tr.records) {
    Json j = to_json(r.snapshot);
    j["action"] = r.action;
    j["true_score_delta"] = r.true_score_delta;
    j["done"] = r.done;
    out += j.dump() + "\n";
  }
  return out;
}

inline EpisodeTrace trace_from_jsonl(std::istream& in) {
  EpisodeTrace tr;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      Json j = Json::parse(line);
      if (!have_header) {
        if (!j.is_object() || !j.contains("config")) {
          throw std::invalid_argument("first line must be a {\"config\": ...} header");
        }
        tr.config = env_config_from_json(j["config"]);
        have_header = true;
        continue;
      }
      TraceRecord r;
      r.snapshot = snapshot_from_json(j);
      const Json& a = detail::require(j, "action");
      const Json& d = detail::require(j, "true_score_delta");
      const Json& done = detail::require(j, "done");
      if (!a.is_number_integer() || !d.is_number() || !done.is_boolean()) {
        throw std::invalid_argument("action/true_score_delta/done have the wrong type");
      }
      r.action = a.get<int>();
      r.true_score_delta = d.get<double>();
      r.done = done.get<bool>();
      tr.records.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw std::invalid_argument("trace is empty (no header line)");
  validate_trace(tr);
  return tr;
}

inline EpisodeTrace trace_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  return trace_from_jsonl(in);
}

inline EpisodeTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open trace '" + path + "'");
  return trace_from_jsonl(in);
}

using Policy = std::function<int(const Snapshot&)>;

// Runs one episode from reset until done (or max_steps, if positive).
inline EpisodeTrace record_episode(Environment& env, const Policy& policy, int max_steps = 0) {
  EpisodeTrace tr;
  tr.config = env.config();
  TraceRecord first;
  first.snapshot = env.reset();
  tr.records.push_back(first);
  while (!env.done() && (max_steps <= 0 || static_cast<int>(tr.records.size()) <= max_steps)) {
    int a = policy(tr.records.back().snapshot);
    StepResult sr = env.step(a);
    tr.records.push_back({std::move(sr.snapshot), a, sr.true_score_delta, sr.done});
  }
  return tr;
}

}  // namespace relreward::env

#endif  // RELREWARD_ENV_CORE_HPP_
