#ifndef RELREWARD_OBJECT_MODEL_HPP_
#define RELREWARD_OBJECT_MODEL_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace relreward {

using Json = nlohmann::ordered_json;

// One detected on-screen entity. Coordinates are the top-left corner in
// pixels; prev_* hold the coordinates of the previous step.
struct GameObject {
  std::string category;
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  double prev_x = 0.0;
  double prev_y = 0.0;
  std::array<int, 3> rgb{0, 0, 0};
  std::optional<double> orientation;
  bool hud = false;
  std::optional<std::int64_t> value;
  std::optional<std::int64_t> prev_value;

  double dx() const { return x - prev_x; }
  double dy() const { return y - prev_y; }

  // A missing prev_value falls back to value, so a fresh object has diff 0.
  std::optional<std::int64_t> value_diff() const {
    if (!value) return std::nullopt;
    return *value - prev_value.value_or(*value);
  }

  friend bool operator==(const GameObject&, const GameObject&) = default;
};

struct Snapshot {
  std::int64_t t = 0;
  std::vector<GameObject> objects;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

inline GameObject make_object(std::string category, double x, double y,
                              double w, double h) {
  GameObject o;
  o.category = std::move(category);
  o.x = x;
  o.y = y;
  o.w = w;
  o.h = h;
  o.prev_x = x;
  o.prev_y = y;
  return o;
}

// ---------------------------------------------------------------------------
// Geometry

inline std::pair<double, double> center(const GameObject& o) {
  return {o.x + o.w / 2.0, o.y + o.h / 2.0};
}

inline double manhattan_distance(const GameObject& a, const GameObject& b) {
  auto [ax, ay] = center(a);
  auto [bx, by] = center(b);
  return std::abs(ax - bx) + std::abs(ay - by);
}

// Strict axis-aligned box intersection; boxes sharing an edge do not overlap.
inline bool overlaps(const GameObject& a, const GameObject& b) {
  return a.x < b.x + b.w && a.x + a.w > b.x && a.y < b.y + b.h &&
         a.y + a.h > b.y;
}

// True iff the top-left corner of `a` lies inside `b` (bounds inclusive).
// Not symmetric, unlike overlaps().
inline bool corner_in(const GameObject& a, const GameObject& b) {
  return b.x <= a.x && a.x <= b.x + b.w && b.y <= a.y && a.y <= b.y + b.h;
}

// Closest candidate by manhattan distance between centers; ties go to the
// lowest index.
inline std::optional<std::pair<std::size_t, GameObject>> nearest(
    const GameObject& ref, std::span<const GameObject> candidates) {
  if (candidates.empty()) return std::nullopt;
  std::size_t best = 0;
  double best_d = manhattan_distance(ref, candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    double d = manhattan_distance(ref, candidates[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return std::make_pair(best, candidates[best]);
}

// ---------------------------------------------------------------------------
// Reward visibility

inline bool is_score_object(const GameObject& o) {
  return o.hud || o.category.find("Score") != std::string::npos;
}

// Drops HUD and score-display objects, keeping the relative order of the rest.
inline Snapshot reward_visible(const Snapshot& s) {
  Snapshot out;
  out.t = s.t;
  out.objects.reserve(s.objects.size());
  for (const auto& o : s.objects) {
    if (!is_score_object(o)) out.objects.push_back(o);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-game object registry. This drives schema rendering for prompts, the
// observation layout and the snapshot fuzzer.

struct CategorySpec {
  std::string name;
  std::string doc;
  double w = 0.0;
  double h = 0.0;
  std::array<int, 3> rgb{0, 0, 0};
  bool hud = false;
  bool has_value = false;
  int max_count = 1;  // upper bound used by fuzzing and observation slots
};

struct GameSchema {
  std::string game;
  std::vector<CategorySpec> categories;

  const CategorySpec* find(const std::string& name) const {
    for (const auto& c : categories) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

inline const std::vector<GameSchema>& game_schemas() {
  static const std::vector<GameSchema> schemas = {
      {"freeway",
       {
           {"Chicken", "A chicken crossing the freeway. There are two, the "
                       "player controls the left one.",
            6, 6, {252, 252, 84}, false, false, 2},
           {"Car", "A car driving along one of the horizontal lanes.", 8, 6,
            {167, 26, 26}, false, false, 10},
           {"Score", "The score display.", 8, 10, {228, 111, 111}, true, true,
            2},
       }},
      {"pong",
       {
           {"Player", "The player figure i.e., the movable bar at the side.",
            4, 15, {92, 186, 92}, false, false, 1},
           {"Enemy", "The enemy bar on the opposite side.", 4, 15,
            {213, 130, 74}, false, false, 1},
           {"Ball", "The game ball.", 2, 4, {236, 236, 236}, false, false, 1},
           {"PlayerScore", "The player's score display.", 12, 20,
            {92, 186, 92}, true, true, 1},
           {"EnemyScore", "The enemy's score display.", 12, 20,
            {213, 130, 74}, true, true, 1},
       }},
      {"seaquest",
       {
           {"Player", "The player's submarine.", 16, 11, {187, 187, 53},
            false, false, 1},
           {"Diver", "A diver that can be rescued.", 8, 11, {66, 72, 200},
            false, false, 4},
           {"Shark", "A killer shark.", 8, 7, {92, 186, 92}, false, false, 4},
           {"Submarine", "An enemy submarine.", 8, 11, {170, 170, 170}, false,
            false, 4},
           {"PlayerMissile", "A torpedo fired by the player.", 8, 1,
            {187, 187, 53}, false, false, 1},
           {"EnemyMissile", "A torpedo fired by an enemy submarine.", 8, 1,
            {66, 72, 200}, false, false, 4},
           {"OxygenBar", "The oxygen gauge; value is the remaining oxygen "
                         "(0 to 64).",
            63, 5, {214, 214, 214}, false, true, 1},
           {"CollectedDiver", "One collected diver shown at the bottom.", 8, 9,
            {24, 26, 167}, false, false, 6},
           {"PlayerScore", "The player's score display.", 40, 8,
            {210, 210, 64}, true, true, 1},
           {"Lives", "The remaining lives display.", 23, 7, {210, 210, 64},
            true, true, 1},
       }},
      {"skiing",
       {
           {"Player", "The skier.", 16, 18, {214, 92, 92}, false, false, 1},
           {"Flag", "One pole of a gate; gates are horizontal pairs of flags.",
            5, 14, {66, 72, 200}, false, false, 4},
           {"Tree", "A tree obstacle.", 16, 30, {110, 156, 66}, false, false,
            4},
           {"Mogul", "A mogul (snow bump).", 16, 7, {214, 214, 214}, false,
            false, 3},
           {"Clock", "The elapsed time display.", 32, 7, {84, 138, 210}, true,
            true, 1},
       }},
  };
  return schemas;
}

inline const GameSchema& schema_for(const std::string& game) {
  for (const auto& s : game_schemas()) {
    if (s.game == game) return s;
  }
  throw std::invalid_argument("unknown game '" + game + "'");
}

// ---------------------------------------------------------------------------
// JSONL serialization

inline Json to_json(const GameObject& o) {
  Json j;
  j["category"] = o.category;
  j["x"] = o.x;
  j["y"] = o.y;
  j["w"] = o.w;
  j["h"] = o.h;
  j["prev_x"] = o.prev_x;
  j["prev_y"] = o.prev_y;
  j["rgb"] = Json::array({o.rgb[0], o.rgb[1], o.rgb[2]});
  j["orientation"] = o.orientation ? Json(*o.orientation) : Json(nullptr);
  j["hud"] = o.hud;
  j["value"] = o.value ? Json(*o.value) : Json(nullptr);
  j["prev_value"] = o.prev_value ? Json(*o.prev_value) : Json(nullptr);
  return j;
}

inline Json to_json(const Snapshot& s) {
  Json j;
  j["t"] = s.t;
  Json objs = Json::array();
  for (const auto& o : s.objects) objs.push_back(to_json(o));
  j["objects"] = std::move(objs);
  return j;
}

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  return *it;
}

inline double require_number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) {
    throw std::invalid_argument(std::string("field '") + key +
                                "' must be a number");
  }
  return v.get<double>();
}

template <class T>
std::optional<T> optional_number(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw std::invalid_argument(std::string("field '") + key +
                                "' must be a number or null");
  }
  return it->get<T>();
}

}  // namespace detail

inline GameObject object_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("object must be a JSON object");
  GameObject o;
  const Json& cat = detail::require(j, "category");
  if (!cat.is_string()) throw std::invalid_argument("category must be a string");
  o.category = cat.get<std::string>();
  o.x = detail::require_number(j, "x");
  o.y = detail::require_number(j, "y");
  o.w = detail::require_number(j, "w");
  o.h = detail::require_number(j, "h");
  if (o.w < 0.0 || o.h < 0.0) {
    throw std::invalid_argument("object extent must be non-negative");
  }
  o.prev_x = detail::optional_number<double>(j, "prev_x").value_or(o.x);
  o.prev_y = detail::optional_number<double>(j, "prev_y").value_or(o.y);
  if (auto it = j.find("rgb"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 3) {
      throw std::invalid_argument("rgb must be an array of three integers");
    }
    for (int c = 0; c < 3; ++c) {
      if (!(*it)[c].is_number_integer()) {
        throw std::invalid_argument("rgb must be an array of three integers");
      }
      int v = (*it)[c].get<int>();
      if (v < 0 || v > 255) throw std::invalid_argument("rgb out of range");
      o.rgb[c] = v;
    }
  }
  o.orientation = detail::optional_number<double>(j, "orientation");
  if (auto it = j.find("hud"); it != j.end() && !it->is_null()) {
    o.hud = it->get<bool>();
  }
  o.value = detail::optional_number<std::int64_t>(j, "value");
  o.prev_value = detail::optional_number<std::int64_t>(j, "prev_value");
  return o;
}

inline Snapshot snapshot_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("snapshot must be a JSON object");
  Snapshot s;
  const Json& t = detail::require(j, "t");
  if (!t.is_number_integer() || t.get<std::int64_t>() < 0) {
    throw std::invalid_argument("t must be a non-negative integer");
  }
  s.t = t.get<std::int64_t>();
  const Json& objs = detail::require(j, "objects");
  if (!objs.is_array()) throw std::invalid_argument("objects must be an array");
  s.objects.reserve(objs.size());
  for (const auto& o : objs) s.objects.push_back(object_from_json(o));
  return s;
}

inline std::string to_jsonl(const Snapshot& s) { return to_json(s).dump(); }

inline Snapshot snapshot_from_jsonl(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  return snapshot_from_json(j);
}

}  // namespace relreward

#endif  // RELREWARD_OBJECT_MODEL_HPP_
