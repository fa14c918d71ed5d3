#ifndef RELREWARD_RL_OBSERVE_HPP_
#define RELREWARD_RL_OBSERVE_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "relreward/object_model.hpp"

namespace relreward::rl {

// Fixed slot layout derived from a game's registry: every non-HUD category
// gets max_count slots, in registry order. Each slot holds
// (x, y, dx, dy, w, h) scaled by the screen size plus a presence flag.
struct ObservationLayout {
  struct Slot {
    std::string category;
    int first = 0;  // index of the slot's first feature
  };
  std::vector<Slot> slots;
  double screen_width = 160.0;
  double screen_height = 160.0;

  static constexpr int kFeaturesPerSlot = 7;
  int size() const { return static_cast<int>(slots.size()) * kFeaturesPerSlot; }
};

inline ObservationLayout observation_layout(const std::string& game, double screen_width = 160.0,
                                            double screen_height = 160.0) {
  ObservationLayout layout;
  layout.screen_width = screen_width;
  layout.screen_height = screen_height;
  for (const auto& cat : schema_for(game).categories) {
    if (cat.hud) continue;
    for (int i = 0; i < cat.max_count; ++i) {
      layout.slots.push_back({cat.name, layout.size()});
    }
  }
  return layout;
}

// Objects fill their category's slots in snapshot order; unused slots stay
// zero with presence 0. HUD and score objects are ignored.
inline void observe_into(const Snapshot& s, const ObservationLayout& layout, double* out) {
  std::fill(out, out + layout.size(), 0.0);
  std::vector<char> used(layout.slots.size(), 0);
  for (const auto& o : s.objects) {
    if (is_score_object(o)) continue;
    std::size_t k = 0;
    while (k < layout.slots.size() && (used[k] || layout.slots[k].category != o.category)) ++k;
    if (k == layout.slots.size()) {
      throw std::invalid_argument("observation schema mismatch: no free slot for '" +
                                  o.category + "'");
    }
    used[k] = 1;
    double* f = out + layout.slots[k].first;
    f[0] = o.x / layout.screen_width;
    f[1] = o.y / layout.screen_height;
    f[2] = o.dx() / layout.screen_width;
    f[3] = o.dy() / layout.screen_height;
    f[4] = o.w / layout.screen_width;
    f[5] = o.h / layout.screen_height;
    f[6] = 1.0;
  }
}

inline std::vector<double> observe(const Snapshot& s, const ObservationLayout& layout) {
  std::vector<double> v(layout.size());
  observe_into(s, layout, v.data());
  return v;
}

}  // namespace relreward::rl

#endif  // RELREWARD_RL_OBSERVE_HPP_
