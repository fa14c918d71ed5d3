#ifndef RELREWARD_ENV_FREEWAY_HPP_
#define RELREWARD_ENV_FREEWAY_HPP_

#include <cmath>
#include <random>
#include <stdexcept>

#include "relreward/env/core.hpp"

namespace relreward::env {

// A chicken crosses lanes of wrapping traffic from the bottom edge (y equals
// the screen height) to the top (y <= 0). Layout: lane i spans
// [16i, 16i + 16); its car is 8x6 at y = 16i + 5.5 and moves
// car_speeds[i % n] px/step, rightwards on even lanes and leftwards on odd.
// Car edges sit on half pixels while the chicken moves on whole pixels, so
// the two never merely touch: inclusive and strict box tests agree. Chicken
// and car share a height, so a corner-in-box test cannot miss an overlap, and
// the 4 px between neighbouring car bands are safe ground.
// The player chicken (6x6) walks up the column x = 84; a second chicken sits
// idle at x = 120. Both columns are right of the screen midline.
//
// Crossing (+1 true score) and collision (no score change) are emitted in the
// snapshot of the step where they happen; the chicken is put back at the
// bottom on the following step, ignoring that step's action.
class MiniFreeway final : public Environment {
 public:
  static constexpr double kPlayerX = 84.0;
  static constexpr double kIdleX = 120.0;
  static constexpr double kChickenW = 6.0, kChickenH = 6.0;
  static constexpr double kCarW = 8.0, kCarH = 6.0;

  explicit MiniFreeway(EnvConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    if (cfg_.game != "freeway") throw std::invalid_argument("MiniFreeway needs game 'freeway'");
  }

  Snapshot reset() override {
    t_ = 0;
    done_ = false;
    pending_reset_ = false;
    crossings_ = 0;
    prev_crossings_ = 0;
    collisions_ = 0;
    chicken_ = make_object("Chicken", kPlayerX, cfg_.screen_height, kChickenW, kChickenH);
    chicken_.rgb = {252, 252, 84};
    idle_ = make_object("Chicken", kIdleX, cfg_.screen_height, kChickenW, kChickenH);
    idle_.rgb = {252, 252, 84};
    const double lane_h = cfg_.screen_height / cfg_.lanes;
    cars_.clear();
    speeds_.clear();
    for (int i = 0; i < cfg_.lanes; ++i) {
      double x = std::floor(unit_uniform(rng_) * cfg_.screen_width) + 0.5;
      GameObject car =
          make_object("Car", x, lane_h * i + (lane_h - kCarH) / 2.0 + 0.5, kCarW, kCarH);
      car.rgb = {167, 26, 26};
      cars_.push_back(car);
      double v = cfg_.car_speeds[i % cfg_.car_speeds.size()];
      speeds_.push_back(i % 2 == 0 ? v : -v);
    }
    return snapshot();
  }

  StepResult step(int action) override {
    if (done_) throw std::logic_error("step() called on a finished episode");
    if (action < 0 || action >= num_actions()) throw std::invalid_argument("invalid action");
    ++t_;
    chicken_.prev_x = chicken_.x;
    chicken_.prev_y = chicken_.y;
    idle_.prev_x = idle_.x;
    idle_.prev_y = idle_.y;
    prev_crossings_ = crossings_;
    if (pending_reset_) {
      chicken_.y = cfg_.screen_height;
      pending_reset_ = false;
    } else if (action == kUp) {
      chicken_.y -= cfg_.chicken_step;
    } else if (action == kDown) {
      chicken_.y = std::min(cfg_.screen_height, chicken_.y + cfg_.chicken_step);
    }
    for (std::size_t i = 0; i < cars_.size(); ++i) {
      GameObject& car = cars_[i];
      car.prev_x = car.x;
      car.prev_y = car.y;
      car.x = std::fmod(car.x + speeds_[i] + cfg_.screen_width, cfg_.screen_width);
    }

    StepResult sr;
    bool collided = false;
    for (const auto& car : cars_) collided = collided || overlaps(chicken_, car);
    if (chicken_.y <= 0.0) {
      sr.true_score_delta = 1.0;
      ++crossings_;
      pending_reset_ = true;
    }
    if (collided) {
      ++collisions_;
      pending_reset_ = true;
    }
    done_ = t_ >= cfg_.effective_horizon();
    sr.done = done_;
    sr.snapshot = snapshot();
    sr.info["crossings"] = crossings_;
    sr.info["collisions"] = collisions_;
    sr.info["collision"] = collided ? 1.0 : 0.0;
    return sr;
  }

  bool done() const override { return done_; }
  const EnvConfig& config() const override { return cfg_; }

 private:
  Snapshot snapshot() const {
    Snapshot s;
    s.t = t_;
    s.objects.push_back(chicken_);
    s.objects.push_back(idle_);
    for (const auto& c : cars_) s.objects.push_back(c);
    GameObject score = make_object("Score", 48.0, 2.0, 8.0, 10.0);
    score.hud = true;
    score.rgb = {228, 111, 111};
    score.value = crossings_;
    score.prev_value = prev_crossings_;
    s.objects.push_back(score);
    return s;
  }

  EnvConfig cfg_;
  std::mt19937_64 rng_;
  std::int64_t t_ = 0;
  bool done_ = true;
  bool pending_reset_ = false;
  std::int64_t crossings_ = 0, prev_crossings_ = 0, collisions_ = 0;
  GameObject chicken_, idle_;
  std::vector<GameObject> cars_;
  std::vector<double> speeds_;
};

}  // namespace relreward::env

#endif  // RELREWARD_ENV_FREEWAY_HPP_
