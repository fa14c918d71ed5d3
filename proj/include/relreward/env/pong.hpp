#ifndef RELREWARD_ENV_PONG_HPP_
#define RELREWARD_ENV_PONG_HPP_

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "relreward/env/core.hpp"

namespace relreward::env {

// Two paddles and a ball. The enemy paddle (left, x = 16) tracks the ball
// with a capped speed; the player paddle is at x = 140. The ball bounces off
// the top and bottom walls and off paddles, picking up vertical speed from
// the hit offset. When the ball's left edge crosses x = 0 the player scores
// (+1); when its right edge crosses the screen width the enemy scores (-1).
// The ball keeps flying behind the paddle for respawn_delay steps and is then
// served again from the centre. An episode ends when either side reaches
// points_to_win or at the horizon.
class MiniPong final : public Environment {
 public:
  static constexpr double kPaddleW = 4.0, kPaddleH = 15.0;
  static constexpr double kBallW = 2.0, kBallH = 4.0;
  static constexpr double kEnemyX = 16.0, kPlayerX = 140.0;
  static constexpr double kMaxBallDy = 2.5;

  explicit MiniPong(EnvConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    if (cfg_.game != "pong") throw std::invalid_argument("MiniPong needs game 'pong'");
  }

  Snapshot reset() override {
    t_ = 0;
    done_ = false;
    player_points_ = enemy_points_ = 0;
    prev_player_points_ = prev_enemy_points_ = 0;
    double mid = (cfg_.screen_height - kPaddleH) / 2.0;
    player_ = make_object("Player", kPlayerX, mid, kPaddleW, kPaddleH);
    player_.rgb = {92, 186, 92};
    enemy_ = make_object("Enemy", kEnemyX, mid, kPaddleW, kPaddleH);
    enemy_.rgb = {213, 130, 74};
    ball_ = make_object("Ball", 0.0, 0.0, kBallW, kBallH);
    ball_.rgb = {236, 236, 236};
    serve();
    ball_.prev_x = ball_.x;
    ball_.prev_y = ball_.y;
    return snapshot();
  }

  StepResult step(int action) override {
    if (done_) throw std::logic_error("step() called on a finished episode");
    if (action < 0 || action >= num_actions()) throw std::invalid_argument("invalid action");
    ++t_;
    for (GameObject* o : {&player_, &enemy_, &ball_}) {
      o->prev_x = o->x;
      o->prev_y = o->y;
    }
    prev_player_points_ = player_points_;
    prev_enemy_points_ = enemy_points_;
    const double top = 0.0, bottom = cfg_.screen_height - kPaddleH;

    if (action == kUp) player_.y -= cfg_.paddle_speed;
    if (action == kDown) player_.y += cfg_.paddle_speed;
    player_.y = std::clamp(player_.y, top, bottom);

    double target = ball_.y + kBallH / 2.0 - kPaddleH / 2.0;
    enemy_.y += std::clamp(target - enemy_.y, -cfg_.enemy_speed, cfg_.enemy_speed);
    enemy_.y = std::clamp(enemy_.y, top, bottom);

    StepResult sr;
    if (respawn_ > 0 && --respawn_ == 0) {
      serve();
    } else {
      ball_.x += vx_;
      ball_.y += vy_;
      if (ball_.y < 0.0) {
        ball_.y = -ball_.y;
        vy_ = -vy_;
      } else if (ball_.y + kBallH > cfg_.screen_height) {
        ball_.y = 2.0 * (cfg_.screen_height - kBallH) - ball_.y;
        vy_ = -vy_;
      }
      if (respawn_ == 0) {
        if (vx_ > 0.0 && overlaps(ball_, player_)) bounce(player_);
        if (vx_ < 0.0 && overlaps(ball_, enemy_)) bounce(enemy_);
        if (ball_.x < 0.0) {
          sr.true_score_delta = 1.0;
          ++player_points_;
          respawn_ = cfg_.respawn_delay + 1;
        } else if (ball_.x + kBallW > cfg_.screen_width) {
          sr.true_score_delta = -1.0;
          ++enemy_points_;
          respawn_ = cfg_.respawn_delay + 1;
        }
      }
    }
    done_ = player_points_ >= cfg_.points_to_win || enemy_points_ >= cfg_.points_to_win ||
            t_ >= cfg_.effective_horizon();
    sr.done = done_;
    sr.snapshot = snapshot();
    sr.info["player_points"] = player_points_;
    sr.info["enemy_points"] = enemy_points_;
    return sr;
  }

  bool done() const override { return done_; }
  const EnvConfig& config() const override { return cfg_; }

  // Test hook: place the ball with a given velocity, clearing any respawn.
  void set_ball(double x, double y, double vx, double vy) {
    ball_.x = ball_.prev_x = x;
    ball_.y = ball_.prev_y = y;
    vx_ = vx;
    vy_ = vy;
    respawn_ = 0;
  }

 private:
  void serve() {
    ball_.x = (cfg_.screen_width - kBallW) / 2.0;
    ball_.y = (cfg_.screen_height - kBallH) / 2.0;
    vx_ = unit_uniform(rng_) < 0.5 ? -cfg_.ball_speed : cfg_.ball_speed;
    vy_ = (unit_uniform(rng_) * 2.0 - 1.0) * cfg_.ball_speed * 0.75;
    respawn_ = 0;
  }

  void bounce(const GameObject& paddle) {
    vx_ = -vx_;
    double offset = (ball_.y + kBallH / 2.0) - (paddle.y + kPaddleH / 2.0);
    vy_ = std::clamp(vy_ + offset / (kPaddleH / 2.0), -kMaxBallDy, kMaxBallDy);
    ball_.x = vx_ > 0.0 ? paddle.x + paddle.w : paddle.x - kBallW;
  }

  Snapshot snapshot() const {
    Snapshot s;
    s.t = t_;
    s.objects = {player_, enemy_, ball_};
    GameObject ps = make_object("PlayerScore", 100.0, 1.0, 12.0, 20.0);
    ps.hud = true;
    ps.rgb = {92, 186, 92};
    ps.value = player_points_;
    ps.prev_value = prev_player_points_;
    GameObject es = make_object("EnemyScore", 20.0, 1.0, 12.0, 20.0);
    es.hud = true;
    es.rgb = {213, 130, 74};
    es.value = enemy_points_;
    es.prev_value = prev_enemy_points_;
    s.objects.push_back(ps);
    s.objects.push_back(es);
    return s;
  }

  EnvConfig cfg_;
  std::mt19937_64 rng_;
  std::int64_t t_ = 0;
  bool done_ = true;
  int respawn_ = 0;
  double vx_ = 0.0, vy_ = 0.0;
  std::int64_t player_points_ = 0, enemy_points_ = 0;
  std::int64_t prev_player_points_ = 0, prev_enemy_points_ = 0;
  GameObject player_, enemy_, ball_;
};

}  // namespace relreward::env

#endif  // RELREWARD_ENV_PONG_HPP_
