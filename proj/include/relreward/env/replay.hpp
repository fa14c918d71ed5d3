#ifndef RELREWARD_ENV_REPLAY_HPP_
#define RELREWARD_ENV_REPLAY_HPP_

#include <stdexcept>
#include <thread>
#include <vector>

#include "relreward/dsl/evaluator.hpp"
#include "relreward/env/core.hpp"

namespace relreward::env {

// Plays back a recorded trace. Actions are ignored; each step yields the
// next record. Used for games without a simulator (Seaquest, Skiing).
class ReplayEnv final : public Environment {
 public:
  explicit ReplayEnv(EpisodeTrace trace) : trace_(std::move(trace)) {
    validate_trace(trace_);
    if (trace_.records.empty()) throw std::invalid_argument("cannot replay an empty trace");
    cfg_ = trace_.config;
    cfg_.game = "replay";
  }

  Snapshot reset() override {
    i_ = 0;
    return trace_.records[0].snapshot;
  }

  StepResult step(int) override {
    if (done()) throw std::logic_error("step() called on a finished episode");
    const TraceRecord& r = trace_.records[++i_];
    StepResult sr;
    sr.snapshot = r.snapshot;
    sr.true_score_delta = r.true_score_delta;
    sr.done = done();
    return sr;
  }

  bool done() const override {
    return i_ + 1 >= trace_.records.size() || trace_.records[i_].done;
  }
  const EnvConfig& config() const override { return cfg_; }

 private:
  EpisodeTrace trace_;
  EnvConfig cfg_;
  std::size_t i_ = 0;
};

// Per-record rewards, in trace order. Traps evaluate to 0.0.
inline std::vector<double> replay(const EpisodeTrace& trace, const dsl::RewardProgram& program) {
  validate_trace(trace);
  std::vector<double> out;
  out.reserve(trace.records.size());
  for (const auto& r : trace.records) out.push_back(dsl::evaluate(program, r.snapshot).value);
  return out;
}

// Same result as replay(), evaluated in contiguous chunks on worker threads.
inline std::vector<double> replay_parallel(const EpisodeTrace& trace,
                                           const dsl::RewardProgram& program, unsigned workers) {
  validate_trace(trace);
  std::vector<double> out(trace.records.size());
  workers = std::max(1u, workers);
  std::size_t chunk = (out.size() + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (std::size_t begin = 0; begin < out.size(); begin += chunk) {
    std::size_t end = std::min(out.size(), begin + chunk);
    pool.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        out[i] = dsl::evaluate(program, trace.records[i].snapshot).value;
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace relreward::env

#endif  // RELREWARD_ENV_REPLAY_HPP_
