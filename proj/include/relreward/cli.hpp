#ifndef RELREWARD_CLI_HPP_
#define RELREWARD_CLI_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relreward/analysis.hpp"
#include "relreward/dsl.hpp"
#include "relreward/env/replay.hpp"
#include "relreward/envs.hpp"
#include "relreward/fuzz.hpp"
#include "relreward/metrics.hpp"
#include "relreward/rl.hpp"
#include "relreward/rundir.hpp"
#include "relreward/synth.hpp"

namespace relreward::cli {

namespace fs = std::filesystem;

inline constexpr int kOk = 0;
inline constexpr int kUserError = 1;
inline constexpr int kInternalError = 2;

// A problem with the command line or its inputs (exit code 1).
struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!(f << text)) throw std::runtime_error("cannot write '" + p.string() + "'");
}

inline Json read_json(const std::string& path) {
  try {
    return Json::parse(dsl::read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw UserError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline dsl::CompileResult compile_file(const std::string& path, std::ostream& err,
                                       const std::string& mode = "hand_fixture") {
  dsl::CompileResult cr = dsl::compile(dsl::read_text_file(path), mode);
  for (const auto& d : cr.diagnostics) err << dsl::format_diagnostic(d, path) << "\n";
  if (!cr.ok()) throw UserError("'" + path + "' does not compile");
  return cr;
}

// "freeway_full.rw" -> "full"; anything else -> "custom".
inline std::string mode_from_program_name(const std::string& path) {
  std::string stem = fs::path(path).stem().string();
  if (stem.ends_with("_no_relations")) return "no_relations";
  if (stem.ends_with("_full")) return "full";
  return "custom";
}

struct Options {
  // synthesize
  std::string game, mode, offline, model = "gpt-4-turbo", endpoint = "https://api.openai.com/v1/chat/completions",
                                   decoding = "{}";
  double rate_limit = 20.0;
  // validate
  std::string program;
  int fuzz = 1000;
  // replay
  std::string trace, out;
  int workers = 0;
  // train
  std::string config, label;
  bool quiet = false;
  // report
  std::string run_dir;
  int window = 50;
  // shared
  std::uint64_t seed = 42;
  std::string runs_dir = "runs";
};

// ---------------------------------------------------------------------------

inline int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  dsl::CompileResult cr = compile_file(o.program, err);
  const dsl::RewardProgram& prog = *cr.program;
  const dsl::Interval b = dsl::static_bounds(prog);
  out << "program: " << o.program << "\n";
  out << "helpers: " << prog.helpers.size() << "\n";
  out << "bounds: " << dsl::format_interval(b) << "\n";
  if (o.fuzz < 0) throw UserError("--fuzz must be >= 0");
  std::vector<std::string> games = {"freeway", "pong", "seaquest", "skiing"};
  if (!o.game.empty()) {
    schema_for(o.game);
    games = {o.game};
  }
  bool violated = false;
  for (const auto& g : games) {
    fuzz::Rng rng(o.seed);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::int64_t traps = 0, outside = 0;
    for (int i = 0; i < o.fuzz; ++i) {
      dsl::EvalResult r = dsl::evaluate(prog, fuzz::random_snapshot(g, rng, i));
      if (r.trapped()) ++traps;
      lo = std::min(lo, r.value);
      hi = std::max(hi, r.value);
      if (r.value < b.lo || r.value > b.hi) ++outside;
    }
    out << "fuzz " << g << ": " << o.fuzz << " snapshots";
    if (o.fuzz > 0) out << ", observed " << dsl::format_interval({lo, hi});
    out << ", traps " << traps << ", outside bounds " << outside << "\n";
    violated = violated || outside > 0;
  }
  if (violated) {
    err << "error: fuzzed values escaped the static bounds\n";
    return kInternalError;
  }
  return kOk;
}

inline int cmd_replay(const Options& o, std::ostream& out, std::ostream&) {
  env::EpisodeTrace trace = env::load_trace(o.trace);
  dsl::RewardProgram prog = dsl::load_program(o.program);
  std::vector<double> r = o.workers > 1 ? env::replay_parallel(trace, prog, static_cast<unsigned>(o.workers))
                                        : env::replay(trace, prog);
  std::string csv = "t,reward,true_score_delta,done\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& rec = trace.records[i];
    csv += std::to_string(rec.snapshot.t) + "," + format_double(r[i]) + "," +
           format_double(rec.true_score_delta) + "," + (rec.done ? "1" : "0") + "\n";
  }
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text(o.out, csv);
  }
  return kOk;
}

inline int cmd_synthesize(const Options& o, const std::vector<std::string>& argv, std::ostream& out,
                          std::ostream& err) {
  synth::SynthesisRequest req{o.game, o.mode, o.model, static_cast<std::int64_t>(o.seed), Json::object()};
  try {
    req.decoding = Json::parse(o.decoding);
  } catch (const Json::parse_error& e) {
    throw UserError(std::string("--decoding is not valid JSON: ") + e.what());
  }
  req.validate();

  std::unique_ptr<synth::ChatClient> client;
  if (!o.offline.empty()) {
    client = std::make_unique<synth::OfflineClient>(read_json(o.offline), o.offline);
  } else {
    synth::HttpClientConfig hc;
    hc.url = o.endpoint;
    hc.api_key = synth::api_key_from_env();
    hc.limiter = std::make_shared<synth::RateLimiter>(o.rate_limit);
    client = std::make_unique<synth::HttpChatClient>(hc);
  }

  Json config{{"game", req.game},       {"mode", req.mode},         {"model", req.model},
              {"seed", req.seed},       {"decoding", req.decoding}, {"endpoint", client->endpoint()},
              {"rate_limit_per_minute", o.offline.empty() ? Json(o.rate_limit) : Json(nullptr)}};
  RunManifest manifest(argv, config);
  if (!o.offline.empty()) manifest.add_input("offline_transcript", o.offline);

  synth::SynthesisResult r = synth::run_pipeline(req, *client);
  fs::path dir = create_run_dir(o.runs_dir, o.game, o.mode, o.seed);
  std::vector<std::string> outputs;
  for (const auto& p : synth::save_synthesis(r, dir)) outputs.push_back(p.filename().string());
  manifest.write(dir, outputs);

  out << "run: " << dir.string() << "\n";
  out << "messages: " << r.transcript.messages.size() << "\n";
  if (!r.ok()) {
    err << "error: synthesis failed (" << r.transcript.outcome << "): " << r.error() << "\n";
    return kUserError;
  }
  out << "program: " << (dir / "program.rw").string() << "\n";
  out << "bounds: " << dsl::format_interval(r.bounds) << "\n";
  return kOk;
}

inline int cmd_train(const Options& o, const std::vector<std::string>& argv, std::ostream& out,
                     std::ostream& err) {
  if (o.game != "freeway" && o.game != "pong") {
    throw UserError("train needs a simulated game (freeway or pong), got '" + o.game + "'");
  }
  Json cfg_file = read_json(o.config);
  if (!cfg_file.is_object()) throw UserError("config must be a JSON object");
  for (const auto& [k, v] : cfg_file.items()) {
    if (k != "training" && k != "env") throw UserError("config: unknown section '" + k + "'");
  }
  rl::TrainingConfig tc = rl::training_config_from_json(cfg_file.value("training", Json::object()));
  env::EnvConfig ec = env::env_config_from_json(cfg_file.value("env", Json::object()));
  if (cfg_file.contains("env") && cfg_file["env"].contains("game") && ec.game != o.game) {
    throw UserError("config env.game '" + ec.game + "' disagrees with --game " + o.game);
  }
  ec.game = o.game;
  tc.seed = o.seed;
  if (o.workers > 0) tc.workers = o.workers;
  tc.validate();

  const std::string program_src = dsl::read_text_file(o.program);
  dsl::CompileResult cr = compile_file(o.program, err);
  const std::string label = o.label.empty() ? mode_from_program_name(o.program) : o.label;

  Json resolved{{"game", o.game}, {"mode", label}, {"training", rl::to_json(tc)}, {"env", env::to_json(ec)}};
  RunManifest manifest(argv, resolved);
  manifest.add_input("program", o.program);
  manifest.add_input("config", o.config);
  fs::path dir = create_run_dir(o.runs_dir, o.game, label, o.seed);
  out << "run: " << dir.string() << "\n";

  const std::string config_text = resolved.dump(2) + "\n";
  write_text(dir / "config.json", config_text);
  write_text(dir / "program.rw", program_src);

  rl::TrainProgress progress;
  if (!o.quiet) {
    progress = [&err](std::int64_t u, std::int64_t n, const rl::LossStats& st) {
      if (u == n || u % 25 == 0) {
        err << "update " << u << "/" << n << "  policy_loss " << st.policy_loss << "  value_loss "
            << st.value_loss << "  entropy " << st.entropy << "\n";
      }
    };
  }
  rl::TrainResult res = rl::train(ec, *cr.program, tc, env::make_env, progress);
  write_text(dir / "metrics.csv", metrics_csv(res.metrics));
  rl::save_checkpoint((dir / "policy.ckpt").string(), res.policy, config_text);
  manifest.write(dir, {"config.json", "program.rw", "metrics.csv", "policy.ckpt"});

  out << "episodes: " << res.episodes << "\n";
  out << "reward traps: " << res.reward_traps << "\n";
  return kOk;
}

inline int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  const fs::path dir = o.run_dir;
  if (!fs::is_directory(dir)) throw UserError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> runs;
  if (fs::exists(dir / kManifestName)) runs.push_back(dir);
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / kManifestName)) runs.push_back(e.path());
  }
  std::sort(runs.begin(), runs.end());
  bool bad = false;
  for (const auto& r : runs) {
    ManifestCheck c = verify_manifest(r);
    for (const auto& n : c.notes) err << "note: " << n << "\n";
    for (const auto& p : c.problems) err << "error: " << p << "\n";
    bad = bad || !c.ok();
  }
  if (bad) throw UserError("manifest verification failed");

  analysis::RunSummary s = analysis::summarize_run(dir, o.window);
  analysis::write_summary(s, dir);
  out << "verified manifests: " << runs.size() << "\n";
  for (const auto& row : s.rows) {
    if (row.seed != "all") continue;
    out << row.metric << ": " << analysis::format_mean_std(row.mean, row.std) << " (n=" << row.n << ")\n";
  }
  const Json& corr = s.report["correlation"];
  if (corr.contains("pearson") && corr["pearson"].is_number()) {
    out << "pearson(return, true score): " << corr["pearson"].get<double>() << "\n";
  }
  out << "wrote: report.json summary.csv curves.csv\n";
  return kOk;
}

}  // namespace detail

// Runs one command line (argv[0] is the program name) and returns the exit
// code: 0 success, 1 user error, 2 internal error.
inline int dispatch(const std::vector<std::string>& argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  detail::Options o;
  CLI::App app{"Object-centric reward programs: synthesis, validation, replay, training and reports."};
  app.name(argv.empty() ? "relreward" : fs::path(argv[0]).filename().string());
  app.require_subcommand(1, 1);
  app.footer("Exit codes: 0 success, 1 user error, 2 internal error.");

  auto* synth_cmd = app.add_subcommand("synthesize", "Synthesize a reward program with the prompting protocol.");
  synth_cmd->add_option("--game", o.game, "freeway | pong | seaquest | skiing")->required();
  synth_cmd->add_option("--mode", o.mode, "full (three relational turns) | no_relations (one direct turn)")
      ->required()
      ->check(CLI::IsMember({"full", "no_relations"}));
  synth_cmd->add_option("--offline", o.offline, "Replay the assistant turns of this transcript JSON instead of calling the endpoint");
  synth_cmd->add_option("--seed", o.seed, "Sampling seed sent to the endpoint")->capture_default_str();
  synth_cmd->add_option("--model", o.model, "Model name")->capture_default_str();
  synth_cmd->add_option("--endpoint", o.endpoint, "Chat-completion URL (key from REWARD_SYNTH_API_KEY)")
      ->capture_default_str();
  synth_cmd->add_option("--decoding", o.decoding, "Extra decoding parameters as a JSON object")->capture_default_str();
  synth_cmd->add_option("--rate-limit", o.rate_limit, "Maximum requests per minute (0 = unlimited)")
      ->capture_default_str();
  synth_cmd->add_option("--runs-dir", o.runs_dir, "Parent of the run directory")->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "Parse, typecheck, bound and fuzz a reward program.");
  validate_cmd->add_option("program", o.program, "Program file (.rw)")->required();
  validate_cmd->add_option("--fuzz", o.fuzz, "Random snapshots per game")->capture_default_str();
  validate_cmd->add_option("--game", o.game, "Fuzz only this game's objects (default: all games)");
  validate_cmd->add_option("--seed", o.seed, "Fuzzing seed")->capture_default_str();

  auto* replay_cmd = app.add_subcommand("replay", "Per-step rewards of a program over a recorded trace, as CSV.");
  replay_cmd->add_option("--trace", o.trace, "Trace file (JSONL)")->required();
  replay_cmd->add_option("--program", o.program, "Program file (.rw)")->required();
  replay_cmd->add_option("--out", o.out, "Write the CSV here instead of standard output");
  replay_cmd->add_option("--workers", o.workers, "Evaluation threads (output is identical for any count)")
      ->capture_default_str();

  auto* train_cmd = app.add_subcommand("train", "Train a PPO policy on a simulated game with a reward program.");
  train_cmd->add_option("--game", o.game, "freeway | pong")->required();
  train_cmd->add_option("--program", o.program, "Program file (.rw)")->required();
  train_cmd->add_option("--config", o.config, "JSON with optional \"training\" and \"env\" sections")->required();
  train_cmd->add_option("--seed", o.seed, "Run seed; all randomness derives from it")->capture_default_str();
  train_cmd->add_option("--label", o.label, "Mode part of the run directory name (default: from the program name)");
  train_cmd->add_option("--workers", o.workers, "Rollout threads (0 = from config)")->capture_default_str();
  train_cmd->add_option("--runs-dir", o.runs_dir, "Parent of the run directory")->capture_default_str();
  train_cmd->add_flag("--quiet", o.quiet, "No progress output");

  auto* report_cmd = app.add_subcommand("report", "Verify manifests and summarize the metrics of a run directory.");
  report_cmd->add_option("run_dir", o.run_dir, "Run directory, or a directory of per-seed run directories")
      ->required();
  report_cmd->add_option("--window", o.window, "Smoothing window")->capture_default_str();

  std::vector<const char*> cargv;
  cargv.push_back(argv.empty() ? "relreward" : argv[0].c_str());
  for (std::size_t i = 1; i < argv.size(); ++i) cargv.push_back(argv[i].c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUserError;
  }

  try {
    if (*synth_cmd) return detail::cmd_synthesize(o, argv, out, err);
    if (*validate_cmd) return detail::cmd_validate(o, out, err);
    if (*replay_cmd) return detail::cmd_replay(o, out, err);
    if (*train_cmd) return detail::cmd_train(o, argv, out, err);
    if (*report_cmd) return detail::cmd_report(o, out, err);
  } catch (const UserError& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  err << app.help();
  return kUserError;
}

}  // namespace relreward::cli

#endif  // RELREWARD_CLI_HPP_
