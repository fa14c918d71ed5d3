#ifndef RELREWARD_SYNTH_PIPELINE_HPP_
#define RELREWARD_SYNTH_PIPELINE_HPP_

#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relreward/clock.hpp"
#include "relreward/dsl.hpp"
#include "relreward/synth/client.hpp"
#include "relreward/synth/extract.hpp"
#include "relreward/synth/prompts.hpp"

namespace relreward::synth {

struct SynthesisRequest {
  std::string game;
  std::string mode = "full";  // "full" | "no_relations"
  std::string model = "gpt-4-turbo";
  std::int64_t seed = 42;
  Json decoding = Json::object();

  void validate() const {
    schema_for(game);
    game_description(game);
    if (mode != "full" && mode != "no_relations") {
      throw std::invalid_argument("mode must be 'full' or 'no_relations', got '" + mode + "'");
    }
    if (!decoding.is_object()) throw std::invalid_argument("decoding parameters must be a JSON object");
  }
};

struct TranscriptMessage {
  std::string role;
  std::string content;
  std::string timestamp;
  std::optional<std::string> code;  // extracted block, assistant turns only
};

struct Transcript {
  std::string game, mode, model;
  std::int64_t seed = 42;
  Json decoding = Json::object();
  std::string endpoint;
  std::string started_at, finished_at;
  std::vector<TranscriptMessage> messages;
  std::string outcome;  // "ok" | "transport_error" | "extraction_error" | "validation_error"
  std::string diagnostic;

  Json to_json() const {
    Json j;
    j["game"] = game;
    j["mode"] = mode;
    j["model"] = model;
    j["seed"] = seed;
    j["decoding"] = decoding;
    j["endpoint"] = endpoint;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["outcome"] = outcome;
    j["diagnostic"] = diagnostic;
    Json ms = Json::array();
    for (const auto& m : messages) {
      Json x{{"role", m.role}, {"content", m.content}, {"timestamp", m.timestamp}};
      if (m.code) x["code"] = *m.code;
      ms.push_back(std::move(x));
    }
    j["messages"] = std::move(ms);
    return j;
  }
};

struct SynthesisResult {
  std::optional<dsl::RewardProgram> program;
  std::string source;  // final extracted code, even when it fails validation
  dsl::Interval bounds;
  std::vector<dsl::Diagnostic> diagnostics;
  Transcript transcript;

  bool ok() const { return program.has_value(); }
  const std::string& error() const { return transcript.diagnostic; }
};

// One pass of the prompting protocol, no retries.
//   full:         system, relational_functions, relational_reward, rescale
//   no_relations: system, direct
// Each assistant reply must contain code; the final reply's code is compiled
// and bounds-analyzed. Any failure ends the run and is recorded in the
// transcript.
inline SynthesisResult run_pipeline(const SynthesisRequest& req, ChatClient& client) {
  req.validate();
  SynthesisResult out;
  Transcript& tr = out.transcript;
  tr.game = req.game;
  tr.mode = req.mode;
  tr.model = req.model;
  tr.seed = req.seed;
  tr.decoding = req.decoding;
  tr.endpoint = client.endpoint();
  tr.started_at = utc_timestamp();

  const PromptInputs inputs = prompt_inputs_for(req.game);
  std::vector<TemplateId> turns;
  if (req.mode == "full") {
    turns = {TemplateId::kRelationalFunctions, TemplateId::kRelationalReward, TemplateId::kRescale};
  } else {
    turns = {TemplateId::kDirect};
  }

  ChatRequest chat{req.model, {}, req.seed, req.decoding};
  auto push = [&](const std::string& role, std::string content) {
    chat.messages.push_back({role, content});
    tr.messages.push_back({role, std::move(content), utc_timestamp(), std::nullopt});
  };
  auto fail = [&](const char* outcome, std::string msg) {
    tr.outcome = outcome;
    tr.diagnostic = std::move(msg);
    tr.finished_at = utc_timestamp();
    return std::move(out);
  };

  push("system", render_prompt(TemplateId::kSystem, inputs));
  for (TemplateId id : turns) {
    push("user", render_prompt(id, inputs));
    std::string reply;
    try {
      reply = client.complete(chat);
    } catch (const std::exception& e) {
      return fail("transport_error", e.what());
    }
    push("assistant", reply);
    ExtractResult ex = extract_code(reply);
    if (!ex.ok()) {
      return fail("extraction_error",
                  ex.error + " in the reply to the " + template_name(id) + " prompt");
    }
    tr.messages.back().code = ex.code;
    out.source = *ex.code;
  }

  dsl::CompileResult cr = dsl::compile(out.source, req.mode);
  out.diagnostics = cr.diagnostics;
  if (!cr.ok()) {
    std::string msg = "final program does not compile";
    for (const auto& d : cr.diagnostics) {
      if (d.severity == dsl::Severity::kError) msg += "\n" + dsl::format_diagnostic(d, "program.rw");
    }
    return fail("validation_error", msg);
  }
  out.bounds = dsl::static_bounds(*cr.program);
  out.program = std::move(cr.program);
  tr.outcome = "ok";
  tr.finished_at = utc_timestamp();
  return out;
}

inline Json load_json_file(const std::string& path) {
  try {
    return Json::parse(dsl::read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Writes transcript.json and, when any code was extracted, program.rw.
// Returns the paths written.
inline std::vector<std::filesystem::path> save_synthesis(const SynthesisResult& r,
                                                        const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    auto p = dir / name;
    std::ofstream f(p, std::ios::binary);
    if (!(f << text)) throw std::runtime_error("cannot write '" + p.string() + "'");
    written.push_back(p);
  };
  put("transcript.json", r.transcript.to_json().dump(2) + "\n");
  if (!r.source.empty()) put("program.rw", r.source);
  return written;
}

}  // namespace relreward::synth

#endif  // RELREWARD_SYNTH_PIPELINE_HPP_
