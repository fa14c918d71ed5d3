#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <thread>

#include "relreward/envs.hpp"
#include "relreward/synth.hpp"

using namespace relreward;
using namespace relreward::synth;

namespace {

const std::vector<std::string> kGames = {"freeway", "pong", "seaquest", "skiing"};
const std::vector<std::string> kModes = {"full", "no_relations"};

std::string source_path(const std::string& rel) { return std::string(RELREWARD_SOURCE_DIR) + "/" + rel; }
std::string golden(const std::string& name) { return dsl::read_text_file(source_path("fixtures/prompts/" + name)); }
Json transcript_fixture(const std::string& game, const std::string& mode) {
  return load_json_file(source_path("fixtures/transcripts/" + game + "_" + mode + ".json"));
}

// Answers each request with the next canned reply and counts calls.
class ScriptedClient final : public ChatClient {
 public:
  explicit ScriptedClient(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string complete(const ChatRequest& req) override {
    last_request = req;
    if (calls >= replies_.size()) throw TransportError("script exhausted");
    return replies_[calls++];
  }
  std::string endpoint() const override { return "scripted"; }
  std::size_t calls = 0;
  ChatRequest last_request;

 private:
  std::vector<std::string> replies_;
};

std::string fenced(const std::string& code) { return "```rw\n" + code + "```"; }

}  // namespace

// ---------------------------------------------------------------------------
// Prompts

TEST(Prompts, SystemPromptIsVerbatim) {
  EXPECT_EQ(render_prompt(TemplateId::kSystem, "freeway"),
            "You are a helpful assistant that creates reward functions for reinforcement learning "
            "researchers.");
}

TEST(Prompts, RescalePromptAsksForUnitRange) {
  std::string p = render_prompt(TemplateId::kRescale, "pong");
  EXPECT_NE(p.find("rewards are in the range [-1, 1]"), std::string::npos);
  EXPECT_EQ(p, golden("rescale.txt"));
}

TEST(Prompts, DirectFreewayPromptCarriesTheDescription) {
  std::string p = render_prompt(TemplateId::kDirect, "freeway");
  EXPECT_NE(p.find("cross ten horizontal lanes"), std::string::npos);
  EXPECT_NE(p.find("play the game Freeway."), std::string::npos);
  EXPECT_EQ(p.find("```python"), std::string::npos);
  EXPECT_NE(p.find("```rw"), std::string::npos);
}

TEST(Prompts, RelationalFunctionsPromptCollectsHelpers) {
  std::string p = render_prompt(TemplateId::kRelationalFunctions, "skiing");
  EXPECT_NE(p.find("collect functions that are helpful for understanding events"), std::string::npos);
  EXPECT_TRUE(p.ends_with(std::string(dsl_block())));
}

TEST(Prompts, MatchGoldenFilesByteForByte) {
  EXPECT_EQ(std::string(dsl_block()), golden("dsl_block.txt"));
  EXPECT_EQ(std::string(parent_class_text()), golden("parent_class.txt"));
  EXPECT_EQ(render_prompt(TemplateId::kSystem, "seaquest"), golden("system.txt"));
  for (const auto& g : kGames) {
    SCOPED_TRACE(g);
    EXPECT_EQ(std::string(game_description(g)), golden("description_" + g + ".txt"));
    EXPECT_EQ(game_object_classes(g), golden("object_classes_" + g + ".txt"));
    for (auto id : {TemplateId::kDirect, TemplateId::kRelationalFunctions, TemplateId::kRelationalReward}) {
      std::string name = template_name(id);
      EXPECT_EQ(render_prompt(id, g), golden(name + "_" + g + ".txt")) << name;
    }
  }
}

TEST(Prompts, ScoreObjectsAreOmittedFromTheSchema) {
  EXPECT_EQ(game_object_classes("freeway").find("Score"), std::string::npos);
  EXPECT_EQ(game_object_classes("pong").find("Score"), std::string::npos);
  std::string sq = game_object_classes("seaquest");
  EXPECT_EQ(sq.find("PlayerScore"), std::string::npos);
  EXPECT_EQ(sq.find("Lives"), std::string::npos);
  EXPECT_NE(sq.find("class OxygenBar(ValueObject):"), std::string::npos);
  EXPECT_EQ(game_object_classes("skiing").find("Clock"), std::string::npos);
}

TEST(Prompts, MissingSchemaIsRejected) {
  PromptInputs in = prompt_inputs_for("freeway");
  in.object_classes.clear();
  try {
    render_prompt(TemplateId::kDirect, in);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("placeholder unsubstituted"), std::string::npos);
  }
  // The rescale prompt has no placeholders, so empty inputs are fine.
  EXPECT_NO_THROW(render_prompt(TemplateId::kRescale, PromptInputs{}));
}

TEST(Prompts, SubstitutedTextIsNotRescanned) {
  PromptInputs in = prompt_inputs_for("pong");
  in.instructions = "Mentioning <GAME> literally.";
  std::string p = render_prompt(TemplateId::kRelationalReward, in);
  EXPECT_NE(p.find("Mentioning <GAME> literally."), std::string::npos);
}

TEST(Prompts, UnknownTemplateAndGame) {
  EXPECT_THROW(template_from_name("chain_of_thought"), std::invalid_argument);
  EXPECT_EQ(template_from_name("rescale"), TemplateId::kRescale);
  EXPECT_THROW(render_prompt(TemplateId::kDirect, "breakout"), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Code extraction

TEST(Extract, SingleFencedBlock) {
  auto r = extract_code("Sure:\n```rw\nreward(objects):\n  0.0\n```\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.code, "reward(objects):\n  0.0\n");
}

TEST(Extract, LastOfSeveralBlocksWins) {
  auto r = extract_code("First try:\n```\nreward(objects):\n  1.0\n```\nBetter:\n```python\nreward(objects):\n  0.5\n```\nDone.");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.code, "reward(objects):\n  0.5\n");
}

TEST(Extract, UnterminatedBlockRunsToTheEnd) {
  auto r = extract_code("```rw\nreward(objects):\n  0.25");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.code, "reward(objects):\n  0.25\n");
}

TEST(Extract, UnfencedProgramIsTakenWhole) {
  auto r = extract_code("reward(objects):\n  0.0\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.code, "reward(objects):\n  0.0\n");
}

TEST(Extract, ProseOnlyHasNoCode) {
  auto r = extract_code("I'm sorry, I cannot help with that.");
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.error, "no code found");
}

// ---------------------------------------------------------------------------
// Clients

TEST(Client, RequestBodyCarriesModelMessagesSeedAndDecoding) {
  ChatRequest req{"m", {{"system", "s"}, {"user", "u"}}, 42, Json{{"temperature", 0}}};
  Json b = request_body(req);
  EXPECT_EQ(b["model"], "m");
  EXPECT_EQ(b["seed"], 42);
  EXPECT_EQ(b["temperature"], 0);
  ASSERT_EQ(b["messages"].size(), 2u);
  EXPECT_EQ(b["messages"][1]["role"], "user");
  EXPECT_EQ(b["messages"][1]["content"], "u");
  req.decoding = Json{{"seed", 1}};
  EXPECT_THROW(request_body(req), std::invalid_argument);
}

TEST(Client, HttpClientTalksToALocalEndpoint) {
  httplib::Server svr;
  Json seen;
  std::string auth;
  svr.Post("/v1/chat/completions", [&](const httplib::Request& rq, httplib::Response& rs) {
    seen = Json::parse(rq.body);
    auth = rq.get_header_value("Authorization");
    Json reply{{"choices", Json::array({{{"message", {{"role", "assistant"}, {"content", "pong!"}}}}})}};
    rs.set_content(reply.dump(), "application/json");
  });
  svr.Post("/fail", [](const httplib::Request&, httplib::Response& rs) {
    rs.status = 429;
    rs.set_content("slow down", "text/plain");
  });
  svr.Post("/garbage", [](const httplib::Request&, httplib::Response& rs) {
    rs.set_content("{\"choices\": []}", "application/json");
  });
  int port = svr.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { svr.listen_after_bind(); });
  svr.wait_until_ready();

  const std::string base = "http://127.0.0.1:" + std::to_string(port);
  HttpClientConfig cfg;
  cfg.url = base + "/v1/chat/completions";
  cfg.api_key = "test-key";
  cfg.limiter = nullptr;
  HttpChatClient client(cfg);
  ChatRequest req{"some-model", {{"system", "s"}, {"user", "ping"}}, 42, Json::object()};
  EXPECT_EQ(client.complete(req), "pong!");
  EXPECT_EQ(auth, "Bearer test-key");
  EXPECT_EQ(seen["model"], "some-model");
  EXPECT_EQ(seen["seed"], 42);
  EXPECT_EQ(seen["messages"][1]["content"], "ping");

  cfg.url = base + "/fail";
  HttpChatClient failing(cfg);
  try {
    failing.complete(req);
    FAIL() << "expected a transport error";
  } catch (const TransportError& e) {
    EXPECT_NE(std::string(e.what()).find("HTTP 429"), std::string::npos);
  }
  cfg.url = base + "/garbage";
  EXPECT_THROW(HttpChatClient(cfg).complete(req), TransportError);

  svr.stop();
  th.join();
  cfg.url = base + "/v1/chat/completions";  // nothing listens any more
  cfg.timeout_seconds = 2;
  EXPECT_THROW(HttpChatClient(cfg).complete(req), TransportError);
}

TEST(Client, ApiKeyComesFromTheEnvironment) {
  ::unsetenv(kApiKeyEnv);
  EXPECT_THROW(api_key_from_env(), std::invalid_argument);
  ::setenv(kApiKeyEnv, "abc", 1);
  EXPECT_EQ(api_key_from_env(), "abc");
  ::unsetenv(kApiKeyEnv);
  HttpClientConfig cfg;
  EXPECT_THROW(HttpChatClient{cfg}, std::invalid_argument);
}

TEST(Client, RateLimiterSpacesRequests) {
  RateLimiter lim(600.0);  // one per 100 ms
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 4; ++i) lim.acquire();
  auto elapsed = std::chrono::steady_clock::now() - t0;
  EXPECT_GE(elapsed, std::chrono::milliseconds(290));
  EXPECT_THROW(RateLimiter(-1.0), std::invalid_argument);
}

TEST(Client, OfflinePlayerRejectsDriftedPrompts) {
  Json tr = transcript_fixture("pong", "no_relations");
  OfflineClient client(tr, "pong_no_relations.json");
  ChatRequest req{"m", {{"system", render_prompt(TemplateId::kSystem, "pong")},
                        {"user", render_prompt(TemplateId::kDirect, "pong") + " "}}, 42, Json::object()};
  EXPECT_THROW(client.complete(req), TransportError);
  req.messages[1].content = render_prompt(TemplateId::kDirect, "pong");
  EXPECT_EQ(client.complete(req), tr["messages"][2]["content"].get<std::string>());
}

// ---------------------------------------------------------------------------
// Pipeline

TEST(Pipeline, OfflineReplaysReproduceEveryFixture) {
  for (const auto& g : kGames) {
    for (const auto& m : kModes) {
      SCOPED_TRACE(g + "_" + m);
      OfflineClient client(transcript_fixture(g, m), g + "_" + m + ".json");
      SynthesisResult r = run_pipeline({g, m}, client);
      ASSERT_TRUE(r.ok()) << r.error();
      const auto& msgs = r.transcript.messages;
      std::vector<std::string> roles;
      for (const auto& x : msgs) roles.push_back(x.role);
      if (m == "full") {
        EXPECT_EQ(roles, (std::vector<std::string>{"system", "user", "assistant", "user", "assistant",
                                                   "user", "assistant"}));
        EXPECT_EQ(msgs[5].content, golden("rescale.txt"));
      } else {
        EXPECT_EQ(roles, (std::vector<std::string>{"system", "user", "assistant"}));
      }
      for (const auto& x : msgs) EXPECT_EQ(x.code.has_value(), x.role == "assistant");
      std::string fixture_src = dsl::read_text_file(source_path("fixtures/" + g + "_" + m + ".rw"));
      EXPECT_EQ(r.source, fixture_src);
      dsl::RewardProgram expected = dsl::load_program(source_path("fixtures/" + g + "_" + m + ".rw"));
      EXPECT_TRUE(dsl::structurally_equal(*r.program, expected));
      EXPECT_EQ(r.program->mode, m);
      EXPECT_EQ(r.transcript.outcome, "ok");
    }
  }
}

TEST(Pipeline, ClampedFixturesCertifyUnitRange) {
  OfflineClient client(transcript_fixture("freeway", "full"));
  SynthesisResult r = run_pipeline({"freeway", "full"}, client);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.bounds.lo, -1.0);
  EXPECT_EQ(r.bounds.hi, 1.0);
}

TEST(Pipeline, DirectFreewayIsConstantZeroOnEnvironmentSnapshots) {
  OfflineClient client(transcript_fixture("freeway", "no_relations"));
  SynthesisResult r = run_pipeline({"freeway", "no_relations"}, client);
  ASSERT_TRUE(r.ok());
  env::EnvConfig cfg;
  cfg.game = "freeway";
  cfg.seed = 5;
  auto e = env::make_env(cfg);
  Snapshot s = e->reset();
  std::mt19937_64 rng(5);
  int steps = 0;
  for (; steps < 500 && !e->done(); ++steps) {
    auto sr = e->step(static_cast<int>(rng() % e->num_actions()));
    EXPECT_EQ(dsl::evaluate(*r.program, sr.snapshot).value, 0.0);
  }
  EXPECT_EQ(steps, 500);
}

TEST(Pipeline, ProseReplyFailsWithTheTranscriptAttached) {
  ScriptedClient client({"I'm sorry, but I can't write that."});
  SynthesisResult r = run_pipeline({"pong", "no_relations"}, client);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.transcript.outcome, "extraction_error");
  EXPECT_NE(r.error().find("no code found"), std::string::npos);
  ASSERT_EQ(r.transcript.messages.size(), 3u);
  EXPECT_EQ(r.transcript.messages[2].content, "I'm sorry, but I can't write that.");
}

TEST(Pipeline, TransportFailureStopsTheRun) {
  ScriptedClient client({fenced("def f(a: obj) -> bool:\n  a.x > 0\n")});
  SynthesisResult r = run_pipeline({"pong", "full"}, client);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.transcript.outcome, "transport_error");
  EXPECT_EQ(client.calls, 1u);
  EXPECT_EQ(r.transcript.messages.size(), 4u);  // system, user, assistant, user
}

TEST(Pipeline, InvalidFinalProgramIsRecordedWithoutRetry) {
  ScriptedClient client({fenced("reward(objects):\n  undefined_thing(objects)\n"), fenced("unused")});
  SynthesisResult r = run_pipeline({"skiing", "no_relations"}, client);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.transcript.outcome, "validation_error");
  EXPECT_EQ(client.calls, 1u);
  EXPECT_EQ(r.source, "reward(objects):\n  undefined_thing(objects)\n");
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(Pipeline, RequestCarriesModelSeedAndDecoding) {
  ScriptedClient client({fenced("reward(objects):\n  0.0\n")});
  SynthesisRequest req{"pong", "no_relations", "other-model", 7, Json{{"temperature", 0}}};
  ASSERT_TRUE(run_pipeline(req, client).ok());
  EXPECT_EQ(client.last_request.model, "other-model");
  EXPECT_EQ(client.last_request.seed, 7);
  EXPECT_EQ(client.last_request.decoding["temperature"], 0);
  EXPECT_THROW(run_pipeline({"pong", "relational"}, client), std::invalid_argument);
}

TEST(Pipeline, RecordedTranscriptReplaysToTheSameProgram) {
  std::string helpers = "def hit(a: obj, b: obj) -> bool:\n  overlaps(a, b)\n";
  std::string prog = helpers + "\nreward(objects):\n  let p = filter_category(objects, \"Player\") in\n"
                               "  let t = filter_category(objects, \"Tree\") in\n"
                               "  if exists(p, a => exists(t, b => hit(a, b))) then -1.0 else 0.0\n";
  ScriptedClient live({fenced(helpers), "Here:\n" + fenced(prog), fenced(prog)});
  SynthesisResult first = run_pipeline({"skiing", "full"}, live);
  ASSERT_TRUE(first.ok()) << first.error();

  auto dir = std::filesystem::temp_directory_path() / "relreward_synth_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto written = save_synthesis(first, dir);
  ASSERT_EQ(written.size(), 2u);
  EXPECT_EQ(dsl::read_text_file((dir / "program.rw").string()), prog);

  OfflineClient offline(load_json_file((dir / "transcript.json").string()));
  SynthesisResult again = run_pipeline({"skiing", "full"}, offline);
  ASSERT_TRUE(again.ok()) << again.error();
  EXPECT_EQ(again.source, first.source);
  EXPECT_TRUE(dsl::structurally_equal(*again.program, *first.program));
  std::filesystem::remove_all(dir);
}
