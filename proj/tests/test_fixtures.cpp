#include <gtest/gtest.h>

#include <cstring>
#include <map>

#include "relreward/dsl.hpp"
#include "relreward/fuzz.hpp"
#include "support/fixture_oracles.hpp"

using namespace relreward;
using namespace relreward::dsl;

namespace {

std::string fixture_path(const std::string& stem) {
  return std::string(RELREWARD_SOURCE_DIR) + "/fixtures/" + stem + ".rw";
}

const RewardProgram& fixture(const std::string& stem) {
  static std::map<std::string, RewardProgram> cache;
  auto it = cache.find(stem);
  if (it == cache.end()) it = cache.emplace(stem, load_program(fixture_path(stem))).first;
  return it->second;
}

const std::vector<std::string> kAll = {
    "freeway_full", "freeway_no_relations", "pong_full",   "pong_no_relations",
    "seaquest_full", "seaquest_no_relations", "skiing_full", "skiing_no_relations"};

}  // namespace

TEST(Fixtures, AllTypecheckWithoutDiagnostics) {
  for (const auto& f : kAll) {
    ParseResult pr = parse(read_text_file(fixture_path(f)));
    ASSERT_TRUE(pr.ok()) << f;
    EXPECT_TRUE(typecheck(*pr.program).empty()) << f;
  }
}

TEST(Fixtures, FreewayFullHasTheListedHelpers) {
  const RewardProgram& p = fixture("freeway_full");
  std::vector<std::string> names;
  for (const auto& h : p.helpers) names.push_back(h.name);
  EXPECT_EQ(names, (std::vector<std::string>{"detect_collision", "has_reached_top", "progress_made",
                                             "check_if_reset", "find_closest_car"}));
  EXPECT_FALSE(p.header.empty());
  EXPECT_FALSE(p.helpers[0].doc.empty());
}

TEST(Fixtures, RoundTripStructuralEquality) {
  for (const auto& f : kAll) {
    const RewardProgram& p = fixture(f);
    std::string printed = pretty_print(p);
    ParseResult back = parse(printed);
    ASSERT_TRUE(back.ok()) << f << "\n" << printed;
    EXPECT_TRUE(structurally_equal(p, *back.program)) << f;
    EXPECT_EQ(pretty_print(*back.program), printed) << f;
  }
}

TEST(Fixtures, HandTracedCasesMatchExactly) {
  for (const auto& fo : oracle::all_oracles()) {
    const RewardProgram& p = fixture(fo.fixture);
    EXPECT_GE(fo.cases.size(), 10u) << fo.fixture;
    for (const auto& c : fo.cases) {
      double want = fo.oracle(c.snapshot);
      EvalResult got = evaluate(p, c.snapshot);
      EXPECT_EQ(got.value, want) << fo.fixture << ": " << c.name;
    }
  }
}

TEST(Fixtures, WorkedExamples) {
  for (const auto& ex : oracle::worked_examples()) {
    EvalResult got = evaluate(fixture(ex.fixture), ex.snapshot);
    EXPECT_FALSE(got.trapped()) << ex.name;
    EXPECT_NEAR(got.value, ex.expected, 1e-12) << ex.fixture << ": " << ex.name;
  }
}

TEST(Fixtures, FuzzedSnapshotsMatchOracles) {
  fuzz::Rng rng(2024);
  for (const auto& fo : oracle::all_oracles()) {
    const RewardProgram& p = fixture(fo.fixture);
    for (int i = 0; i < 2000; ++i) {
      Snapshot s = fuzz::random_snapshot(fo.game, rng);
      ASSERT_EQ(evaluate(p, s).value, fo.oracle(s)) << fo.fixture << "\n" << to_jsonl(s);
    }
  }
}

TEST(Fixtures, BoundsCertifyClampedListings) {
  for (const char* f : {"freeway_full", "pong_full", "skiing_full", "freeway_no_relations",
                        "pong_no_relations"}) {
    EXPECT_TRUE(static_bounds(fixture(f)).within({-1.0, 1.0})) << f;
  }
  Interval sq = static_bounds(fixture("seaquest_full"));
  EXPECT_FALSE(sq.within({-1.0, 1.0}));
  EXPECT_TRUE(sq.contains(-0.15));
}

TEST(Fixtures, DirectFreewayIsBlindToTheRealChickens) {
  const RewardProgram& direct = fixture("freeway_no_relations");
  fuzz::Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    Snapshot s = fuzz::random_snapshot("freeway", rng);
    for (auto& o : s.objects) {
      if (o.category == "Chicken" && o.x < 80) o.x = o.prev_x = 80 + std::abs(o.x);
    }
    EXPECT_EQ(evaluate(direct, s).value, 0.0);
  }
}

TEST(Fixtures, EvaluationIsDeterministicAndPure) {
  fuzz::Rng rng(5);
  for (const auto& f : kAll) {
    const RewardProgram& p = fixture(f);
    for (int i = 0; i < 200; ++i) {
      Snapshot s = fuzz::random_snapshot(f.substr(0, f.find('_')), rng);
      Snapshot before = s;
      double a = evaluate(p, s).value, b = evaluate(p, s).value;
      EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
      EXPECT_EQ(s, before);
    }
  }
}
