#include <gtest/gtest.h>

#include <cmath>

#include "relreward/dsl.hpp"

using namespace relreward;
using namespace relreward::dsl;

namespace {

RewardProgram must_compile(std::string_view src) {
  CompileResult cr = compile(src);
  if (!cr.ok()) {
    std::string msg;
    for (const auto& d : cr.diagnostics) msg += format_diagnostic(d, "<test>") + "\n";
    ADD_FAILURE() << msg;
    return RewardProgram{};
  }
  return std::move(*cr.program);
}

bool has_code(const std::vector<Diagnostic>& ds, const std::string& c) {
  for (const auto& d : ds) {
    if (d.code == c) return true;
  }
  return false;
}

bool mentions(const std::vector<Diagnostic>& ds, const std::string& text) {
  for (const auto& d : ds) {
    if (d.message.find(text) != std::string::npos) return true;
  }
  return false;
}

double eval_src(std::string_view src, const Snapshot& s = {}) {
  RewardProgram p = must_compile(src);
  EvalResult r = evaluate(p, s);
  EXPECT_FALSE(r.trapped()) << (r.trap ? r.trap->message : "");
  return r.value;
}

Snapshot scene(std::vector<GameObject> objs) {
  Snapshot s;
  s.objects = std::move(objs);
  return s;
}

}  // namespace

TEST(Parse, MinimalProgram) {
  ParseResult pr = parse("reward(objects): 0.0");
  ASSERT_TRUE(pr.ok());
  EXPECT_TRUE(pr.program->helpers.empty());
  EXPECT_EQ(pr.program->entry.kind, ExprKind::kFloatLit);
  EXPECT_EQ(pretty_print(*pr.program), "reward(objects):\n  0.0\n");
}

TEST(Parse, UnknownFunction) {
  ParseResult pr = parse("reward(objects): undefined_fn(objects)");
  EXPECT_FALSE(pr.ok());
  EXPECT_TRUE(has_code(pr.diagnostics, code::kUnknownFunction));
  EXPECT_TRUE(mentions(pr.diagnostics, "unknown function"));
}

TEST(Parse, SyntaxErrorsCarrySpans) {
  std::string src = "def f(a: float) -> float:\n  a +\n\nreward(objects): 1.0 +";
  ParseResult pr = parse(src);
  EXPECT_FALSE(pr.ok());
  ASSERT_GE(pr.diagnostics.size(), 2u);  // resynchronises after the first def
  for (const auto& d : pr.diagnostics) {
    EXPECT_EQ(d.code, code::kSyntax);
    EXPECT_GE(d.span.line, 1);
    EXPECT_LE(d.span.line, 4);
  }
}

TEST(Parse, ChainedComparisonRejected) {
  EXPECT_FALSE(parse("reward(objects): if 1.0 < 2.0 < 3.0 then 1.0 else 0.0").ok());
}

TEST(Parse, GarbageNeverThrows) {
  for (const char* src : {"", "reward", "reward(", "def", "@@@", "reward(o): \"",
                          "reward(o): let x = in x", "reward(o): (1.0, ",
                          "def f() -> float: 1.0", "reward(o): x => x"}) {
    EXPECT_NO_THROW({ auto r = parse(src); (void)r; }) << src;
  }
}

TEST(Typecheck, RewardMustBeFloat) {
  CompileResult cr = compile("reward(objects): true");
  EXPECT_FALSE(cr.ok());
  EXPECT_TRUE(mentions(cr.diagnostics, "reward must be float"));
}

TEST(Typecheck, IntRewardPromotesToFloat) {
  Snapshot s = scene({make_object("Car", 0, 0, 1, 1)});
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): count(objects)", s), 1.0);
  EXPECT_TRUE(has_code(compile("reward(objects): objects").diagnostics, code::kRewardNotFloat));
}

TEST(Typecheck, MutualRecursionRejected) {
  CompileResult cr = compile(
      "def a(x: float) -> float: b(x)\n"
      "def b(x: float) -> float: a(x)\n"
      "reward(objects): a(1.0)");
  EXPECT_FALSE(cr.ok());
  EXPECT_TRUE(mentions(cr.diagnostics, "recursive helper"));
}

TEST(Typecheck, UnboundAndMismatch) {
  EXPECT_TRUE(has_code(compile("reward(objects): y").diagnostics, code::kUnboundName));
  EXPECT_TRUE(has_code(compile("reward(objects): 1.0 + true").diagnostics,
                       code::kTypeMismatch));
  EXPECT_TRUE(has_code(compile("reward(objects): clamp(1.0, 2.0)").diagnostics,
                       code::kArity));
  EXPECT_TRUE(has_code(compile("reward(objects): count(objects.x)").diagnostics,
                       code::kTypeMismatch));
  EXPECT_TRUE(has_code(
      compile("def f(a: float) -> float: a\ndef f(a: float) -> float: a\n"
              "reward(objects): f(1.0)").diagnostics,
      code::kDuplicate));
}

TEST(Typecheck, FloatEqualityIsOnlyLinted) {
  CompileResult cr = compile("reward(objects): if 1.0 == 2.0 then 1.0 else 0.0");
  ASSERT_TRUE(cr.ok());
  EXPECT_TRUE(has_code(cr.diagnostics, code::kFloatEquality));
  EXPECT_EQ(cr.diagnostics[0].severity, Severity::kWarning);
  ParseResult pr = parse("reward(objects): if 1.0 == 2.0 then 1.0 else 0.0");
  EXPECT_TRUE(typecheck(*pr.program).empty());
}

TEST(Evaluate, ArithmeticAndLet) {
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): let a = 2 in let b = 3 in a * b + 0.5"), 6.5);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): 7 / 2"), 3.5);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): -(1.5) + abs(-2.0)"), 0.5);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): clamp(3.0, -1.0, 1.0)"), 1.0);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): min(1.0, 2) + max(3, 4.5)"), 5.5);
}

TEST(Evaluate, ListForms) {
  Snapshot s = scene({make_object("Car", 10, 20, 8, 8), make_object("Car", 30, 40, 8, 8),
                      make_object("Chicken", 5, 5, 6, 8)});
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): 1.0 * count(filter_category(objects, \"Car\"))", s), 2.0);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): sum_over(objects, o => o.x)", s), 45.0);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): min_over(objects, o => o.y)", s), 5.0);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): max_over(objects, o => o.y)", s), 40.0);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): if exists(objects, o => o.x > 25.0) then 1.0 else 0.0", s), 1.0);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): if forall(objects, o => o.x > 25.0) then 1.0 else 0.0", s), 0.0);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): unwrap(first(sort_by(objects, o => o.x))).x", s), 5.0);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): unwrap(last(sort_by(objects, o => -(o.y)))).y", s), 5.0);
  EXPECT_DOUBLE_EQ(
      eval_src("reward(objects): sum_pairs(sort_by(objects, o => o.x), (a, b) => b.x - a.x)", s),
      5.0);  // pairs (5,10); 30 is left over
  EXPECT_DOUBLE_EQ(
      eval_src("reward(objects): let c = unwrap(first(filter_category(objects, \"Chicken\"))) in "
               "manhattan(c, unwrap(nearest(c, filter_category(objects, \"Car\"))))",
               s),
      // chicken center (8, 9), first car center (14, 24)
      21.0);
}

TEST(Evaluate, SortByPairKeyIsStableLexicographic) {
  Snapshot s = scene({make_object("F", 9, 1, 1, 1), make_object("F", 3, 1, 1, 1),
                      make_object("F", 5, 0, 1, 1)});
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): unwrap(first(sort_by(objects, o => (o.y, o.x)))).x", s), 5.0);
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): unwrap(last(sort_by(objects, o => (o.y, o.x)))).x", s), 9.0);
}

TEST(Evaluate, EmptyAggregates) {
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): sum_over(objects, o => 1.0)"), 0.0);
  EvalResult r = evaluate(must_compile("reward(objects): min_over(objects, o => o.x)"), Snapshot{});
  EXPECT_TRUE(r.trapped());
  EXPECT_EQ(r.trap->code, code::kNonFinite);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Evaluate, TrapsYieldZero) {
  auto trap_code = [](std::string_view src, const Snapshot& s) {
    EvalResult r = evaluate(must_compile(src), s);
    EXPECT_TRUE(r.trapped()) << src;
    EXPECT_EQ(r.value, 0.0);
    return r.trap ? r.trap->code : std::string();
  };
  Snapshot s = scene({make_object("Car", 1, 2, 3, 4)});
  EXPECT_EQ(trap_code("reward(objects): unwrap(first(filter_category(objects, \"X\"))).x", s),
            code::kUnwrapNone);
  EXPECT_EQ(trap_code("reward(objects): 1.0 / (unwrap(first(objects)).x - 1.0)", s),
            code::kDivisionByZero);
  EXPECT_EQ(trap_code("reward(objects): 1.0 * unwrap(first(objects)).value", s),
            code::kMissingField);
  EXPECT_EQ(trap_code("reward(objects): 1.0 * (9223372036854775807 + count(objects))", s),
            code::kIntOverflow);
}

TEST(Evaluate, UncheckedProgramTraps) {
  ParseResult pr = parse("reward(objects): 1.0");
  EvalResult r = evaluate(*pr.program, Snapshot{});
  EXPECT_TRUE(r.trapped());
  EXPECT_EQ(r.trap->code, code::kNotChecked);
}

TEST(Evaluate, HudObjectsAreInvisible) {
  GameObject score = make_object("Score", 0, 0, 8, 10);
  score.hud = true;
  score.value = 3;
  Snapshot s = scene({score, make_object("Car", 0, 0, 1, 1), make_object("EnemyScore", 0, 0, 1, 1)});
  EXPECT_DOUBLE_EQ(eval_src("reward(objects): 1.0 * count(objects)", s), 1.0);
}

TEST(Evaluate, HelpersAndFieldAccess) {
  GameObject o = make_object("Ball", 10, 20, 2, 4);
  o.prev_x = 12;
  o.prev_y = 17;
  o.value = 5;
  o.prev_value = 9;
  Snapshot s = scene({o});
  const char* helpers =
      "# ball speed along x\n"
      "def speed(b: obj) -> float: abs(b.dx)\n"
      "def ball(os: objlist) -> obj: unwrap(first(os))\n";
  EXPECT_DOUBLE_EQ(eval_src(std::string(helpers) + "reward(objects): speed(ball(objects))", s), 2.0);
  EXPECT_DOUBLE_EQ(eval_src(std::string(helpers) + "reward(objects): ball(objects).dy", s), 3.0);
  EXPECT_DOUBLE_EQ(eval_src(std::string(helpers) + "reward(objects): 1.0 * ball(objects).value_diff", s), -4.0);
  EXPECT_DOUBLE_EQ(eval_src(std::string(helpers) + "reward(objects): center_x(ball(objects)) + center_y(ball(objects))", s), 33.0);
  EXPECT_DOUBLE_EQ(eval_src(std::string(helpers) + "reward(objects): fst(center(ball(objects))) - snd((1.0, 2.0))", s), 9.0);
}

TEST(Bounds, Examples) {
  EXPECT_EQ(static_bounds(must_compile("reward(objects): clamp(sum_over(objects, o => o.x), -1.0, 1.0)")),
            (Interval{-1.0, 1.0}));
  EXPECT_EQ(static_bounds(must_compile("reward(objects): count(objects) * 0.1")),
            (Interval{0.0, kInf}));
  EXPECT_EQ(static_bounds(must_compile("reward(objects): 0.5")), Interval::point(0.5));
  EXPECT_EQ(static_bounds(must_compile("reward(objects): if true then 0.5 else -0.25")),
            (Interval{-0.25, 0.5}));
  // unwrap may trap, which yields 0.
  EXPECT_EQ(static_bounds(must_compile("reward(objects): if unwrap(first(objects)).x > 1.0 then 0.5 else 0.75")),
            (Interval{0.0, 0.75}));
}

TEST(Bounds, JsonSentinels) {
  auto j = to_json(Interval{0.0, kInf});
  EXPECT_EQ(j.dump(), R"({"lo":0.0,"hi":"inf"})");
  EXPECT_EQ(to_json(Interval::top()).dump(), R"({"lo":"-inf","hi":"inf"})");
}

TEST(PrettyPrint, RoundTripPreservesStructureAndDocs) {
  const char* src =
      "# header line\n"
      "\n"
      "# adds one\n"
      "def inc(a: float) -> float: a + 1.0\n"
      "\n"
      "# entry doc\n"
      "reward(objects):\n"
      "  let xs = sort_by(objects, o => (o.y, -(o.x))) in\n"
      "  let n = count(xs) in\n"
      "  clamp(inc(-(1.0)) - (2.0 - 3.0) * 4.0 / -(2.0) + sum_pairs(xs, (a, b) => a.x - b.x), -1.0, 1.0)\n";
  ParseResult a = parse(src);
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a.program->header, std::vector<std::string>{"header line"});
  EXPECT_EQ(a.program->helpers[0].doc, std::vector<std::string>{"adds one"});
  EXPECT_EQ(a.program->entry_doc, std::vector<std::string>{"entry doc"});
  std::string printed = pretty_print(*a.program);
  ParseResult b = parse(printed);
  ASSERT_TRUE(b.ok()) << printed;
  EXPECT_TRUE(structurally_equal(*a.program, *b.program)) << printed;
  EXPECT_EQ(pretty_print(*b.program), printed);
}

TEST(Diagnostics, LineFormatAndJson) {
  ParseResult pr = parse("reward(objects): nope(1.0)");
  ASSERT_FALSE(pr.diagnostics.empty());
  EXPECT_EQ(format_diagnostic(pr.diagnostics[0], "p.rw"),
            "error p.rw:1:18 E002 unknown function 'nope'");
  auto j = to_json(pr.diagnostics, "p.rw");
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j[0]["code"], "E002");
}
