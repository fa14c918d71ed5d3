#ifndef RELREWARD_DSL_AST_HPP_
#define RELREWARD_DSL_AST_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relreward/dsl/diagnostic.hpp"

namespace relreward::dsl {

enum class Type : std::uint8_t {
  kFloat,
  kInt,
  kBool,
  kObj,
  kObjList,
  kOptObj,
  kPair,
  kStr,
  kError,  // poisoned by an earlier diagnostic
};

inline const char* type_name(Type t) {
  switch (t) {
    case Type::kFloat: return "float";
    case Type::kInt: return "int";
    case Type::kBool: return "bool";
    case Type::kObj: return "obj";
    case Type::kObjList: return "objlist";
    case Type::kOptObj: return "opt";
    case Type::kPair: return "pair";
    case Type::kStr: return "str";
    case Type::kError: return "<error>";
  }
  return "<error>";
}

// Types that may be written in helper signatures.
inline std::optional<Type> parse_type_name(std::string_view s) {
  if (s == "float") return Type::kFloat;
  if (s == "int") return Type::kInt;
  if (s == "bool") return Type::kBool;
  if (s == "obj") return Type::kObj;
  if (s == "objlist") return Type::kObjList;
  if (s == "opt") return Type::kOptObj;
  if (s == "pair") return Type::kPair;
  return std::nullopt;
}

inline bool is_numeric(Type t) { return t == Type::kFloat || t == Type::kInt; }

enum class ExprKind : std::uint8_t {
  kFloatLit,
  kIntLit,
  kBoolLit,
  kStrLit,
  kVar,
  kLet,     // name = kids[0] in kids[1]
  kIf,      // kids[0] ? kids[1] : kids[2]
  kUnary,   // op kids[0]
  kBinary,  // kids[0] op kids[1]
  kField,   // kids[0].name
  kCall,    // name(kids...)
  kLambda,  // params => kids[0]; only valid as a list-form argument
  kPair,    // (kids[0], kids[1])
};

enum class Op : std::uint8_t {
  kNone,
  kNeg,
  kNot,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kLt,
  kLe,
  kGt,
  kGe,
  kEq,
  kNe,
  kAnd,
  kOr,
};

inline const char* op_text(Op op) {
  switch (op) {
    case Op::kNeg: return "-";
    case Op::kNot: return "not";
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMul: return "*";
    case Op::kDiv: return "/";
    case Op::kLt: return "<";
    case Op::kLe: return "<=";
    case Op::kGt: return ">";
    case Op::kGe: return ">=";
    case Op::kEq: return "==";
    case Op::kNe: return "!=";
    case Op::kAnd: return "and";
    case Op::kOr: return "or";
    case Op::kNone: break;
  }
  return "?";
}

enum class Field : std::uint8_t {
  kX,
  kY,
  kW,
  kH,
  kPrevX,
  kPrevY,
  kDx,
  kDy,
  kOrientation,
  kValue,
  kPrevValue,
  kValueDiff,
  kRed,
  kGreen,
  kBlue,
  kHud,
  kCategory,
};

struct FieldInfo {
  std::string_view name;
  Field field;
  Type type;
};

inline constexpr FieldInfo kFields[] = {
    {"x", Field::kX, Type::kFloat},
    {"y", Field::kY, Type::kFloat},
    {"w", Field::kW, Type::kFloat},
    {"h", Field::kH, Type::kFloat},
    {"prev_x", Field::kPrevX, Type::kFloat},
    {"prev_y", Field::kPrevY, Type::kFloat},
    {"dx", Field::kDx, Type::kFloat},
    {"dy", Field::kDy, Type::kFloat},
    {"orientation", Field::kOrientation, Type::kFloat},
    {"value", Field::kValue, Type::kInt},
    {"prev_value", Field::kPrevValue, Type::kInt},
    {"value_diff", Field::kValueDiff, Type::kInt},
    {"red", Field::kRed, Type::kInt},
    {"green", Field::kGreen, Type::kInt},
    {"blue", Field::kBlue, Type::kInt},
    {"hud", Field::kHud, Type::kBool},
    {"category", Field::kCategory, Type::kStr},
};

inline const FieldInfo* find_field(std::string_view name) {
  for (const auto& f : kFields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

enum class Builtin : std::uint8_t {
  kOverlaps,
  kCornerIn,
  kManhattan,
  kCenterX,
  kCenterY,
  kCenter,
  kNearest,
  kClamp,
  kAbs,
  kMin,
  kMax,
  kFilterCategory,
  kFilter,
  kConcat,
  kSortBy,
  kCount,
  kExists,
  kForall,
  kSumOver,
  kMinOver,
  kMaxOver,
  kSumPairs,
  kFirst,
  kLast,
  kIsSome,
  kUnwrap,
  kFst,
  kSnd,
};

struct BuiltinInfo {
  std::string_view name;
  Builtin id;
  int arity;
  int lambda_params;  // 0: no lambda argument; otherwise the last argument
                      // is a lambda taking this many objects
};

inline constexpr BuiltinInfo kBuiltins[] = {
    {"overlaps", Builtin::kOverlaps, 2, 0},
    {"corner_in", Builtin::kCornerIn, 2, 0},
    {"manhattan", Builtin::kManhattan, 2, 0},
    {"center_x", Builtin::kCenterX, 1, 0},
    {"center_y", Builtin::kCenterY, 1, 0},
    {"center", Builtin::kCenter, 1, 0},
    {"nearest", Builtin::kNearest, 2, 0},
    {"clamp", Builtin::kClamp, 3, 0},
    {"abs", Builtin::kAbs, 1, 0},
    {"min", Builtin::kMin, 2, 0},
    {"max", Builtin::kMax, 2, 0},
    {"filter_category", Builtin::kFilterCategory, 2, 0},
    {"filter", Builtin::kFilter, 2, 1},
    {"concat", Builtin::kConcat, 2, 0},
    {"sort_by", Builtin::kSortBy, 2, 1},
    {"count", Builtin::kCount, 1, 0},
    {"exists", Builtin::kExists, 2, 1},
    {"forall", Builtin::kForall, 2, 1},
    {"sum_over", Builtin::kSumOver, 2, 1},
    {"min_over", Builtin::kMinOver, 2, 1},
    {"max_over", Builtin::kMaxOver, 2, 1},
    {"sum_pairs", Builtin::kSumPairs, 2, 2},
    {"first", Builtin::kFirst, 1, 0},
    {"last", Builtin::kLast, 1, 0},
    {"is_some", Builtin::kIsSome, 1, 0},
    {"unwrap", Builtin::kUnwrap, 1, 0},
    {"fst", Builtin::kFst, 1, 0},
    {"snd", Builtin::kSnd, 1, 0},
};

inline const BuiltinInfo* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

inline const BuiltinInfo& builtin_info(Builtin id) {
  return kBuiltins[static_cast<int>(id)];
}

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::kFloatLit;
  Span span;
  Op op = Op::kNone;
  double fval = 0.0;
  std::int64_t ival = 0;
  bool bval = false;
  std::string name;                 // var, let binder, field, callee, string
  std::vector<std::string> params;  // lambda parameters
  std::vector<ExprPtr> kids;

  // Filled in by typecheck.
  Type type = Type::kError;
  int slot = -1;    // kVar: frame slot; kLet/kLambda: first binder slot
  int callee = -1;  // kCall: helper index or builtin id
  bool is_builtin = false;
  Field field = Field::kX;

  Expr() = default;
  Expr(const Expr& o)
      : kind(o.kind), span(o.span), op(o.op), fval(o.fval), ival(o.ival),
        bval(o.bval), name(o.name), params(o.params), type(o.type),
        slot(o.slot), callee(o.callee), is_builtin(o.is_builtin),
        field(o.field) {
    kids.reserve(o.kids.size());
    for (const auto& k : o.kids) kids.push_back(std::make_unique<Expr>(*k));
  }
  Expr& operator=(const Expr& o) {
    if (this != &o) *this = Expr(o);
    return *this;
  }
  Expr(Expr&&) noexcept = default;
  Expr& operator=(Expr&&) noexcept = default;
};

struct Param {
  std::string name;
  Type type = Type::kFloat;
  Span span;
};

struct HelperDef {
  std::vector<std::string> doc;  // comment lines without the leading '#'
  std::string name;
  std::vector<Param> params;
  Type result = Type::kFloat;
  Expr body;
  Span span;
  int frame_size = 0;  // set by typecheck
};

struct RewardProgram {
  std::vector<std::string> header;  // leading file comment block
  std::vector<HelperDef> helpers;
  std::vector<std::string> entry_doc;
  std::string entry_param = "objects";
  Expr entry;
  Span entry_span;
  std::string source_text;
  std::string mode = "hand_fixture";  // "full" | "no_relations" | "hand_fixture"

  int entry_frame_size = 0;
  bool checked = false;

  int helper_index(std::string_view name) const {
    for (std::size_t i = 0; i < helpers.size(); ++i) {
      if (helpers[i].name == name) return static_cast<int>(i);
    }
    return -1;
  }
};

// ---------------------------------------------------------------------------
// Structural equality: compares syntax only (no spans, no annotations, no
// source text or mode tag).

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.op != b.op || a.name != b.name ||
      a.params != b.params || a.kids.size() != b.kids.size()) {
    return false;
  }
  switch (a.kind) {
    case ExprKind::kFloatLit:
      if (!(a.fval == b.fval)) return false;
      break;
    case ExprKind::kIntLit:
      if (a.ival != b.ival) return false;
      break;
    case ExprKind::kBoolLit:
      if (a.bval != b.bval) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!structurally_equal(*a.kids[i], *b.kids[i])) return false;
  }
  return true;
}

inline bool structurally_equal(const RewardProgram& a, const RewardProgram& b) {
  if (a.header != b.header || a.entry_doc != b.entry_doc ||
      a.entry_param != b.entry_param || a.helpers.size() != b.helpers.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.helpers.size(); ++i) {
    const auto& ha = a.helpers[i];
    const auto& hb = b.helpers[i];
    if (ha.doc != hb.doc || ha.name != hb.name || ha.result != hb.result ||
        ha.params.size() != hb.params.size()) {
      return false;
    }
    for (std::size_t p = 0; p < ha.params.size(); ++p) {
      if (ha.params[p].name != hb.params[p].name ||
          ha.params[p].type != hb.params[p].type) {
        return false;
      }
    }
    if (!structurally_equal(ha.body, hb.body)) return false;
  }
  return structurally_equal(a.entry, b.entry);
}

}  // namespace relreward::dsl

#endif  // RELREWARD_DSL_AST_HPP_
