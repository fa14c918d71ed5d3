#ifndef RELREWARD_DSL_EVALUATOR_HPP_
#define RELREWARD_DSL_EVALUATOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "relreward/dsl/ast.hpp"
#include "relreward/dsl/diagnostic.hpp"
#include "relreward/object_model.hpp"

namespace relreward::dsl {

// Outcome of one reward evaluation. A trapped evaluation reports reward 0.0
// and carries the runtime diagnostic.
struct EvalResult {
  double value = 0.0;
  std::optional<Diagnostic> trap;

  bool trapped() const { return trap.has_value(); }
};

namespace detail {

using ObjList = std::vector<const GameObject*>;

struct Value {
  Type type = Type::kFloat;
  double f = 0.0;  // float, pair first component
  double g = 0.0;  // pair second component
  std::int64_t i = 0;
  bool b = false;
  const GameObject* obj = nullptr;  // obj, or opt (nullptr = none)
  std::shared_ptr<const ObjList> list;
  const std::string* str = nullptr;

  static Value of_float(double v) {
    Value r;
    r.type = Type::kFloat;
    r.f = v;
    return r;
  }
  static Value of_int(std::int64_t v) {
    Value r;
    r.type = Type::kInt;
    r.i = v;
    return r;
  }
  static Value of_bool(bool v) {
    Value r;
    r.type = Type::kBool;
    r.b = v;
    return r;
  }
  static Value of_obj(const GameObject* o, Type t = Type::kObj) {
    Value r;
    r.type = t;
    r.obj = o;
    return r;
  }
  static Value of_list(ObjList l) {
    Value r;
    r.type = Type::kObjList;
    r.list = std::make_shared<const ObjList>(std::move(l));
    return r;
  }
  static Value of_pair(double a, double b) {
    Value r;
    r.type = Type::kPair;
    r.f = a;
    r.g = b;
    return r;
  }

  double num() const { return type == Type::kInt ? static_cast<double>(i) : f; }
};

struct Trap {
  Diagnostic diagnostic;
};

class Interpreter {
 public:
  explicit Interpreter(const RewardProgram& prog) : prog_(prog) {}

  Value run_entry(const ObjList& objects) {
    stack_.assign(static_cast<std::size_t>(std::max(prog_.entry_frame_size, 1)), Value{});
    base_ = 0;
    stack_[0] = Value::of_list(objects);
    return coerce(eval(prog_.entry), Type::kFloat);
  }

 private:
  const RewardProgram& prog_;
  std::vector<Value> stack_;
  std::size_t base_ = 0;

  [[noreturn]] static void trap(const Expr& e, const char* code, std::string msg) {
    throw Trap{make_error(e.span, code, std::move(msg))};
  }

  static Value coerce(Value v, Type want) {
    if (want == Type::kFloat && v.type == Type::kInt) return Value::of_float(static_cast<double>(v.i));
    return v;
  }

  Value& slot(int s) { return stack_[base_ + static_cast<std::size_t>(s)]; }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::kFloatLit: return Value::of_float(e.fval);
      case ExprKind::kIntLit: return Value::of_int(e.ival);
      case ExprKind::kBoolLit: return Value::of_bool(e.bval);
      case ExprKind::kStrLit: {
        Value v;
        v.type = Type::kStr;
        v.str = &e.name;
        return v;
      }
      case ExprKind::kVar: return slot(e.slot);
      case ExprKind::kLet: {
        slot(e.slot) = eval(*e.kids[0]);
        return coerce(eval(*e.kids[1]), e.type);
      }
      case ExprKind::kIf:
        return coerce(eval(*e.kids[0]).b ? eval(*e.kids[1]) : eval(*e.kids[2]), e.type);
      case ExprKind::kUnary: {
        Value v = eval(*e.kids[0]);
        if (e.op == Op::kNot) return Value::of_bool(!v.b);
        if (v.type == Type::kInt) {
          if (v.i == std::numeric_limits<std::int64_t>::min()) {
            trap(e, code::kIntOverflow, "integer overflow in negation");
          }
          return Value::of_int(-v.i);
        }
        return Value::of_float(-v.f);
      }
      case ExprKind::kBinary: return eval_binary(e);
      case ExprKind::kField: return eval_field(e, *eval(*e.kids[0]).obj);
      case ExprKind::kPair: {
        double a = eval(*e.kids[0]).num();
        double b = eval(*e.kids[1]).num();
        return Value::of_pair(a, b);
      }
      case ExprKind::kLambda: return eval(*e.kids[0]);
      case ExprKind::kCall:
        return e.is_builtin ? eval_builtin(e) : eval_helper(e);
    }
    return Value{};
  }

  Value eval_binary(const Expr& e) {
    if (e.op == Op::kAnd) {
      if (!eval(*e.kids[0]).b) return Value::of_bool(false);
      return Value::of_bool(eval(*e.kids[1]).b);
    }
    if (e.op == Op::kOr) {
      if (eval(*e.kids[0]).b) return Value::of_bool(true);
      return Value::of_bool(eval(*e.kids[1]).b);
    }
    Value a = eval(*e.kids[0]);
    Value b = eval(*e.kids[1]);
    bool ints = a.type == Type::kInt && b.type == Type::kInt;
    switch (e.op) {
      case Op::kAdd:
      case Op::kSub:
      case Op::kMul: {
        if (ints) {
          std::int64_t r = 0;
          bool ovf = e.op == Op::kAdd   ? __builtin_add_overflow(a.i, b.i, &r)
                     : e.op == Op::kSub ? __builtin_sub_overflow(a.i, b.i, &r)
                                        : __builtin_mul_overflow(a.i, b.i, &r);
          if (ovf) trap(e, code::kIntOverflow, "integer overflow");
          return Value::of_int(r);
        }
        double x = a.num(), y = b.num();
        double r = e.op == Op::kAdd ? x + y : e.op == Op::kSub ? x - y : x * y;
        return Value::of_float(r);
      }
      case Op::kDiv: {
        double y = b.num();
        if (y == 0.0) trap(e, code::kDivisionByZero, "division by zero");
        return Value::of_float(a.num() / y);
      }
      case Op::kLt:
        return Value::of_bool(ints ? a.i < b.i : a.num() < b.num());
      case Op::kLe:
        return Value::of_bool(ints ? a.i <= b.i : a.num() <= b.num());
      case Op::kGt:
        return Value::of_bool(ints ? a.i > b.i : a.num() > b.num());
      case Op::kGe:
        return Value::of_bool(ints ? a.i >= b.i : a.num() >= b.num());
      case Op::kEq:
      case Op::kNe: {
        bool eq;
        if (a.type == Type::kStr) eq = *a.str == *b.str;
        else if (a.type == Type::kBool) eq = a.b == b.b;
        else if (a.type == Type::kPair) eq = a.f == b.f && a.g == b.g;
        else if (ints) eq = a.i == b.i;
        else eq = a.num() == b.num();
        return Value::of_bool(e.op == Op::kEq ? eq : !eq);
      }
      default:
        return Value{};
    }
  }

  static Value eval_field(const Expr& e, const GameObject& o) {
    auto need = [&](const std::optional<std::int64_t>& v, const char* what) {
      if (!v) trap(e, code::kMissingField, "object '" + o.category + "' has no " + what);
      return Value::of_int(*v);
    };
    switch (e.field) {
      case Field::kX: return Value::of_float(o.x);
      case Field::kY: return Value::of_float(o.y);
      case Field::kW: return Value::of_float(o.w);
      case Field::kH: return Value::of_float(o.h);
      case Field::kPrevX: return Value::of_float(o.prev_x);
      case Field::kPrevY: return Value::of_float(o.prev_y);
      case Field::kDx: return Value::of_float(o.dx());
      case Field::kDy: return Value::of_float(o.dy());
      case Field::kOrientation:
        if (!o.orientation) trap(e, code::kMissingField, "object '" + o.category + "' has no orientation");
        return Value::of_float(*o.orientation);
      case Field::kValue: return need(o.value, "value");
      case Field::kPrevValue:
        return need(o.value ? std::optional<std::int64_t>(o.prev_value.value_or(*o.value))
                            : std::nullopt,
                    "value");
      case Field::kValueDiff: return need(o.value_diff(), "value");
      case Field::kRed: return Value::of_int(o.rgb[0]);
      case Field::kGreen: return Value::of_int(o.rgb[1]);
      case Field::kBlue: return Value::of_int(o.rgb[2]);
      case Field::kHud: return Value::of_bool(o.hud);
      case Field::kCategory: {
        Value v;
        v.type = Type::kStr;
        v.str = &o.category;
        return v;
      }
    }
    return Value{};
  }

  Value eval_helper(const Expr& e) {
    const HelperDef& h = prog_.helpers[static_cast<std::size_t>(e.callee)];
    std::vector<Value> args;
    args.reserve(e.kids.size());
    for (std::size_t i = 0; i < e.kids.size(); ++i) {
      args.push_back(coerce(eval(*e.kids[i]), h.params[i].type));
    }
    std::size_t saved = base_;
    std::size_t new_base = stack_.size();
    stack_.resize(new_base + static_cast<std::size_t>(std::max(h.frame_size, 1)));
    for (std::size_t i = 0; i < args.size(); ++i) stack_[new_base + i] = std::move(args[i]);
    base_ = new_base;
    Value r;
    try {
      r = coerce(eval(h.body), h.result);
    } catch (...) {
      base_ = saved;
      stack_.resize(new_base);
      throw;
    }
    base_ = saved;
    stack_.resize(new_base);
    return r;
  }

  // Binds lambda parameters (objects) and evaluates its body.
  Value apply(const Expr& lam, const GameObject* a, const GameObject* b = nullptr) {
    slot(lam.slot) = Value::of_obj(a);
    if (b) slot(lam.slot + 1) = Value::of_obj(b);
    return eval(*lam.kids[0]);
  }

  Value eval_builtin(const Expr& e) {
    const auto& k = e.kids;
    switch (static_cast<Builtin>(e.callee)) {
      case Builtin::kOverlaps:
        return Value::of_bool(overlaps(*eval(*k[0]).obj, *eval(*k[1]).obj));
      case Builtin::kCornerIn:
        return Value::of_bool(corner_in(*eval(*k[0]).obj, *eval(*k[1]).obj));
      case Builtin::kManhattan:
        return Value::of_float(manhattan_distance(*eval(*k[0]).obj, *eval(*k[1]).obj));
      case Builtin::kCenterX: return Value::of_float(center(*eval(*k[0]).obj).first);
      case Builtin::kCenterY: return Value::of_float(center(*eval(*k[0]).obj).second);
      case Builtin::kCenter: {
        auto [cx, cy] = center(*eval(*k[0]).obj);
        return Value::of_pair(cx, cy);
      }
      case Builtin::kNearest: {
        const GameObject* ref = eval(*k[0]).obj;
        Value lv = eval(*k[1]);
        const GameObject* best = nullptr;
        double best_d = 0.0;
        for (const GameObject* o : *lv.list) {
          double d = manhattan_distance(*ref, *o);
          if (!best || d < best_d) {
            best = o;
            best_d = d;
          }
        }
        return Value::of_obj(best, Type::kOptObj);
      }
      case Builtin::kClamp: {
        double x = eval(*k[0]).num();
        double lo = eval(*k[1]).num();
        double hi = eval(*k[2]).num();
        return Value::of_float(std::max(std::min(x, hi), lo));
      }
      case Builtin::kAbs: {
        Value v = eval(*k[0]);
        if (v.type == Type::kInt) {
          if (v.i == std::numeric_limits<std::int64_t>::min()) {
            trap(e, code::kIntOverflow, "integer overflow in abs");
          }
          return Value::of_int(v.i < 0 ? -v.i : v.i);
        }
        return Value::of_float(std::abs(v.f));
      }
      case Builtin::kMin:
      case Builtin::kMax: {
        Value a = eval(*k[0]);
        Value b = eval(*k[1]);
        bool is_min = static_cast<Builtin>(e.callee) == Builtin::kMin;
        if (a.type == Type::kInt && b.type == Type::kInt) {
          return Value::of_int(is_min ? std::min(a.i, b.i) : std::max(a.i, b.i));
        }
        return Value::of_float(is_min ? std::min(a.num(), b.num()) : std::max(a.num(), b.num()));
      }
      case Builtin::kFilterCategory: {
        Value lv = eval(*k[0]);
        const std::string& cat = k[1]->name;
        ObjList out;
        for (const GameObject* o : *lv.list) {
          if (o->category == cat) out.push_back(o);
        }
        return Value::of_list(std::move(out));
      }
      case Builtin::kFilter: {
        Value lv = eval(*k[0]);
        ObjList out;
        for (const GameObject* o : *lv.list) {
          if (apply(*k[1], o).b) out.push_back(o);
        }
        return Value::of_list(std::move(out));
      }
      case Builtin::kConcat: {
        Value a = eval(*k[0]);
        Value b = eval(*k[1]);
        ObjList out(*a.list);
        out.insert(out.end(), b.list->begin(), b.list->end());
        return Value::of_list(std::move(out));
      }
      case Builtin::kSortBy: {
        Value lv = eval(*k[0]);
        const ObjList& l = *lv.list;
        std::vector<std::pair<double, double>> keys;
        keys.reserve(l.size());
        for (const GameObject* o : l) {
          Value kv = apply(*k[1], o);
          keys.emplace_back(kv.type == Type::kPair ? kv.f : kv.num(),
                            kv.type == Type::kPair ? kv.g : 0.0);
        }
        std::vector<std::size_t> idx(l.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
        ObjList out;
        out.reserve(l.size());
        for (std::size_t i : idx) out.push_back(l[i]);
        return Value::of_list(std::move(out));
      }
      case Builtin::kCount:
        return Value::of_int(static_cast<std::int64_t>(eval(*k[0]).list->size()));
      case Builtin::kExists: {
        Value lv = eval(*k[0]);
        for (const GameObject* o : *lv.list) {
          if (apply(*k[1], o).b) return Value::of_bool(true);
        }
        return Value::of_bool(false);
      }
      case Builtin::kForall: {
        Value lv = eval(*k[0]);
        for (const GameObject* o : *lv.list) {
          if (!apply(*k[1], o).b) return Value::of_bool(false);
        }
        return Value::of_bool(true);
      }
      case Builtin::kSumOver: {
        Value lv = eval(*k[0]);
        double s = 0.0;
        for (const GameObject* o : *lv.list) s += apply(*k[1], o).num();
        return Value::of_float(s);
      }
      case Builtin::kMinOver:
      case Builtin::kMaxOver: {
        bool is_min = static_cast<Builtin>(e.callee) == Builtin::kMinOver;
        Value lv = eval(*k[0]);
        double best = is_min ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
        for (const GameObject* o : *lv.list) {
          double v = apply(*k[1], o).num();
          if (is_min ? v < best : v > best) best = v;
        }
        return Value::of_float(best);
      }
      case Builtin::kSumPairs: {
        Value lv = eval(*k[0]);
        const ObjList& l = *lv.list;
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < l.size(); i += 2) s += apply(*k[1], l[i], l[i + 1]).num();
        return Value::of_float(s);
      }
      case Builtin::kFirst: {
        Value lv = eval(*k[0]);
        return Value::of_obj(lv.list->empty() ? nullptr : lv.list->front(), Type::kOptObj);
      }
      case Builtin::kLast: {
        Value lv = eval(*k[0]);
        return Value::of_obj(lv.list->empty() ? nullptr : lv.list->back(), Type::kOptObj);
      }
      case Builtin::kIsSome: return Value::of_bool(eval(*k[0]).obj != nullptr);
      case Builtin::kUnwrap: {
        Value v = eval(*k[0]);
        if (!v.obj) trap(e, code::kUnwrapNone, "unwrap of an absent object");
        return Value::of_obj(v.obj);
      }
      case Builtin::kFst: return Value::of_float(eval(*k[0]).f);
      case Builtin::kSnd: return Value::of_float(eval(*k[0]).g);
    }
    return Value{};
  }
};

}  // namespace detail

// Evaluates the reward of one snapshot. HUD and score objects are removed
// before the program sees the object list. Never throws for program-level
// failures: traps and non-finite results produce reward 0.0 with a
// diagnostic.
inline EvalResult evaluate(const RewardProgram& prog, const Snapshot& snapshot) {
  EvalResult res;
  if (!prog.checked) {
    res.trap = make_error(prog.entry_span, code::kNotChecked,
                          "program has not passed type checking");
    return res;
  }
  detail::ObjList visible;
  visible.reserve(snapshot.objects.size());
  for (const auto& o : snapshot.objects) {
    if (!is_score_object(o)) visible.push_back(&o);
  }
  try {
    detail::Interpreter interp(prog);
    double v = interp.run_entry(visible).f;
    if (!std::isfinite(v)) {
      res.trap = make_error(prog.entry_span, code::kNonFinite,
                            "reward evaluated to a non-finite value");
      return res;
    }
    res.value = v;
  } catch (const detail::Trap& t) {
    res.trap = t.diagnostic;
  }
  return res;
}

}  // namespace relreward::dsl

#endif  // RELREWARD_DSL_EVALUATOR_HPP_
