#ifndef RELREWARD_DSL_TYPECHECK_HPP_
#define RELREWARD_DSL_TYPECHECK_HPP_

#include <string>
#include <vector>

#include "relreward/dsl/ast.hpp"
#include "relreward/dsl/diagnostic.hpp"

namespace relreward::dsl {

namespace detail {

inline bool assignable(Type from, Type to) {
  return from == to || (from == Type::kInt && to == Type::kFloat) ||
         from == Type::kError || to == Type::kError;
}

class Checker {
 public:
  Checker(RewardProgram& prog, std::vector<Diagnostic>& diags)
      : prog_(prog), diags_(diags) {}

  // Returns the frame size needed by the function body.
  int check_function(Expr& body, const std::vector<std::pair<std::string, Type>>& params,
                     Type& result) {
    scope_.clear();
    next_slot_ = 0;
    max_slot_ = 0;
    for (const auto& [name, type] : params) bind(name, type);
    result = infer(body);
    return max_slot_;
  }

 private:
  struct Binding {
    std::string name;
    Type type;
    int slot;
  };

  RewardProgram& prog_;
  std::vector<Diagnostic>& diags_;
  std::vector<Binding> scope_;
  int next_slot_ = 0;
  int max_slot_ = 0;

  int bind(const std::string& name, Type type) {
    int slot = next_slot_++;
    max_slot_ = std::max(max_slot_, next_slot_);
    scope_.push_back({name, type, slot});
    return slot;
  }
  void unbind(std::size_t n) {
    scope_.resize(scope_.size() - n);
    next_slot_ -= static_cast<int>(n);
  }

  Type error(const Expr& e, const char* code, std::string msg) {
    diags_.push_back(make_error(e.span, code, std::move(msg)));
    return Type::kError;
  }

  Type mismatch(const Expr& e, const std::string& what, Type expected, Type got) {
    if (got == Type::kError || expected == Type::kError) return Type::kError;
    return error(e, code::kTypeMismatch,
                 what + ": expected " + type_name(expected) + ", found " +
                     type_name(got));
  }

  Type expect(Expr& e, Type want, const std::string& what) {
    Type t = infer(e);
    if (!assignable(t, want)) mismatch(e, what, want, t);
    return t;
  }

  Type expect_numeric(Expr& e, const std::string& what) {
    Type t = infer(e);
    if (t != Type::kError && !is_numeric(t)) {
      return error(e, code::kTypeMismatch,
                   what + ": expected a number, found " + type_name(t));
    }
    return t;
  }

  static Type num_join(Type a, Type b) {
    if (a == Type::kError || b == Type::kError) return Type::kError;
    return (a == Type::kInt && b == Type::kInt) ? Type::kInt : Type::kFloat;
  }

  Type infer(Expr& e) {
    e.type = infer_inner(e);
    return e.type;
  }

  Type check_lambda(Expr& lam, int nparams, const std::string& fn) {
    if (lam.kind != ExprKind::kLambda) {
      return error(lam, code::kBadLambda,
                   fn + " expects a lambda taking " + std::to_string(nparams) +
                       (nparams == 1 ? " object" : " objects"));
    }
    if (static_cast<int>(lam.params.size()) != nparams) {
      return error(lam, code::kBadLambda,
                   fn + " expects a lambda taking " + std::to_string(nparams) +
                       (nparams == 1 ? " object" : " objects"));
    }
    lam.slot = -1;
    for (const auto& p : lam.params) {
      int s = bind(p, Type::kObj);
      if (lam.slot < 0) lam.slot = s;
    }
    Type body = infer(*lam.kids[0]);
    unbind(lam.params.size());
    lam.type = body;
    return body;
  }

  Type infer_inner(Expr& e) {
    switch (e.kind) {
      case ExprKind::kFloatLit: return Type::kFloat;
      case ExprKind::kIntLit: return Type::kInt;
      case ExprKind::kBoolLit: return Type::kBool;
      case ExprKind::kStrLit: return Type::kStr;
      case ExprKind::kVar: {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (it->name == e.name) {
            e.slot = it->slot;
            return it->type;
          }
        }
        if (prog_.helper_index(e.name) >= 0 || find_builtin(e.name)) {
          return error(e, code::kUnboundName,
                       "function '" + e.name + "' must be called");
        }
        return error(e, code::kUnboundName, "unbound name '" + e.name + "'");
      }
      case ExprKind::kLet: {
        if (e.kids[0]->kind == ExprKind::kLambda) {
          return error(*e.kids[0], code::kBadLambda,
                       "lambdas may only appear as list-form arguments");
        }
        Type vt = infer(*e.kids[0]);
        e.slot = bind(e.name, vt);
        Type bt = infer(*e.kids[1]);
        unbind(1);
        return bt;
      }
      case ExprKind::kIf: {
        expect(*e.kids[0], Type::kBool, "if condition");
        Type a = infer(*e.kids[1]);
        Type b = infer(*e.kids[2]);
        if (a == Type::kError || b == Type::kError) return Type::kError;
        if (a == b) return a;
        if (is_numeric(a) && is_numeric(b)) return Type::kFloat;
        return error(e, code::kTypeMismatch,
                     std::string("if branches differ: ") + type_name(a) +
                         " vs " + type_name(b));
      }
      case ExprKind::kUnary: {
        if (e.op == Op::kNot) {
          expect(*e.kids[0], Type::kBool, "operand of 'not'");
          return Type::kBool;
        }
        return expect_numeric(*e.kids[0], "operand of unary '-'");
      }
      case ExprKind::kBinary: return infer_binary(e);
      case ExprKind::kField: {
        Type base = infer(*e.kids[0]);
        const FieldInfo* fi = find_field(e.name);
        if (!fi) return error(e, code::kTypeMismatch, "unknown field '" + e.name + "'");
        e.field = fi->field;
        if (base != Type::kError && base != Type::kObj) {
          return error(e, code::kTypeMismatch,
                       "field '" + e.name + "' requires obj, found " +
                           type_name(base));
        }
        return fi->type;
      }
      case ExprKind::kPair: {
        Type a = expect_numeric(*e.kids[0], "pair component");
        Type b = expect_numeric(*e.kids[1], "pair component");
        if (a == Type::kError || b == Type::kError) return Type::kError;
        return Type::kPair;
      }
      case ExprKind::kLambda:
        return error(e, code::kBadLambda,
                     "lambdas may only appear as list-form arguments");
      case ExprKind::kCall: return infer_call(e);
    }
    return Type::kError;
  }

  Type infer_binary(Expr& e) {
    Expr& l = *e.kids[0];
    Expr& r = *e.kids[1];
    std::string what = std::string("operand of '") + op_text(e.op) + "'";
    switch (e.op) {
      case Op::kAdd:
      case Op::kSub:
      case Op::kMul:
        return num_join(expect_numeric(l, what), expect_numeric(r, what));
      case Op::kDiv: {
        Type a = expect_numeric(l, what);
        Type b = expect_numeric(r, what);
        if (a == Type::kError || b == Type::kError) return Type::kError;
        return Type::kFloat;
      }
      case Op::kLt:
      case Op::kLe:
      case Op::kGt:
      case Op::kGe: {
        Type a = expect_numeric(l, what);
        Type b = expect_numeric(r, what);
        if (a == Type::kError || b == Type::kError) return Type::kError;
        return Type::kBool;
      }
      case Op::kEq:
      case Op::kNe: {
        Type a = infer(l);
        Type b = infer(r);
        if (a == Type::kError || b == Type::kError) return Type::kError;
        if ((is_numeric(a) && is_numeric(b)) ||
            (a == b && (a == Type::kBool || a == Type::kStr || a == Type::kPair))) {
          return Type::kBool;
        }
        return error(e, code::kTypeMismatch,
                     std::string("cannot compare ") + type_name(a) + " with " +
                         type_name(b));
      }
      case Op::kAnd:
      case Op::kOr:
        expect(l, Type::kBool, what);
        expect(r, Type::kBool, what);
        return Type::kBool;
      default:
        return Type::kError;
    }
  }

  Type infer_call(Expr& e) {
    const std::string& fn = e.name;
    if (const BuiltinInfo* bi = find_builtin(fn)) {
      e.is_builtin = true;
      e.callee = static_cast<int>(bi->id);
      if (static_cast<int>(e.kids.size()) != bi->arity) {
        for (auto& k : e.kids) {
          if (k->kind != ExprKind::kLambda) infer(*k);
        }
        return error(e, code::kArity,
                     fn + " takes " + std::to_string(bi->arity) +
                         " argument(s), got " + std::to_string(e.kids.size()));
      }
      return infer_builtin(e, *bi);
    }
    int idx = prog_.helper_index(fn);
    if (idx < 0) return error(e, code::kUnknownFunction, "unknown function '" + fn + "'");
    e.is_builtin = false;
    e.callee = idx;
    const HelperDef& h = prog_.helpers[static_cast<std::size_t>(idx)];
    if (e.kids.size() != h.params.size()) {
      for (auto& k : e.kids) infer(*k);
      return error(e, code::kArity,
                   fn + " takes " + std::to_string(h.params.size()) +
                       " argument(s), got " + std::to_string(e.kids.size()));
    }
    for (std::size_t i = 0; i < e.kids.size(); ++i) {
      expect(*e.kids[i], h.params[i].type,
             "argument '" + h.params[i].name + "' of " + fn);
    }
    return h.result;
  }

  Type infer_builtin(Expr& e, const BuiltinInfo& bi) {
    auto& k = e.kids;
    const std::string fn(bi.name);
    auto arg = [&](std::size_t i) { return "argument " + std::to_string(i + 1) + " of " + fn; };
    switch (bi.id) {
      case Builtin::kOverlaps:
      case Builtin::kCornerIn:
        expect(*k[0], Type::kObj, arg(0));
        expect(*k[1], Type::kObj, arg(1));
        return Type::kBool;
      case Builtin::kManhattan:
        expect(*k[0], Type::kObj, arg(0));
        expect(*k[1], Type::kObj, arg(1));
        return Type::kFloat;
      case Builtin::kCenterX:
      case Builtin::kCenterY:
        expect(*k[0], Type::kObj, arg(0));
        return Type::kFloat;
      case Builtin::kCenter:
        expect(*k[0], Type::kObj, arg(0));
        return Type::kPair;
      case Builtin::kNearest:
        expect(*k[0], Type::kObj, arg(0));
        expect(*k[1], Type::kObjList, arg(1));
        return Type::kOptObj;
      case Builtin::kClamp:
        for (std::size_t i = 0; i < 3; ++i) expect_numeric(*k[i], arg(i));
        return Type::kFloat;
      case Builtin::kAbs:
        return expect_numeric(*k[0], arg(0));
      case Builtin::kMin:
      case Builtin::kMax:
        return num_join(expect_numeric(*k[0], arg(0)), expect_numeric(*k[1], arg(1)));
      case Builtin::kFilterCategory:
        expect(*k[0], Type::kObjList, arg(0));
        if (k[1]->kind != ExprKind::kStrLit) {
          infer(*k[1]);
          return error(*k[1], code::kTypeMismatch,
                       fn + " expects a category string literal");
        }
        infer(*k[1]);
        return Type::kObjList;
      case Builtin::kConcat:
        expect(*k[0], Type::kObjList, arg(0));
        expect(*k[1], Type::kObjList, arg(1));
        return Type::kObjList;
      case Builtin::kCount:
        expect(*k[0], Type::kObjList, arg(0));
        return Type::kInt;
      case Builtin::kFirst:
      case Builtin::kLast:
        expect(*k[0], Type::kObjList, arg(0));
        return Type::kOptObj;
      case Builtin::kIsSome:
        expect(*k[0], Type::kOptObj, arg(0));
        return Type::kBool;
      case Builtin::kUnwrap:
        expect(*k[0], Type::kOptObj, arg(0));
        return Type::kObj;
      case Builtin::kFst:
      case Builtin::kSnd:
        expect(*k[0], Type::kPair, arg(0));
        return Type::kFloat;
      case Builtin::kFilter:
      case Builtin::kExists:
      case Builtin::kForall: {
        expect(*k[0], Type::kObjList, arg(0));
        Type body = check_lambda(*k[1], 1, fn);
        if (!assignable(body, Type::kBool)) mismatch(*k[1], "predicate of " + fn, Type::kBool, body);
        return bi.id == Builtin::kFilter ? Type::kObjList : Type::kBool;
      }
      case Builtin::kSortBy: {
        expect(*k[0], Type::kObjList, arg(0));
        Type body = check_lambda(*k[1], 1, fn);
        if (body != Type::kError && !is_numeric(body) && body != Type::kPair) {
          error(*k[1], code::kTypeMismatch,
                "sort key must be a number or pair, found " + std::string(type_name(body)));
        }
        return Type::kObjList;
      }
      case Builtin::kSumOver:
      case Builtin::kMinOver:
      case Builtin::kMaxOver: {
        expect(*k[0], Type::kObjList, arg(0));
        Type body = check_lambda(*k[1], 1, fn);
        if (body != Type::kError && !is_numeric(body)) {
          error(*k[1], code::kTypeMismatch,
                fn + " body must be a number, found " + std::string(type_name(body)));
        }
        return Type::kFloat;
      }
      case Builtin::kSumPairs: {
        expect(*k[0], Type::kObjList, arg(0));
        Type body = check_lambda(*k[1], 2, fn);
        if (body != Type::kError && !is_numeric(body)) {
          error(*k[1], code::kTypeMismatch,
                fn + " body must be a number, found " + std::string(type_name(body)));
        }
        return Type::kFloat;
      }
    }
    return Type::kError;
  }
};

inline void collect_calls(const Expr& e, const RewardProgram& prog, std::vector<int>& out) {
  if (e.kind == ExprKind::kCall && !find_builtin(e.name)) {
    int idx = prog.helper_index(e.name);
    if (idx >= 0) out.push_back(idx);
  }
  for (const auto& k : e.kids) collect_calls(*k, prog, out);
}

inline void check_recursion(const RewardProgram& prog, std::vector<Diagnostic>& diags) {
  std::size_t n = prog.helpers.size();
  std::vector<std::vector<int>> edges(n);
  for (std::size_t i = 0; i < n; ++i) collect_calls(prog.helpers[i].body, prog, edges[i]);
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> state(n, 0);
  std::vector<bool> reported(n, false);
  auto dfs = [&](auto&& self, int u) -> void {
    state[static_cast<std::size_t>(u)] = 1;
    for (int v : edges[static_cast<std::size_t>(u)]) {
      auto vs = static_cast<std::size_t>(v);
      if (state[vs] == 1) {
        if (!reported[vs]) {
          reported[vs] = true;
          diags.push_back(make_error(prog.helpers[vs].span, code::kRecursiveHelper,
                                     "recursive helper '" + prog.helpers[vs].name +
                                         "' (helper calls must form an acyclic graph)"));
        }
      } else if (state[vs] == 0) {
        self(self, v);
      }
    }
    state[static_cast<std::size_t>(u)] = 2;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] == 0) dfs(dfs, static_cast<int>(i));
  }
}

inline void lint_expr(const Expr& e, std::vector<Diagnostic>& out) {
  if (e.kind == ExprKind::kBinary && (e.op == Op::kEq || e.op == Op::kNe)) {
    auto floaty = [](Type t) { return t == Type::kFloat || t == Type::kPair; };
    if (floaty(e.kids[0]->type) || floaty(e.kids[1]->type)) {
      out.push_back(make_warning(e.span, code::kFloatEquality,
                                 "exact equality comparison on floating-point values"));
    }
  }
  for (const auto& k : e.kids) lint_expr(*k, out);
}

}  // namespace detail

// Annotates the AST in place. Returns an empty list iff the program is
// well-typed, its helper graph is acyclic and the entry yields a number.
inline std::vector<Diagnostic> typecheck(RewardProgram& prog) {
  std::vector<Diagnostic> diags;
  prog.checked = false;
  detail::check_recursion(prog, diags);
  detail::Checker checker(prog, diags);
  for (auto& h : prog.helpers) {
    std::vector<std::pair<std::string, Type>> params;
    for (const auto& p : h.params) params.emplace_back(p.name, p.type);
    Type got;
    h.frame_size = checker.check_function(h.body, params, got);
    if (!detail::assignable(got, h.result)) {
      diags.push_back(make_error(h.span, code::kTypeMismatch,
                                 "helper '" + h.name + "' declared to return " +
                                     type_name(h.result) + " but body has type " +
                                     type_name(got)));
    }
  }
  Type got;
  prog.entry_frame_size =
      checker.check_function(prog.entry, {{prog.entry_param, Type::kObjList}}, got);
  if (got != Type::kError && !is_numeric(got)) {
    diags.push_back(make_error(prog.entry_span, code::kRewardNotFloat,
                               std::string("reward must be float, found ") + type_name(got)));
  }
  prog.checked = !has_errors(diags);
  return diags;
}

// Style warnings for a type-checked program (currently: float equality).
inline std::vector<Diagnostic> lint(const RewardProgram& prog) {
  std::vector<Diagnostic> out;
  for (const auto& h : prog.helpers) detail::lint_expr(h.body, out);
  detail::lint_expr(prog.entry, out);
  return out;
}

}  // namespace relreward::dsl

#endif  // RELREWARD_DSL_TYPECHECK_HPP_
