#ifndef RELREWARD_DSL_BOUNDS_HPP_
#define RELREWARD_DSL_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "relreward/dsl/ast.hpp"

namespace relreward::dsl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed interval with possibly infinite endpoints; lo <= hi.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  static Interval point(double v) { return {v, v}; }
  static Interval top() { return {-kInf, kInf}; }

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool within(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline nlohmann::ordered_json to_json(const Interval& iv) {
  auto enc = [](double v) -> nlohmann::ordered_json {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    return v;
  };
  nlohmann::ordered_json j;
  j["lo"] = enc(iv.lo);
  j["hi"] = enc(iv.hi);
  return j;
}

inline std::string format_interval(const Interval& iv) {
  auto f = [](double v) -> std::string {
    if (v == kInf) return "+inf";
    if (v == -kInf) return "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  };
  return "[" + f(iv.lo) + ", " + f(iv.hi) + "]";
}

namespace detail {

// 0 * inf is taken as 0: an endpoint of zero bounds the product.
inline double mul0(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

inline Interval iv_add(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval iv_neg(Interval a) { return {-a.hi, -a.lo}; }
inline Interval iv_sub(Interval a, Interval b) { return iv_add(a, iv_neg(b)); }

inline Interval iv_mul(Interval a, Interval b) {
  double c[4] = {mul0(a.lo, b.lo), mul0(a.lo, b.hi), mul0(a.hi, b.lo), mul0(a.hi, b.hi)};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

inline Interval iv_div(Interval a, Interval b) {
  if (b.contains(0.0) || !a.bounded()) return Interval::top();
  // Finite numerator, divisor of one sign: extremes sit at the endpoints
  // (x / inf = 0 under IEEE rules).
  double c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

inline Interval iv_abs(Interval a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return iv_neg(a);
  return {0.0, std::max(-a.lo, a.hi)};
}

struct AbsVal {
  Interval first = Interval::top();
  Interval second = Interval::top();  // pairs only
};

class BoundsAnalyzer {
 public:
  explicit BoundsAnalyzer(const RewardProgram& prog) : prog_(prog) {}

  bool may_trap = false;

  Interval run() {
    frame_.assign(static_cast<std::size_t>(std::max(prog_.entry_frame_size, 1)), AbsVal{});
    return eval(prog_.entry).first;
  }

 private:
  const RewardProgram& prog_;
  std::vector<AbsVal> frame_;

  static AbsVal iv(Interval i) {
    AbsVal a;
    a.first = i;
    return a;
  }

  AbsVal arith(const Expr& e, Interval r, Interval a, Interval b) {
    if (!a.bounded() || !b.bounded() || !r.bounded()) {
      // Unbounded operands may overflow to inf/nan; integer ops may trap.
      may_trap = true;
    }
    (void)e;
    return iv(r);
  }

  AbsVal eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::kFloatLit:
      case ExprKind::kIntLit: return iv(Interval::point(e.kind == ExprKind::kIntLit ? static_cast<double>(e.ival) : e.fval));
      case ExprKind::kBoolLit:
      case ExprKind::kStrLit: return AbsVal{};
      case ExprKind::kVar: return frame_[static_cast<std::size_t>(e.slot)];
      case ExprKind::kLet:
        frame_[static_cast<std::size_t>(e.slot)] = eval(*e.kids[0]);
        return eval(*e.kids[1]);
      case ExprKind::kIf: {
        eval(*e.kids[0]);
        AbsVal a = eval(*e.kids[1]);
        AbsVal b = eval(*e.kids[2]);
        AbsVal r;
        r.first = hull(a.first, b.first);
        r.second = hull(a.second, b.second);
        return r;
      }
      case ExprKind::kUnary: {
        AbsVal v = eval(*e.kids[0]);
        if (e.op == Op::kNot) return AbsVal{};
        if (!v.first.bounded()) may_trap = true;
        return iv(iv_neg(v.first));
      }
      case ExprKind::kBinary: return eval_binary(e);
      case ExprKind::kField: {
        eval(*e.kids[0]);
        switch (e.field) {
          case Field::kW:
          case Field::kH: return iv({0.0, kInf});
          case Field::kRed:
          case Field::kGreen:
          case Field::kBlue: return iv({0.0, 255.0});
          case Field::kOrientation:
          case Field::kValue:
          case Field::kPrevValue:
          case Field::kValueDiff:
            may_trap = true;
            return AbsVal{};
          default: return AbsVal{};
        }
      }
      case ExprKind::kPair: {
        AbsVal r;
        r.first = eval(*e.kids[0]).first;
        r.second = eval(*e.kids[1]).first;
        return r;
      }
      case ExprKind::kLambda: return eval(*e.kids[0]);
      case ExprKind::kCall: return e.is_builtin ? eval_builtin(e) : eval_helper(e);
    }
    return AbsVal{};
  }

  AbsVal eval_binary(const Expr& e) {
    AbsVal a = eval(*e.kids[0]);
    AbsVal b = eval(*e.kids[1]);
    switch (e.op) {
      case Op::kAdd: return arith(e, iv_add(a.first, b.first), a.first, b.first);
      case Op::kSub: return arith(e, iv_sub(a.first, b.first), a.first, b.first);
      case Op::kMul: return arith(e, iv_mul(a.first, b.first), a.first, b.first);
      case Op::kDiv:
        may_trap = true;
        return iv(iv_div(a.first, b.first));
      default: return AbsVal{};
    }
  }

  AbsVal eval_helper(const Expr& e) {
    const HelperDef& h = prog_.helpers[static_cast<std::size_t>(e.callee)];
    std::vector<AbsVal> args;
    for (const auto& k : e.kids) args.push_back(eval(*k));
    std::vector<AbsVal> saved = std::move(frame_);
    frame_.assign(static_cast<std::size_t>(std::max(h.frame_size, 1)), AbsVal{});
    for (std::size_t i = 0; i < args.size(); ++i) frame_[i] = args[i];
    AbsVal r = eval(h.body);
    frame_ = std::move(saved);
    return r;
  }

  AbsVal lambda_body(const Expr& lam) {
    for (std::size_t i = 0; i < lam.params.size(); ++i) {
      frame_[static_cast<std::size_t>(lam.slot) + i] = AbsVal{};
    }
    return eval(*lam.kids[0]);
  }

  AbsVal eval_builtin(const Expr& e) {
    const auto& k = e.kids;
    auto id = static_cast<Builtin>(e.callee);
    switch (id) {
      case Builtin::kManhattan:
        eval(*k[0]);
        eval(*k[1]);
        return iv({0.0, kInf});
      case Builtin::kClamp: {
        Interval x = eval(*k[0]).first;
        Interval lo = eval(*k[1]).first;
        Interval hi = eval(*k[2]).first;
        // clamp(x, lo, hi) = max(min(x, hi), lo), monotone in every argument.
        return iv({std::max(std::min(x.lo, hi.lo), lo.lo),
                   std::max(std::min(x.hi, hi.hi), lo.hi)});
      }
      case Builtin::kAbs: return iv(iv_abs(eval(*k[0]).first));
      case Builtin::kMin:
      case Builtin::kMax: {
        Interval a = eval(*k[0]).first;
        Interval b = eval(*k[1]).first;
        if (id == Builtin::kMin) return iv({std::min(a.lo, b.lo), std::min(a.hi, b.hi)});
        return iv({std::max(a.lo, b.lo), std::max(a.hi, b.hi)});
      }
      case Builtin::kCount:
        eval(*k[0]);
        return iv({0.0, kInf});
      case Builtin::kSumOver:
      case Builtin::kSumPairs: {
        eval(*k[0]);
        Interval body = lambda_body(*k[1]).first;
        // Zero or more terms, each within `body`.
        if (!body.bounded()) may_trap = true;
        return iv({body.lo < 0 ? -kInf : 0.0, body.hi > 0 ? kInf : 0.0});
      }
      case Builtin::kMinOver: {
        eval(*k[0]);
        Interval body = lambda_body(*k[1]).first;
        may_trap = true;  // +inf on an empty list
        return iv({body.lo, kInf});
      }
      case Builtin::kMaxOver: {
        eval(*k[0]);
        Interval body = lambda_body(*k[1]).first;
        may_trap = true;
        return iv({-kInf, body.hi});
      }
      case Builtin::kFst:
      case Builtin::kSnd: {
        AbsVal p = eval(*k[0]);
        return iv(id == Builtin::kFst ? p.first : p.second);
      }
      case Builtin::kUnwrap:
        may_trap = true;
        eval(*k[0]);
        return AbsVal{};
      default:
        for (const auto& arg : k) {
          if (arg->kind == ExprKind::kLambda) {
            lambda_body(*arg);
          } else {
            eval(*arg);
          }
        }
        return AbsVal{};
    }
  }
};

}  // namespace detail

// Sound over-approximation of every reward the program can return. A trap
// yields reward 0, so 0 is included whenever the program might trap.
inline Interval static_bounds(const RewardProgram& prog) {
  if (!prog.checked) return Interval::top();
  detail::BoundsAnalyzer an(prog);
  Interval r = an.run();
  if (std::isnan(r.lo) || std::isnan(r.hi)) r = Interval::top();
  if (an.may_trap) r = hull(r, Interval::point(0.0));
  return r;
}

}  // namespace relreward::dsl

#endif  // RELREWARD_DSL_BOUNDS_HPP_
