#ifndef RELREWARD_DSL_PRINTER_HPP_
#define RELREWARD_DSL_PRINTER_HPP_

#include <charconv>
#include <string>

#include "relreward/dsl/ast.hpp"

namespace relreward::dsl {

namespace detail {

// Precedence levels, loosest first.
enum Prec : int {
  kPrecBinder = 0,  // let / if / lambda
  kPrecOr = 1,
  kPrecAnd = 2,
  kPrecNot = 3,
  kPrecCmp = 4,
  kPrecAdd = 5,
  kPrecMul = 6,
  kPrecUnary = 7,
  kPrecPostfix = 8,
  kPrecAtom = 9,
};

inline int op_prec(Op op) {
  switch (op) {
    case Op::kOr: return kPrecOr;
    case Op::kAnd: return kPrecAnd;
    case Op::kLt: case Op::kLe: case Op::kGt: case Op::kGe:
    case Op::kEq: case Op::kNe: return kPrecCmp;
    case Op::kAdd: case Op::kSub: return kPrecAdd;
    case Op::kMul: case Op::kDiv: return kPrecMul;
    default: return kPrecAtom;
  }
}

inline int prec_of(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kLet:
    case ExprKind::kIf:
    case ExprKind::kLambda: return kPrecBinder;
    case ExprKind::kBinary: return op_prec(e.op);
    case ExprKind::kUnary: return e.op == Op::kNot ? kPrecNot : kPrecUnary;
    case ExprKind::kFloatLit:
    case ExprKind::kIntLit:
      // Negative literals print with a leading minus.
      return (e.kind == ExprKind::kIntLit ? e.ival < 0 : std::signbit(e.fval))
                 ? kPrecUnary
                 : kPrecAtom;
    case ExprKind::kField: return kPrecPostfix;
    default: return kPrecAtom;
  }
}

inline std::string format_float(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

class Printer {
 public:
  std::string out;

  void expr(const Expr& e, int indent) {
    switch (e.kind) {
      case ExprKind::kFloatLit: out += format_float(e.fval); break;
      case ExprKind::kIntLit: out += std::to_string(e.ival); break;
      case ExprKind::kBoolLit: out += e.bval ? "true" : "false"; break;
      case ExprKind::kStrLit: out += "\"" + e.name + "\""; break;
      case ExprKind::kVar: out += e.name; break;
      case ExprKind::kLet:
        out += "let " + e.name + " = ";
        expr(*e.kids[0], indent + 2);
        out += " in\n";
        pad(indent);
        expr(*e.kids[1], indent);
        break;
      case ExprKind::kIf:
        out += "if ";
        expr(*e.kids[0], indent + 2);
        out += " then ";
        expr(*e.kids[1], indent + 2);
        out += " else ";
        expr(*e.kids[2], indent + 2);
        break;
      case ExprKind::kLambda:
        if (e.params.size() == 1) {
          out += e.params[0];
        } else {
          out += "(" + e.params[0] + ", " + e.params[1] + ")";
        }
        out += " => ";
        expr(*e.kids[0], indent + 2);
        break;
      case ExprKind::kUnary:
        if (e.op == Op::kNot) {
          out += "not ";
          sub(*e.kids[0], kPrecNot, indent);
        } else {
          out += "-";
          const Expr& k = *e.kids[0];
          bool literal = k.kind == ExprKind::kIntLit || k.kind == ExprKind::kFloatLit;
          bool wrap = literal || (k.kind == ExprKind::kUnary && k.op == Op::kNeg) ||
                      prec_of(k) < kPrecUnary;
          if (wrap) out += "(";
          expr(k, indent);
          if (wrap) out += ")";
        }
        break;
      case ExprKind::kBinary: {
        int p = op_prec(e.op);
        bool cmp = p == kPrecCmp;
        sub(*e.kids[0], cmp ? p + 1 : p, indent);
        out += std::string(" ") + op_text(e.op) + " ";
        sub(*e.kids[1], p + 1, indent);
        break;
      }
      case ExprKind::kField:
        sub(*e.kids[0], kPrecPostfix, indent);
        out += "." + e.name;
        break;
      case ExprKind::kCall:
        out += e.name + "(";
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
          if (i) out += ", ";
          expr(*e.kids[i], indent + 2);
        }
        out += ")";
        break;
      case ExprKind::kPair:
        out += "(";
        expr(*e.kids[0], indent + 2);
        out += ", ";
        expr(*e.kids[1], indent + 2);
        out += ")";
        break;
    }
  }

 private:
  void pad(int n) { out.append(static_cast<std::size_t>(n), ' '); }

  void sub(const Expr& e, int min_prec, int indent) {
    if (prec_of(e) < min_prec) {
      out += "(";
      expr(e, indent + 1);
      out += ")";
    } else {
      expr(e, indent);
    }
  }
};

inline void print_comments(std::string& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) {
    out += l.empty() ? "#\n" : "# " + l + "\n";
  }
}

}  // namespace detail

inline std::string pretty_print(const Expr& e) {
  detail::Printer p;
  p.expr(e, 0);
  return p.out;
}

// Canonical source form. parse(pretty_print(p)) is structurally equal to p;
// comments other than the header and definition docs are not preserved.
inline std::string pretty_print(const RewardProgram& prog) {
  std::string out;
  if (!prog.header.empty()) {
    detail::print_comments(out, prog.header);
    out += "\n";
  }
  for (const auto& h : prog.helpers) {
    detail::print_comments(out, h.doc);
    out += "def " + h.name + "(";
    for (std::size_t i = 0; i < h.params.size(); ++i) {
      if (i) out += ", ";
      out += h.params[i].name + ": " + type_name(h.params[i].type);
    }
    out += std::string(") -> ") + type_name(h.result) + ":\n  ";
    detail::Printer p;
    p.expr(h.body, 2);
    out += p.out + "\n\n";
  }
  detail::print_comments(out, prog.entry_doc);
  out += "reward(" + prog.entry_param + "):\n  ";
  detail::Printer p;
  p.expr(prog.entry, 2);
  out += p.out + "\n";
  return out;
}

}  // namespace relreward::dsl

#endif  // RELREWARD_DSL_PRINTER_HPP_
