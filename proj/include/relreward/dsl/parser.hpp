#ifndef RELREWARD_DSL_PARSER_HPP_
#define RELREWARD_DSL_PARSER_HPP_

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relreward/dsl/ast.hpp"
#include "relreward/dsl/diagnostic.hpp"
#include "relreward/dsl/lexer.hpp"

namespace relreward::dsl {

struct ParseResult {
  std::optional<RewardProgram> program;  // set iff there are no errors
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

namespace detail {

// Thrown internally on a syntax error; caught at definition granularity so
// the parser can resynchronise at the next `def`/`reward`.
struct SyntaxError {
  Diagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  void parse_definitions(RewardProgram& prog, std::vector<Diagnostic>& diags,
                         std::vector<int>& def_lines, int& entry_line) {
    bool have_entry = false;
    while (peek().kind != Tok::kEnd) {
      std::size_t start = pos_;
      try {
        if (peek().kind == Tok::kDef) {
          def_lines.push_back(peek().span.line);
          prog.helpers.push_back(parse_helper());
        } else if (peek().kind == Tok::kReward) {
          Span sp = peek().span;
          if (have_entry) {
            throw SyntaxError{make_error(sp, code::kDuplicate,
                                         "duplicate reward entry point")};
          }
          entry_line = sp.line;
          parse_entry(prog);
          have_entry = true;
        } else {
          throw SyntaxError{error_here("expected 'def' or 'reward'")};
        }
      } catch (const SyntaxError& e) {
        diags.push_back(e.diagnostic);
        synchronize(start);
      }
    }
    if (!have_entry && !has_errors(diags)) {
      diags.push_back(make_error(peek().span, code::kSyntax,
                                 "missing 'reward(objects): ...' entry point"));
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind == k) {
      advance();
      return true;
    }
    return false;
  }
  Diagnostic error_here(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    return make_error(t.span, code::kSyntax, msg + ", found " + found);
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) {
      throw SyntaxError{error_here(std::string("expected ") + what)};
    }
    return advance();
  }
  // Skips to the next `def`/`reward`, always making progress past `start`.
  void synchronize(std::size_t start) {
    if (pos_ == start) advance();
    while (peek().kind != Tok::kEnd && peek().kind != Tok::kDef &&
           peek().kind != Tok::kReward) {
      advance();
    }
  }

  static Span join(Span a, Span b) {
    if (a.line == b.line) return {a.line, a.col, std::max(a.end_col, b.end_col)};
    return a;
  }

  HelperDef parse_helper() {
    HelperDef h;
    h.span = expect(Tok::kDef, "'def'").span;
    const Token& name = expect(Tok::kIdent, "helper name");
    h.name = name.text;
    h.span = join(h.span, name.span);
    if (find_builtin(h.name)) {
      throw SyntaxError{make_error(name.span, code::kDuplicate,
                                   "helper '" + h.name + "' shadows a builtin")};
    }
    expect(Tok::kLParen, "'('");
    if (peek().kind != Tok::kRParen) {
      do {
        Param p;
        const Token& pn = expect(Tok::kIdent, "parameter name");
        p.name = pn.text;
        p.span = pn.span;
        expect(Tok::kColon, "':' after parameter name");
        p.type = parse_type();
        h.params.push_back(std::move(p));
      } while (accept(Tok::kComma));
    }
    expect(Tok::kRParen, "')'");
    expect(Tok::kArrow, "'->'");
    h.result = parse_type();
    expect(Tok::kColon, "':'");
    h.body = parse_expr();
    return h;
  }

  Type parse_type() {
    const Token& t = expect(Tok::kIdent, "type name");
    auto ty = parse_type_name(t.text);
    if (!ty) {
      throw SyntaxError{make_error(t.span, code::kSyntax,
                                   "unknown type '" + t.text + "'")};
    }
    return *ty;
  }

  void parse_entry(RewardProgram& prog) {
    prog.entry_span = expect(Tok::kReward, "'reward'").span;
    expect(Tok::kLParen, "'('");
    prog.entry_param = expect(Tok::kIdent, "parameter name").text;
    expect(Tok::kRParen, "')'");
    expect(Tok::kColon, "':'");
    prog.entry = parse_expr();
  }

  static Expr node(ExprKind kind, Span span) {
    Expr e;
    e.kind = kind;
    e.span = span;
    return e;
  }
  static ExprPtr boxed(Expr e) { return std::make_unique<Expr>(std::move(e)); }

  bool at_lambda() const {
    if (peek().kind == Tok::kIdent && peek(1).kind == Tok::kFatArrow) return true;
    return peek().kind == Tok::kLParen && peek(1).kind == Tok::kIdent &&
           peek(2).kind == Tok::kComma && peek(3).kind == Tok::kIdent &&
           peek(4).kind == Tok::kRParen && peek(5).kind == Tok::kFatArrow;
  }

 public:
  Expr parse_expr() {
    const Token& t = peek();
    if (t.kind == Tok::kLet) {
      Expr e = node(ExprKind::kLet, advance().span);
      e.name = expect(Tok::kIdent, "binding name").text;
      expect(Tok::kAssign, "'='");
      e.kids.push_back(boxed(parse_expr()));
      expect(Tok::kIn, "'in'");
      e.kids.push_back(boxed(parse_expr()));
      return e;
    }
    if (t.kind == Tok::kIf) {
      Expr e = node(ExprKind::kIf, advance().span);
      e.kids.push_back(boxed(parse_expr()));
      expect(Tok::kThen, "'then'");
      e.kids.push_back(boxed(parse_expr()));
      expect(Tok::kElse, "'else'");
      e.kids.push_back(boxed(parse_expr()));
      return e;
    }
    if (at_lambda()) {
      Expr e = node(ExprKind::kLambda, t.span);
      if (peek().kind == Tok::kIdent) {
        e.params.push_back(advance().text);
      } else {
        advance();
        e.params.push_back(advance().text);
        advance();
        e.params.push_back(advance().text);
        advance();
      }
      expect(Tok::kFatArrow, "'=>'");
      e.kids.push_back(boxed(parse_expr()));
      return e;
    }
    return parse_or();
  }

 private:
  Expr binary(Op op, Span span, Expr lhs, Expr rhs) {
    Expr e = node(ExprKind::kBinary, span);
    e.op = op;
    e.kids.push_back(boxed(std::move(lhs)));
    e.kids.push_back(boxed(std::move(rhs)));
    return e;
  }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (peek().kind == Tok::kOr) {
      Span sp = advance().span;
      lhs = binary(Op::kOr, sp, std::move(lhs), parse_and());
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_not();
    while (peek().kind == Tok::kAnd) {
      Span sp = advance().span;
      lhs = binary(Op::kAnd, sp, std::move(lhs), parse_not());
    }
    return lhs;
  }

  Expr parse_not() {
    if (peek().kind == Tok::kNot) {
      Expr e = node(ExprKind::kUnary, advance().span);
      e.op = Op::kNot;
      e.kids.push_back(boxed(parse_not()));
      return e;
    }
    return parse_cmp();
  }

  static std::optional<Op> cmp_op(Tok k) {
    switch (k) {
      case Tok::kLt: return Op::kLt;
      case Tok::kLe: return Op::kLe;
      case Tok::kGt: return Op::kGt;
      case Tok::kGe: return Op::kGe;
      case Tok::kEqEq: return Op::kEq;
      case Tok::kNe: return Op::kNe;
      default: return std::nullopt;
    }
  }

  Expr parse_cmp() {
    Expr lhs = parse_add();
    if (auto op = cmp_op(peek().kind)) {
      Span sp = advance().span;
      lhs = binary(*op, sp, std::move(lhs), parse_add());
      if (cmp_op(peek().kind)) {
        throw SyntaxError{make_error(
            peek().span, code::kSyntax,
            "chained comparisons are not supported; combine with 'and'")};
      }
    }
    return lhs;
  }

  Expr parse_add() {
    Expr lhs = parse_mul();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      Op op = peek().kind == Tok::kPlus ? Op::kAdd : Op::kSub;
      Span sp = advance().span;
      lhs = binary(op, sp, std::move(lhs), parse_mul());
    }
    return lhs;
  }

  Expr parse_mul() {
    Expr lhs = parse_unary();
    while (peek().kind == Tok::kStar || peek().kind == Tok::kSlash) {
      Op op = peek().kind == Tok::kStar ? Op::kMul : Op::kDiv;
      Span sp = advance().span;
      lhs = binary(op, sp, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (peek().kind == Tok::kMinus) {
      Span sp = advance().span;
      // A minus directly applied to a numeric literal is a negative literal.
      if (peek().kind == Tok::kInt || peek().kind == Tok::kFloat) {
        Expr lit = parse_postfix();
        if (lit.kind == ExprKind::kIntLit || lit.kind == ExprKind::kFloatLit) {
          lit.fval = -lit.fval;
          lit.ival = -lit.ival;
          lit.span = join(sp, lit.span);
          return lit;
        }
        Expr e = node(ExprKind::kUnary, sp);
        e.op = Op::kNeg;
        e.kids.push_back(boxed(std::move(lit)));
        return e;
      }
      Expr e = node(ExprKind::kUnary, sp);
      e.op = Op::kNeg;
      e.kids.push_back(boxed(parse_unary()));
      return e;
    }
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_primary();
    while (peek().kind == Tok::kDot) {
      advance();
      const Token& f = expect(Tok::kIdent, "field name");
      Expr fe = node(ExprKind::kField, f.span);
      fe.name = f.text;
      fe.kids.push_back(boxed(std::move(e)));
      e = std::move(fe);
    }
    return e;
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kInt: {
        Expr e = node(ExprKind::kIntLit, advance().span);
        e.ival = t.ival;
        e.fval = static_cast<double>(t.ival);
        return e;
      }
      case Tok::kFloat: {
        Expr e = node(ExprKind::kFloatLit, advance().span);
        e.fval = t.fval;
        return e;
      }
      case Tok::kString: {
        Expr e = node(ExprKind::kStrLit, t.span);
        e.name = advance().text;
        return e;
      }
      case Tok::kTrue:
      case Tok::kFalse: {
        Expr e = node(ExprKind::kBoolLit, t.span);
        e.bval = advance().kind == Tok::kTrue;
        return e;
      }
      case Tok::kIdent: {
        const Token& id = advance();
        if (peek().kind == Tok::kLParen) {
          advance();
          Expr e = node(ExprKind::kCall, id.span);
          e.name = id.text;
          if (peek().kind != Tok::kRParen) {
            do {
              e.kids.push_back(boxed(parse_expr()));
            } while (accept(Tok::kComma));
          }
          expect(Tok::kRParen, "')' to close the argument list");
          return e;
        }
        Expr e = node(ExprKind::kVar, id.span);
        e.name = id.text;
        return e;
      }
      case Tok::kLParen: {
        Span sp = advance().span;
        Expr first = parse_expr();
        if (accept(Tok::kComma)) {
          Expr e = node(ExprKind::kPair, sp);
          e.kids.push_back(boxed(std::move(first)));
          e.kids.push_back(boxed(parse_expr()));
          expect(Tok::kRParen, "')' to close the pair");
          return e;
        }
        expect(Tok::kRParen, "')'");
        return first;
      }
      default:
        throw SyntaxError{error_here("expected an expression")};
    }
  }
};

inline void check_calls(const Expr& e, const RewardProgram& prog,
                        std::vector<Diagnostic>& diags) {
  if (e.kind == ExprKind::kCall && !find_builtin(e.name) &&
      prog.helper_index(e.name) < 0) {
    diags.push_back(make_error(e.span, code::kUnknownFunction,
                               "unknown function '" + e.name + "'"));
  }
  for (const auto& k : e.kids) check_calls(*k, prog, diags);
}

// Comment lines attached to the definition starting at `def_line`: the
// contiguous run of whole-line comments that ends right above it.
inline std::vector<std::string> attached_comments(
    const std::vector<Comment>& comments, const std::set<int>& code_lines,
    int def_line, std::set<int>& used) {
  std::vector<std::string> doc;
  int want = def_line - 1;
  for (auto it = comments.rbegin(); it != comments.rend(); ++it) {
    if (it->line > want) continue;
    if (it->line < want || code_lines.count(it->line)) break;
    doc.push_back(it->text);
    used.insert(it->line);
    --want;
  }
  std::reverse(doc.begin(), doc.end());
  return doc;
}

}  // namespace detail

// Parses one reward program. Unknown function names are reported here, type
// errors by typecheck().
inline ParseResult parse(std::string_view source,
                         std::string mode = "hand_fixture") {
  ParseResult res;
  LexResult lx = lex(source);
  res.diagnostics = std::move(lx.diagnostics);
  if (has_errors(res.diagnostics)) return res;

  std::set<int> code_lines;
  for (const auto& t : lx.tokens) {
    if (t.kind != Tok::kEnd) code_lines.insert(t.span.line);
  }

  RewardProgram prog;
  prog.source_text = std::string(source);
  prog.mode = std::move(mode);
  std::vector<int> def_lines;
  int entry_line = 0;
  detail::Parser parser(std::move(lx.tokens));
  parser.parse_definitions(prog, res.diagnostics, def_lines, entry_line);
  if (has_errors(res.diagnostics)) return res;

  std::set<int> used;
  for (std::size_t i = 0; i < prog.helpers.size(); ++i) {
    prog.helpers[i].doc =
        detail::attached_comments(lx.comments, code_lines, def_lines[i], used);
  }
  prog.entry_doc =
      detail::attached_comments(lx.comments, code_lines, entry_line, used);

  // Header: the first comment block, if it precedes all code, is not
  // attached to a definition and is followed by a blank line.
  int first_code = code_lines.empty() ? 1 << 30 : *code_lines.begin();
  if (!lx.comments.empty() && !used.count(lx.comments.front().line) &&
      lx.comments.front().line < first_code) {
    int expect_line = lx.comments.front().line;
    for (const auto& c : lx.comments) {
      if (c.line != expect_line || c.line >= first_code || used.count(c.line)) break;
      prog.header.push_back(c.text);
      ++expect_line;
    }
  }

  std::set<std::string> seen;
  for (const auto& h : prog.helpers) {
    if (!seen.insert(h.name).second) {
      res.diagnostics.push_back(make_error(
          h.span, code::kDuplicate, "duplicate helper '" + h.name + "'"));
    }
    detail::check_calls(h.body, prog, res.diagnostics);
  }
  detail::check_calls(prog.entry, prog, res.diagnostics);
  if (has_errors(res.diagnostics)) return res;

  res.program = std::move(prog);
  return res;
}

}  // namespace relreward::dsl

#endif  // RELREWARD_DSL_PARSER_HPP_
