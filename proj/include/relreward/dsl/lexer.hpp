#ifndef RELREWARD_DSL_LEXER_HPP_
#define RELREWARD_DSL_LEXER_HPP_

#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "relreward/dsl/diagnostic.hpp"

namespace relreward::dsl {

enum class Tok : std::uint8_t {
  kIdent,
  kInt,
  kFloat,
  kString,
  kLParen,
  kRParen,
  kComma,
  kColon,
  kArrow,     // ->
  kFatArrow,  // =>
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kLt,
  kLe,
  kGt,
  kGe,
  kEqEq,
  kNe,
  kAssign,
  kDot,
  // keywords
  kDef,
  kReward,
  kLet,
  kIn,
  kIf,
  kThen,
  kElse,
  kAnd,
  kOr,
  kNot,
  kTrue,
  kFalse,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  Span span;
  double fval = 0.0;
  std::int64_t ival = 0;
};

struct Comment {
  int line = 0;
  std::string text;  // without the leading '#' and one optional space
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by kEnd
  std::vector<Comment> comments;
  std::vector<Diagnostic> diagnostics;
};

inline Tok keyword_or_ident(std::string_view s) {
  if (s == "def") return Tok::kDef;
  if (s == "reward") return Tok::kReward;
  if (s == "let") return Tok::kLet;
  if (s == "in") return Tok::kIn;
  if (s == "if") return Tok::kIf;
  if (s == "then") return Tok::kThen;
  if (s == "else") return Tok::kElse;
  if (s == "and") return Tok::kAnd;
  if (s == "or") return Tok::kOr;
  if (s == "not") return Tok::kNot;
  if (s == "true") return Tok::kTrue;
  if (s == "false") return Tok::kFalse;
  return Tok::kIdent;
}

inline LexResult lex(std::string_view src) {
  LexResult out;
  int line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  auto col_of = [&](std::size_t pos) {
    return static_cast<int>(pos - line_start) + 1;
  };
  auto push = [&](Tok kind, std::size_t begin, std::size_t end) {
    Token t;
    t.kind = kind;
    t.text = std::string(src.substr(begin, end - begin));
    t.span = {line, col_of(begin), col_of(end)};
    out.tokens.push_back(std::move(t));
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      line_start = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') {
      std::size_t end = src.find('\n', i);
      if (end == std::string_view::npos) end = src.size();
      std::string_view body = src.substr(i + 1, end - i - 1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) {
        body.remove_suffix(1);
      }
      out.comments.push_back({line, std::string(body)});
      i = end;
      continue;
    }
    std::size_t begin = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                                src[i] == '_')) {
        ++i;
      }
      push(keyword_or_ident(src.substr(begin, i - begin)), begin, i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      bool is_float = false;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i + 1 < src.size() && src[i] == '.' &&
          std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        is_float = true;
        ++i;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          is_float = true;
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      push(is_float ? Tok::kFloat : Tok::kInt, begin, i);
      Token& t = out.tokens.back();
      const char* first = src.data() + begin;
      const char* last = src.data() + i;
      if (is_float) {
        auto [p, ec] = std::from_chars(first, last, t.fval);
        if (ec != std::errc() || p != last) {
          out.diagnostics.push_back(
              make_error(t.span, code::kSyntax, "invalid float literal"));
        }
      } else {
        auto [p, ec] = std::from_chars(first, last, t.ival);
        if (ec != std::errc() || p != last) {
          out.diagnostics.push_back(
              make_error(t.span, code::kSyntax, "integer literal out of range"));
        }
      }
      continue;
    }
    if (c == '"') {
      ++i;
      while (i < src.size() && src[i] != '"' && src[i] != '\n') ++i;
      if (i >= src.size() || src[i] != '"') {
        Span sp{line, col_of(begin), col_of(i)};
        out.diagnostics.push_back(
            make_error(sp, code::kSyntax, "unterminated string literal"));
        continue;
      }
      ++i;
      push(Tok::kString, begin, i);
      Token& t = out.tokens.back();
      t.text = t.text.substr(1, t.text.size() - 2);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    Tok kind;
    std::size_t len = 1;
    if (two('-', '>')) { kind = Tok::kArrow; len = 2; }
    else if (two('=', '>')) { kind = Tok::kFatArrow; len = 2; }
    else if (two('<', '=')) { kind = Tok::kLe; len = 2; }
    else if (two('>', '=')) { kind = Tok::kGe; len = 2; }
    else if (two('=', '=')) { kind = Tok::kEqEq; len = 2; }
    else if (two('!', '=')) { kind = Tok::kNe; len = 2; }
    else {
      switch (c) {
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        case ',': kind = Tok::kComma; break;
        case ':': kind = Tok::kColon; break;
        case '+': kind = Tok::kPlus; break;
        case '-': kind = Tok::kMinus; break;
        case '*': kind = Tok::kStar; break;
        case '/': kind = Tok::kSlash; break;
        case '<': kind = Tok::kLt; break;
        case '>': kind = Tok::kGt; break;
        case '=': kind = Tok::kAssign; break;
        case '.': kind = Tok::kDot; break;
        default: {
          Span sp{line, col_of(i), col_of(i + 1)};
          out.diagnostics.push_back(make_error(
              sp, code::kSyntax,
              std::string("unexpected character '") + c + "'"));
          ++i;
          continue;
        }
      }
    }
    i += len;
    push(kind, begin, i);
  }
  Token end;
  end.kind = Tok::kEnd;
  end.span = {line, col_of(i), col_of(i) + 1};
  out.tokens.push_back(std::move(end));
  return out;
}

}  // namespace relreward::dsl

#endif  // RELREWARD_DSL_LEXER_HPP_
