#ifndef RELREWARD_DSL_HPP_
#define RELREWARD_DSL_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "relreward/dsl/ast.hpp"
#include "relreward/dsl/bounds.hpp"
#include "relreward/dsl/diagnostic.hpp"
#include "relreward/dsl/evaluator.hpp"
#include "relreward/dsl/parser.hpp"
#include "relreward/dsl/printer.hpp"
#include "relreward/dsl/typecheck.hpp"

namespace relreward::dsl {

// Parse + typecheck + lint in one go. `program` is set only when there are
// no errors; warnings are reported either way.
struct CompileResult {
  std::optional<RewardProgram> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

inline CompileResult compile(std::string_view source,
                             std::string mode = "hand_fixture") {
  CompileResult out;
  ParseResult pr = parse(source, std::move(mode));
  out.diagnostics = std::move(pr.diagnostics);
  if (!pr.ok()) return out;
  RewardProgram prog = std::move(*pr.program);
  auto tc = typecheck(prog);
  out.diagnostics.insert(out.diagnostics.end(), tc.begin(), tc.end());
  if (has_errors(tc)) return out;
  auto lw = lint(prog);
  out.diagnostics.insert(out.diagnostics.end(), lw.begin(), lw.end());
  out.program = std::move(prog);
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Loads a program file that must compile cleanly; throws with the formatted
// diagnostics otherwise.
inline RewardProgram load_program(const std::string& path,
                                  std::string mode = "hand_fixture") {
  CompileResult cr = compile(read_text_file(path), std::move(mode));
  if (!cr.ok()) {
    std::string msg;
    for (const auto& d : cr.diagnostics) msg += format_diagnostic(d, path) + "\n";
    throw std::invalid_argument(msg);
  }
  return std::move(*cr.program);
}

}  // namespace relreward::dsl

#endif  // RELREWARD_DSL_HPP_
