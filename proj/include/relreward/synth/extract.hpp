#ifndef RELREWARD_SYNTH_EXTRACT_HPP_
#define RELREWARD_SYNTH_EXTRACT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relreward/dsl.hpp"

namespace relreward::synth {

struct ExtractResult {
  std::optional<std::string> code;
  std::string error;

  bool ok() const { return code.has_value(); }
};

// Bodies of all ``` fenced blocks in order. A fence line starts with up to
// three spaces and three backticks; anything after the backticks on an
// opening line is the language tag. An unterminated last block runs to the
// end of the message.
inline std::vector<std::string> fenced_blocks(std::string_view msg) {
  std::vector<std::string> blocks;
  bool inside = false;
  std::string body;
  std::size_t pos = 0;
  while (pos <= msg.size()) {
    std::size_t eol = msg.find('\n', pos);
    if (eol == std::string_view::npos) eol = msg.size();
    std::string_view line = msg.substr(pos, eol - pos);
    std::size_t indent = line.find_first_not_of(' ');
    bool fence = indent != std::string_view::npos && indent <= 3 &&
                 line.substr(indent, 3) == "```";
    if (fence) {
      if (inside) {
        blocks.push_back(std::move(body));
        body.clear();
      }
      inside = !inside;
    } else if (inside) {
      body.append(line);
      body += '\n';
    }
    pos = eol + 1;
  }
  if (inside) blocks.push_back(std::move(body));
  return blocks;
}

// The last fenced block; failing that, the whole message if it compiles as a
// program on its own.
inline ExtractResult extract_code(std::string_view msg) {
  auto blocks = fenced_blocks(msg);
  if (!blocks.empty()) return {std::move(blocks.back()), {}};
  if (dsl::compile(msg).ok()) return {std::string(msg), {}};
  return {std::nullopt, "no code found"};
}

}  // namespace relreward::synth

#endif  // RELREWARD_SYNTH_EXTRACT_HPP_
