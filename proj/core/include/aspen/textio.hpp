// Text format for ground programs: a small rule language with "%" comments,
// "."-terminated statements, and the compute/minimize/maximize statements.
#pragma once

#include <string>
#include <variant>

#include "aspen/program.hpp"

namespace aspen {

struct ParseError {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  std::string message;
  enum Kind { Syntax, BadWeight, BadBound } kind = Syntax;
};

using ParseResult = std::variant<Program, ParseError>;

ParseResult parse(const std::string& text);

// Canonical text: rules in stored order, literal sets printed in atom-name
// order; parse(render(p)) is structurally identical to p.
std::string render(const Program& p);

}  // namespace aspen
