#pragma once

#include <set>
#include <string>
#include <string_view>

#include "weiss/expr/expr.hpp"

namespace weiss::expr {

struct ParseOptions {
  /// Names treated as unknown functions: `psi` parses to the undifferentiated
  /// atom and `psi_xy` to its mixed second derivative.
  std::set<std::string> unknowns{"psi"};
  /// Declared variables. Derivative suffix letters must be declared; an empty
  /// set accepts any single-letter suffixes.
  std::set<std::string> variables;
};

/// Parses the plain infix grammar:
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' factor)?
///   base   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
///
/// NUMBER is a decimal (`1.25`) or a rational literal written without spaces
/// (`2/3`). Throws ParseError on malformed input or an unknown function name.
Expr parse(std::string_view text, const ParseOptions& options = {});

}  // namespace weiss::expr
