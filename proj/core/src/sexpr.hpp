#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace advplan::detail {

// Minimal S-expression tree used by the PDDL and window-table readers.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is_atom() const { return !is_list; }
  // Case-insensitive keyword test for atoms.
  bool is_keyword(std::string_view keyword) const;
  std::string lowered() const;
};

// Parses every top-level expression in `text`. ';' starts a comment.
// Throws ParseError with line and column.
std::vector<SExpr> parse_sexprs(std::string_view text);

// Parses exactly one expression.
SExpr parse_single_sexpr(std::string_view text);

std::string to_lower(std::string_view text);

}  // namespace advplan::detail
