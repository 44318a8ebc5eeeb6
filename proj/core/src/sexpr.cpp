#include "sexpr.hpp"

#include <cctype>

#include "advplan/error.hpp"

namespace advplan::detail {

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool SExpr::is_keyword(std::string_view keyword) const {
  return is_atom() && to_lower(atom) == keyword;
}

std::string SExpr::lowered() const { return to_lower(atom); }

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of input", line_, column_);
    }
    SExpr expr;
    expr.line = line_;
    expr.column = column_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, column_);
    if (c == '(') {
      advance();
      expr.is_list = true;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) {
          throw ParseError("unbalanced '(' opened here", expr.line,
                           expr.column);
        }
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        expr.items.push_back(read());
      }
      return expr;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) advance();
    expr.atom = std::string(text_.substr(start, pos_ - start));
    return expr;
  }

 private:
  static bool is_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
           c == ')' || c == ';';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) {
  Reader reader(text);
  std::vector<SExpr> out;
  while (!reader.at_end()) out.push_back(reader.read());
  return out;
}

SExpr parse_single_sexpr(std::string_view text) {
  Reader reader(text);
  SExpr expr = reader.read();
  if (!reader.at_end()) throw ParseError("trailing input", 1, 1);
  return expr;
}

}  // namespace advplan::detail
