#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "opeadb/sql/ast.hpp"

namespace opeadb::sql {

struct Token {
  enum class Kind { Keyword, Ident, Integer, Decimal, String, Op, Punct, End };
  Kind kind = Kind::End;
  std::string text;  // keywords canonicalized to upper case
  std::size_t pos = 0;
};

// Maximal-munch lexer. Keywords match case-insensitively; identifiers may not
// equal a keyword and may not contain the string "subquery" in any case.
std::vector<Token> tokenize(std::string_view text);

// Recursive-descent parser over the tokenize() stream. Accepts an optional
// trailing semicolon; anything after it is an error.
Statement parse_statement(std::string_view text);

// Deterministic round-trippable rendering: parse(render(ast)) reproduces the
// same tree (composite conditions print fully parenthesized).
std::string render(const Statement& stmt);
std::string render(const Select& sel);
std::string render_pred(const Pred& p);
std::string render_expr(const Expr& e);

bool is_keyword(std::string_view word);

// Nesting ceiling for subqueries; exceeding it is a parse error.
inline constexpr int kMaxSubqueryDepth = 32;

}  // namespace opeadb::sql
