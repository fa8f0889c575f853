#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "opeadb/errors.hpp"
#include "opeadb/sql/parser.hpp"

namespace opeadb::sql {
namespace {

constexpr std::array kKeywords = {
    "ALL",    "AND",    "ASC",    "AVG",    "BETWEEN", "BY",     "COUNT",
    "DEFAULT", "DELETE", "DESC",  "DISTINCT", "ESCAPE", "EXISTS", "FROM",
    "FULL",   "GROUP",  "HAVING", "IN",     "INNER",   "INSERT", "INTO",
    "IS",     "JOIN",   "LEFT",   "LIKE",   "MAX",     "MIN",    "NOT",
    "NULL",   "ON",     "OR",     "ORDER",  "RIGHT",   "SELECT", "SET",
    "SUM",    "UPDATE", "VALUES", "WHERE",
};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return char(std::toupper(c)); });
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return out;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

bool ident_cont(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

bool is_keyword(std::string_view word) {
  std::string u = upper(word);
  return std::find(kKeywords.begin(), kKeywords.end(), u) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto fail_at = [&](std::size_t pos, const std::string& msg) {
    fail(ErrorKind::Lex, msg + " at offset " + std::to_string(pos));
  };
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_cont(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      if (is_keyword(word)) {
        t.kind = Token::Kind::Keyword;
        t.text = upper(word);
      } else {
        if (lower(word).find("subquery") != std::string::npos) {
          fail_at(i, "identifier '" + word + "' may not contain 'subquery'");
        }
        t.kind = Token::Kind::Ident;
        t.text = word;
      }
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < n && text[j] == '.' && j + 1 < n &&
          std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        t.kind = Token::Kind::Decimal;
      } else {
        t.kind = Token::Kind::Integer;
      }
      t.text = std::string(text.substr(i, j - i));
      if (j < n && ident_start(text[j])) fail_at(j, "malformed number");
      i = j;
    } else if (c == '\'') {
      std::string lit;
      std::size_t j = i + 1;
      for (;;) {
        if (j >= n) fail_at(i, "unterminated string literal");
        if (text[j] == '\'') {
          if (j + 1 < n && text[j + 1] == '\'') {  // '' escapes a quote
            lit.push_back('\'');
            j += 2;
            continue;
          }
          ++j;
          break;
        }
        lit.push_back(text[j]);
        ++j;
      }
      t.kind = Token::Kind::String;
      t.text = lit;
      i = j;
    } else if (c == '<' || c == '>' || c == '!' || c == '=') {
      std::string two(text.substr(i, std::min<std::size_t>(2, n - i)));
      if (two == "<>" || two == "<=" || two == ">=" || two == "!=" || two == "!>" ||
          two == "!<") {
        t.kind = Token::Kind::Op;
        t.text = two;
        i += 2;
      } else if (c == '!') {
        fail_at(i, "stray '!'");
      } else {
        t.kind = Token::Kind::Op;
        t.text = std::string(1, c);
        ++i;
      }
    } else if (std::string_view("(),.;*+-/").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, c);
      ++i;
    } else {
      fail_at(i, std::string("illegal character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.pos = n;
  out.push_back(end);
  return out;
}

}  // namespace opeadb::sql
