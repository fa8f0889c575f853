#include "opeadb/bignum.hpp"

#include "opeadb/errors.hpp"

namespace opeadb {

std::string to_decimal(const Int& v) { return v.str(); }

Int parse_decimal(std::string_view text) {
  if (text.empty()) fail(ErrorKind::MalformedCell, "empty integer text");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-') {
    negative = true;
    i = 1;
    if (text.size() == 1) fail(ErrorKind::MalformedCell, "bare '-' is not an integer");
  }
  Int v = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9')
      fail(ErrorKind::MalformedCell,
           "unexpected character '" + std::string(1, c) + "' in integer text");
    v *= 10;
    v += c - '0';
  }
  return negative ? Int(-v) : v;
}

Int pow10_int(unsigned n) {
  Int v = 1;
  for (unsigned i = 0; i < n; ++i) v *= 10;
  return v;
}

unsigned decimal_digits(const Int& v) {
  Int a = v < 0 ? Int(-v) : v;
  unsigned digits = 1;
  while (a >= 10) {
    a /= 10;
    ++digits;
  }
  return digits;
}

}  // namespace opeadb
