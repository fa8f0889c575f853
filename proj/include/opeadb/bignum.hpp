#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace opeadb {

// Ciphertexts and partition boundaries are unbounded non-negative integers:
// the top boundary is roughly T_max * sigma, which overflows 64-bit words for
// realistic domains, and sums of ciphertexts grow past that again. Everything
// that touches a ciphertext value goes through this type.
using Int = boost::multiprecision::cpp_int;

std::string to_decimal(const Int& v);

// Strict decimal parse: optional leading '-', digits only. Throws
// ErrorKind::MalformedCell on anything else (store cells are machine-written,
// so junk means corruption, not user error).
Int parse_decimal(std::string_view text);

Int pow10_int(unsigned n);

// Number of decimal digits of |v|; 0 has one digit.
unsigned decimal_digits(const Int& v);

}  // namespace opeadb
