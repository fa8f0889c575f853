#pragma once

#include <cstdint>
#include <string>

#include "opeadb/bignum.hpp"

namespace opeadb {

// Plain typed SQL value. Shared vocabulary between the codec, the plaintext
// reference executor, and decrypted result sets; deliberately dumb storage,
// SQL comparison semantics live with the engines.
class Value {
 public:
  enum class Kind { Null, Integer, Decimal, Text, Rational };

  Value() : kind_(Kind::Null) {}

  static Value null() { return Value(); }
  static Value integer(long long v);
  static Value decimal(long long unscaled, unsigned scale);
  static Value text(std::string v);
  // Exact ratio; reduced and sign-normalized (den > 0). den must be nonzero.
  static Value rational(Int num, Int den);

  Kind kind() const { return kind_; }
  bool is_null() const { return kind_ == Kind::Null; }
  bool is_numeric() const {
    return kind_ == Kind::Integer || kind_ == Kind::Decimal || kind_ == Kind::Rational;
  }

  long long as_integer() const;
  long long unscaled() const { return unscaled_; }
  unsigned scale() const { return scale_; }
  const std::string& as_text() const;
  const Int& num() const { return num_; }
  const Int& den() const { return den_; }

  // Exact numeric comparison across Integer/Decimal/Rational; -1, 0, 1.
  static int numeric_compare(const Value& a, const Value& b);

  // Result-set equality: NULL equals NULL, numerics compare exactly across
  // kinds, text compares byte-for-byte.
  static bool equals(const Value& a, const Value& b);

  // NULL -> "NULL"; decimals keep their declared scale; non-terminating
  // rationals render as num/den.
  std::string display() const;

 private:
  Kind kind_;
  long long int_ = 0;       // Integer
  long long unscaled_ = 0;  // Decimal
  unsigned scale_ = 0;      // Decimal
  std::string text_;        // Text
  Int num_, den_;           // Rational
};

}  // namespace opeadb
