#include "opeadb/value.hpp"

#include <boost/multiprecision/integer.hpp>

#include "opeadb/errors.hpp"

namespace opeadb {

Value Value::integer(long long v) {
  Value out;
  out.kind_ = Kind::Integer;
  out.int_ = v;
  return out;
}

Value Value::decimal(long long unscaled, unsigned scale) {
  Value out;
  out.kind_ = Kind::Decimal;
  out.unscaled_ = unscaled;
  out.scale_ = scale;
  return out;
}

Value Value::text(std::string v) {
  Value out;
  out.kind_ = Kind::Text;
  out.text_ = std::move(v);
  return out;
}

Value Value::rational(Int num, Int den) {
  if (den == 0) fail(ErrorKind::Internal, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Int g = boost::multiprecision::gcd(num < 0 ? Int(-num) : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Value out;
  out.kind_ = Kind::Rational;
  out.num_ = std::move(num);
  out.den_ = std::move(den);
  return out;
}

long long Value::as_integer() const {
  if (kind_ != Kind::Integer) fail(ErrorKind::Internal, "value is not an integer");
  return int_;
}

const std::string& Value::as_text() const {
  if (kind_ != Kind::Text) fail(ErrorKind::Internal, "value is not text");
  return text_;
}

namespace {

// Any numeric kind as an exact ratio.
void as_ratio(const Value& v, Int& num, Int& den) {
  switch (v.kind()) {
    case Value::Kind::Integer:
      num = v.as_integer();
      den = 1;
      return;
    case Value::Kind::Decimal:
      num = v.unscaled();
      den = pow10_int(v.scale());
      return;
    case Value::Kind::Rational:
      num = v.num();
      den = v.den();
      return;
    default:
      fail(ErrorKind::Internal, "value is not numeric");
  }
}

}  // namespace

int Value::numeric_compare(const Value& a, const Value& b) {
  Int an, ad, bn, bd;
  as_ratio(a, an, ad);
  as_ratio(b, bn, bd);
  Int left = an * bd, right = bn * ad;
  if (left < right) return -1;
  if (left > right) return 1;
  return 0;
}

bool Value::equals(const Value& a, const Value& b) {
  if (a.kind() == Kind::Null || b.kind() == Kind::Null)
    return a.kind() == Kind::Null && b.kind() == Kind::Null;
  if (a.kind() == Kind::Text || b.kind() == Kind::Text)
    return a.kind() == Kind::Text && b.kind() == Kind::Text && a.text_ == b.text_;
  return numeric_compare(a, b) == 0;
}

std::string Value::display() const {
  switch (kind_) {
    case Kind::Null:
      return "NULL";
    case Kind::Integer:
      return std::to_string(int_);
    case Kind::Decimal: {
      if (scale_ == 0) return std::to_string(unscaled_);
      bool neg = unscaled_ < 0;
      // Avoid overflow on LLONG_MIN by widening before abs.
      Int mag = unscaled_;
      if (neg) mag = -mag;
      std::string digits = to_decimal(mag);
      if (digits.size() <= scale_) digits.insert(0, scale_ + 1 - digits.size(), '0');
      digits.insert(digits.size() - scale_, ".");
      return neg ? "-" + digits : digits;
    }
    case Kind::Text:
      return text_;
    case Kind::Rational: {
      // Terminates iff the reduced denominator is 2^a * 5^b.
      Int den = den_;
      unsigned twos = 0, fives = 0;
      while (den % 2 == 0) {
        den /= 2;
        ++twos;
      }
      while (den % 5 == 0) {
        den /= 5;
        ++fives;
      }
      if (den != 1) return to_decimal(num_) + "/" + to_decimal(den_);
      unsigned scale = std::max(twos, fives);
      Int mag = num_ < 0 ? Int(-num_) : num_;
      mag = mag * pow10_int(scale) / den_;
      std::string digits = to_decimal(mag);
      if (scale > 0) {
        if (digits.size() <= scale) digits.insert(0, scale + 1 - digits.size(), '0');
        digits.insert(digits.size() - scale, ".");
      }
      return num_ < 0 ? "-" + digits : digits;
    }
  }
  return "NULL";
}

}  // namespace opeadb
