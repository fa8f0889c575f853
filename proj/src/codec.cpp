#include "opeadb/codec.hpp"

#include <algorithm>

#include "opeadb/errors.hpp"

namespace opeadb {

namespace {

constexpr std::uint32_t kMinCode = 32;   // lowest encodable character (space)
constexpr std::uint32_t kMaxCode = 126;  // highest encodable character (~)

bool is_string_type(SemType s) { return s == SemType::Char || s == SemType::Varchar; }

// Value must already satisfy the column's width constraints; Char values are
// padded to the declared width before this runs.
void check_chars(const std::string& s) {
  for (unsigned char c : s) {
    if (c < kMinCode || c > kMaxCode)
      fail(ErrorKind::Encoding,
           "character code " + std::to_string(int(c)) + " outside the encodable range");
  }
}

std::string prepared_string(const ColumnSpec& spec, const Value& v) {
  if (v.kind() != Value::Kind::Text)
    fail(ErrorKind::Encoding, "column " + spec.name + " takes character values");
  std::string s = v.as_text();
  if (s.size() > spec.width)
    fail(ErrorKind::DomainRange, "string longer than declared width of " + spec.name);
  if (spec.sem == SemType::Char) s.resize(spec.width, ' ');
  check_chars(s);
  return s;
}

// Numeric and Decimal share the shift-scale path; both land on the unscaled
// integer that the (1 - min) offset maps into positive codes.
long long unscaled_numeric(const ColumnSpec& spec, const Value& v) {
  if (v.kind() == Value::Kind::Integer) {
    Int scaled = Int(v.as_integer()) * pow10_int(spec.scale);
    if (scaled < spec.min || scaled > spec.max)
      fail(ErrorKind::DomainRange, "value outside declared bounds of " + spec.name);
    return scaled.convert_to<long long>();
  }
  if (v.kind() == Value::Kind::Decimal) {
    if (v.scale() > spec.scale)
      fail(ErrorKind::Encoding, "literal has more fractional digits than " + spec.name);
    Int scaled = Int(v.unscaled()) * pow10_int(spec.scale - v.scale());
    if (scaled < spec.min || scaled > spec.max)
      fail(ErrorKind::DomainRange, "value outside declared bounds of " + spec.name);
    return scaled.convert_to<long long>();
  }
  fail(ErrorKind::Encoding, "column " + spec.name + " takes numeric values");
}

std::uint64_t numeric_code(const ColumnSpec& spec, const Value& v) {
  long long u = unscaled_numeric(spec, v);
  return std::uint64_t(u - spec.min) + 1;
}

std::uint64_t pack_string(const std::string& s) {
  std::uint64_t packed = 0;
  for (unsigned char c : s) packed = packed * 1000 + c;
  return packed;
}

std::vector<std::uint32_t> digit_codes(const ColumnSpec& spec, const Value& v) {
  // Long-integer segmentation: the shifted code rendered as zero-padded
  // decimal text, one cipher per digit character. Zero padding keeps equal
  // lengths, so character-wise order equals numeric order.
  std::uint64_t code = numeric_code(spec, v);
  Int cap = Int(spec.max) - spec.min + 1;
  unsigned width = decimal_digits(cap);
  std::string digits = std::to_string(code);
  digits.insert(0, width - digits.size(), '0');
  std::vector<std::uint32_t> out;
  out.reserve(digits.size());
  for (char c : digits) out.push_back(std::uint32_t(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

void validate_column_spec(const ColumnSpec& spec) {
  if (spec.name.empty()) fail(ErrorKind::Encoding, "column spec without a name");
  if (spec.domain.empty())
    fail(ErrorKind::Encoding, "column " + spec.name + " has no comparison domain");
  if (is_string_type(spec.sem)) {
    if (spec.width == 0)
      fail(ErrorKind::Encoding, "character column " + spec.name + " needs a width");
    if (spec.scale != 0)
      fail(ErrorKind::Encoding, "character column " + spec.name + " cannot carry a scale");
    if (spec.rule == EncodingRule::Numeric)
      fail(ErrorKind::Encoding,
           "character column " + spec.name + " needs a string encoding rule");
    if (spec.rule == EncodingRule::Packed && spec.width > 2)
      fail(ErrorKind::Encoding,
           "packed rule on " + spec.name + " is limited to width 2; the packed code "
           "space outgrows the partition table beyond that");
    if (spec.needs_extension)
      fail(ErrorKind::Encoding,
           "character column " + spec.name + " cannot carry extension ciphers");
  } else {
    if (spec.min > spec.max)
      fail(ErrorKind::Encoding, "column " + spec.name + " has inverted bounds");
    if (spec.width != 0)
      fail(ErrorKind::Encoding, "numeric column " + spec.name + " cannot carry a width");
    if (spec.sem == SemType::Integer && spec.scale != 0)
      fail(ErrorKind::Encoding, "integer column " + spec.name + " cannot carry a scale");
    if (spec.scale > 9)
      fail(ErrorKind::Encoding, "decimal scale on " + spec.name + " is limited to 9");
    if (spec.rule == EncodingRule::Fuzzy || spec.rule == EncodingRule::Packed)
      fail(ErrorKind::Encoding,
           "numeric column " + spec.name + " takes the numeric or fixed rule");
    if (spec.rule == EncodingRule::Fixed && spec.needs_extension)
      fail(ErrorKind::Encoding,
           "segmented column " + spec.name + " cannot carry extension ciphers "
           "(the fixed rule drops additivity)");
    Int cap = Int(spec.max) - spec.min + 1;
    if (cap > Int(UINT64_MAX))
      fail(ErrorKind::Encoding, "value range of " + spec.name + " overflows the code space");
  }
}

std::uint64_t domain_plain_cap(const ColumnSpec& spec) {
  switch (spec.rule) {
    case EncodingRule::Numeric:
      return std::uint64_t(Int(Int(spec.max) - spec.min + 1).convert_to<std::uint64_t>());
    case EncodingRule::Packed: {
      std::uint64_t cap = 0;
      for (unsigned i = 0; i < spec.width; ++i) cap = cap * 1000 + kMaxCode;
      return cap;
    }
    case EncodingRule::Fuzzy:
    case EncodingRule::Fixed:
      return kMaxCode;
  }
  return 0;
}

EncodedCell encode_value(const ColumnSpec& spec, const Value& v) {
  if (v.is_null()) fail(ErrorKind::Internal, "NULL reaches encode_value");
  EncodedCell out;
  switch (spec.rule) {
    case EncodingRule::Numeric:
      out.single = true;
      out.code = numeric_code(spec, v);
      return out;
    case EncodingRule::Packed: {
      std::string s = prepared_string(spec, v);
      if (s.empty())
        fail(ErrorKind::Encoding, "empty string is not encodable (reserve NULL for absence)");
      out.single = true;
      out.code = pack_string(s);
      return out;
    }
    case EncodingRule::Fuzzy: {
      std::string s = prepared_string(spec, v);
      std::size_t end = s.find_last_not_of(' ');
      if (s.empty())
        fail(ErrorKind::Encoding, "empty string is not encodable (reserve NULL for absence)");
      std::size_t keep = end == std::string::npos ? 0 : end + 1;
      out.single = false;
      out.trailing_blanks = std::uint32_t(s.size() - keep);
      out.codes.reserve(keep);
      for (std::size_t i = 0; i < keep; ++i)
        out.codes.push_back(std::uint32_t(static_cast<unsigned char>(s[i])));
      return out;
    }
    case EncodingRule::Fixed: {
      out.single = false;
      if (is_string_type(spec.sem)) {
        std::string s = prepared_string(spec, v);
        if (s.empty())
          fail(ErrorKind::Encoding, "empty string is not encodable (reserve NULL for absence)");
        out.codes.reserve(s.size());
        for (unsigned char c : s) out.codes.push_back(c);
      } else {
        out.codes = digit_codes(spec, v);
      }
      return out;
    }
  }
  fail(ErrorKind::Internal, "unhandled encoding rule");
}

Value decode_value(const ColumnSpec& spec, const EncodedCell& cell) {
  auto from_unscaled = [&](Int unscaled) {
    if (unscaled < spec.min || unscaled > spec.max)
      fail(ErrorKind::Decode, "decoded value outside declared bounds of " + spec.name);
    long long u = unscaled.convert_to<long long>();
    if (spec.sem == SemType::Decimal) return Value::decimal(u, spec.scale);
    return Value::integer(u);
  };
  switch (spec.rule) {
    case EncodingRule::Numeric:
      return from_unscaled(Int(cell.code) - 1 + spec.min);
    case EncodingRule::Packed: {
      std::string s;
      std::uint64_t v = cell.code;
      while (v > 0) {
        std::uint32_t group = v % 1000;
        if (group < kMinCode || group > kMaxCode)
          fail(ErrorKind::Decode, "packed group outside the character range");
        s.insert(s.begin(), char(group));
        v /= 1000;
      }
      if (s.empty() || s.size() > spec.width)
        fail(ErrorKind::Decode, "packed code inconsistent with width of " + spec.name);
      return Value::text(s);
    }
    case EncodingRule::Fuzzy: {
      std::string s;
      s.reserve(cell.codes.size() + cell.trailing_blanks);
      for (std::uint32_t c : cell.codes) {
        if (c < kMinCode || c > kMaxCode)
          fail(ErrorKind::Decode, "character code outside the encodable range");
        s.push_back(char(c));
      }
      s.append(cell.trailing_blanks, ' ');
      if (s.size() > spec.width)
        fail(ErrorKind::Decode, "decoded string longer than width of " + spec.name);
      return Value::text(s);
    }
    case EncodingRule::Fixed: {
      if (is_string_type(spec.sem)) {
        std::string s;
        s.reserve(cell.codes.size());
        for (std::uint32_t c : cell.codes) {
          if (c < kMinCode || c > kMaxCode)
            fail(ErrorKind::Decode, "character code outside the encodable range");
          s.push_back(char(c));
        }
        if (s.empty() || s.size() > spec.width)
          fail(ErrorKind::Decode, "decoded string inconsistent with width of " + spec.name);
        return Value::text(s);
      }
      Int code = 0;
      for (std::uint32_t c : cell.codes) {
        if (c < '0' || c > '9') fail(ErrorKind::Decode, "segmented digit outside 0..9");
        code = code * 10 + (c - '0');
      }
      return from_unscaled(code - 1 + spec.min);
    }
  }
  fail(ErrorKind::Internal, "unhandled encoding rule");
}

unsigned fixed_cipher_digits(const DomainKey& key) {
  return decimal_digits(key.bounds(key.t()).upper);
}

CipherCell encrypt_cell(const DomainKey& key, const ColumnSpec& spec, const Value& v,
                        SplitRng& rng) {
  CipherCell cell;
  bool text_kind = spec.rule == EncodingRule::Fuzzy || spec.rule == EncodingRule::Fixed;
  cell.kind = text_kind ? CipherCell::Kind::Text : CipherCell::Kind::Number;
  if (v.is_null()) {
    if (!spec.nullable)
      fail(ErrorKind::DomainRange, "NULL into non-nullable column " + spec.name);
    if (text_kind) cell.text = "0";
    return cell;
  }
  EncodedCell enc = encode_value(spec, v);
  switch (spec.rule) {
    case EncodingRule::Numeric:
    case EncodingRule::Packed:
      cell.num = key.encrypt(enc.code, rng);
      if (spec.needs_extension) cell.ext = key.encrypt_ext(enc.code, rng);
      return cell;
    case EncodingRule::Fuzzy: {
      std::string out;
      for (std::uint32_t c : enc.codes) {
        out += to_decimal(key.encrypt(c, rng));
        out += ',';
      }
      out += std::to_string(enc.trailing_blanks);
      cell.text = out;
      return cell;
    }
    case EncodingRule::Fixed: {
      unsigned digits = fixed_cipher_digits(key);
      std::string out;
      out.reserve(std::size_t(digits) * enc.codes.size());
      for (std::uint32_t c : enc.codes) {
        std::string one = to_decimal(key.encrypt(c, rng));
        if (one.size() > digits)
          fail(ErrorKind::Internal, "fixed cipher wider than the declared digit count");
        out.append(digits - one.size(), '0');
        out += one;
      }
      cell.text = out;
      return cell;
    }
  }
  fail(ErrorKind::Internal, "unhandled encoding rule");
}

Value decrypt_cell(const DomainKey& key, const ColumnSpec& spec, const CipherCell& cell) {
  if (cell.is_null()) return Value::null();
  EncodedCell enc;
  switch (spec.rule) {
    case EncodingRule::Numeric:
    case EncodingRule::Packed:
      enc.single = true;
      enc.code = key.decrypt(cell.num);
      return decode_value(spec, enc);
    case EncodingRule::Fuzzy: {
      std::vector<Int> parts = split_encoded(cell.text, ',');
      enc.single = false;
      Int pi = parts.back();
      if (pi < 0 || pi > Int(spec.width))
        fail(ErrorKind::MalformedCell, "trailing-blank count out of range");
      enc.trailing_blanks = pi.convert_to<std::uint32_t>();
      parts.pop_back();
      enc.codes.reserve(parts.size());
      for (const Int& c : parts) enc.codes.push_back(std::uint32_t(key.decrypt(c)));
      return decode_value(spec, enc);
    }
    case EncodingRule::Fixed: {
      std::vector<Int> parts = split_fixed(cell.text, fixed_cipher_digits(key));
      enc.single = false;
      enc.codes.reserve(parts.size());
      for (const Int& c : parts) enc.codes.push_back(std::uint32_t(key.decrypt(c)));
      return decode_value(spec, enc);
    }
  }
  fail(ErrorKind::Internal, "unhandled encoding rule");
}

std::vector<Int> split_encoded(std::string_view text, char delim) {
  if (text.empty()) fail(ErrorKind::MalformedCell, "empty encoded cell");
  std::vector<Int> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(delim, start);
    std::string_view part =
        pos == std::string_view::npos ? text.substr(start) : text.substr(start, pos - start);
    if (part.empty()) fail(ErrorKind::MalformedCell, "empty component in encoded cell");
    out.push_back(parse_decimal(part));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<Int> split_fixed(std::string_view text, unsigned digits) {
  if (digits == 0) fail(ErrorKind::Internal, "fixed split with zero width");
  if (text.empty() || text.size() % digits != 0)
    fail(ErrorKind::MalformedCell, "fixed cell length is not a multiple of the cipher width");
  std::vector<Int> out;
  out.reserve(text.size() / digits);
  for (std::size_t i = 0; i < text.size(); i += digits)
    out.push_back(parse_decimal(text.substr(i, digits)));
  return out;
}

}  // namespace opeadb
