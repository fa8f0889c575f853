#include "opeadb/codec.hpp"

#include <gtest/gtest.h>

#include "opeadb/errors.hpp"

namespace opeadb {
namespace {

ColumnSpec int_col(long long min, long long max) {
  ColumnSpec s;
  s.name = "N";
  s.sem = SemType::Integer;
  s.min = min;
  s.max = max;
  s.rule = EncodingRule::Numeric;
  s.domain = "d";
  return s;
}

ColumnSpec str_col(SemType sem, unsigned width, EncodingRule rule) {
  ColumnSpec s;
  s.name = "S";
  s.sem = sem;
  s.width = width;
  s.rule = rule;
  s.domain = "d";
  return s;
}

// 128 unit-width partitions with sigma 100: covers every ASCII code, so the
// string fixtures below are hand-checkable. U[t] = 102t - 1, so the largest
// cipher 13055 pins the fixed-rule pad width at 5.
DomainKey char_key() {
  return DomainKey::with_parts(std::vector<std::uint32_t>(128, 1), 100, 128, 2, "chars");
}

TEST(Encode, NumericOffsets) {
  EXPECT_EQ(encode_value(int_col(1, 100), Value::integer(5)).code, 5u);
  EXPECT_EQ(encode_value(int_col(-10, 10), Value::integer(-10)).code, 1u);
  EXPECT_EQ(encode_value(int_col(-10, 10), Value::integer(0)).code, 11u);
  EXPECT_EQ(encode_value(int_col(0, 50), Value::integer(0)).code, 1u);
}

TEST(Encode, NumericRangeChecks) {
  try {
    encode_value(int_col(1, 100), Value::integer(101));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainRange);
  }
  EXPECT_THROW(encode_value(int_col(1, 100), Value::integer(0)), Error);
  EXPECT_THROW(encode_value(int_col(1, 100), Value::text("x")), Error);
}

TEST(Encode, DecimalScaling) {
  ColumnSpec s = int_col(-99999, 99999);
  s.sem = SemType::Decimal;
  s.scale = 2;
  // -999.99 maps to code 1.
  EXPECT_EQ(encode_value(s, Value::decimal(-99999, 2)).code, 1u);
  // Integers scale up: 5 -> unscaled 500.
  EXPECT_EQ(encode_value(s, Value::integer(5)).code, std::uint64_t(500 + 99999 + 1));
  // 2.5 -> unscaled 250.
  EXPECT_EQ(encode_value(s, Value::decimal(25, 1)).code, std::uint64_t(250 + 99999 + 1));
  // More fractional digits than the column carries: rejected, not rounded.
  EXPECT_THROW(encode_value(s, Value::decimal(12345, 3)), Error);
  Value back = decode_value(s, encode_value(s, Value::decimal(-1250, 2)));
  EXPECT_EQ(back.kind(), Value::Kind::Decimal);
  EXPECT_EQ(back.display(), "-12.50");
}

TEST(Encode, PackedRule) {
  ColumnSpec s = str_col(SemType::Varchar, 2, EncodingRule::Packed);
  EXPECT_EQ(encode_value(s, Value::text("ab")).code, 97098u);
  EXPECT_EQ(encode_value(s, Value::text("a")).code, 97u);
  EncodedCell cell;
  cell.single = true;
  cell.code = 97098;
  EXPECT_EQ(decode_value(s, cell).as_text(), "ab");
  // Equal-length packed codes order like the strings.
  EXPECT_LT(encode_value(s, Value::text("ab")).code, encode_value(s, Value::text("ac")).code);
  EXPECT_LT(encode_value(s, Value::text("az")).code, encode_value(s, Value::text("ba")).code);
  EXPECT_THROW(encode_value(s, Value::text("")), Error);
  EXPECT_THROW(encode_value(s, Value::text("abc")), Error);
}

TEST(Encode, FuzzyRule) {
  ColumnSpec s = str_col(SemType::Varchar, 8, EncodingRule::Fuzzy);
  EncodedCell c = encode_value(s, Value::text("ab "));
  ASSERT_EQ(c.codes.size(), 2u);
  EXPECT_EQ(c.codes[0], 97u);
  EXPECT_EQ(c.codes[1], 98u);
  EXPECT_EQ(c.trailing_blanks, 1u);
  EXPECT_EQ(decode_value(s, c).as_text(), "ab ");

  // Char columns pad to width first; the pad shows up as the blank count.
  ColumnSpec c3 = str_col(SemType::Char, 3, EncodingRule::Fuzzy);
  EncodedCell p = encode_value(c3, Value::text("ab"));
  EXPECT_EQ(p.codes.size(), 2u);
  EXPECT_EQ(p.trailing_blanks, 1u);
  EXPECT_EQ(decode_value(c3, p).as_text(), "ab ");

  // Interior blanks are real codes.
  EncodedCell i = encode_value(s, Value::text("a b"));
  ASSERT_EQ(i.codes.size(), 3u);
  EXPECT_EQ(i.codes[1], 32u);
  EXPECT_EQ(i.trailing_blanks, 0u);

  EXPECT_THROW(encode_value(s, Value::text("")), Error);
  EXPECT_THROW(encode_value(s, Value::text("caf\xc3\xa9")), Error);  // non-ASCII
}

TEST(Encode, FixedRuleStrings) {
  ColumnSpec s = str_col(SemType::Char, 3, EncodingRule::Fixed);
  EncodedCell c = encode_value(s, Value::text("ab"));
  ASSERT_EQ(c.codes.size(), 3u);  // padded to the declared width, blanks kept
  EXPECT_EQ(c.codes[2], 32u);
  EXPECT_EQ(decode_value(s, c).as_text(), "ab ");
}

TEST(Encode, FixedRuleSegmentsLongIntegers) {
  ColumnSpec s = int_col(1, 99999999);
  s.rule = EncodingRule::Fixed;
  EncodedCell c = encode_value(s, Value::integer(42));
  ASSERT_EQ(c.codes.size(), 8u);  // zero-padded to the range's digit count
  EXPECT_EQ(c.codes[0], std::uint32_t('0'));
  EXPECT_EQ(c.codes[6], std::uint32_t('4'));
  EXPECT_EQ(c.codes[7], std::uint32_t('2'));
  EXPECT_EQ(decode_value(s, c).as_integer(), 42);
}

TEST(SpecValidation, RejectsIncoherentSpecs) {
  ColumnSpec packed_wide = str_col(SemType::Varchar, 3, EncodingRule::Packed);
  EXPECT_THROW(validate_column_spec(packed_wide), Error);
  ColumnSpec ext_on_fixed = int_col(1, 10);
  ext_on_fixed.rule = EncodingRule::Fixed;
  ext_on_fixed.needs_extension = true;
  EXPECT_THROW(validate_column_spec(ext_on_fixed), Error);
  ColumnSpec char_numeric = str_col(SemType::Char, 2, EncodingRule::Numeric);
  EXPECT_THROW(validate_column_spec(char_numeric), Error);
  ColumnSpec ok = str_col(SemType::Varchar, 2, EncodingRule::Packed);
  EXPECT_NO_THROW(validate_column_spec(ok));
}

TEST(DomainCap, PerRule) {
  EXPECT_EQ(domain_plain_cap(int_col(-10, 10)), 21u);
  EXPECT_EQ(domain_plain_cap(str_col(SemType::Varchar, 2, EncodingRule::Packed)), 126126u);
  EXPECT_EQ(domain_plain_cap(str_col(SemType::Varchar, 9, EncodingRule::Fuzzy)), 126u);
}

TEST(Cipher, NumberCellsAndNull) {
  DomainKey k = char_key();
  ColumnSpec s = int_col(1, 100);
  SplitRng rng(4);
  CipherCell c = encrypt_cell(k, s, Value::integer(5), rng);
  EXPECT_EQ(c.kind, CipherCell::Kind::Number);
  EXPECT_GE(c.num, Int(102 * 5 - 2));
  EXPECT_LE(c.num, Int(102 * 5 - 1));
  EXPECT_EQ(c.ext, 0);
  EXPECT_EQ(decrypt_cell(k, s, c).as_integer(), 5);

  CipherCell null_cell = encrypt_cell(k, s, Value::null(), rng);
  EXPECT_TRUE(null_cell.is_null());
  EXPECT_EQ(null_cell.num, 0);
  EXPECT_TRUE(decrypt_cell(k, s, null_cell).is_null());

  s.nullable = false;
  EXPECT_THROW(encrypt_cell(k, s, Value::null(), rng), Error);
}

TEST(Cipher, ExtensionPair) {
  DomainKey k = char_key();
  ColumnSpec s = int_col(1, 100);
  s.needs_extension = true;
  SplitRng rng(4);
  CipherCell c = encrypt_cell(k, s, Value::integer(5), rng);
  EXPECT_GE(c.ext, Int(98 * 5 + 1));
  EXPECT_LE(c.ext, Int(98 * 5 + 2));
}

TEST(Cipher, FuzzyCellLayout) {
  DomainKey k = char_key();
  ColumnSpec s = str_col(SemType::Varchar, 8, EncodingRule::Fuzzy);
  SplitRng rng(4);
  CipherCell c = encrypt_cell(k, s, Value::text("ab"), rng);
  EXPECT_EQ(c.kind, CipherCell::Kind::Text);
  std::vector<Int> parts = split_encoded(c.text, ',');
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_TRUE(parts[0] == 9892 || parts[0] == 9893);  // E(97)
  EXPECT_TRUE(parts[1] == 9994 || parts[1] == 9995);  // E(98)
  EXPECT_EQ(parts[2], 0);                             // pi
  EXPECT_EQ(decrypt_cell(k, s, c).as_text(), "ab");

  CipherCell null_cell = encrypt_cell(k, s, Value::null(), rng);
  EXPECT_EQ(null_cell.text, "0");
  EXPECT_TRUE(decrypt_cell(k, s, null_cell).is_null());
}

TEST(Cipher, FixedCellLayout) {
  DomainKey k = char_key();
  EXPECT_EQ(fixed_cipher_digits(k), 5u);  // U[128] = 13055
  ColumnSpec s = str_col(SemType::Varchar, 4, EncodingRule::Fixed);
  SplitRng rng(4);
  CipherCell c = encrypt_cell(k, s, Value::text("ab"), rng);
  ASSERT_EQ(c.text.size(), 10u);
  std::vector<Int> segs = split_fixed(c.text, 5);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_TRUE(segs[0] == 9892 || segs[0] == 9893);
  EXPECT_TRUE(segs[1] == 9994 || segs[1] == 9995);
  EXPECT_EQ(c.text[0], '0');  // 4-digit cipher zero-padded to 5
  EXPECT_EQ(decrypt_cell(k, s, c).as_text(), "ab");
}

TEST(Cipher, RoundTripAllRulesRandomized) {
  DomainKey k = char_key();
  SplitRng rng(77);
  ColumnSpec fz = str_col(SemType::Varchar, 6, EncodingRule::Fuzzy);
  ColumnSpec fx = str_col(SemType::Char, 5, EncodingRule::Fixed);
  ColumnSpec pk = str_col(SemType::Varchar, 2, EncodingRule::Packed);
  DomainKey pk_key = DomainKey::with_parts(std::vector<std::uint32_t>(126126, 1),
                                           9u * 126126, 126126, 2, "packed");
  for (int i = 0; i < 200; ++i) {
    std::string s;
    std::size_t len = 1 + rng.below(5);
    for (std::size_t j = 0; j < len; ++j) s.push_back(char(32 + rng.below(95)));
    if (s.find_last_not_of(' ') == std::string::npos) s[0] = 'a';
    Value v = Value::text(s);
    EXPECT_TRUE(Value::equals(decrypt_cell(k, fz, encrypt_cell(k, fz, v, rng)), v));
    std::string padded = s;
    padded.resize(5, ' ');
    EXPECT_TRUE(Value::equals(decrypt_cell(k, fx, encrypt_cell(k, fx, v, rng)),
                              Value::text(padded)));
    if (s.size() <= 2) {
      EXPECT_TRUE(Value::equals(decrypt_cell(pk_key, pk, encrypt_cell(pk_key, pk, v, rng)), v));
    }
  }
}

TEST(SplitEncoded, Fixtures) {
  auto parts = split_encoded("9893,9994,0", ',');
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0], 9893);
  EXPECT_EQ(parts[1], 9994);
  EXPECT_EQ(parts[2], 0);

  parts = split_encoded("0", ',');
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], 0);

  parts = split_encoded("101,1", ',');
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], 101);
  EXPECT_EQ(parts[1], 1);

  EXPECT_THROW(split_encoded("", ','), Error);
  EXPECT_THROW(split_encoded("1,,2", ','), Error);
  EXPECT_THROW(split_encoded("1,x", ','), Error);
}

TEST(SplitFixed, Fixtures) {
  auto segs = split_fixed("0989209995", 5);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0], 9892);
  EXPECT_EQ(segs[1], 9995);
  EXPECT_THROW(split_fixed("123", 2), Error);
  EXPECT_THROW(split_fixed("", 5), Error);
}

}  // namespace
}  // namespace opeadb
