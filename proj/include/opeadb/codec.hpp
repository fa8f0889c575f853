#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "opeadb/bignum.hpp"
#include "opeadb/opea.hpp"
#include "opeadb/rng.hpp"
#include "opeadb/value.hpp"

namespace opeadb {

enum class SemType { Integer, Decimal, Char, Varchar };
enum class EncodingRule {
  Numeric,  // shift-scale into positive integers, one cipher per cell
  Fuzzy,    // per-character ciphers + trailing-blank count, comma-delimited
  Packed,   // 3-digit character groups concatenated into one integer
  Fixed,    // per-character ciphers zero-padded to a fixed width, concatenated
};

struct ColumnSpec {
  std::string name;
  std::string anon_name;  // server-visible identifier; filled by the manifest builder
  SemType sem = SemType::Integer;
  // Integer: value bounds. Decimal: bounds on the unscaled integer. The codec
  // shifts by (1 - min) so every code is >= 1 and 0 stays free for NULL.
  long long min = 1;
  long long max = 1;
  unsigned scale = 0;  // Decimal only
  unsigned width = 0;  // Char/Varchar only
  EncodingRule rule = EncodingRule::Numeric;
  std::string domain;  // comparison-domain label; shared by join-compatible columns
  bool needs_extension = false;  // carry a mirrored cipher for exact sums
  bool nullable = true;
};

// Structural coherence of a single column spec. Notably: Packed is capped at
// width 2 (wider packings outgrow the materializable partition table), Fixed
// on Integer/Decimal is the long-integer segmentation rule, and extension
// ciphers only make sense under the Numeric rule.
void validate_column_spec(const ColumnSpec& spec);

// Largest plain code this column can produce; the column's domain key needs
// t >= this.
std::uint64_t domain_plain_cap(const ColumnSpec& spec);

// Key-independent intermediate form: the positive integer code(s) a value
// maps to before encryption.
struct EncodedCell {
  bool single = true;
  std::uint64_t code = 0;              // Numeric / Packed
  std::vector<std::uint32_t> codes;    // Fuzzy / Fixed, one per character
  std::uint32_t trailing_blanks = 0;   // Fuzzy only
};

EncodedCell encode_value(const ColumnSpec& spec, const Value& v);
Value decode_value(const ColumnSpec& spec, const EncodedCell& cell);

// One stored cell. Number cells hold a single cipher (plus the mirrored
// extension cipher when the column carries one); Text cells hold the fuzzy or
// fixed rendering. NULL is the integer 0 / the text "0".
struct CipherCell {
  enum class Kind { Number, Text };
  Kind kind = Kind::Number;
  Int num = 0;
  Int ext = 0;
  std::string text;

  bool is_null() const {
    return kind == Kind::Number ? num == 0 : text == "0";
  }
};

// Zero-pad width for one cipher inside a Fixed cell: the digit count of the
// domain's largest ciphertext. Stored in the manifest so the executor can
// split cells without key material.
unsigned fixed_cipher_digits(const DomainKey& key);

CipherCell encrypt_cell(const DomainKey& key, const ColumnSpec& spec, const Value& v,
                        SplitRng& rng);
Value decrypt_cell(const DomainKey& key, const ColumnSpec& spec, const CipherCell& cell);

// Fuzzy cell layout is "E(c1),E(c2),...,pi"; NULL is "0". Returns every
// component; the caller peels the trailing blank count off the end.
std::vector<Int> split_encoded(std::string_view text, char delim);

// Fixed cell layout is k ciphers of exactly `digits` characters each.
std::vector<Int> split_fixed(std::string_view text, unsigned digits);

}  // namespace opeadb
