#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opeadb/keyring.hpp"
#include "opeadb/manifest.hpp"
#include "opeadb/plan.hpp"
#include "opeadb/sql/ast.hpp"
#include "opeadb/sql/validate.hpp"
#include "opeadb/value.hpp"

namespace opeadb {

// How the owner turns one result column back into plaintext. This side of the
// translation never leaves the owner process: it carries plaintext display
// names and decode recipes.
struct OutputField {
  enum class Kind {
    Cipher,      // decrypt_cell with `spec`
    PlainCount,  // plaintext integer, read as-is
    SumPair,     // exact-sum recovery over the pair column, then decode
    Avg,         // sum recovery divided by the count column, exact rational
    Const,       // literal select item echoed per row; no server column
  };
  Kind kind = Kind::Cipher;
  std::string display;  // plaintext header, e.g. "O_TOTALPRICE" or "SUM(L_QUANTITY)"
  ColumnSpec spec;      // decode recipe (Cipher / SumPair / Avg)
  std::string domain;   // key the decode needs
  int slot = -1;        // column index in the server result
  int count_slot = -1;  // SumPair / Avg: non-NULL row count of the group
  Value constant;       // Const
};

struct Translation {
  CipherPlan plan;
  std::vector<OutputField> fields;  // empty for mutations
  bool mutation = false;
};

// Lowers a validated statement onto the ciphertext schema: anonymized names,
// encrypted constants, equality thresholds drawn per comparison domain, and
// boundary constants for sum probes. The resolution must come from
// validate_statement over the same manifest.
Translation translate_statement(const sql::Statement& stmt, const sql::Resolution& res,
                                const SchemaManifest& manifest, const KeyRing& keys,
                                SplitRng& rng);

// Compiles one LIKE pattern against a column's encoding: literals and class
// members become ciphertexts, wildcards become structure. Exposed for tests.
MatchProgram compile_like_pattern(const std::string& pattern, std::optional<char> escape,
                                  const DomainKey& key, const Int& x,
                                  PlanColumn::Layout subject, unsigned fixed_digits,
                                  SplitRng& rng);

// Renders the plan as the equivalent UDF-dialect SQL script. Informational:
// the executor consumes the plan itself, never this text. Deterministic in the
// plan; an empty plan renders as an empty string.
std::string render_cipher_sql(const CipherPlan& plan);

}  // namespace opeadb
