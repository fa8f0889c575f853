#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "opeadb/codec.hpp"
#include "opeadb/opea.hpp"

namespace opeadb {

// One comparison domain: every pair of columns that may meet in a predicate
// shares a domain, hence a key, hence comparable ciphertexts.
struct DomainInfo {
  std::string id;     // owner-side identifier
  std::string label;  // key-derivation label (never the plaintext id)
  DomainConfig config;
};

struct TableSpec {
  std::string name;
  std::string anon_name;
  std::vector<ColumnSpec> columns;

  const ColumnSpec* find_column(std::string_view column) const;
};

// Owner-private schema ledger: plaintext names, their anonymized twins, the
// per-domain key sizing, and the per-principal table allowlists. The server
// never sees this file; it receives only the anonymized projection.
struct SchemaManifest {
  std::vector<TableSpec> tables;
  std::map<std::string, DomainInfo> domains;
  // principal -> readable/writable tables; the single entry "*" grants all.
  std::map<std::string, std::vector<std::string>> principals;

  const TableSpec* find_table(std::string_view name) const;
  const DomainInfo& domain_of(const ColumnSpec& col) const;
  bool allows(const std::string& principal, const std::string& table) const;

  // Structural checks: anonymization injective, every column's domain is
  // declared, every spec is internally coherent, and each domain's partition
  // count covers the widest column mapped onto it.
  void validate() const;

  std::string to_json() const;
  static SchemaManifest from_json(const std::string& text);
  void save(const std::string& path) const;
  static SchemaManifest load(const std::string& path);
};

// Deterministic keyed pseudonym: letter prefix plus 16 hex digits, so it is
// a valid SQL identifier. The key comes from the owner's keyring.
std::string anonymize_identifier(const std::vector<std::uint8_t>& name_key,
                                 std::string_view name);

// Upper-cases ASCII; SQL identifiers resolve case-insensitively.
std::string normalize_ident(std::string_view name);

}  // namespace opeadb
