#pragma once

#include <map>
#include <string>
#include <vector>

#include "opeadb/manifest.hpp"
#include "opeadb/sql/ast.hpp"

namespace opeadb::sql {

struct Session {
  std::string principal;
};

struct ResolvedColumn {
  const TableSpec* table = nullptr;
  const ColumnSpec* column = nullptr;
};

// Semantic facts the translator reuses, keyed by AST node address (the tree
// is immutable once parsed).
struct Resolution {
  std::map<const ColumnRef*, ResolvedColumn> columns;
  std::map<const Select*, std::vector<const TableSpec*>> scopes;
  // Scalar subqueries: the ciphertext column spec they yield, or nullptr when
  // the result is a plaintext COUNT.
  std::map<const Select*, ResolvedColumn> subquery_out;
};

// Resolves identifiers against the manifest, enforces the session's table
// allowlist, and rejects constructs the ciphertext executor cannot carry
// (arithmetic, DISTINCT, unknown functions, cross-domain comparisons,
// order operations on unordered encodings, SUM-vs-SUM in HAVING, correlated
// subqueries, ...).
Resolution validate_statement(const Statement& stmt, const SchemaManifest& manifest,
                              const Session& session);

// Column capability probes shared with the translator.
bool rule_orderable(const ColumnSpec& col);
bool rule_matchable(const ColumnSpec& col);  // LIKE support
bool rule_summable(const ColumnSpec& col);

}  // namespace opeadb::sql
