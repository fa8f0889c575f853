#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opeadb/bignum.hpp"
#include "opeadb/codec.hpp"
#include "opeadb/sql/ast.hpp"

namespace opeadb {

// ---------------------------------------------------------------------------
// CipherPlan: the server-side program a statement translates into. Everything
// in here is safe to ship to the key-free store: anonymized identifiers,
// ciphertext integers, equality thresholds, and boundary constants. No seed,
// no width sequence, no sigma, no plaintext names.
// ---------------------------------------------------------------------------

// One column of the relation a step produces.
struct PlanColumn {
  enum class Kind {
    Cipher,      // encrypted cell (number or per-character text)
    PlainCount,  // COUNT result / group size; plaintext integer
    SumPair,     // (sum of standard ciphers, sum of mirrored ciphers)
    MatchFlag,   // LIKE outcome per row: 0 no, 1 yes, 2 unknown subject
    RowId,       // executor-internal row identity for UPDATE/DELETE scopes
  };
  enum class Layout {
    Number,     // single integer cell
    FuzzyText,  // "E(c1),...,pi" comma text
    FixedText,  // fixed-width cipher segments concatenated
  };
  std::string name;  // anonymized or synthetic (_Group/_Match/... suffixes)
  std::string owner;  // anonymized table that contributed it; empty if synthetic
  Kind kind = Kind::Cipher;
  Layout layout = Layout::Number;
  bool has_extension = false;
  unsigned fixed_digits = 0;  // FixedText: zero-pad width of one segment
};

// Operand of a predicate leaf.
struct PlanOperand {
  enum class Kind { None, Column, Literal, Var, PlainInt };
  Kind kind = Kind::None;
  int column = -1;        // index into the relation under the predicate
  CipherCell literal;     // encrypted constant, shaped like a stored cell
  std::string var;        // scalar temp, e.g. "@inter_var2"
  long long plain = 0;    // plaintext integer (COUNT comparisons only)
};

// Boundary constants for one group size in a sum comparison. `Above`/`Below`
// record constants that no group of that size can reach (the comparison is
// decided without probing).
struct SumBound {
  enum class Tag { Normal, Above, Below };  // Above: the sum always exceeds it
  Tag tag = Tag::Normal;
  Int lower = 0;      // L[value]
  Int upper_ext = 0;  // U'[value]
};

// Predicate tree over UDF calls. Evaluation is three-valued: a comparison
// whose operand cell is the NULL sentinel yields Unknown, except the explicit
// IsNull / NotNull forms, which test the sentinel itself.
struct PredNode {
  enum class Kind {
    And,
    Or,
    Cmp,         // EqualityCom(x, a, b) <op> 0; per-character for text cells
    SumCmp,      // SumEqualityCom(pair, L[v_k], U'[v_k]) <op> 0
    CountCmp,    // plaintext count comparison
    MatchFlag,   // match-flag column is 1 (negated: 0); 2 stays Unknown
    IsNull,      // EqualityCom(x, a, 0) = 0 without the null guard
    NotNull,     // EqualityCom(x, a, 0) > 0
    ExistsTemp,  // temp table is non-empty
    ConstBool,
  };
  Kind kind = Kind::ConstBool;

  std::vector<PredNode> kids;  // And / Or

  PlanOperand a;  // Cmp lhs; IsNull/NotNull subject; CountCmp lhs
  PlanOperand b;  // Cmp rhs; CountCmp rhs
  sql::CmpOp op = sql::CmpOp::Eq;
  Int x = 0;  // equality threshold for Cmp and the atom comparisons behind it

  int pair_col = -1;   // SumCmp: SumPair column
  int count_col = -1;  // SumCmp: non-NULL group size column (for by-size bounds)
  std::vector<SumBound> bounds_by_size;  // index k-1 = group size k; size 1 = fixed

  int flag_col = -1;     // MatchFlag
  bool negated = false;  // MatchFlag / ExistsTemp

  std::string temp;  // ExistsTemp

  bool value = false;  // ConstBool

  // Cmp over text: how to split the operands into per-character ciphers when
  // neither side is a relation column (variables and literal cells carry no
  // layout of their own).
  PlanColumn::Layout cmp_layout = PlanColumn::Layout::Number;
  unsigned cmp_digits = 0;
};

// ---------------------------------------------------------------------------
// LIKE match programs
// ---------------------------------------------------------------------------

struct MatchAtom {
  enum class Kind { Literal, AnyOne, Class };
  Kind kind = Kind::Literal;
  std::vector<Int> ciphers;   // Literal: one; Class: the member set
  bool class_negated = false;
  // Whether the atom accepts one of the trailing blanks summarized by the
  // cell's blank count (precomputed; the store cannot test blankness itself).
  bool matches_blank = false;
};

struct MatchSegment {
  std::vector<MatchAtom> atoms;
};

// Pattern split on unescaped '%': an optional anchored head, floating middle
// segments, and an optional anchored tail. Each atom consumes one character.
struct MatchProgram {
  bool anchored_start = false;
  bool anchored_end = false;
  std::vector<MatchSegment> segments;
  std::size_t min_length = 0;  // total atom count
  PlanColumn::Layout subject = PlanColumn::Layout::FuzzyText;
  unsigned fixed_digits = 0;
  Int x = 0;
};

// ---------------------------------------------------------------------------
// Steps
// ---------------------------------------------------------------------------

struct AggSpec {
  enum class Kind { Min, Max, Count, SumPair, First };
  Kind kind = Kind::Count;
  int col = -1;  // -1 with Count = COUNT(*)
  std::string out_name;
};

struct SortKey {
  int col = -1;
  bool desc = false;
  Int x = 0;  // adjacent-duplicate detection before the next key applies
};

// Value source for one written column (INSERT ... SELECT / UPDATE ... FROM).
struct WriteSource {
  enum class Kind { Cell, ScopeColumn };
  Kind kind = Kind::Cell;
  CipherCell cell;
  int column = -1;  // index into the scope relation
};

struct UpdateSet {
  std::string column;  // anonymized target column
  WriteSource source;
};

struct Step {
  enum class Kind {
    Scan,           // current := stored table
    ScanTemp,       // current := temp contents
    Join,           // current := current JOIN table ON pred
    Filter,         // keep rows whose predicate is True
    MatchLike,      // append a match-flag column
    Canonicalize,   // append a representative column per group key
    CreateTemp,     // materialize current into a named temp
    DropTemp,
    AssignVar,      // current (single column) -> scalar temp variable
    GroupAggregate, // group on key columns, compute aggregate columns
    EmitSumPair,    // whole-relation sum pair of one column
    Sort,
    Project,
    SetOp,          // union / intersect / except / product with a named source
    InsertRows,
    UpdateRows,
    DeleteRows,
  };
  enum class FilterRole { Where, Having, Scope };
  enum class SetKind { Union, Intersect, Except, Product };

  Kind kind = Kind::Scan;

  std::string table;  // Scan source; Insert/Update/Delete target
  // Scan: append the table's row identities (a mutation scope is forming).
  // Join / SetOp Product: the right-hand table carries them instead.
  bool with_rowid = false;

  sql::JoinType join = sql::JoinType::Inner;  // Join
  std::string right;                          // Join / SetOp: table or #temp
  bool right_is_temp = false;

  PredNode pred;  // Join ON / Filter
  FilterRole role = FilterRole::Where;

  int subject_col = -1;  // MatchLike; the flag column's name sits in `layout`
  MatchProgram program;  // MatchLike

  std::vector<int> keys;  // Canonicalize sources / GroupAggregate group columns
  std::vector<Int> key_xs;  // Canonicalize: per-key equality threshold

  std::string temp;  // CreateTemp / ScanTemp / DropTemp
  std::string var;   // AssignVar
  int source_col = -1;
  bool var_plain = false;  // AssignVar of a plaintext count

  std::vector<AggSpec> aggs;  // GroupAggregate

  int column = -1;  // EmitSumPair

  std::vector<SortKey> sort_keys;

  std::vector<int> cols;  // Project

  SetKind set_kind = SetKind::Product;  // SetOp
  std::vector<Int> set_xs;              // per-column thresholds for row equality

  std::vector<std::string> columns;               // InsertRows target columns
  std::vector<std::vector<CipherCell>> rows;      // InsertRows VALUES form
  bool from_current = false;                      // InsertRows ... SELECT form
  std::vector<WriteSource> sources;               // per target column
  std::vector<UpdateSet> sets;                    // UpdateRows
  int rowid_col = -1;                             // UpdateRows / DeleteRows scope

  // Relation produced by this step (empty for mutations and DropTemp).
  std::vector<PlanColumn> layout;
};

struct CipherPlan {
  enum class Outcome { Rows, Affected };
  Outcome outcome = Outcome::Rows;
  std::vector<Step> steps;
  std::vector<Int> thresholds;      // distinct equality thresholds in the plan
  std::vector<PlanColumn> output;   // final relation layout (Rows outcome)

  // Deterministic single-string serialization; this is the surface the
  // key-leak scan runs over, so it must include every constant in the plan.
  std::string to_text() const;
};

const char* plan_column_kind_name(PlanColumn::Kind k);
const char* cmp_op_text(sql::CmpOp op);

}  // namespace opeadb
