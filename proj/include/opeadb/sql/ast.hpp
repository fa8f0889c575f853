#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opeadb/value.hpp"

namespace opeadb::sql {

// Comparison operators. The two "not" forms normalize at parse time:
// !> becomes <=, !< becomes >=, and != becomes <>.
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

enum class AggFunc { Min, Max, Count, Sum, Avg };

enum class JoinType { Inner, Left, Right, Full };

struct ColumnRef {
  std::string table;  // empty when unqualified
  std::string column;
};

struct Select;

// Scalar expression. The parser accepts a superset of what downstream stages
// carry (arithmetic, unknown function calls, DISTINCT) so the validator can
// name the unsupported feature instead of emitting a generic parse error.
struct Expr {
  enum class Kind { Column, Literal, Aggregate, Subquery, Arith, Call };
  Kind kind = Kind::Literal;

  ColumnRef col;          // Column
  Value lit;              // Literal
  bool is_default = false;

  AggFunc agg = AggFunc::Min;  // Aggregate
  std::unique_ptr<Expr> arg;   // aggregate argument; null means COUNT(*)
  bool distinct = false;

  std::unique_ptr<Select> sub;  // Subquery

  char arith_op = 0;  // Arith
  std::unique_ptr<Expr> lhs;
  std::unique_ptr<Expr> rhs;

  std::string call_name;  // Call
  std::vector<std::unique_ptr<Expr>> args;
};

using ExprPtr = std::unique_ptr<Expr>;

// Search/having condition tree. AND binds tighter than OR; NOT exists only in
// the fused forms (NOT BETWEEN, IS NOT NULL, NOT IN, NOT LIKE, NOT EXISTS).
struct Pred {
  enum class Kind { And, Or, Cmp, Between, IsNull, InList, Like, Exists };
  Kind kind = Kind::Cmp;

  std::unique_ptr<Pred> left;  // And / Or
  std::unique_ptr<Pred> right;

  ExprPtr a;  // Cmp: a op b; Between: a between lo and hi; IsNull / InList: a
  ExprPtr b;
  CmpOp op = CmpOp::Eq;

  ExprPtr lo;
  ExprPtr hi;

  std::vector<ExprPtr> items;  // InList

  ColumnRef like_col;  // Like
  std::string pattern;
  std::optional<char> escape;

  std::unique_ptr<Select> sub;  // Exists

  bool negated = false;
};

using PredPtr = std::unique_ptr<Pred>;

struct SelectItem {
  enum class Kind { Star, TableStar, Expr };
  Kind kind = Kind::Expr;
  std::string table;  // TableStar
  ExprPtr expr;
};

// One element of the FROM comma-list: a base table or a single two-table join.
struct TableRef {
  bool joined = false;
  std::string table;  // base table when !joined
  std::string left;
  JoinType jt = JoinType::Inner;
  std::string right;
  PredPtr on;
};

struct OrderItem {
  ColumnRef col;
  bool desc = false;
};

struct Select {
  bool distinct = false;  // parsed but rejected downstream
  std::vector<SelectItem> items;
  std::vector<TableRef> from;
  PredPtr where;
  bool group_all = false;
  std::vector<ColumnRef> group_by;
  PredPtr having;
  std::vector<OrderItem> order_by;  // top-level statements only
};

struct InsertRowEntry {
  Value value;
  bool is_default = false;
};

struct Insert {
  std::string table;
  std::vector<std::string> columns;  // empty means positional
  std::vector<std::vector<InsertRowEntry>> rows;
  std::unique_ptr<Select> source;  // INSERT ... SELECT
};

struct SetPair {
  std::string column;
  ExprPtr value;  // literal or column; DEFAULT arrives as a literal flagged is_default
};

struct Update {
  std::string table;
  std::vector<SetPair> sets;
  std::vector<TableRef> from;
  PredPtr where;
};

struct Delete {
  std::string table;
  PredPtr where;
};

struct Statement {
  enum class Kind { Select, Insert, Update, Delete };
  Kind kind = Kind::Select;
  std::unique_ptr<Select> select;
  std::unique_ptr<Insert> insert;
  std::unique_ptr<Update> update;
  std::unique_ptr<Delete> del;
};

}  // namespace opeadb::sql
