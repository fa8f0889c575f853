#include <string>
#include <vector>

#include "opeadb/errors.hpp"
#include "opeadb/sql/validate.hpp"

namespace opeadb::sql {

bool rule_orderable(const ColumnSpec& col) {
  switch (col.rule) {
    case EncodingRule::Numeric: return true;
    case EncodingRule::Fixed: return true;  // segment-wise with length tiebreak
    case EncodingRule::Packed: return col.sem == SemType::Char;  // one length class
    case EncodingRule::Fuzzy: return false;
  }
  return false;
}

bool rule_matchable(const ColumnSpec& col) {
  return (col.sem == SemType::Char || col.sem == SemType::Varchar) &&
         (col.rule == EncodingRule::Fuzzy || col.rule == EncodingRule::Fixed);
}

bool rule_summable(const ColumnSpec& col) {
  return col.rule == EncodingRule::Numeric && col.needs_extension;
}

namespace {

bool is_string_col(const ColumnSpec& c) {
  return c.sem == SemType::Char || c.sem == SemType::Varchar;
}

// Ciphertext cells copy verbatim between columns (the store cannot re-encode
// without keys), so the code->value mapping must be identical on both sides.
bool same_geometry(const ColumnSpec& a, const ColumnSpec& b) {
  return a.sem == b.sem && a.rule == b.rule && a.min == b.min && a.max == b.max &&
         a.scale == b.scale && a.width == b.width;
}

// What one side of a comparison denotes after resolution.
struct Operand {
  enum class Kind { Cipher, PlainCount, Literal };
  Kind kind = Kind::Literal;
  const ColumnSpec* col = nullptr;  // Cipher: the column whose domain applies
  const Value* lit = nullptr;       // Literal
  bool is_sum_avg = false;          // Cipher produced by SUM/AVG
  bool via_aggregate = false;
};

class Checker {
 public:
  Checker(const SchemaManifest& m, const Session& s) : m_(m), s_(s) {}

  Resolution run(const Statement& stmt) {
    switch (stmt.kind) {
      case Statement::Kind::Select:
        check_select(*stmt.select, nullptr, Mode::Top);
        break;
      case Statement::Kind::Insert:
        check_insert(*stmt.insert);
        break;
      case Statement::Kind::Update:
        check_update(*stmt.update);
        break;
      case Statement::Kind::Delete:
        check_delete(*stmt.del);
        break;
    }
    return std::move(res_);
  }

 private:
  const SchemaManifest& m_;
  const Session& s_;
  Resolution res_;

  struct Scope {
    std::vector<const TableSpec*> tables;
    const Scope* parent = nullptr;
  };

  enum class Mode { Top, RestrictedScalar, Exists, InsertSource };
  enum class PredCtx { Where, Having, JoinOn };

  // ---- identifier resolution -------------------------------------------

  const TableSpec* table_or_fail(const std::string& name) {
    const TableSpec* t = m_.find_table(name);
    if (!t) fail(ErrorKind::UnknownIdentifier, "unknown table '" + name + "'");
    if (!m_.allows(s_.principal, t->name)) {
      fail(ErrorKind::PermissionDenied,
           "principal '" + s_.principal + "' may not access table '" + t->name + "'");
    }
    return t;
  }

  static bool table_matches(const TableSpec& t, const std::string& qualifier) {
    return qualifier.empty() || normalize_ident(t.name) == normalize_ident(qualifier);
  }

  ResolvedColumn resolve(const ColumnRef& ref, const Scope& scope) {
    ResolvedColumn found;
    int hits = 0;
    for (const TableSpec* t : scope.tables) {
      if (!table_matches(*t, ref.table)) continue;
      if (const ColumnSpec* c = t->find_column(ref.column)) {
        found = {t, c};
        ++hits;
      }
    }
    std::string shown = ref.table.empty() ? ref.column : ref.table + "." + ref.column;
    if (hits == 1) {
      res_.columns[&ref] = found;
      return found;
    }
    if (hits > 1) {
      fail(ErrorKind::UnknownIdentifier, "ambiguous column '" + shown + "'");
    }
    for (const Scope* p = scope.parent; p; p = p->parent) {
      for (const TableSpec* t : p->tables) {
        if (table_matches(*t, ref.table) && t->find_column(ref.column)) {
          fail(ErrorKind::UnsupportedFeature,
               "correlated subquery reference '" + shown + "' is not supported");
        }
      }
    }
    fail(ErrorKind::UnknownIdentifier, "unknown column '" + shown + "'");
  }

  // ---- operand classification ------------------------------------------

  Operand classify(const Expr& e, const Scope& scope, PredCtx ctx) {
    switch (e.kind) {
      case Expr::Kind::Arith:
        fail(ErrorKind::UnsupportedFeature, "arithmetic expressions are not supported");
      case Expr::Kind::Call:
        fail(ErrorKind::UnsupportedFeature,
             "built-in function '" + e.call_name + "' is not supported");
      case Expr::Kind::Column: {
        Operand op;
        op.kind = Operand::Kind::Cipher;
        op.col = resolve(e.col, scope).column;
        return op;
      }
      case Expr::Kind::Literal: {
        Operand op;
        op.kind = Operand::Kind::Literal;
        op.lit = &e.lit;
        return op;
      }
      case Expr::Kind::Aggregate: {
        if (ctx != PredCtx::Having) {
          fail(ErrorKind::UnsupportedFeature,
               "aggregates may appear only in the select list or HAVING");
        }
        return classify_aggregate(e, scope);
      }
      case Expr::Kind::Subquery: {
        if (ctx == PredCtx::JoinOn) {
          fail(ErrorKind::UnsupportedFeature, "subqueries are not allowed in join conditions");
        }
        Scope sub_parent = scope;
        check_select(*e.sub, &sub_parent, Mode::RestrictedScalar);
        const ResolvedColumn& out = res_.subquery_out.at(e.sub.get());
        Operand op;
        op.via_aggregate = true;  // a one-value constant, not a per-row column
        if (out.column == nullptr) {
          op.kind = Operand::Kind::PlainCount;
        } else {
          op.kind = Operand::Kind::Cipher;
          op.col = out.column;
        }
        return op;
      }
    }
    fail(ErrorKind::Internal, "bad expression kind");
  }

  Operand classify_aggregate(const Expr& e, const Scope& scope) {
    Operand op;
    op.via_aggregate = true;
    if (e.distinct) fail(ErrorKind::UnsupportedFeature, "DISTINCT is not supported");
    if (e.agg == AggFunc::Count) {
      // COUNT(*) and COUNT(constant) count rows; COUNT(col) counts non-NULLs.
      if (e.arg && e.arg->kind != Expr::Kind::Column &&
          e.arg->kind != Expr::Kind::Literal) {
        fail(ErrorKind::UnsupportedFeature, "COUNT takes a column or a constant");
      }
      if (e.arg && e.arg->kind == Expr::Kind::Column) resolve(e.arg->col, scope);
      op.kind = Operand::Kind::PlainCount;
      return op;
    }
    if (!e.arg || e.arg->kind != Expr::Kind::Column) {
      fail(ErrorKind::UnsupportedFeature, "MIN/MAX/SUM/AVG take a column argument");
    }
    const ColumnSpec* col = resolve(e.arg->col, scope).column;
    if (e.agg == AggFunc::Sum || e.agg == AggFunc::Avg) {
      if (!rule_summable(*col)) {
        fail(ErrorKind::UnsupportedFeature,
             "SUM/AVG needs an additive ciphertext column; '" + col->name +
                 "' does not carry one");
      }
      op.is_sum_avg = true;
    } else if (!rule_orderable(*col)) {
      fail(ErrorKind::UnsupportedFeature,
           "MIN/MAX needs an order-comparable encoding; column '" + col->name +
               "' is not order-comparable");
    }
    op.kind = Operand::Kind::Cipher;
    op.col = col;
    return op;
  }

  // ---- comparison compatibility ------------------------------------------

  static bool order_op(CmpOp op) { return op != CmpOp::Eq && op != CmpOp::Ne; }

  void check_literal_against(const ColumnSpec& col, const Value& v, CmpOp op) {
    if (v.is_null()) {
      fail(ErrorKind::UnsupportedFeature, "comparisons against NULL take IS NULL");
    }
    bool col_string = is_string_col(col);
    bool lit_string = v.kind() == Value::Kind::Text;
    if (col_string != lit_string) {
      fail(ErrorKind::TypeMismatch, "column '" + col.name + "' and the constant '" +
                                        v.display() + "' have incompatible types");
    }
    if (col_string && order_op(op) && !rule_orderable(col)) {
      fail(ErrorKind::UnsupportedFeature,
           "column '" + col.name + "' is not order-comparable");
    }
    if (col.rule == EncodingRule::Packed && order_op(op) &&
        v.as_text().size() > col.width) {
      fail(ErrorKind::UnsupportedFeature,
           "constant is wider than packed column '" + col.name + "'");
    }
  }

  void check_pair(const Operand& a, const Operand& b, CmpOp op) {
    // SUM/AVG results compare only against positive integer constants, and
    // never against each other.
    if (a.is_sum_avg || b.is_sum_avg) {
      if (a.is_sum_avg && b.is_sum_avg) {
        fail(ErrorKind::UnsupportedFeature,
             "comparing one SUM/AVG with another is not supported");
      }
      const Operand& other = a.is_sum_avg ? b : a;
      if (other.kind != Operand::Kind::Literal || !positive_int(*other.lit)) {
        fail(ErrorKind::UnsupportedFeature,
             "SUM/AVG comparisons take a positive integer constant");
      }
      return;
    }
    if (a.kind == Operand::Kind::PlainCount || b.kind == Operand::Kind::PlainCount) {
      const Operand& other = a.kind == Operand::Kind::PlainCount ? b : a;
      if (other.kind == Operand::Kind::PlainCount) return;  // count vs count
      if (other.kind == Operand::Kind::Literal && !other.lit->is_null() &&
          other.lit->kind() == Value::Kind::Integer && other.lit->as_integer() >= 0) {
        return;
      }
      fail(ErrorKind::UnsupportedFeature,
           "COUNT results compare only against non-negative integer constants");
    }
    if (a.kind == Operand::Kind::Cipher && b.kind == Operand::Kind::Cipher) {
      if (a.col->domain != b.col->domain) {
        fail(ErrorKind::UnsupportedFeature,
             "columns '" + a.col->name + "' and '" + b.col->name +
                 "' belong to different comparison domains");
      }
      // The store compares stored codes, and codes are offset by each
      // column's own minimum (and split by its own scale/width), so the
      // comparison is only about the underlying values when both sides map
      // values to codes identically.
      if (!same_geometry(*a.col, *b.col)) {
        fail(ErrorKind::UnsupportedFeature,
             "columns '" + a.col->name + "' and '" + b.col->name +
                 "' encode values differently and cannot be compared");
      }
      if (order_op(op) && (!rule_orderable(*a.col) || !rule_orderable(*b.col))) {
        fail(ErrorKind::UnsupportedFeature, "operands are not order-comparable");
      }
      return;
    }
    if (a.kind == Operand::Kind::Cipher || b.kind == Operand::Kind::Cipher) {
      const Operand& cipher = a.kind == Operand::Kind::Cipher ? a : b;
      const Operand& lit = a.kind == Operand::Kind::Cipher ? b : a;
      check_literal_against(*cipher.col, *lit.lit, op);
      return;
    }
    // literal vs literal: a constant gate; types must agree
    if (a.lit->is_null() || b.lit->is_null()) {
      fail(ErrorKind::UnsupportedFeature, "comparisons against NULL take IS NULL");
    }
    bool sa = a.lit->kind() == Value::Kind::Text;
    bool sb = b.lit->kind() == Value::Kind::Text;
    if (sa != sb) fail(ErrorKind::TypeMismatch, "constants have incompatible types");
  }

  static bool positive_int(const Value& v) {
    return v.kind() == Value::Kind::Integer && v.as_integer() >= 1;
  }

  // ---- conditions --------------------------------------------------------

  void check_condition(const Pred& p, const Scope& scope, PredCtx ctx,
                       const std::vector<const ColumnSpec*>* group_keys) {
    switch (p.kind) {
      case Pred::Kind::And:
      case Pred::Kind::Or:
        check_condition(*p.left, scope, ctx, group_keys);
        check_condition(*p.right, scope, ctx, group_keys);
        return;
      case Pred::Kind::Cmp: {
        Operand a = classify(*p.a, scope, ctx);
        Operand b = classify(*p.b, scope, ctx);
        require_group_key(a, ctx, group_keys);
        require_group_key(b, ctx, group_keys);
        check_pair(a, b, p.op);
        return;
      }
      case Pred::Kind::Between: {
        Operand a = classify(*p.a, scope, ctx);
        Operand lo = classify(*p.lo, scope, ctx);
        Operand hi = classify(*p.hi, scope, ctx);
        require_group_key(a, ctx, group_keys);
        require_group_key(lo, ctx, group_keys);
        require_group_key(hi, ctx, group_keys);
        check_pair(a, lo, CmpOp::Ge);
        check_pair(a, hi, CmpOp::Le);
        return;
      }
      case Pred::Kind::IsNull: {
        Operand a = classify(*p.a, scope, ctx);
        require_group_key(a, ctx, group_keys);
        if (a.kind == Operand::Kind::Literal) {
          fail(ErrorKind::UnsupportedFeature, "IS NULL applies to columns or aggregates");
        }
        return;
      }
      case Pred::Kind::InList: {
        Operand a = classify(*p.a, scope, ctx);
        require_group_key(a, ctx, group_keys);
        for (const ExprPtr& item : p.items) {
          Operand b = classify(*item, scope, ctx);
          require_group_key(b, ctx, group_keys);
          check_pair(a, b, CmpOp::Eq);
        }
        return;
      }
      case Pred::Kind::Like: {
        if (ctx == PredCtx::JoinOn) {
          fail(ErrorKind::UnsupportedFeature, "LIKE is not allowed in join conditions");
        }
        const ColumnSpec* col = resolve(p.like_col, scope).column;
        if (ctx == PredCtx::Having) require_key_column(col, group_keys);
        if (!rule_matchable(*col)) {
          fail(ErrorKind::UnsupportedFeature,
               "LIKE needs a character column under a per-character encoding; '" +
                   col->name + "' does not qualify");
        }
        check_pattern(p.pattern, p.escape);
        return;
      }
      case Pred::Kind::Exists: {
        if (ctx == PredCtx::JoinOn) {
          fail(ErrorKind::UnsupportedFeature, "EXISTS is not allowed in join conditions");
        }
        Scope sub_parent = scope;
        check_select(*p.sub, &sub_parent, Mode::Exists);
        return;
      }
    }
    fail(ErrorKind::Internal, "bad predicate kind");
  }

  void require_group_key(const Operand& op, PredCtx ctx,
                         const std::vector<const ColumnSpec*>* group_keys) {
    if (ctx != PredCtx::Having || op.kind != Operand::Kind::Cipher || op.via_aggregate) {
      return;
    }
    require_key_column(op.col, group_keys);
  }

  void require_key_column(const ColumnSpec* col,
                          const std::vector<const ColumnSpec*>* group_keys) {
    if (group_keys) {
      for (const ColumnSpec* k : *group_keys) {
        if (k == col) return;
      }
    }
    fail(ErrorKind::UnsupportedFeature,
         "'" + (col ? col->name : std::string("?")) +
             "' is not a grouping column; only grouping columns and aggregates "
             "may appear here");
  }

  void check_pattern(const std::string& pattern, std::optional<char> escape) {
    bool in_class = false;
    bool escaped = false;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(pattern[i]);
      if (c < 32 || c > 126) {
        fail(ErrorKind::Parse, "LIKE pattern contains a non-printable character");
      }
      if (escaped) {
        escaped = false;
        continue;
      }
      if (escape && char(c) == *escape && !in_class) {
        escaped = true;
        continue;
      }
      if (!in_class && c == '[') {
        in_class = true;
        continue;
      }
      if (in_class && c == ']') in_class = false;
    }
    if (in_class) fail(ErrorKind::Parse, "LIKE pattern has an unterminated [class]");
    if (escaped) fail(ErrorKind::Parse, "LIKE pattern ends inside an escape");
  }

  // ---- SELECT -------------------------------------------------------------

  void check_select(const Select& sel, const Scope* parent, Mode mode) {
    if (sel.distinct) fail(ErrorKind::UnsupportedFeature, "DISTINCT is not supported");
    if (sel.group_all) {
      fail(ErrorKind::UnsupportedFeature, "GROUP BY ALL is not supported");
    }

    Scope scope;
    scope.parent = parent;
    check_from_shape(sel.from);
    for (const TableRef& ref : sel.from) {
      if (!ref.joined) {
        scope.tables.push_back(table_or_fail(ref.table));
        continue;
      }
      const TableSpec* lhs = table_or_fail(ref.left);
      const TableSpec* rhs = table_or_fail(ref.right);
      scope.tables.push_back(lhs);
      scope.tables.push_back(rhs);
      Scope join_scope;
      join_scope.tables = {lhs, rhs};
      join_scope.parent = parent;
      check_condition(*ref.on, join_scope, PredCtx::JoinOn, nullptr);
    }
    res_.scopes[&sel] = scope.tables;

    // Group keys resolve first so select items and HAVING can be checked
    // against them.
    std::vector<const ColumnSpec*> group_keys;
    for (const ColumnRef& key : sel.group_by) {
      group_keys.push_back(resolve(key, scope).column);
    }
    bool grouped = !sel.group_by.empty();

    bool any_aggregate = false;
    for (const SelectItem& item : sel.items) {
      if (item.kind == SelectItem::Kind::Expr &&
          item.expr->kind == Expr::Kind::Aggregate) {
        any_aggregate = true;
      }
    }
    // HAVING collapses rows even without GROUP BY (one group over the whole
    // input), so bare columns and stars below fall under the grouped rules.
    bool aggregated = grouped || any_aggregate || sel.having != nullptr;

    for (const SelectItem& item : sel.items) {
      switch (item.kind) {
        case SelectItem::Kind::Star:
          if (aggregated) {
            fail(ErrorKind::UnsupportedFeature, "* cannot mix with GROUP BY or aggregates");
          }
          if (mode == Mode::RestrictedScalar) {
            fail(ErrorKind::UnsupportedFeature, "scalar subqueries select a single value");
          }
          break;
        case SelectItem::Kind::TableStar: {
          if (aggregated) {
            fail(ErrorKind::UnsupportedFeature, "* cannot mix with GROUP BY or aggregates");
          }
          if (mode == Mode::RestrictedScalar) {
            fail(ErrorKind::UnsupportedFeature, "scalar subqueries select a single value");
          }
          bool known = false;
          for (const TableSpec* t : scope.tables) known |= table_matches(*t, item.table);
          if (!known) {
            fail(ErrorKind::UnknownIdentifier, "unknown table '" + item.table + "'");
          }
          break;
        }
        case SelectItem::Kind::Expr:
          check_select_item(*item.expr, scope, grouped, aggregated, group_keys, mode);
          break;
      }
    }

    if (mode == Mode::RestrictedScalar) {
      if (sel.items.size() != 1) {
        fail(ErrorKind::UnsupportedFeature, "scalar subqueries select a single value");
      }
      const Expr& e = *sel.items[0].expr;
      ResolvedColumn out;
      if (e.kind == Expr::Kind::Literal) {
        fail(ErrorKind::UnsupportedFeature,
             "scalar subqueries return a column or an aggregate");
      }
      if (e.kind == Expr::Kind::Column) {
        out = res_.columns.at(&e.col);
      } else {  // aggregate; kinds were vetted above
        if (e.agg == AggFunc::Sum || e.agg == AggFunc::Avg) {
          fail(ErrorKind::UnsupportedFeature,
               "SUM and AVG are not allowed in comparison subqueries");
        }
        if (e.agg != AggFunc::Count) out = res_.columns.at(&e.arg->col);
      }
      res_.subquery_out[&sel] = out;
    }
    if (mode == Mode::InsertSource || mode == Mode::Exists) {
      for (const SelectItem& item : sel.items) {
        if (item.kind == SelectItem::Kind::Expr &&
            item.expr->kind == Expr::Kind::Aggregate &&
            (item.expr->agg == AggFunc::Sum || item.expr->agg == AggFunc::Avg)) {
          fail(ErrorKind::UnsupportedFeature,
               "SUM/AVG results exist only in decrypted result sets and cannot "
               "feed another statement");
        }
      }
    }

    if (sel.where) check_condition(*sel.where, scope, PredCtx::Where, nullptr);
    if (sel.having) {
      check_condition(*sel.having, scope, PredCtx::Having,
                      grouped ? &group_keys : nullptr);
    }
    if (!sel.order_by.empty() && aggregated && !grouped) {
      fail(ErrorKind::UnsupportedFeature,
           "ORDER BY cannot reference rows collapsed by aggregation");
    }
    for (const OrderItem& item : sel.order_by) {
      const ColumnSpec* col = resolve(item.col, scope).column;
      if (!rule_orderable(*col)) {
        fail(ErrorKind::UnsupportedFeature,
             "ORDER BY needs an order-comparable encoding; column '" + col->name +
                 "' is not order-comparable");
      }
      if (grouped) require_key_column(col, &group_keys);
    }
  }

  void check_select_item(const Expr& e, const Scope& scope, bool grouped,
                         bool aggregated, const std::vector<const ColumnSpec*>& keys,
                         Mode mode) {
    switch (e.kind) {
      case Expr::Kind::Arith:
        fail(ErrorKind::UnsupportedFeature, "arithmetic expressions are not supported");
      case Expr::Kind::Call:
        fail(ErrorKind::UnsupportedFeature,
             "built-in function '" + e.call_name + "' is not supported");
      case Expr::Kind::Subquery:
        fail(ErrorKind::UnsupportedFeature, "subqueries cannot appear in the select list");
      case Expr::Kind::Literal:
        if (e.lit.is_null() || e.is_default) {
          fail(ErrorKind::UnsupportedFeature, "NULL/DEFAULT cannot appear in the select list");
        }
        return;
      case Expr::Kind::Column: {
        const ColumnSpec* col = resolve(e.col, scope).column;
        if (grouped || aggregated) {
          bool is_key = false;
          for (const ColumnSpec* k : keys) is_key |= (k == col);
          if (!is_key) {
            fail(ErrorKind::UnsupportedFeature,
                 "column '" + col->name +
                     "' must appear in GROUP BY to mix with aggregates");
          }
        }
        return;
      }
      case Expr::Kind::Aggregate: {
        // Restricted subqueries exclude SUM/AVG; that check happens after the
        // item scan in check_select.
        classify_aggregate(e, scope);
        (void)mode;
        return;
      }
    }
  }

  // ---- INSERT / UPDATE / DELETE -------------------------------------------

  std::vector<const ColumnSpec*> insert_targets(const Insert& ins, const TableSpec& t) {
    std::vector<const ColumnSpec*> targets;
    if (ins.columns.empty()) {
      for (const ColumnSpec& c : t.columns) targets.push_back(&c);
      return targets;
    }
    for (const std::string& name : ins.columns) {
      const ColumnSpec* c = t.find_column(name);
      if (!c) {
        fail(ErrorKind::UnknownIdentifier,
             "unknown column '" + name + "' in table '" + t.name + "'");
      }
      for (const ColumnSpec* seen : targets) {
        if (seen == c) {
          fail(ErrorKind::UnsupportedFeature, "column '" + name + "' listed twice");
        }
      }
      targets.push_back(c);
    }
    return targets;
  }

  void check_storable(const ColumnSpec& col, const Value& v) {
    if (v.is_null()) {
      if (!col.nullable) {
        fail(ErrorKind::DomainRange, "column '" + col.name + "' is not nullable");
      }
      return;
    }
    encode_value(col, v);  // throws TypeMismatch-equivalent Encoding/DomainRange
  }

  void check_missing_columns_nullable(const TableSpec& t,
                                      const std::vector<const ColumnSpec*>& targets) {
    for (const ColumnSpec& c : t.columns) {
      bool listed = false;
      for (const ColumnSpec* tc : targets) listed |= (tc == &c);
      if (!listed && !c.nullable) {
        fail(ErrorKind::DomainRange,
             "column '" + c.name + "' is not nullable and has no default");
      }
    }
  }

  void check_insert(const Insert& ins) {
    const TableSpec* t = table_or_fail(ins.table);
    std::vector<const ColumnSpec*> targets = insert_targets(ins, *t);
    check_missing_columns_nullable(*t, targets);
    if (ins.source) {
      check_select(*ins.source, nullptr, Mode::InsertSource);
      const Select& src = *ins.source;
      if (src.items.size() != targets.size()) {
        fail(ErrorKind::TypeMismatch, "INSERT source arity does not match the column list");
      }
      for (std::size_t i = 0; i < targets.size(); ++i) {
        check_insert_source_item(*targets[i], src.items[i]);
      }
      return;
    }
    for (const auto& row : ins.rows) {
      if (row.size() != targets.size()) {
        fail(ErrorKind::TypeMismatch, "INSERT row arity does not match the column list");
      }
      for (std::size_t i = 0; i < row.size(); ++i) {
        // DEFAULT stores NULL: no column declares a different default.
        check_storable(*targets[i], row[i].value);
      }
    }
  }

  void check_insert_source_item(const ColumnSpec& target, const SelectItem& item) {
    if (item.kind != SelectItem::Kind::Expr) {
      fail(ErrorKind::UnsupportedFeature, "INSERT sources list columns explicitly");
    }
    const Expr& e = *item.expr;
    if (e.kind == Expr::Kind::Literal) {
      check_storable(target, e.lit);
      return;
    }
    const ColumnSpec* src = nullptr;
    if (e.kind == Expr::Kind::Column) {
      src = res_.columns.at(&e.col).column;
    } else if (e.kind == Expr::Kind::Aggregate) {
      if (e.agg == AggFunc::Count) {
        fail(ErrorKind::UnsupportedFeature,
             "COUNT results are plaintext and cannot be stored into a ciphertext column");
      }
      src = res_.columns.at(&e.arg->col).column;
    }
    if (!src) fail(ErrorKind::Internal, "unclassified INSERT source item");
    if (src->domain != target.domain) {
      fail(ErrorKind::UnsupportedFeature,
           "INSERT across comparison domains ('" + src->name + "' into '" + target.name +
               "') is not supported");
    }
    if (target.needs_extension && !src->needs_extension) {
      // The store executes this without keys; a missing mirrored cipher cannot
      // be synthesized server-side.
      fail(ErrorKind::UnsupportedFeature,
           "column '" + target.name + "' carries an extension cipher that source '" +
               src->name + "' cannot supply");
    }
    if (!same_geometry(target, *src)) {
      fail(ErrorKind::UnsupportedFeature,
           "columns '" + src->name + "' and '" + target.name +
               "' encode values differently; ciphertexts cannot move between them");
    }
    if (src->nullable && !target.nullable) {
      fail(ErrorKind::DomainRange, "column '" + target.name + "' is not nullable");
    }
  }

  // Cross products of bare tables compose cleanly, and so does one explicit
  // join, but an outer join crossed with further tables has no faithful
  // nested-loop rendering (the null-extension scope becomes ambiguous).
  void check_from_shape(const std::vector<TableRef>& from) {
    if (from.size() <= 1) return;
    for (const TableRef& ref : from) {
      if (ref.joined) {
        fail(ErrorKind::UnsupportedFeature,
             "a joined table cannot mix with other FROM entries");
      }
    }
  }

  void check_update(const Update& upd) {
    const TableSpec* target = table_or_fail(upd.table);
    Scope scope;
    if (upd.from.empty()) {
      scope.tables.push_back(target);
    } else {
      int target_seen = 0;
      check_from_shape(upd.from);
      for (const TableRef& ref : upd.from) {
        if (!ref.joined) {
          const TableSpec* t = table_or_fail(ref.table);
          scope.tables.push_back(t);
          target_seen += (t == target);
          continue;
        }
        const TableSpec* lhs = table_or_fail(ref.left);
        const TableSpec* rhs = table_or_fail(ref.right);
        scope.tables.push_back(lhs);
        scope.tables.push_back(rhs);
        target_seen += (lhs == target) + (rhs == target);
        Scope join_scope;
        join_scope.tables = {lhs, rhs};
        check_condition(*ref.on, join_scope, PredCtx::JoinOn, nullptr);
      }
      if (target_seen == 0) {
        fail(ErrorKind::UnknownIdentifier,
             "UPDATE target '" + upd.table + "' must appear in FROM");
      }
      if (target_seen > 1) {
        fail(ErrorKind::UnsupportedFeature,
             "UPDATE target '" + upd.table + "' may appear in FROM only once");
      }
    }
    for (const SetPair& pair : upd.sets) {
      const ColumnSpec* col = target->find_column(pair.column);
      if (!col) {
        fail(ErrorKind::UnknownIdentifier,
             "unknown column '" + pair.column + "' in table '" + target->name + "'");
      }
      const Expr& v = *pair.value;
      if (v.kind == Expr::Kind::Literal) {
        check_storable(*col, v.lit);
      } else if (v.kind == Expr::Kind::Column) {
        const ColumnSpec* src = resolve(v.col, scope).column;
        if (src->domain != col->domain) {
          fail(ErrorKind::UnsupportedFeature,
               "SET across comparison domains ('" + src->name + "' into '" + col->name +
                   "') is not supported");
        }
        if (col->needs_extension && !src->needs_extension) {
          fail(ErrorKind::UnsupportedFeature,
               "column '" + col->name + "' carries an extension cipher that source '" +
                   src->name + "' cannot supply");
        }
        if (!same_geometry(*col, *src)) {
          fail(ErrorKind::UnsupportedFeature,
               "columns '" + src->name + "' and '" + col->name +
                   "' encode values differently; ciphertexts cannot move between them");
        }
        if (src->nullable && !col->nullable) {
          fail(ErrorKind::DomainRange, "column '" + col->name + "' is not nullable");
        }
      } else {
        fail(ErrorKind::UnsupportedFeature, "SET takes a constant or a column");
      }
    }
    if (upd.where) check_condition(*upd.where, scope, PredCtx::Where, nullptr);
  }

  void check_delete(const Delete& del) {
    const TableSpec* target = table_or_fail(del.table);
    Scope scope;
    scope.tables.push_back(target);
    if (del.where) check_condition(*del.where, scope, PredCtx::Where, nullptr);
  }
};

}  // namespace

Resolution validate_statement(const Statement& stmt, const SchemaManifest& manifest,
                              const Session& session) {
  Checker checker(manifest, session);
  return checker.run(stmt);
}

}  // namespace opeadb::sql
