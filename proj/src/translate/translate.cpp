#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "opeadb/errors.hpp"
#include "opeadb/translate.hpp"

namespace opeadb {

namespace {

using sql::AggFunc;
using sql::CmpOp;
using sql::ColumnRef;
using sql::Expr;
using sql::Pred;
using sql::Select;
using sql::SelectItem;
using sql::TableRef;

CmpOp flip(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
  }
}

bool order_op(CmpOp op) { return op != CmpOp::Eq && op != CmpOp::Ne; }

bool text_rule(const ColumnSpec& c) {
  return c.rule == EncodingRule::Fuzzy || c.rule == EncodingRule::Fixed;
}

// ---------------------------------------------------------------------------
// Literal lowering: fold the comparison when the constant falls outside what
// the column can store, otherwise produce an exactly-representable value
// (adjusting the operator when a finer-scaled decimal sits between two codes).
// ---------------------------------------------------------------------------

struct Lowered {
  enum class Kind { Compare, AlwaysTrueNotNull, AlwaysFalse };
  Kind kind = Kind::Compare;
  CmpOp op = CmpOp::Eq;
  Value value;          // storable form, at the column's scale / padded width
  bool relaxed = false; // overlong text for an order comparison; encode char-wise
};

Lowered fold_true(CmpOp op) {
  Lowered out;
  out.kind = Lowered::Kind::AlwaysTrueNotNull;
  out.op = op;
  return out;
}

Lowered fold_false(CmpOp op) {
  Lowered out;
  out.kind = Lowered::Kind::AlwaysFalse;
  out.op = op;
  return out;
}

Lowered lower_numeric_literal(const ColumnSpec& spec, const Value& v, CmpOp op) {
  Int lu;
  unsigned ls;
  if (v.kind() == Value::Kind::Integer) {
    lu = v.as_integer();
    ls = 0;
  } else if (v.kind() == Value::Kind::Decimal) {
    lu = v.unscaled();
    ls = v.scale();
  } else {
    fail(ErrorKind::Internal, "non-numeric literal against a numeric column");
  }

  Int u;
  if (ls <= spec.scale) {
    u = lu * pow10_int(spec.scale - ls);
  } else {
    // The constant has more fractional digits than the column stores; it sits
    // strictly between two representable codes unless the tail is zero.
    Int d = pow10_int(ls - spec.scale);
    Int q = lu / d;  // truncates toward zero
    Int r = lu - q * d;
    if (r != 0 && lu < 0) q -= 1;  // floor for negatives
    if (r == 0) {
      u = q;
    } else {
      switch (op) {
        case CmpOp::Eq: return fold_false(op);
        case CmpOp::Ne: return fold_true(op);
        case CmpOp::Lt:
        case CmpOp::Le:
          u = q;
          op = CmpOp::Le;  // a < q.tail  <=>  a <= q
          break;
        case CmpOp::Gt:
        case CmpOp::Ge:
          u = q + 1;
          op = CmpOp::Ge;  // a > q.tail  <=>  a >= q+1
          break;
      }
    }
  }

  if (u < spec.min) {
    switch (op) {
      case CmpOp::Eq: case CmpOp::Lt: case CmpOp::Le: return fold_false(op);
      case CmpOp::Ne: case CmpOp::Gt: case CmpOp::Ge: return fold_true(op);
    }
  }
  if (u > spec.max) {
    switch (op) {
      case CmpOp::Eq: case CmpOp::Gt: case CmpOp::Ge: return fold_false(op);
      case CmpOp::Ne: case CmpOp::Lt: case CmpOp::Le: return fold_true(op);
    }
  }
  Lowered out;
  out.op = op;
  long long narrow = u.convert_to<long long>();
  out.value = spec.scale == 0 ? Value::integer(narrow)
                              : Value::decimal(narrow, spec.scale);
  return out;
}

Lowered lower_text_literal(const ColumnSpec& spec, const Value& v, CmpOp op) {
  std::string s = v.as_text();
  if (spec.sem == SemType::Char && s.size() < spec.width) s.resize(spec.width, ' ');
  if (s.size() > spec.width) {
    if (!order_op(op)) {
      return op == CmpOp::Eq ? fold_false(op) : fold_true(op);
    }
    // Order comparisons against a wider constant stay meaningful under the
    // per-character encoding; encode it character-wise past the width.
    Lowered out;
    out.op = op;
    out.value = Value::text(s);
    out.relaxed = true;
    return out;
  }
  if (s.empty()) {  // varchar '': no stored cell is empty
    if (!order_op(op)) {
      return op == CmpOp::Eq ? fold_false(op) : fold_true(op);
    }
    // Every stored string sorts after the empty string; an operand with zero
    // character ciphers realizes that ordering directly.
    Lowered out;
    out.op = op;
    out.value = Value::text(s);
    out.relaxed = true;
    return out;
  }
  Lowered out;
  out.op = op;
  out.value = Value::text(s);
  return out;
}

Lowered lower_literal(const ColumnSpec& spec, const Value& v, CmpOp op) {
  if (spec.sem == SemType::Char || spec.sem == SemType::Varchar) {
    return lower_text_literal(spec, v, op);
  }
  return lower_numeric_literal(spec, v, op);
}

// Plaintext gate between two constants; the validator already matched types.
bool literal_gate(const Value& a, CmpOp op, const Value& b) {
  int c;
  if (a.kind() == Value::Kind::Text) {
    c = a.as_text().compare(b.as_text());
    c = c < 0 ? -1 : c > 0 ? 1 : 0;
  } else {
    c = Value::numeric_compare(a, b);
  }
  switch (op) {
    case CmpOp::Eq: return c == 0;
    case CmpOp::Ne: return c != 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Gt: return c > 0;
    case CmpOp::Ge: return c >= 0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

// Identity of a relation column for resolving later references; synthetic
// columns (rowids, flags, aggregate outputs) carry nulls.
struct ColId {
  const TableSpec* table = nullptr;
  const ColumnSpec* column = nullptr;
};

// One side of a comparison after classification.
struct Side {
  enum class Kind { CipherCol, CipherVar, MinMax, SumAvg, CountCol, CountVar, Lit };
  Kind kind = Kind::Lit;
  int col = -1;                       // CipherCol / MinMax / CountCol slot
  std::string var;                    // CipherVar / CountVar
  const ColumnSpec* spec = nullptr;   // cipher-ish sides: decode/encode geometry
  const Value* lit = nullptr;         // Lit
  int pair_col = -1;                  // SumAvg
  int count_col = -1;                 // SumAvg
  bool is_avg = false;                // SumAvg
};

class Builder {
 public:
  Builder(const sql::Resolution& res, const SchemaManifest& m, const KeyRing& kr,
          SplitRng& rng)
      : res_(res), m_(m), kr_(kr), rng_(rng) {}

  Translation run(const sql::Statement& stmt) {
    switch (stmt.kind) {
      case sql::Statement::Kind::Select: {
        translate_select(*stmt.select, 1, Mode::Top);
        plan_.outcome = CipherPlan::Outcome::Rows;
        break;
      }
      case sql::Statement::Kind::Insert:
        translate_insert(*stmt.insert);
        break;
      case sql::Statement::Kind::Update:
        translate_update(*stmt.update);
        break;
      case sql::Statement::Kind::Delete:
        translate_delete(*stmt.del);
        break;
    }
    drop_open_temps();
    Translation out;
    out.plan = std::move(plan_);
    out.fields = std::move(fields_);
    out.mutation = stmt.kind != sql::Statement::Kind::Select;
    return out;
  }

 private:
  const sql::Resolution& res_;
  const SchemaManifest& m_;
  const KeyRing& kr_;
  SplitRng& rng_;

  CipherPlan plan_;
  std::vector<OutputField> fields_;

  std::vector<PlanColumn> cur_;
  std::vector<ColId> ids_;

  std::map<std::string, Int> xs_;  // domain id -> equality threshold
  std::map<int, int> inter_count_;
  std::map<int, int> group_count_;
  std::map<int, int> var_count_;
  std::vector<std::string> open_temps_;
  int match_ordinal_ = 0;

  // Subquery lowering results, keyed by the Select node.
  struct SubResult {
    bool exists = false;
    std::string temp;   // exists
    std::string var;    // scalar
    bool plain = false; // scalar COUNT
    const ColumnSpec* spec = nullptr;  // scalar cipher geometry
  };
  std::map<const Select*, SubResult> subs_;

  // MatchLike flag slot per LIKE leaf (post-aggregation slot when grouped).
  std::map<const Pred*, int> like_flags_;

  // Aggregate output slots, keyed by function and argument identity.
  struct AggKey {
    AggFunc f;
    const TableSpec* t;
    const ColumnSpec* c;
    bool operator<(const AggKey& o) const {
      return std::tie(f, t, c) < std::tie(o.f, o.t, o.c);
    }
  };
  std::map<AggKey, int> agg_slots_;

  enum class Mode { Top, Scalar, Exists, Source };

  // ---- shared helpers ----------------------------------------------------

  const DomainKey& key_of(const ColumnSpec& c) { return kr_.key_for(c.domain); }

  const Int& x_for(const ColumnSpec& c) {
    auto it = xs_.find(c.domain);
    if (it != xs_.end()) return it->second;
    Int x = key_of(c).pick_equality_threshold(rng_);
    plan_.thresholds.push_back(x);
    return xs_.emplace(c.domain, std::move(x)).first->second;
  }

  PlanColumn plan_column(const TableSpec& t, const ColumnSpec& c) {
    PlanColumn col;
    col.name = c.anon_name;
    col.owner = t.anon_name;
    col.kind = PlanColumn::Kind::Cipher;
    col.has_extension = c.needs_extension;
    if (text_rule(c)) {
      col.layout = c.rule == EncodingRule::Fuzzy ? PlanColumn::Layout::FuzzyText
                                                 : PlanColumn::Layout::FixedText;
      if (c.rule == EncodingRule::Fixed) col.fixed_digits = fixed_cipher_digits(key_of(c));
    }
    return col;
  }

  void push_step(Step s) {
    s.layout = cur_;
    plan_.steps.push_back(std::move(s));
  }

  void push_consuming_step(Step s) {  // mutations, drops: no relation after
    plan_.steps.push_back(std::move(s));
  }

  int find_col(const TableSpec* t, const ColumnSpec* c) {
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (ids_[i].table == t && ids_[i].column == c) return int(i);
    }
    fail(ErrorKind::Internal, "column fell out of the working relation");
  }

  int index_of(const ColumnRef& ref) {
    const sql::ResolvedColumn& rc = res_.columns.at(&ref);
    return find_col(rc.table, rc.column);
  }

  const ColumnSpec* spec_of(const ColumnRef& ref) {
    return res_.columns.at(&ref).column;
  }

  std::string temp_name(int depth, bool grouping) {
    std::map<int, int>& counter = grouping ? group_count_ : inter_count_;
    int n = ++counter[depth];
    std::string base = grouping ? "#TEMPORARY_TABLE" : "#INTER_TABLE";
    base += std::to_string(depth);
    if (n > 1) base += "_" + std::to_string(n);
    return base;
  }

  std::string var_name(int depth) {
    int n = ++var_count_[depth];
    std::string base = "@inter_var" + std::to_string(depth);
    if (n > 1) base += "_" + std::to_string(n);
    return base;
  }

  void drop_open_temps() {
    for (auto it = open_temps_.rbegin(); it != open_temps_.rend(); ++it) {
      Step s;
      s.kind = Step::Kind::DropTemp;
      s.temp = *it;
      push_consuming_step(std::move(s));
    }
    open_temps_.clear();
  }

  CipherCell literal_cell(const ColumnSpec& spec, const Value& v, bool with_extension) {
    ColumnSpec probe = spec;
    probe.needs_extension = with_extension && spec.needs_extension;
    probe.nullable = true;  // NULL cells here are pre-vetted by the validator
    return encrypt_cell(key_of(spec), probe, v, rng_);
  }

  CipherCell relaxed_text_cell(const ColumnSpec& spec, const std::string& s) {
    const DomainKey& key = key_of(spec);
    CipherCell cell;
    cell.kind = CipherCell::Kind::Text;
    if (s.empty()) return cell;  // zero characters; "" is distinct from NULL's "0"
    if (spec.rule == EncodingRule::Fuzzy) {
      std::string out;
      std::size_t end = s.find_last_not_of(' ');
      std::size_t keep = end == std::string::npos ? 0 : end + 1;
      for (std::size_t i = 0; i < keep; ++i) {
        out += to_decimal(key.encrypt(static_cast<unsigned char>(s[i]), rng_));
        out += ',';
      }
      out += std::to_string(s.size() - keep);
      cell.text = out;
      return cell;
    }
    unsigned digits = fixed_cipher_digits(key);
    std::string out;
    for (char ch : s) {
      std::string one = to_decimal(key.encrypt(static_cast<unsigned char>(ch), rng_));
      out.append(digits - one.size(), '0');
      out += one;
    }
    cell.text = out;
    return cell;
  }

  // Cmp nodes over text need a split recipe that survives even when both
  // operands are variables or literal cells.
  void set_text_hints(PredNode& n, const ColumnSpec& spec) {
    if (!text_rule(spec)) return;
    n.cmp_layout = spec.rule == EncodingRule::Fuzzy ? PlanColumn::Layout::FuzzyText
                                                    : PlanColumn::Layout::FixedText;
    if (spec.rule == EncodingRule::Fixed) {
      n.cmp_digits = fixed_cipher_digits(key_of(spec));
    }
  }

  // ---- FROM --------------------------------------------------------------

  void scan_columns(const TableSpec& t) {
    for (const ColumnSpec& c : t.columns) {
      cur_.push_back(plan_column(t, c));
      ids_.push_back({&t, &c});
    }
  }

  void append_rowid(const TableSpec& t) {
    PlanColumn col;
    col.name = t.anon_name + "__ROWID";
    col.owner = t.anon_name;
    col.kind = PlanColumn::Kind::RowId;
    cur_.push_back(col);
    ids_.push_back({});
  }

  // Returns the rowid column index when `rowid_target` was scanned, else -1.
  int build_from(const Select* scope_key, const std::vector<TableRef>& from,
                 const TableSpec* rowid_target) {
    int rowid_col = -1;
    cur_.clear();
    ids_.clear();
    bool first = true;
    for (const TableRef& ref : from) {
      if (!ref.joined) {
        const TableSpec* t = table_spec(scope_key, ref.table);
        bool want_rowid = rowid_target == t;
        if (first) {
          scan_columns(*t);
          if (want_rowid) {
            append_rowid(*t);
            rowid_col = int(cur_.size()) - 1;
          }
          Step s;
          s.kind = Step::Kind::Scan;
          s.table = t->anon_name;
          s.with_rowid = want_rowid;
          push_step(std::move(s));
        } else {
          scan_columns(*t);
          if (want_rowid) {
            append_rowid(*t);
            rowid_col = int(cur_.size()) - 1;
          }
          Step s;
          s.kind = Step::Kind::SetOp;
          s.set_kind = Step::SetKind::Product;
          s.right = t->anon_name;
          s.with_rowid = want_rowid;
          push_step(std::move(s));
        }
        first = false;
        continue;
      }
      // Validated: a joined element is alone in its FROM list.
      const TableSpec* lhs = table_spec(scope_key, ref.left);
      const TableSpec* rhs = table_spec(scope_key, ref.right);
      bool left_rowid = rowid_target == lhs;
      bool right_rowid = rowid_target == rhs;
      scan_columns(*lhs);
      if (left_rowid) {
        append_rowid(*lhs);
        rowid_col = int(cur_.size()) - 1;
      }
      Step scan;
      scan.kind = Step::Kind::Scan;
      scan.table = lhs->anon_name;
      scan.with_rowid = left_rowid;
      push_step(std::move(scan));

      scan_columns(*rhs);
      if (right_rowid) {
        append_rowid(*rhs);
        rowid_col = int(cur_.size()) - 1;
      }
      Step join;
      join.kind = Step::Kind::Join;
      join.join = ref.jt;
      join.right = rhs->anon_name;
      join.with_rowid = right_rowid;
      join.pred = lower_pred(*ref.on);
      push_step(std::move(join));
      first = false;
    }
    return rowid_col;
  }

  // Resolve a FROM table through the validator's scope record (keeps the two
  // passes honest about which spec a name meant).
  const TableSpec* table_spec(const Select* scope_key, const std::string& name) {
    if (scope_key) {
      for (const TableSpec* t : res_.scopes.at(scope_key)) {
        if (normalize_ident(t->name) == normalize_ident(name)) return t;
      }
    }
    const TableSpec* t = m_.find_table(name);
    if (!t) fail(ErrorKind::Internal, "table resolved at validation is now unknown");
    return t;
  }

  // ---- subqueries ----------------------------------------------------------

  void collect_subqueries_expr(const Expr& e, int depth) {
    if (e.kind != Expr::Kind::Subquery) return;
    translate_subquery(*e.sub, depth);
  }

  void collect_subqueries(const Pred& p, int depth) {
    switch (p.kind) {
      case Pred::Kind::And:
      case Pred::Kind::Or:
        collect_subqueries(*p.left, depth);
        collect_subqueries(*p.right, depth);
        return;
      case Pred::Kind::Cmp:
        collect_subqueries_expr(*p.a, depth);
        collect_subqueries_expr(*p.b, depth);
        return;
      case Pred::Kind::Between:
        collect_subqueries_expr(*p.a, depth);
        collect_subqueries_expr(*p.lo, depth);
        collect_subqueries_expr(*p.hi, depth);
        return;
      case Pred::Kind::IsNull:
        collect_subqueries_expr(*p.a, depth);
        return;
      case Pred::Kind::InList:
        collect_subqueries_expr(*p.a, depth);
        for (const sql::ExprPtr& item : p.items) collect_subqueries_expr(*item, depth);
        return;
      case Pred::Kind::Like:
        return;
      case Pred::Kind::Exists: {
        translate_exists(p, depth);
        return;
      }
    }
  }

  void translate_subquery(const Select& sel, int outer_depth) {
    if (subs_.count(&sel)) return;
    int depth = outer_depth + 1;
    SelectValue v = translate_select(sel, depth, Mode::Scalar);
    SubResult r;
    r.var = var_name(depth);
    r.plain = v.plain;
    r.spec = v.spec;
    Step s;
    s.kind = Step::Kind::AssignVar;
    s.var = r.var;
    s.source_col = v.col;
    s.var_plain = v.plain;
    push_consuming_step(std::move(s));
    cur_.clear();
    ids_.clear();
    subs_.emplace(&sel, std::move(r));
  }

  void translate_exists(const Pred& p, int outer_depth) {
    const Select& sel = *p.sub;
    if (subs_.count(&sel)) return;
    int depth = outer_depth + 1;
    translate_select(sel, depth, Mode::Exists);
    SubResult r;
    r.exists = true;
    r.temp = temp_name(depth, false);
    Step s;
    s.kind = Step::Kind::CreateTemp;
    s.temp = r.temp;
    push_step(std::move(s));
    open_temps_.push_back(r.temp);
    cur_.clear();
    ids_.clear();
    subs_.emplace(&sel, std::move(r));
  }

  // ---- predicate lowering --------------------------------------------------

  PredNode const_node(bool v) {
    PredNode n;
    n.kind = PredNode::Kind::ConstBool;
    n.value = v;
    return n;
  }

  PredNode notnull_node(const Side& cipher) {
    if (cipher.kind == Side::Kind::CountCol || cipher.kind == Side::Kind::CountVar) {
      return const_node(true);  // counts are never NULL
    }
    PredNode n;
    n.kind = PredNode::Kind::NotNull;
    if (cipher.kind == Side::Kind::CipherVar) {
      n.a.kind = PlanOperand::Kind::Var;
      n.a.var = cipher.var;
    } else {
      n.a.kind = PlanOperand::Kind::Column;
      n.a.column = cipher.kind == Side::Kind::SumAvg ? cipher.pair_col : cipher.col;
    }
    if (cipher.spec) n.x = x_for(*cipher.spec);
    return n;
  }

  Side classify(const Expr& e, bool having) {
    Side s;
    switch (e.kind) {
      case Expr::Kind::Column: {
        s.kind = Side::Kind::CipherCol;
        s.spec = spec_of(e.col);
        s.col = index_of(e.col);
        return s;
      }
      case Expr::Kind::Literal:
        s.kind = Side::Kind::Lit;
        s.lit = &e.lit;
        return s;
      case Expr::Kind::Aggregate: {
        if (!having) fail(ErrorKind::Internal, "aggregate outside HAVING survived validation");
        if (e.agg == AggFunc::Count) {
          s.kind = Side::Kind::CountCol;
          s.col = count_slot(e);
          return s;
        }
        const sql::ResolvedColumn& rc = res_.columns.at(&e.arg->col);
        if (e.agg == AggFunc::Min || e.agg == AggFunc::Max) {
          s.kind = Side::Kind::MinMax;
          s.spec = rc.column;
          s.col = agg_slots_.at({e.agg, rc.table, rc.column});
          return s;
        }
        s.kind = Side::Kind::SumAvg;
        s.spec = rc.column;
        s.is_avg = e.agg == AggFunc::Avg;
        s.pair_col = agg_slots_.at({AggFunc::Sum, rc.table, rc.column});
        s.count_col = agg_slots_.at({AggFunc::Count, rc.table, rc.column});
        return s;
      }
      case Expr::Kind::Subquery: {
        const SubResult& r = subs_.at(e.sub.get());
        if (r.plain) {
          s.kind = Side::Kind::CountVar;
          s.var = r.var;
        } else {
          s.kind = Side::Kind::CipherVar;
          s.var = r.var;
          s.spec = r.spec;
        }
        return s;
      }
      default:
        fail(ErrorKind::Internal, "expression kind survived validation unsupported");
    }
  }

  PlanOperand operand_of(const Side& s) {
    PlanOperand op;
    switch (s.kind) {
      case Side::Kind::CipherCol:
      case Side::Kind::MinMax:
      case Side::Kind::CountCol:
        op.kind = PlanOperand::Kind::Column;
        op.column = s.col;
        return op;
      case Side::Kind::CipherVar:
      case Side::Kind::CountVar:
        op.kind = PlanOperand::Kind::Var;
        op.var = s.var;
        return op;
      case Side::Kind::Lit:
        op.kind = PlanOperand::Kind::PlainInt;
        op.plain = s.lit->as_integer();
        return op;
      default:
        fail(ErrorKind::Internal, "operand classification out of place");
    }
  }

  PredNode lower_cmp(const Expr& ea, const Expr& eb, CmpOp op, bool having) {
    Side a = classify(ea, having);
    Side b = classify(eb, having);

    // Exact-sum comparison: the pair column probes the constant's partition
    // boundaries, one entry per possible group size.
    if (a.kind == Side::Kind::SumAvg || b.kind == Side::Kind::SumAvg) {
      const Side& sum = a.kind == Side::Kind::SumAvg ? a : b;
      const Side& lit = a.kind == Side::Kind::SumAvg ? b : a;
      CmpOp eff = a.kind == Side::Kind::SumAvg ? op : flip(op);
      PredNode n;
      n.kind = PredNode::Kind::SumCmp;
      n.pair_col = sum.pair_col;
      n.count_col = sum.count_col;
      n.op = eff;
      n.bounds_by_size = sum_bounds(*sum.spec, lit.lit->as_integer(), sum.is_avg);
      return n;
    }

    // Plaintext count comparisons.
    if (a.kind == Side::Kind::CountCol || a.kind == Side::Kind::CountVar ||
        b.kind == Side::Kind::CountCol || b.kind == Side::Kind::CountVar) {
      PredNode n;
      n.kind = PredNode::Kind::CountCmp;
      n.a = operand_of(a);
      n.b = operand_of(b);
      n.op = op;
      return n;
    }

    // Constant gate.
    if (a.kind == Side::Kind::Lit && b.kind == Side::Kind::Lit) {
      return const_node(literal_gate(*a.lit, op, *b.lit));
    }

    // Cipher against constant: fold or encrypt.
    if (a.kind == Side::Kind::Lit || b.kind == Side::Kind::Lit) {
      const Side& cipher = a.kind == Side::Kind::Lit ? b : a;
      const Side& lit = a.kind == Side::Kind::Lit ? a : b;
      bool lit_on_left = a.kind == Side::Kind::Lit;
      CmpOp eff = lit_on_left ? flip(op) : op;
      Lowered low = lower_literal(*cipher.spec, *lit.lit, eff);
      if (low.kind == Lowered::Kind::AlwaysFalse) return const_node(false);
      if (low.kind == Lowered::Kind::AlwaysTrueNotNull) return notnull_node(cipher);
      PredNode n;
      n.kind = PredNode::Kind::Cmp;
      n.a = operand_of(cipher);
      n.op = low.op;
      n.x = x_for(*cipher.spec);
      set_text_hints(n, *cipher.spec);
      n.b.kind = PlanOperand::Kind::Literal;
      n.b.literal = low.relaxed
                        ? relaxed_text_cell(*cipher.spec, low.value.as_text())
                        : literal_cell(*cipher.spec, low.value, false);
      if (lit_on_left) {
        std::swap(n.a, n.b);
        n.op = op;  // rendered order mirrors the written order
      }
      return n;
    }

    // Cipher against cipher (columns, aggregate outputs, scalar variables).
    PredNode n;
    n.kind = PredNode::Kind::Cmp;
    n.a = operand_of(a);
    n.b = operand_of(b);
    n.op = op;
    n.x = x_for(*a.spec);
    set_text_hints(n, *a.spec);
    return n;
  }

  PredNode lower_isnull(const Pred& p, bool having) {
    Side s = classify(*p.a, having);
    if (s.kind == Side::Kind::CountCol || s.kind == Side::Kind::CountVar) {
      return const_node(p.negated);  // counts are never NULL
    }
    PredNode n;
    n.kind = p.negated ? PredNode::Kind::NotNull : PredNode::Kind::IsNull;
    n.a = operand_of(s.kind == Side::Kind::SumAvg
                         ? Side{Side::Kind::CipherCol, s.pair_col}
                         : s);
    if (s.spec) n.x = x_for(*s.spec);
    return n;
  }

  PredNode lower_pred(const Pred& p, bool having = false) {
    switch (p.kind) {
      case Pred::Kind::And:
      case Pred::Kind::Or: {
        PredNode n;
        n.kind = p.kind == Pred::Kind::And ? PredNode::Kind::And : PredNode::Kind::Or;
        n.kids.push_back(lower_pred(*p.left, having));
        n.kids.push_back(lower_pred(*p.right, having));
        return n;
      }
      case Pred::Kind::Cmp:
        return lower_cmp(*p.a, *p.b, p.op, having);
      case Pred::Kind::Between: {
        PredNode n;
        if (!p.negated) {
          n.kind = PredNode::Kind::And;
          n.kids.push_back(lower_cmp(*p.a, *p.lo, CmpOp::Ge, having));
          n.kids.push_back(lower_cmp(*p.a, *p.hi, CmpOp::Le, having));
        } else {
          n.kind = PredNode::Kind::Or;
          n.kids.push_back(lower_cmp(*p.a, *p.lo, CmpOp::Lt, having));
          n.kids.push_back(lower_cmp(*p.a, *p.hi, CmpOp::Gt, having));
        }
        return n;
      }
      case Pred::Kind::IsNull:
        return lower_isnull(p, having);
      case Pred::Kind::InList: {
        PredNode n;
        n.kind = p.negated ? PredNode::Kind::And : PredNode::Kind::Or;
        for (const sql::ExprPtr& item : p.items) {
          n.kids.push_back(
              lower_cmp(*p.a, *item, p.negated ? CmpOp::Ne : CmpOp::Eq, having));
        }
        if (n.kids.size() == 1) return std::move(n.kids[0]);
        return n;
      }
      case Pred::Kind::Like: {
        PredNode n;
        n.kind = PredNode::Kind::MatchFlag;
        n.flag_col = like_flags_.at(&p);
        n.negated = p.negated;
        return n;
      }
      case Pred::Kind::Exists: {
        const SubResult& r = subs_.at(p.sub.get());
        PredNode n;
        n.kind = PredNode::Kind::ExistsTemp;
        n.temp = r.temp;
        n.negated = p.negated;
        return n;
      }
    }
    fail(ErrorKind::Internal, "bad predicate kind");
  }

  // Boundary constants per possible group size for SUM/AVG theta constant.
  std::vector<SumBound> sum_bounds(const ColumnSpec& spec, long long constant,
                                   bool avg) {
    const DomainKey& key = key_of(spec);
    long long off = 1 - spec.min;
    Int base = Int(constant) * pow10_int(spec.scale);
    Int max_code = Int(spec.max) - spec.min + 1;
    std::uint64_t max_group = key.config().max_group;
    std::vector<SumBound> out;
    out.reserve(max_group);
    for (std::uint64_t k = 1; k <= max_group; ++k) {
      // Code-space translation of "the plaintext sum of k cells equals the
      // constant": SUM codes = 10^scale * SUM values + k * offset. AVG theta c
      // probes SUM theta c*k.
      Int v = avg ? Int(k) * (base + off) : base + Int(k) * off;
      SumBound b;
      if (v < Int(k)) {
        b.tag = SumBound::Tag::Above;  // every k-cell sum of codes is >= k
      } else if (v > Int(k) * max_code) {
        b.tag = SumBound::Tag::Below;
      } else {
        std::uint64_t budget = key.max_supported_sum(k);
        if (v > Int(budget)) {
          fail(ErrorKind::SumRangeExceeded,
               "sum comparison against " + std::to_string(constant) +
                   " needs partition " + to_decimal(v) + " for groups of " +
                   std::to_string(k) + ", beyond the supported " +
                   std::to_string(budget));
        }
        std::uint64_t vv = v.convert_to<std::uint64_t>();
        b.lower = key.bounds(vv).lower;
        b.upper_ext = key.ext_bounds(vv).upper;
      }
      out.push_back(std::move(b));
    }
    return out;
  }

  // ---- LIKE ---------------------------------------------------------------

  void collect_likes(const Pred& p, std::vector<const Pred*>& out) {
    switch (p.kind) {
      case Pred::Kind::And:
      case Pred::Kind::Or:
        collect_likes(*p.left, out);
        collect_likes(*p.right, out);
        return;
      case Pred::Kind::Like:
        out.push_back(&p);
        return;
      default:
        return;
    }
  }

  // Emits one MatchLike step; the flag lands at the end of the relation.
  int emit_match(const Pred& like, int subject_col) {
    const PlanColumn& subject = cur_[subject_col];
    const ColumnSpec* spec = spec_of(like.like_col);
    PlanColumn flag;
    flag.name = subject.name + "_Match" + std::to_string(++match_ordinal_);
    flag.kind = PlanColumn::Kind::MatchFlag;
    Step s;
    s.kind = Step::Kind::MatchLike;
    s.subject_col = subject_col;
    s.program = compile_like_pattern(like.pattern, like.escape, key_of(*spec),
                                     x_for(*spec), subject.layout,
                                     subject.fixed_digits, rng_);
    cur_.push_back(flag);
    ids_.push_back({});
    push_step(std::move(s));
    return int(cur_.size()) - 1;
  }

  void emit_where_likes(const Pred* where) {
    if (!where) return;
    std::vector<const Pred*> likes;
    collect_likes(*where, likes);
    for (const Pred* p : likes) {
      like_flags_[p] = emit_match(*p, index_of(p->like_col));
    }
  }

  // ---- aggregation ----------------------------------------------------------

  // COUNT slot for a COUNT expression: COUNT(*) and COUNT(constant) count
  // rows; COUNT(col) counts non-NULL cells.
  int count_slot(const Expr& e) {
    if (e.arg && e.arg->kind == Expr::Kind::Column) {
      const sql::ResolvedColumn& rc = res_.columns.at(&e.arg->col);
      return agg_slots_.at({AggFunc::Count, rc.table, rc.column});
    }
    return agg_slots_.at({AggFunc::Count, nullptr, nullptr});
  }

  struct PendingAgg {
    AggKey key;
    int src_col;  // -1 for COUNT(*)
  };

  void note_agg(std::vector<PendingAgg>& pending, const Expr& e) {
    if (e.kind != Expr::Kind::Aggregate) return;
    auto add = [&](AggFunc f, const TableSpec* t, const ColumnSpec* c, int src) {
      AggKey k{f, t, c};
      for (const PendingAgg& p : pending) {
        if (!(p.key < k) && !(k < p.key)) return;
      }
      pending.push_back({k, src});
    };
    if (e.agg == AggFunc::Count) {
      if (e.arg && e.arg->kind == Expr::Kind::Column) {
        const sql::ResolvedColumn& rc = res_.columns.at(&e.arg->col);
        add(AggFunc::Count, rc.table, rc.column, find_col(rc.table, rc.column));
      } else {
        add(AggFunc::Count, nullptr, nullptr, -1);
      }
      return;
    }
    const sql::ResolvedColumn& rc = res_.columns.at(&e.arg->col);
    int src = find_col(rc.table, rc.column);
    if (e.agg == AggFunc::Min || e.agg == AggFunc::Max) {
      add(e.agg, rc.table, rc.column, src);
      return;
    }
    // SUM and AVG share the pair; both need the group's non-NULL count to
    // decode and to pick the right boundary entry.
    add(AggFunc::Sum, rc.table, rc.column, src);
    add(AggFunc::Count, rc.table, rc.column, src);
  }

  void note_aggs_in_pred(std::vector<PendingAgg>& pending, const Pred& p) {
    switch (p.kind) {
      case Pred::Kind::And:
      case Pred::Kind::Or:
        note_aggs_in_pred(pending, *p.left);
        note_aggs_in_pred(pending, *p.right);
        return;
      case Pred::Kind::Cmp:
        note_agg(pending, *p.a);
        note_agg(pending, *p.b);
        return;
      case Pred::Kind::Between:
        note_agg(pending, *p.a);
        note_agg(pending, *p.lo);
        note_agg(pending, *p.hi);
        return;
      case Pred::Kind::IsNull:
        note_agg(pending, *p.a);
        return;
      case Pred::Kind::InList:
        note_agg(pending, *p.a);
        for (const sql::ExprPtr& item : p.items) note_agg(pending, *item);
        return;
      default:
        return;
    }
  }

  // ---- SELECT pipeline -------------------------------------------------------

  struct SelectValue {  // what a scalar subquery pipeline yields
    int col = -1;
    bool plain = false;
    const ColumnSpec* spec = nullptr;
  };

  SelectValue translate_select(const Select& sel, int depth, Mode mode) {
    // Uncorrelated subqueries evaluate first; their pipelines precede ours.
    if (sel.where) collect_subqueries(*sel.where, depth);
    if (sel.having) collect_subqueries(*sel.having, depth);

    build_from(&sel, sel.from, nullptr);

    emit_where_likes(sel.where.get());
    if (sel.where) {
      Step s;
      s.kind = Step::Kind::Filter;
      s.role = Step::FilterRole::Where;
      s.pred = lower_pred(*sel.where);
      push_step(std::move(s));
    }

    bool any_aggregate = sel.having != nullptr;
    for (const SelectItem& item : sel.items) {
      if (item.kind == SelectItem::Kind::Expr &&
          item.expr->kind == Expr::Kind::Aggregate) {
        any_aggregate = true;
      }
    }
    bool grouped = !sel.group_by.empty();

    if (!grouped && !sel.having && sel.items.size() == 1 &&
        sel.items[0].kind == SelectItem::Kind::Expr &&
        sel.items[0].expr->kind == Expr::Kind::Aggregate &&
        sel.items[0].expr->agg == AggFunc::Sum) {
      // A bare total sums the column and its extension directly; no grouping
      // machinery is needed.
      const sql::ResolvedColumn& rc = res_.columns.at(&sel.items[0].expr->arg->col);
      int src = find_col(rc.table, rc.column);
      Step s;
      s.kind = Step::Kind::EmitSumPair;
      s.column = src;
      PlanColumn pair;
      pair.name = "SUM(" + cur_[src].name + ")";
      pair.kind = PlanColumn::Kind::SumPair;
      PlanColumn count;
      count.name = "COUNT(" + cur_[src].name + ")";
      count.kind = PlanColumn::Kind::PlainCount;
      cur_ = {pair, count};
      ids_.assign(2, {});
      push_step(std::move(s));
      agg_slots_.clear();
      agg_slots_[{AggFunc::Sum, rc.table, rc.column}] = 0;
      agg_slots_[{AggFunc::Count, rc.table, rc.column}] = 1;
    } else if (grouped || any_aggregate) {
      translate_grouping(sel, depth);
    }

    if (!sel.order_by.empty()) {
      Step s;
      s.kind = Step::Kind::Sort;
      for (const sql::OrderItem& item : sel.order_by) {
        SortKey k;
        k.col = index_of(item.col);
        k.desc = item.desc;
        k.x = x_for(*spec_of(item.col));
        s.sort_keys.push_back(std::move(k));
      }
      push_step(std::move(s));
    }

    if (mode == Mode::Scalar) {
      return scalar_value(sel);
    }
    project_items(sel, mode);
    return {};
  }

  // Grouped pipeline: canonical representatives -> temp -> aggregation.
  void translate_grouping(const Select& sel, int depth) {
    bool grouped = !sel.group_by.empty();

    if (grouped) {
      Step canon;
      canon.kind = Step::Kind::Canonicalize;
      for (const ColumnRef& keyref : sel.group_by) {
        const sql::ResolvedColumn& rc = res_.columns.at(&keyref);
        int idx = find_col(rc.table, rc.column);
        canon.keys.push_back(idx);
        canon.key_xs.push_back(x_for(*rc.column));
        PlanColumn rep = cur_[idx];
        rep.name += "_Group";
        cur_.push_back(rep);
        // Later references to the key resolve to the representative; the raw
        // column keeps its noise and would split groups.
        ids_.push_back(ids_[idx]);
        ids_[idx] = {};
      }
      push_step(std::move(canon));

      std::string temp = temp_name(depth, true);
      Step create;
      create.kind = Step::Kind::CreateTemp;
      create.temp = temp;
      push_step(std::move(create));
      open_temps_.push_back(temp);

      Step scan;
      scan.kind = Step::Kind::ScanTemp;
      scan.temp = temp;
      push_step(std::move(scan));
    }

    // HAVING LIKE flags compute on the representatives, before aggregation,
    // and ride through it; a group's rows share one plaintext key, so the
    // flag is constant within the group.
    std::vector<const Pred*> having_likes;
    if (sel.having) collect_likes(*sel.having, having_likes);
    std::vector<int> having_like_flags;
    for (const Pred* p : having_likes) {
      having_like_flags.push_back(emit_match(*p, index_of(p->like_col)));
    }

    // Aggregate specs: select list first, then HAVING extras, then the flag
    // pass-throughs. Deduped by function and argument identity.
    std::vector<PendingAgg> pending;
    for (const SelectItem& item : sel.items) {
      if (item.kind == SelectItem::Kind::Expr) note_agg(pending, *item.expr);
    }
    if (sel.having) note_aggs_in_pred(pending, *sel.having);

    Step agg;
    agg.kind = Step::Kind::GroupAggregate;
    std::vector<PlanColumn> next;
    std::vector<ColId> next_ids;
    if (grouped) {
      int n_keys = int(sel.group_by.size());
      int base = int(cur_.size()) - int(having_like_flags.size()) - n_keys;
      for (int i = 0; i < n_keys; ++i) {
        agg.keys.push_back(base + i);
        next.push_back(cur_[base + i]);
        next_ids.push_back(ids_[base + i]);
      }
    }
    agg_slots_.clear();
    for (const PendingAgg& p : pending) {
      AggSpec spec;
      spec.col = p.src_col;
      switch (p.key.f) {
        case AggFunc::Min: spec.kind = AggSpec::Kind::Min; break;
        case AggFunc::Max: spec.kind = AggSpec::Kind::Max; break;
        case AggFunc::Count: spec.kind = AggSpec::Kind::Count; break;
        case AggFunc::Sum:
        case AggFunc::Avg: spec.kind = AggSpec::Kind::SumPair; break;
      }
      PlanColumn out;
      std::string arg = p.src_col < 0 ? "*" : cur_[p.src_col].name;
      switch (spec.kind) {
        case AggSpec::Kind::Min: out.name = "MIN(" + arg + ")"; break;
        case AggSpec::Kind::Max: out.name = "MAX(" + arg + ")"; break;
        case AggSpec::Kind::Count: out.name = "COUNT(" + arg + ")"; break;
        case AggSpec::Kind::SumPair: out.name = "SUM(" + arg + ")"; break;
        case AggSpec::Kind::First: break;
      }
      if (spec.kind == AggSpec::Kind::Count) {
        out.kind = PlanColumn::Kind::PlainCount;
      } else if (spec.kind == AggSpec::Kind::SumPair) {
        out.kind = PlanColumn::Kind::SumPair;
      } else {
        out = cur_[p.src_col];
        out.name = (spec.kind == AggSpec::Kind::Min ? "MIN(" : "MAX(") + arg + ")";
        out.owner.clear();
      }
      spec.out_name = out.name;
      agg_slots_[p.key] = int(next.size());
      next.push_back(out);
      next_ids.push_back({});
      agg.aggs.push_back(std::move(spec));
    }
    for (std::size_t i = 0; i < having_like_flags.size(); ++i) {
      AggSpec spec;
      spec.kind = AggSpec::Kind::First;
      spec.col = having_like_flags[i];
      spec.out_name = cur_[having_like_flags[i]].name;
      like_flags_[having_likes[i]] = int(next.size());
      next.push_back(cur_[having_like_flags[i]]);
      next_ids.push_back({});
      agg.aggs.push_back(std::move(spec));
    }

    cur_ = std::move(next);
    ids_ = std::move(next_ids);
    push_step(std::move(agg));

    if (sel.having) {
      Step s;
      s.kind = Step::Kind::Filter;
      s.role = Step::FilterRole::Having;
      s.pred = lower_pred(*sel.having, true);
      push_step(std::move(s));
    }
  }

  SelectValue scalar_value(const Select& sel) {
    const Expr& e = *sel.items[0].expr;
    SelectValue v;
    if (e.kind == Expr::Kind::Column) {
      const sql::ResolvedColumn& rc = res_.columns.at(&e.col);
      v.col = find_col(rc.table, rc.column);
      v.spec = rc.column;
      return v;
    }
    // Aggregate: COUNT yields plaintext, MIN/MAX a cipher of the argument.
    if (e.agg == AggFunc::Count) {
      v.col = count_slot(e);
      v.plain = true;
      return v;
    }
    const sql::ResolvedColumn& rc = res_.columns.at(&e.arg->col);
    v.col = agg_slots_.at({e.agg, rc.table, rc.column});
    v.spec = rc.column;
    return v;
  }

  // Select list -> Project step + owner-side fields (Top) or plain projection
  // (Exists / Source).
  void project_items(const Select& sel, Mode mode) {
    Step proj;
    proj.kind = Step::Kind::Project;
    std::vector<PlanColumn> out_cols;
    std::vector<OutputField> fields;
    // SUM/AVG fields need the group count. If the count is itself a select
    // item it is reused; otherwise it appends after the visible columns so
    // result headers stay aligned with the select list. Resolution waits
    // until the visible width is final.
    std::vector<std::pair<std::size_t, int>> pending_counts;  // field, cur_ index

    auto add_col = [&](int idx) {
      proj.cols.push_back(idx);
      out_cols.push_back(cur_[idx]);
      return int(out_cols.size()) - 1;
    };

    for (const SelectItem& item : sel.items) {
      if (item.kind == SelectItem::Kind::Star ||
          item.kind == SelectItem::Kind::TableStar) {
        for (std::size_t i = 0; i < cur_.size(); ++i) {
          if (cur_[i].kind != PlanColumn::Kind::Cipher || !ids_[i].table) continue;
          if (item.kind == SelectItem::Kind::TableStar &&
              normalize_ident(ids_[i].table->name) != normalize_ident(item.table)) {
            continue;
          }
          int slot = add_col(int(i));
          OutputField f;
          f.kind = OutputField::Kind::Cipher;
          f.display = ids_[i].column->name;
          f.spec = *ids_[i].column;
          f.domain = ids_[i].column->domain;
          f.slot = slot;
          fields.push_back(std::move(f));
        }
        continue;
      }
      const Expr& e = *item.expr;
      if (e.kind == Expr::Kind::Literal) {
        OutputField f;
        f.kind = OutputField::Kind::Const;
        f.display = e.lit.display();
        f.constant = e.lit;
        fields.push_back(std::move(f));
        continue;
      }
      if (e.kind == Expr::Kind::Column) {
        const sql::ResolvedColumn& rc = res_.columns.at(&e.col);
        int slot = add_col(find_col(rc.table, rc.column));
        OutputField f;
        f.kind = OutputField::Kind::Cipher;
        f.display = rc.column->name;
        f.spec = *rc.column;
        f.domain = rc.column->domain;
        f.slot = slot;
        fields.push_back(std::move(f));
        continue;
      }
      // Aggregate.
      OutputField f;
      if (e.agg == AggFunc::Count) {
        f.kind = OutputField::Kind::PlainCount;
        f.display = (e.arg && e.arg->kind == Expr::Kind::Column)
                        ? "COUNT(" + res_.columns.at(&e.arg->col).column->name + ")"
                        : "COUNT(*)";
        f.slot = add_col(count_slot(e));
        fields.push_back(std::move(f));
        continue;
      }
      const sql::ResolvedColumn& rc = res_.columns.at(&e.arg->col);
      if (e.agg == AggFunc::Min || e.agg == AggFunc::Max) {
        f.kind = OutputField::Kind::Cipher;
        f.display = (e.agg == AggFunc::Min ? "MIN(" : "MAX(") + rc.column->name + ")";
        f.spec = *rc.column;
        f.domain = rc.column->domain;
        f.slot = add_col(agg_slots_.at({e.agg, rc.table, rc.column}));
        fields.push_back(std::move(f));
        continue;
      }
      f.kind = e.agg == AggFunc::Avg ? OutputField::Kind::Avg : OutputField::Kind::SumPair;
      f.display = (e.agg == AggFunc::Avg ? "AVG(" : "SUM(") + rc.column->name + ")";
      f.spec = *rc.column;
      f.domain = rc.column->domain;
      f.slot = add_col(agg_slots_.at({AggFunc::Sum, rc.table, rc.column}));
      pending_counts.emplace_back(fields.size(),
                                  agg_slots_.at({AggFunc::Count, rc.table, rc.column}));
      fields.push_back(std::move(f));
    }

    int base = int(out_cols.size());
    std::vector<int> hidden;  // cur_ indexes appended after the visible columns
    auto count_pos = [&](int cidx) {
      for (int s = 0; s < base; ++s) {
        if (proj.cols[std::size_t(s)] == cidx) return s;
      }
      for (std::size_t i = 0; i < hidden.size(); ++i) {
        if (hidden[i] == cidx) return base + int(i);
      }
      hidden.push_back(cidx);
      return base + int(hidden.size()) - 1;
    };
    for (const auto& [field, cidx] : pending_counts) {
      fields[field].count_slot = count_pos(cidx);
    }
    for (int idx : hidden) {
      proj.cols.push_back(idx);
      out_cols.push_back(cur_[idx]);
    }

    cur_ = out_cols;
    ids_.assign(cur_.size(), {});
    push_step(std::move(proj));
    if (mode == Mode::Top) {
      plan_.output = std::move(out_cols);
      fields_ = std::move(fields);
    } else if (mode == Mode::Source) {
      // Source items are validated one-to-one against the insert targets, so
      // Star never appears here; constant items carry no projected slot.
      item_slots_.clear();
      int next_real = 0;
      for (const SelectItem& item : sel.items) {
        bool real = item.kind == SelectItem::Kind::Expr &&
                    item.expr->kind != Expr::Kind::Literal;
        item_slots_.push_back(real ? next_real++ : -1);
      }
    }
  }

  std::vector<int> item_slots_;  // per select item: projected slot or -1

  // ---- statements ----------------------------------------------------------

  std::vector<const ColumnSpec*> insert_targets(const sql::Insert& ins,
                                                const TableSpec& t) {
    std::vector<const ColumnSpec*> targets;
    if (ins.columns.empty()) {
      for (const ColumnSpec& c : t.columns) targets.push_back(&c);
      return targets;
    }
    for (const std::string& name : ins.columns) targets.push_back(t.find_column(name));
    return targets;
  }

  void translate_insert(const sql::Insert& ins) {
    const TableSpec* t = m_.find_table(ins.table);
    std::vector<const ColumnSpec*> targets = insert_targets(ins, *t);
    Step s;
    s.kind = Step::Kind::InsertRows;
    s.table = t->anon_name;
    for (const ColumnSpec& c : t->columns) {
      s.columns.push_back(c.anon_name);
      // Mutations leave no relation behind; layout describes the write
      // targets instead so the renderer can expand extension companions.
      s.layout.push_back(plan_column(*t, c));
    }

    auto target_pos = [&](const ColumnSpec& c) -> int {
      for (std::size_t j = 0; j < targets.size(); ++j) {
        if (targets[j] == &c) return int(j);
      }
      return -1;
    };

    if (ins.source) {
      translate_select(*ins.source, 1, Mode::Source);
      s.from_current = true;
      for (const ColumnSpec& c : t->columns) {
        WriteSource src;
        int j = target_pos(c);
        if (j < 0) {
          src.kind = WriteSource::Kind::Cell;
          src.cell = null_cell(c);
        } else if (item_slots_[std::size_t(j)] >= 0) {
          src.kind = WriteSource::Kind::ScopeColumn;
          src.column = item_slots_[std::size_t(j)];
        } else {
          // A constant select item repeats for every produced row.
          src.kind = WriteSource::Kind::Cell;
          src.cell = literal_cell(c, ins.source->items[std::size_t(j)].expr->lit, true);
        }
        s.sources.push_back(std::move(src));
      }
      plan_.outcome = CipherPlan::Outcome::Affected;
      push_consuming_step(std::move(s));
      return;
    }

    for (const auto& row : ins.rows) {
      std::vector<CipherCell> cells;
      for (const ColumnSpec& c : t->columns) {
        int j = target_pos(c);
        if (j < 0 || row[std::size_t(j)].is_default ||
            row[std::size_t(j)].value.is_null()) {
          cells.push_back(null_cell(c));
        } else {
          cells.push_back(literal_cell(c, row[std::size_t(j)].value, true));
        }
      }
      s.rows.push_back(std::move(cells));
    }
    plan_.outcome = CipherPlan::Outcome::Affected;
    push_consuming_step(std::move(s));
  }

  CipherCell null_cell(const ColumnSpec& c) {
    CipherCell cell;
    cell.kind = text_rule(c) ? CipherCell::Kind::Text : CipherCell::Kind::Number;
    if (cell.kind == CipherCell::Kind::Text) cell.text = "0";
    return cell;
  }

  void translate_update(const sql::Update& upd) {
    const TableSpec* target = m_.find_table(upd.table);
    int rowid_col;
    if (upd.where) collect_subqueries(*upd.where, 1);
    if (upd.from.empty()) {
      cur_.clear();
      ids_.clear();
      scan_columns(*target);
      append_rowid(*target);
      rowid_col = int(cur_.size()) - 1;
      Step scan;
      scan.kind = Step::Kind::Scan;
      scan.table = target->anon_name;
      scan.with_rowid = true;
      push_step(std::move(scan));
    } else {
      rowid_col = build_from(nullptr, upd.from, target);
    }

    emit_where_likes(upd.where.get());
    if (upd.where) {
      Step s;
      s.kind = Step::Kind::Filter;
      s.role = Step::FilterRole::Where;
      s.pred = lower_pred(*upd.where);
      push_step(std::move(s));
    }

    Step s;
    s.kind = Step::Kind::UpdateRows;
    s.table = target->anon_name;
    s.rowid_col = rowid_col;
    for (const sql::SetPair& pair : upd.sets) {
      UpdateSet set;
      const ColumnSpec* col = target->find_column(pair.column);
      set.column = col->anon_name;
      s.layout.push_back(plan_column(*target, *col));
      const Expr& v = *pair.value;
      if (v.kind == Expr::Kind::Literal) {
        set.source.kind = WriteSource::Kind::Cell;
        set.source.cell = (v.is_default || v.lit.is_null())
                              ? null_cell(*col)
                              : literal_cell(*col, v.lit, true);
      } else {
        set.source.kind = WriteSource::Kind::ScopeColumn;
        set.source.column = index_of(v.col);
      }
      s.sets.push_back(std::move(set));
    }
    plan_.outcome = CipherPlan::Outcome::Affected;
    push_consuming_step(std::move(s));
  }

  void translate_delete(const sql::Delete& del) {
    const TableSpec* target = m_.find_table(del.table);
    if (del.where) collect_subqueries(*del.where, 1);
    cur_.clear();
    ids_.clear();
    scan_columns(*target);
    append_rowid(*target);
    int rowid_col = int(cur_.size()) - 1;
    Step scan;
    scan.kind = Step::Kind::Scan;
    scan.table = target->anon_name;
    scan.with_rowid = true;
    push_step(std::move(scan));

    emit_where_likes(del.where.get());
    if (del.where) {
      Step s;
      s.kind = Step::Kind::Filter;
      s.role = Step::FilterRole::Where;
      s.pred = lower_pred(*del.where);
      push_step(std::move(s));
    }

    Step s;
    s.kind = Step::Kind::DeleteRows;
    s.table = target->anon_name;
    s.rowid_col = rowid_col;
    plan_.outcome = CipherPlan::Outcome::Affected;
    push_consuming_step(std::move(s));
  }
};

}  // namespace

Translation translate_statement(const sql::Statement& stmt, const sql::Resolution& res,
                                const SchemaManifest& manifest, const KeyRing& keys,
                                SplitRng& rng) {
  Builder b(res, manifest, keys, rng);
  return b.run(stmt);
}

}  // namespace opeadb
