#include <string>
#include <utility>

#include "opeadb/errors.hpp"
#include "opeadb/sql/parser.hpp"

namespace opeadb::sql {
namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Statement statement() {
    Statement st;
    if (at_kw("SELECT")) {
      st.kind = Statement::Kind::Select;
      st.select = select_body(/*top_level=*/true);
    } else if (at_kw("INSERT")) {
      st.kind = Statement::Kind::Insert;
      st.insert = insert_body();
    } else if (at_kw("UPDATE")) {
      st.kind = Statement::Kind::Update;
      st.update = update_body();
    } else if (at_kw("DELETE")) {
      st.kind = Statement::Kind::Delete;
      st.del = delete_body();
    } else {
      fail_here("a SELECT, INSERT, UPDATE, or DELETE statement");
    }
    if (at_punct(';')) take();
    if (cur().kind != Token::Kind::End) fail_here("end of statement");
    return st;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t ahead) const {
    std::size_t i = pos_ + ahead;
    return toks_[std::min(i, toks_.size() - 1)];
  }
  Token take() { return toks_[pos_++]; }

  bool at_kw(const char* kw) const {
    return cur().kind == Token::Kind::Keyword && cur().text == kw;
  }
  bool at_punct(char c) const {
    return cur().kind == Token::Kind::Punct && cur().text[0] == c;
  }
  bool kw_at(std::size_t ahead, const char* kw) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Keyword && t.text == kw;
  }
  bool take_kw(const char* kw) {
    if (!at_kw(kw)) return false;
    take();
    return true;
  }
  void expect_kw(const char* kw) {
    if (!take_kw(kw)) fail_here(std::string("'") + kw + "'");
  }
  void expect_punct(char c) {
    if (!at_punct(c)) fail_here(std::string("'") + c + "'");
    take();
  }
  std::string expect_ident() {
    if (cur().kind != Token::Kind::Ident) fail_here("an identifier");
    return take().text;
  }

  [[noreturn]] void fail_here(const std::string& expected) {
    fail(ErrorKind::Parse, "expected " + expected + " at offset " +
                               std::to_string(cur().pos) + ", found '" + cur().text + "'");
  }

  static ExprPtr make_literal(Value v) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Literal;
    e->lit = std::move(v);
    return e;
  }

  // ---- expressions ----------------------------------------------------

  bool at_agg_kw() const {
    return at_kw("MIN") || at_kw("MAX") || at_kw("COUNT") || at_kw("SUM") || at_kw("AVG");
  }

  ExprPtr expr() {  // additive level; arithmetic is parsed only to be rejected later
    ExprPtr left = expr_term();
    while (at_punct('+') || at_punct('-')) {
      char op = take().text[0];
      auto node = std::make_unique<Expr>();
      node->kind = Expr::Kind::Arith;
      node->arith_op = op;
      node->lhs = std::move(left);
      node->rhs = expr_term();
      left = std::move(node);
    }
    return left;
  }

  ExprPtr expr_term() {
    ExprPtr left = expr_primary();
    while (at_punct('*') || at_punct('/')) {
      char op = take().text[0];
      auto node = std::make_unique<Expr>();
      node->kind = Expr::Kind::Arith;
      node->arith_op = op;
      node->lhs = std::move(left);
      node->rhs = expr_primary();
      left = std::move(node);
    }
    return left;
  }

  static long long parse_ll(const std::string& s) {
    try {
      return std::stoll(s);
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "numeric literal out of range: " + s);
    }
  }

  Value number_value(const Token& t) const {
    if (t.kind == Token::Kind::Integer) return Value::integer(parse_ll(t.text));
    std::size_t dot = t.text.find('.');
    std::string digits = t.text.substr(0, dot) + t.text.substr(dot + 1);
    return Value::decimal(parse_ll(digits), unsigned(t.text.size() - dot - 1));
  }

  ExprPtr expr_primary() {
    if (cur().kind == Token::Kind::Integer || cur().kind == Token::Kind::Decimal) {
      return make_literal(number_value(take()));
    }
    if (at_punct('-')) {
      take();
      if (cur().kind != Token::Kind::Integer && cur().kind != Token::Kind::Decimal) {
        fail_here("a number after unary '-'");
      }
      Value v = number_value(take());
      Value neg = v.kind() == Value::Kind::Integer
                      ? Value::integer(-v.as_integer())
                      : Value::decimal(-v.unscaled(), v.scale());
      return make_literal(neg);
    }
    if (cur().kind == Token::Kind::String) return make_literal(Value::text(take().text));
    if (take_kw("NULL")) return make_literal(Value::null());
    if (at_agg_kw()) return aggregate_call();
    if (cur().kind == Token::Kind::Ident) {
      if (peek(1).kind == Token::Kind::Punct && peek(1).text == "(") {
        auto e = std::make_unique<Expr>();  // unknown function, rejected downstream
        e->kind = Expr::Kind::Call;
        e->call_name = take().text;
        expect_punct('(');
        if (!at_punct(')')) {
          e->args.push_back(expr());
          while (at_punct(',')) {
            take();
            e->args.push_back(expr());
          }
        }
        expect_punct(')');
        return e;
      }
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Column;
      e->col = column_ref();
      return e;
    }
    if (at_punct('(')) {
      take();
      if (at_kw("SELECT")) {
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::Subquery;
        e->sub = subquery_body();
        expect_punct(')');
        return e;
      }
      ExprPtr inner = expr();
      expect_punct(')');
      return inner;
    }
    fail_here("an expression");
  }

  ExprPtr aggregate_call() {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Aggregate;
    std::string name = take().text;
    e->agg = name == "MIN"     ? AggFunc::Min
             : name == "MAX"   ? AggFunc::Max
             : name == "COUNT" ? AggFunc::Count
             : name == "SUM"   ? AggFunc::Sum
                               : AggFunc::Avg;
    expect_punct('(');
    if (take_kw("DISTINCT")) e->distinct = true;
    if (at_punct('*')) {
      take();
      e->arg = nullptr;  // COUNT(*)
    } else {
      e->arg = expr();
    }
    expect_punct(')');
    return e;
  }

  ColumnRef column_ref() {
    ColumnRef ref;
    ref.column = expect_ident();
    if (at_punct('.')) {
      take();
      ref.table = std::move(ref.column);
      ref.column = expect_ident();
    }
    return ref;
  }

  // ---- conditions ------------------------------------------------------

  PredPtr condition() {  // OR level
    PredPtr left = condition_and();
    while (take_kw("OR")) {
      auto node = std::make_unique<Pred>();
      node->kind = Pred::Kind::Or;
      node->left = std::move(left);
      node->right = condition_and();
      left = std::move(node);
    }
    return left;
  }

  PredPtr condition_and() {
    PredPtr left = condition_atom();
    while (take_kw("AND")) {
      auto node = std::make_unique<Pred>();
      node->kind = Pred::Kind::And;
      node->left = std::move(left);
      node->right = condition_atom();
      left = std::move(node);
    }
    return left;
  }

  PredPtr condition_atom() {
    if (at_kw("EXISTS") || (at_kw("NOT") && kw_at(1, "EXISTS"))) {
      auto p = std::make_unique<Pred>();
      p->kind = Pred::Kind::Exists;
      p->negated = take_kw("NOT");
      expect_kw("EXISTS");
      expect_punct('(');
      if (!at_kw("SELECT")) fail_here("a subquery after EXISTS");
      p->sub = subquery_body();
      expect_punct(')');
      return p;
    }
    if (at_punct('(') && !kw_at(1, "SELECT")) {  // grouped condition
      take();
      PredPtr inner = condition();
      expect_punct(')');
      return inner;
    }
    return predicate();
  }

  static CmpOp cmp_from_text(const std::string& s) {
    if (s == "=") return CmpOp::Eq;
    if (s == "<>" || s == "!=") return CmpOp::Ne;
    if (s == "<") return CmpOp::Lt;
    if (s == "<=" || s == "!>") return CmpOp::Le;
    if (s == ">") return CmpOp::Gt;
    return CmpOp::Ge;  // >= or !<
  }

  bool at_cmp_op() const { return cur().kind == Token::Kind::Op; }

  PredPtr predicate() {
    ExprPtr a = expr();
    if (at_cmp_op()) {
      auto p = std::make_unique<Pred>();
      p->kind = Pred::Kind::Cmp;
      p->op = cmp_from_text(take().text);
      p->a = std::move(a);
      p->b = expr();
      return p;
    }
    if (take_kw("IS")) {
      auto p = std::make_unique<Pred>();
      p->kind = Pred::Kind::IsNull;
      p->negated = take_kw("NOT");
      expect_kw("NULL");
      p->a = std::move(a);
      return p;
    }
    bool negated = take_kw("NOT");
    if (take_kw("BETWEEN")) {
      auto p = std::make_unique<Pred>();
      p->kind = Pred::Kind::Between;
      p->negated = negated;
      p->a = std::move(a);
      p->lo = expr();
      expect_kw("AND");
      p->hi = expr();
      return p;
    }
    if (take_kw("IN")) {
      auto p = std::make_unique<Pred>();
      p->kind = Pred::Kind::InList;
      p->negated = negated;
      p->a = std::move(a);
      expect_punct('(');
      p->items.push_back(expr());
      while (at_punct(',')) {
        take();
        p->items.push_back(expr());
      }
      expect_punct(')');
      return p;
    }
    if (take_kw("LIKE")) {
      if (a->kind != Expr::Kind::Column) {
        fail(ErrorKind::Parse, "the LIKE subject must be a column name");
      }
      auto p = std::make_unique<Pred>();
      p->kind = Pred::Kind::Like;
      p->negated = negated;
      p->like_col = a->col;
      if (cur().kind != Token::Kind::String) fail_here("a pattern string after LIKE");
      p->pattern = take().text;
      if (take_kw("ESCAPE")) {
        if (cur().kind != Token::Kind::String || cur().text.size() != 1) {
          fail_here("a one-character string after ESCAPE");
        }
        p->escape = take().text[0];
      }
      return p;
    }
    fail_here("a comparison operator, BETWEEN, IS, IN, or LIKE");
  }

  // ---- SELECT ----------------------------------------------------------

  std::unique_ptr<Select> subquery_body() {
    if (++depth_ > kMaxSubqueryDepth) {
      fail(ErrorKind::Parse,
           "subquery nesting exceeds the 32 nesting levels allowed");
    }
    auto sel = select_body(/*top_level=*/false);
    --depth_;
    return sel;
  }

  std::unique_ptr<Select> select_body(bool top_level) {
    expect_kw("SELECT");
    auto sel = std::make_unique<Select>();
    if (take_kw("DISTINCT")) sel->distinct = true;
    sel->items.push_back(select_item());
    while (at_punct(',')) {
      take();
      sel->items.push_back(select_item());
    }
    expect_kw("FROM");
    sel->from.push_back(table_ref());
    while (at_punct(',')) {
      take();
      sel->from.push_back(table_ref());
    }
    if (take_kw("WHERE")) sel->where = condition();
    if (at_kw("GROUP")) {
      take();
      expect_kw("BY");
      sel->group_all = take_kw("ALL");
      sel->group_by.push_back(column_ref());
      while (at_punct(',')) {
        take();
        sel->group_by.push_back(column_ref());
      }
    }
    if (take_kw("HAVING")) sel->having = condition();
    if (at_kw("ORDER")) {
      if (!top_level) fail(ErrorKind::Parse, "ORDER BY is not allowed inside a subquery");
      take();
      expect_kw("BY");
      do {
        OrderItem item;
        item.col = column_ref();
        if (take_kw("DESC")) {
          item.desc = true;
        } else {
          take_kw("ASC");
        }
        sel->order_by.push_back(std::move(item));
      } while (at_punct(',') && (take(), true));
    }
    return sel;
  }

  SelectItem select_item() {
    SelectItem item;
    if (at_punct('*')) {
      take();
      item.kind = SelectItem::Kind::Star;
      return item;
    }
    if (cur().kind == Token::Kind::Ident && peek(1).kind == Token::Kind::Punct &&
        peek(1).text == "." && peek(2).kind == Token::Kind::Punct && peek(2).text == "*") {
      item.kind = SelectItem::Kind::TableStar;
      item.table = take().text;
      take();  // .
      take();  // *
      return item;
    }
    item.kind = SelectItem::Kind::Expr;
    item.expr = expr();
    return item;
  }

  TableRef table_ref() {
    TableRef ref;
    std::string name = expect_ident();
    JoinType jt = JoinType::Inner;
    bool joined = false;
    if (at_kw("JOIN")) {
      joined = true;
    } else if (at_kw("INNER") || at_kw("LEFT") || at_kw("RIGHT") || at_kw("FULL")) {
      std::string t = take().text;
      jt = t == "INNER"  ? JoinType::Inner
           : t == "LEFT" ? JoinType::Left
           : t == "RIGHT" ? JoinType::Right
                          : JoinType::Full;
      joined = true;
      if (!at_kw("JOIN")) fail_here("'JOIN'");
    }
    if (!joined) {
      ref.table = std::move(name);
      return ref;
    }
    expect_kw("JOIN");
    ref.joined = true;
    ref.left = std::move(name);
    ref.jt = jt;
    ref.right = expect_ident();
    expect_kw("ON");
    ref.on = condition();
    return ref;
  }

  // ---- INSERT / UPDATE / DELETE -----------------------------------------

  std::unique_ptr<Insert> insert_body() {
    expect_kw("INSERT");
    take_kw("INTO");
    auto ins = std::make_unique<Insert>();
    ins->table = expect_ident();
    if (at_punct('(')) {
      take();
      ins->columns.push_back(expect_ident());
      while (at_punct(',')) {
        take();
        ins->columns.push_back(expect_ident());
      }
      expect_punct(')');
    }
    if (take_kw("VALUES")) {
      ins->rows.push_back(values_row());
      while (at_punct(',')) {
        take();
        ins->rows.push_back(values_row());
      }
    } else if (at_kw("SELECT")) {
      ++depth_;  // the source select may nest further subqueries
      ins->source = select_body(/*top_level=*/true);
      --depth_;
    } else {
      fail_here("VALUES or a SELECT source");
    }
    return ins;
  }

  std::vector<InsertRowEntry> values_row() {
    expect_punct('(');
    std::vector<InsertRowEntry> row;
    row.push_back(values_entry());
    while (at_punct(',')) {
      take();
      row.push_back(values_entry());
    }
    expect_punct(')');
    return row;
  }

  InsertRowEntry values_entry() {
    InsertRowEntry entry;
    if (take_kw("DEFAULT")) {
      entry.is_default = true;
      entry.value = Value::null();
      return entry;
    }
    if (take_kw("NULL")) {
      entry.value = Value::null();
      return entry;
    }
    if (cur().kind == Token::Kind::String) {
      entry.value = Value::text(take().text);
      return entry;
    }
    bool neg = false;
    if (at_punct('-')) {
      take();
      neg = true;
    }
    if (cur().kind != Token::Kind::Integer && cur().kind != Token::Kind::Decimal) {
      fail_here("a literal, NULL, or DEFAULT in VALUES");
    }
    Value v = number_value(take());
    if (neg) {
      v = v.kind() == Value::Kind::Integer ? Value::integer(-v.as_integer())
                                           : Value::decimal(-v.unscaled(), v.scale());
    }
    entry.value = std::move(v);
    return entry;
  }

  std::unique_ptr<Update> update_body() {
    expect_kw("UPDATE");
    auto upd = std::make_unique<Update>();
    upd->table = expect_ident();
    expect_kw("SET");
    do {
      SetPair pair;
      pair.column = expect_ident();
      if (cur().kind != Token::Kind::Op || cur().text != "=") fail_here("'='");
      take();
      if (take_kw("DEFAULT")) {
        pair.value = make_literal(Value::null());
        pair.value->is_default = true;
      } else {
        pair.value = expr();
      }
      upd->sets.push_back(std::move(pair));
    } while (at_punct(',') && (take(), true));
    if (take_kw("FROM")) {
      upd->from.push_back(table_ref());
      while (at_punct(',')) {
        take();
        upd->from.push_back(table_ref());
      }
    }
    if (take_kw("WHERE")) upd->where = condition();
    return upd;
  }

  std::unique_ptr<Delete> delete_body() {
    expect_kw("DELETE");
    take_kw("FROM");
    auto del = std::make_unique<Delete>();
    del->table = expect_ident();
    if (take_kw("WHERE")) del->where = condition();
    return del;
  }
};

}  // namespace

Statement parse_statement(std::string_view text) {
  Parser parser(tokenize(text));
  return parser.statement();
}

}  // namespace opeadb::sql
