#include <string>

#include "opeadb/errors.hpp"
#include "opeadb/sql/parser.hpp"

namespace opeadb::sql {
namespace {

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    out.push_back(c);
    if (c == '\'') out.push_back('\'');
  }
  out.push_back('\'');
  return out;
}

std::string cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "<>";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  fail(ErrorKind::Internal, "bad cmp op");
}

std::string agg_text(AggFunc f) {
  switch (f) {
    case AggFunc::Min: return "MIN";
    case AggFunc::Max: return "MAX";
    case AggFunc::Count: return "COUNT";
    case AggFunc::Sum: return "SUM";
    case AggFunc::Avg: return "AVG";
  }
  fail(ErrorKind::Internal, "bad aggregate");
}

std::string col_text(const ColumnRef& c) {
  return c.table.empty() ? c.column : c.table + "." + c.column;
}

std::string literal_text(const Expr& e) {
  if (e.is_default) return "DEFAULT";
  if (e.lit.kind() == Value::Kind::Text) return quote(e.lit.as_text());
  return e.lit.display();  // NULL renders as the keyword
}

}  // namespace

std::string render_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Column:
      return col_text(e.col);
    case Expr::Kind::Literal:
      return literal_text(e);
    case Expr::Kind::Aggregate: {
      std::string body = e.arg ? render_expr(*e.arg) : "*";
      if (e.distinct) body = "DISTINCT " + body;
      return agg_text(e.agg) + "(" + body + ")";
    }
    case Expr::Kind::Subquery:
      return "(" + render(*e.sub) + ")";
    case Expr::Kind::Arith:
      return "(" + render_expr(*e.lhs) + " " + e.arith_op + " " + render_expr(*e.rhs) + ")";
    case Expr::Kind::Call: {
      std::string out = e.call_name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*e.args[i]);
      }
      return out + ")";
    }
  }
  fail(ErrorKind::Internal, "bad expr kind");
}

std::string render_pred(const Pred& p) {
  switch (p.kind) {
    case Pred::Kind::And:
      return "(" + render_pred(*p.left) + " AND " + render_pred(*p.right) + ")";
    case Pred::Kind::Or:
      return "(" + render_pred(*p.left) + " OR " + render_pred(*p.right) + ")";
    case Pred::Kind::Cmp:
      return render_expr(*p.a) + " " + cmp_text(p.op) + " " + render_expr(*p.b);
    case Pred::Kind::Between:
      return render_expr(*p.a) + (p.negated ? " NOT" : "") + " BETWEEN " +
             render_expr(*p.lo) + " AND " + render_expr(*p.hi);
    case Pred::Kind::IsNull:
      return render_expr(*p.a) + (p.negated ? " IS NOT NULL" : " IS NULL");
    case Pred::Kind::InList: {
      std::string out = render_expr(*p.a) + (p.negated ? " NOT IN (" : " IN (");
      for (std::size_t i = 0; i < p.items.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*p.items[i]);
      }
      return out + ")";
    }
    case Pred::Kind::Like: {
      std::string out = col_text(p.like_col) + (p.negated ? " NOT LIKE " : " LIKE ") +
                        quote(p.pattern);
      if (p.escape) out += " ESCAPE " + quote(std::string(1, *p.escape));
      return out;
    }
    case Pred::Kind::Exists:
      return std::string(p.negated ? "NOT " : "") + "EXISTS (" + render(*p.sub) + ")";
  }
  fail(ErrorKind::Internal, "bad predicate kind");
}

std::string render(const Select& sel) {
  std::string out = "SELECT ";
  if (sel.distinct) out += "DISTINCT ";
  for (std::size_t i = 0; i < sel.items.size(); ++i) {
    if (i) out += ", ";
    const SelectItem& item = sel.items[i];
    switch (item.kind) {
      case SelectItem::Kind::Star: out += "*"; break;
      case SelectItem::Kind::TableStar: out += item.table + ".*"; break;
      case SelectItem::Kind::Expr: out += render_expr(*item.expr); break;
    }
  }
  out += " FROM ";
  for (std::size_t i = 0; i < sel.from.size(); ++i) {
    if (i) out += ", ";
    const TableRef& ref = sel.from[i];
    if (!ref.joined) {
      out += ref.table;
      continue;
    }
    out += ref.left;
    switch (ref.jt) {
      case JoinType::Inner: out += " JOIN "; break;
      case JoinType::Left: out += " LEFT JOIN "; break;
      case JoinType::Right: out += " RIGHT JOIN "; break;
      case JoinType::Full: out += " FULL JOIN "; break;
    }
    out += ref.right + " ON " + render_pred(*ref.on);
  }
  if (sel.where) out += " WHERE " + render_pred(*sel.where);
  if (!sel.group_by.empty()) {
    out += " GROUP BY ";
    if (sel.group_all) out += "ALL ";
    for (std::size_t i = 0; i < sel.group_by.size(); ++i) {
      if (i) out += ", ";
      out += col_text(sel.group_by[i]);
    }
  }
  if (sel.having) out += " HAVING " + render_pred(*sel.having);
  if (!sel.order_by.empty()) {
    out += " ORDER BY ";
    for (std::size_t i = 0; i < sel.order_by.size(); ++i) {
      if (i) out += ", ";
      out += col_text(sel.order_by[i].col);
      if (sel.order_by[i].desc) out += " DESC";
    }
  }
  return out;
}

std::string render(const Statement& stmt) {
  switch (stmt.kind) {
    case Statement::Kind::Select:
      return render(*stmt.select) + ";";
    case Statement::Kind::Insert: {
      const Insert& ins = *stmt.insert;
      std::string out = "INSERT INTO " + ins.table;
      if (!ins.columns.empty()) {
        out += " (";
        for (std::size_t i = 0; i < ins.columns.size(); ++i) {
          if (i) out += ", ";
          out += ins.columns[i];
        }
        out += ")";
      }
      if (ins.source) {
        out += " " + render(*ins.source);
      } else {
        out += " VALUES ";
        for (std::size_t r = 0; r < ins.rows.size(); ++r) {
          if (r) out += ", ";
          out += "(";
          for (std::size_t i = 0; i < ins.rows[r].size(); ++i) {
            if (i) out += ", ";
            const InsertRowEntry& entry = ins.rows[r][i];
            if (entry.is_default) {
              out += "DEFAULT";
            } else if (entry.value.kind() == Value::Kind::Text) {
              out += quote(entry.value.as_text());
            } else {
              out += entry.value.display();
            }
          }
          out += ")";
        }
      }
      return out + ";";
    }
    case Statement::Kind::Update: {
      const Update& upd = *stmt.update;
      std::string out = "UPDATE " + upd.table + " SET ";
      for (std::size_t i = 0; i < upd.sets.size(); ++i) {
        if (i) out += ", ";
        out += upd.sets[i].column + " = " + render_expr(*upd.sets[i].value);
      }
      if (!upd.from.empty()) {
        out += " FROM ";
        for (std::size_t i = 0; i < upd.from.size(); ++i) {
          if (i) out += ", ";
          const TableRef& ref = upd.from[i];
          if (!ref.joined) {
            out += ref.table;
          } else {
            out += ref.left;
            switch (ref.jt) {
              case JoinType::Inner: out += " JOIN "; break;
              case JoinType::Left: out += " LEFT JOIN "; break;
              case JoinType::Right: out += " RIGHT JOIN "; break;
              case JoinType::Full: out += " FULL JOIN "; break;
            }
            out += ref.right + " ON " + render_pred(*ref.on);
          }
        }
      }
      if (upd.where) out += " WHERE " + render_pred(*upd.where);
      return out + ";";
    }
    case Statement::Kind::Delete: {
      const Delete& del = *stmt.del;
      std::string out = "DELETE FROM " + del.table;
      if (del.where) out += " WHERE " + render_pred(*del.where);
      return out + ";";
    }
  }
  fail(ErrorKind::Internal, "bad statement kind");
}

}  // namespace opeadb::sql
