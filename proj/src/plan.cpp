#include "opeadb/plan.hpp"

#include <sstream>

namespace opeadb {

namespace {

const char* step_name(Step::Kind k) {
  switch (k) {
    case Step::Kind::Scan: return "Scan";
    case Step::Kind::ScanTemp: return "ScanTemp";
    case Step::Kind::Join: return "Join";
    case Step::Kind::Filter: return "Filter";
    case Step::Kind::MatchLike: return "MatchLike";
    case Step::Kind::Canonicalize: return "Canonicalize";
    case Step::Kind::CreateTemp: return "CreateTemp";
    case Step::Kind::DropTemp: return "DropTemp";
    case Step::Kind::AssignVar: return "AssignVar";
    case Step::Kind::GroupAggregate: return "GroupAggregate";
    case Step::Kind::EmitSumPair: return "EmitSumPair";
    case Step::Kind::Sort: return "Sort";
    case Step::Kind::Project: return "Project";
    case Step::Kind::SetOp: return "SetOp";
    case Step::Kind::InsertRows: return "InsertRows";
    case Step::Kind::UpdateRows: return "UpdateRows";
    case Step::Kind::DeleteRows: return "DeleteRows";
  }
  return "?";
}

const char* join_name(sql::JoinType j) {
  switch (j) {
    case sql::JoinType::Inner: return "inner";
    case sql::JoinType::Left: return "left";
    case sql::JoinType::Right: return "right";
    case sql::JoinType::Full: return "full";
  }
  return "?";
}

const char* set_name(Step::SetKind k) {
  switch (k) {
    case Step::SetKind::Union: return "union";
    case Step::SetKind::Intersect: return "intersect";
    case Step::SetKind::Except: return "except";
    case Step::SetKind::Product: return "product";
  }
  return "?";
}

const char* agg_name(AggSpec::Kind k) {
  switch (k) {
    case AggSpec::Kind::Min: return "min";
    case AggSpec::Kind::Max: return "max";
    case AggSpec::Kind::Count: return "count";
    case AggSpec::Kind::SumPair: return "sum-pair";
    case AggSpec::Kind::First: return "first";
  }
  return "?";
}

void dump_cell(std::ostream& os, const CipherCell& c) {
  if (c.kind == CipherCell::Kind::Number) {
    os << c.num;
    if (c.ext != 0) os << "/" << c.ext;
  } else {
    os << "'" << c.text << "'";
  }
}

void dump_operand(std::ostream& os, const PlanOperand& o) {
  switch (o.kind) {
    case PlanOperand::Kind::None: os << "none"; return;
    case PlanOperand::Kind::Column: os << "#" << o.column; return;
    case PlanOperand::Kind::Literal: dump_cell(os, o.literal); return;
    case PlanOperand::Kind::Var: os << o.var; return;
    case PlanOperand::Kind::PlainInt: os << "plain:" << o.plain; return;
  }
}

void dump_pred(std::ostream& os, const PredNode& p) {
  switch (p.kind) {
    case PredNode::Kind::And:
    case PredNode::Kind::Or: {
      os << (p.kind == PredNode::Kind::And ? "(and" : "(or");
      for (const PredNode& k : p.kids) {
        os << " ";
        dump_pred(os, k);
      }
      os << ")";
      return;
    }
    case PredNode::Kind::Cmp:
      os << "(cmp x=" << p.x << " ";
      dump_operand(os, p.a);
      os << " " << cmp_op_text(p.op) << " ";
      dump_operand(os, p.b);
      os << ")";
      return;
    case PredNode::Kind::SumCmp: {
      os << "(sum-cmp pair=#" << p.pair_col << " count=#" << p.count_col << " "
         << cmp_op_text(p.op) << " bounds=[";
      for (std::size_t i = 0; i < p.bounds_by_size.size(); ++i) {
        const SumBound& b = p.bounds_by_size[i];
        if (i) os << " ";
        switch (b.tag) {
          case SumBound::Tag::Above: os << "above"; break;
          case SumBound::Tag::Below: os << "below"; break;
          case SumBound::Tag::Normal: os << b.lower << ":" << b.upper_ext; break;
        }
      }
      os << "])";
      return;
    }
    case PredNode::Kind::CountCmp:
      os << "(count-cmp ";
      dump_operand(os, p.a);
      os << " " << cmp_op_text(p.op) << " ";
      dump_operand(os, p.b);
      os << ")";
      return;
    case PredNode::Kind::MatchFlag:
      os << "(match-flag #" << p.flag_col << (p.negated ? " negated" : "") << ")";
      return;
    case PredNode::Kind::IsNull:
      os << "(is-null ";
      dump_operand(os, p.a);
      os << ")";
      return;
    case PredNode::Kind::NotNull:
      os << "(not-null ";
      dump_operand(os, p.a);
      os << ")";
      return;
    case PredNode::Kind::ExistsTemp:
      os << "(exists " << p.temp << (p.negated ? " negated" : "") << ")";
      return;
    case PredNode::Kind::ConstBool:
      os << (p.value ? "(true)" : "(false)");
      return;
  }
}

void dump_program(std::ostream& os, const MatchProgram& m) {
  os << "(like x=" << m.x << (m.anchored_start ? " ^" : "") << (m.anchored_end ? " $" : "");
  for (const MatchSegment& seg : m.segments) {
    os << " [";
    for (std::size_t i = 0; i < seg.atoms.size(); ++i) {
      const MatchAtom& a = seg.atoms[i];
      if (i) os << " ";
      switch (a.kind) {
        case MatchAtom::Kind::AnyOne: os << "_"; break;
        case MatchAtom::Kind::Literal: os << a.ciphers[0]; break;
        case MatchAtom::Kind::Class: {
          os << (a.class_negated ? "!{" : "{");
          for (std::size_t j = 0; j < a.ciphers.size(); ++j) {
            if (j) os << ",";
            os << a.ciphers[j];
          }
          os << "}";
          break;
        }
      }
      if (a.matches_blank) os << "~";
    }
    os << "]";
  }
  os << ")";
}

void dump_layout(std::ostream& os, const std::vector<PlanColumn>& cols) {
  os << "{";
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ", ";
    const PlanColumn& c = cols[i];
    if (!c.owner.empty()) os << c.owner << ".";
    os << c.name << ":" << plan_column_kind_name(c.kind);
  }
  os << "}";
}

}  // namespace

const char* plan_column_kind_name(PlanColumn::Kind k) {
  switch (k) {
    case PlanColumn::Kind::Cipher: return "cipher";
    case PlanColumn::Kind::PlainCount: return "count";
    case PlanColumn::Kind::SumPair: return "sum-pair";
    case PlanColumn::Kind::MatchFlag: return "flag";
    case PlanColumn::Kind::RowId: return "rowid";
  }
  return "?";
}

const char* cmp_op_text(sql::CmpOp op) {
  switch (op) {
    case sql::CmpOp::Eq: return "=";
    case sql::CmpOp::Ne: return "<>";
    case sql::CmpOp::Lt: return "<";
    case sql::CmpOp::Le: return "<=";
    case sql::CmpOp::Gt: return ">";
    case sql::CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string CipherPlan::to_text() const {
  std::ostringstream os;
  os << "plan outcome=" << (outcome == Outcome::Rows ? "rows" : "affected") << "\n";
  for (const Step& s : steps) {
    os << "  " << step_name(s.kind);
    switch (s.kind) {
      case Step::Kind::Scan:
        os << " " << s.table << (s.with_rowid ? " +rowid" : "");
        break;
      case Step::Kind::ScanTemp:
        os << " " << s.temp;
        break;
      case Step::Kind::Join:
        os << " " << join_name(s.join) << " " << s.right
           << (s.with_rowid ? " +rowid" : "") << " on ";
        dump_pred(os, s.pred);
        break;
      case Step::Kind::Filter:
        os << (s.role == Step::FilterRole::Having ? " having " : " where ");
        dump_pred(os, s.pred);
        break;
      case Step::Kind::MatchLike:
        os << " subject=#" << s.subject_col << " ";
        dump_program(os, s.program);
        break;
      case Step::Kind::Canonicalize: {
        os << " keys=[";
        for (std::size_t i = 0; i < s.keys.size(); ++i) {
          if (i) os << " ";
          os << "#" << s.keys[i] << " x=" << s.key_xs[i];
        }
        os << "]";
        break;
      }
      case Step::Kind::CreateTemp:
      case Step::Kind::DropTemp:
        os << " " << s.temp;
        break;
      case Step::Kind::AssignVar:
        os << " " << s.var << " = #" << s.source_col << (s.var_plain ? " plain" : "");
        break;
      case Step::Kind::GroupAggregate: {
        os << " keys=[";
        for (std::size_t i = 0; i < s.keys.size(); ++i) {
          if (i) os << " ";
          os << "#" << s.keys[i];
        }
        os << "] aggs=[";
        for (std::size_t i = 0; i < s.aggs.size(); ++i) {
          if (i) os << " ";
          os << agg_name(s.aggs[i].kind) << "(#" << s.aggs[i].col << ")->"
             << s.aggs[i].out_name;
        }
        os << "]";
        break;
      }
      case Step::Kind::EmitSumPair:
        os << " #" << s.column;
        break;
      case Step::Kind::Sort: {
        os << " by=[";
        for (std::size_t i = 0; i < s.sort_keys.size(); ++i) {
          const SortKey& k = s.sort_keys[i];
          if (i) os << " ";
          os << "#" << k.col << (k.desc ? " desc" : " asc") << " x=" << k.x;
        }
        os << "]";
        break;
      }
      case Step::Kind::Project: {
        os << " cols=[";
        for (std::size_t i = 0; i < s.cols.size(); ++i) {
          if (i) os << " ";
          os << "#" << s.cols[i];
        }
        os << "]";
        break;
      }
      case Step::Kind::SetOp: {
        os << " " << set_name(s.set_kind) << " " << s.right
           << (s.with_rowid ? " +rowid" : "") << " xs=[";
        for (std::size_t i = 0; i < s.set_xs.size(); ++i) {
          if (i) os << " ";
          os << s.set_xs[i];
        }
        os << "]";
        break;
      }
      case Step::Kind::InsertRows: {
        os << " " << s.table << " (";
        for (std::size_t i = 0; i < s.columns.size(); ++i) {
          if (i) os << ", ";
          os << s.columns[i];
        }
        os << ")";
        if (s.from_current) {
          os << " from-current [";
          for (std::size_t i = 0; i < s.sources.size(); ++i) {
            if (i) os << " ";
            if (s.sources[i].kind == WriteSource::Kind::ScopeColumn) {
              os << "#" << s.sources[i].column;
            } else {
              dump_cell(os, s.sources[i].cell);
            }
          }
          os << "]";
        } else {
          for (const auto& row : s.rows) {
            os << " [";
            for (std::size_t i = 0; i < row.size(); ++i) {
              if (i) os << " ";
              dump_cell(os, row[i]);
            }
            os << "]";
          }
        }
        break;
      }
      case Step::Kind::UpdateRows: {
        os << " " << s.table << " rowid=#" << s.rowid_col << " set [";
        for (std::size_t i = 0; i < s.sets.size(); ++i) {
          if (i) os << " ";
          os << s.sets[i].column << "=";
          if (s.sets[i].source.kind == WriteSource::Kind::ScopeColumn) {
            os << "#" << s.sets[i].source.column;
          } else {
            dump_cell(os, s.sets[i].source.cell);
          }
        }
        os << "]";
        break;
      }
      case Step::Kind::DeleteRows:
        os << " " << s.table << " rowid=#" << s.rowid_col;
        break;
    }
    if (!s.layout.empty()) {
      os << " -> ";
      dump_layout(os, s.layout);
    }
    os << "\n";
  }
  if (!output.empty()) {
    os << "  output ";
    dump_layout(os, output);
    os << "\n";
  }
  return os.str();
}

}  // namespace opeadb
