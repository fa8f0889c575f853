#include <cctype>
#include <cstddef>
#include <string>
#include <vector>

#include "opeadb/errors.hpp"
#include "opeadb/translate.hpp"

namespace opeadb {

namespace {

std::string dec(const Int& v) { return to_decimal(v); }

// Compact, key-free text form of a match program: the equality threshold,
// the length gate, then segments separated by '%'. Atoms join with '+';
// literal atoms are cipher digits, '_' matches any one character, classes
// list their member ciphers, and '~' marks an atom that accepts one of the
// cell's trailing blanks.
std::string program_text(const MatchProgram& p) {
  std::string out = "x=" + dec(p.x) + ";len";
  bool exact = p.anchored_start && p.anchored_end && p.segments.size() <= 1;
  out += exact ? "=" : ">=";
  out += std::to_string(p.min_length) + ";";
  if (p.anchored_start) out += "^";
  for (std::size_t s = 0; s < p.segments.size(); ++s) {
    if (s) out += "%";
    const MatchSegment& seg = p.segments[s];
    for (std::size_t a = 0; a < seg.atoms.size(); ++a) {
      if (a) out += "+";
      const MatchAtom& atom = seg.atoms[a];
      switch (atom.kind) {
        case MatchAtom::Kind::Literal:
          out += dec(atom.ciphers[0]);
          break;
        case MatchAtom::Kind::AnyOne:
          out += "_";
          break;
        case MatchAtom::Kind::Class: {
          if (atom.class_negated) out += "!";
          out += "{";
          for (std::size_t c = 0; c < atom.ciphers.size(); ++c) {
            if (c) out += "|";
            out += dec(atom.ciphers[c]);
          }
          out += "}";
          break;
        }
      }
      if (atom.matches_blank) out += "~";
    }
  }
  if (p.anchored_end) out += "$";
  return out;
}

class Renderer {
 public:
  explicit Renderer(const CipherPlan& plan) : plan_(plan) {}

  std::string run() {
    for (const Step& s : plan_.steps) {
      handle(s);
      prev_layout_ = &s.layout;
    }
    if (segment_open_) flush_select("");
    std::string out;
    for (const std::string& stmt : statements_) {
      out += stmt;
      out += "\n";
    }
    for (const std::string& line : tail_cleanup_) {
      out += line;
      out += "\n";
    }
    if (!out.empty()) out.pop_back();
    return out;
  }

 private:
  const CipherPlan& plan_;
  std::vector<std::string> statements_;
  std::vector<std::string> tail_cleanup_;
  const std::vector<PlanColumn>* prev_layout_ = nullptr;

  // Pending statement segment.
  bool segment_open_ = false;
  std::vector<std::string> from_items_;
  int source_count_ = 0;
  std::vector<std::string> wheres_;
  std::vector<std::string> havings_;
  std::vector<std::string> group_bys_;
  std::vector<std::string> canon_items_;  // canonicalize select additions
  std::string order_text_;
  std::vector<std::string> exprs_;              // per current slot
  std::vector<std::string> pair_ext_;           // SumPair slots: extension expr
  std::vector<std::string> pre_lines_;          // cursor blocks, declarations
  bool projected_ = false;
  std::vector<int> project_slots_;
  bool project_star_ = false;

  int cursor_ord_ = 0;
  int scope_ord_ = 0;

  // ---- small helpers -----------------------------------------------------

  static std::string qualified(const PlanColumn& c, bool qualify) {
    if (!qualify || c.owner.empty()) return c.name;
    return c.owner + "." + c.name;
  }

  void rebuild_exprs(const std::vector<PlanColumn>& layout) {
    exprs_.clear();
    pair_ext_.clear();
    bool q = source_count_ > 1;
    for (const PlanColumn& c : layout) {
      exprs_.push_back(qualified(c, q));
      pair_ext_.push_back("");
    }
  }

  void reset_segment() {
    segment_open_ = false;
    from_items_.clear();
    source_count_ = 0;
    wheres_.clear();
    havings_.clear();
    group_bys_.clear();
    canon_items_.clear();
    order_text_.clear();
    exprs_.clear();
    pair_ext_.clear();
    pre_lines_.clear();
    projected_ = false;
    project_slots_.clear();
    project_star_ = false;
  }

  std::string cell_text(const CipherCell& cell) {
    if (cell.kind == CipherCell::Kind::Text) return "'" + cell.text + "'";
    return dec(cell.num);
  }

  std::string operand_text(const PlanOperand& o) {
    switch (o.kind) {
      case PlanOperand::Kind::Column:
        return exprs_.at(std::size_t(o.column));
      case PlanOperand::Kind::Literal:
        return cell_text(o.literal);
      case PlanOperand::Kind::Var:
        return o.var;
      case PlanOperand::Kind::PlainInt:
        return std::to_string(o.plain);
      case PlanOperand::Kind::None:
        break;
    }
    fail(ErrorKind::Internal, "empty operand reached the renderer");
  }

  std::string op_text(sql::CmpOp op) { return cmp_op_text(op); }

  std::string bounds_text(const std::vector<SumBound>& bounds) {
    bool uniform = true;
    for (const SumBound& b : bounds) {
      if (b.tag != SumBound::Tag::Normal || bounds[0].tag != SumBound::Tag::Normal ||
          b.lower != bounds[0].lower || b.upper_ext != bounds[0].upper_ext) {
        uniform = false;
        break;
      }
    }
    if (uniform && !bounds.empty()) {
      return dec(bounds[0].lower) + ", " + dec(bounds[0].upper_ext);
    }
    std::string lo = "[";
    std::string hi = "[";
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      if (i) {
        lo += ",";
        hi += ",";
      }
      switch (bounds[i].tag) {
        case SumBound::Tag::Normal:
          lo += dec(bounds[i].lower);
          hi += dec(bounds[i].upper_ext);
          break;
        case SumBound::Tag::Above:
          lo += "-inf";
          hi += "-inf";
          break;
        case SumBound::Tag::Below:
          lo += "+inf";
          hi += "+inf";
          break;
      }
    }
    return lo + "], " + hi + "]";
  }

  std::string pred_text(const PredNode& n) {
    switch (n.kind) {
      case PredNode::Kind::And:
      case PredNode::Kind::Or: {
        std::string glue = n.kind == PredNode::Kind::And ? " AND " : " OR ";
        std::string out = "(";
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          if (i) out += glue;
          out += pred_text(n.kids[i]);
        }
        return out + ")";
      }
      case PredNode::Kind::Cmp:
        return "dbo.EqualityCom(" + dec(n.x) + ", " + operand_text(n.a) + ", " +
               operand_text(n.b) + ") " + op_text(n.op) + " 0";
      case PredNode::Kind::SumCmp: {
        const std::string& pair = exprs_.at(std::size_t(n.pair_col));
        const std::string& ext = pair_ext_.at(std::size_t(n.pair_col));
        return "dbo.SumEqualityCom(" + pair + ", " + ext + ", " +
               bounds_text(n.bounds_by_size) + ") " + op_text(n.op) + " 0";
      }
      case PredNode::Kind::CountCmp:
        return operand_text(n.a) + " " + op_text(n.op) + " " + operand_text(n.b);
      case PredNode::Kind::MatchFlag:
        return exprs_.at(std::size_t(n.flag_col)) + (n.negated ? " = 0" : " = 1");
      case PredNode::Kind::IsNull:
        return "dbo.EqualityCom(" + dec(n.x) + ", " + operand_text(n.a) + ", 0) = 0";
      case PredNode::Kind::NotNull:
        return "dbo.EqualityCom(" + dec(n.x) + ", " + operand_text(n.a) + ", 0) > 0";
      case PredNode::Kind::ExistsTemp:
        return std::string(n.negated ? "NOT " : "") + "EXISTS (SELECT * FROM " +
               n.temp + ")";
      case PredNode::Kind::ConstBool:
        return n.value ? "1 = 1" : "1 = 0";
    }
    fail(ErrorKind::Internal, "bad predicate node");
  }

  // ---- select assembly -----------------------------------------------------

  std::string select_list() {
    std::vector<int> slots;
    if (projected_) {
      slots = project_slots_;
    } else {
      for (std::size_t i = 0; i < exprs_.size(); ++i) slots.push_back(int(i));
    }
    if (project_star_ && canon_items_.empty()) return "*";
    std::string out;
    if (project_star_) {
      out = "*";
    } else {
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (i) out += ", ";
        int s = slots[std::size_t(i)];
        out += exprs_.at(std::size_t(s));
        if (!pair_ext_.at(std::size_t(s)).empty()) {
          out += ", " + pair_ext_.at(std::size_t(s));
        }
      }
    }
    for (const std::string& item : canon_items_) {
      out += ", " + item;
    }
    return out;
  }

  std::string from_clause() {
    std::string out;
    for (std::size_t i = 0; i < from_items_.size(); ++i) {
      if (i) out += ", ";
      out += from_items_[i];
    }
    return out;
  }

  std::string select_body(const std::string& list) {
    std::string out = "SELECT " + list;
    if (!from_items_.empty()) out += " FROM " + from_clause();
    if (!wheres_.empty()) {
      out += " WHERE ";
      for (std::size_t i = 0; i < wheres_.size(); ++i) {
        if (i) out += " AND ";
        out += wheres_[i];
      }
    }
    if (!group_bys_.empty()) {
      out += " GROUP BY ";
      for (std::size_t i = 0; i < group_bys_.size(); ++i) {
        if (i) out += ", ";
        out += group_bys_[i];
      }
    }
    if (!havings_.empty()) {
      out += " HAVING ";
      for (std::size_t i = 0; i < havings_.size(); ++i) {
        if (i) out += " AND ";
        out += havings_[i];
      }
    }
    if (!order_text_.empty()) out += " ORDER BY " + order_text_;
    return out;
  }

  // Flushes the pending segment as one SELECT statement; `into` names a temp
  // for SELECT ... INTO, empty for a plain result statement.
  void flush_select(const std::string& into) {
    for (const std::string& line : pre_lines_) statements_.push_back(line);
    pre_lines_.clear();
    std::string list = select_list();
    std::string body = select_body(list);
    if (!into.empty()) {
      // Splice INTO between the select list and the FROM clause.
      std::size_t head = std::string("SELECT " + list).size();
      body = "SELECT " + list + " INTO " + into + body.substr(head);
    }
    statements_.push_back(body + ";");
    reset_segment();
  }

  // ---- step handlers --------------------------------------------------------

  void start_segment() { segment_open_ = true; }

  void handle(const Step& s) {
    switch (s.kind) {
      case Step::Kind::Scan: {
        start_segment();
        from_items_.push_back(s.table);
        source_count_ = 1;
        rebuild_exprs(s.layout);
        return;
      }
      case Step::Kind::ScanTemp: {
        start_segment();
        from_items_.push_back(s.temp);
        source_count_ = 1;
        rebuild_exprs(s.layout);
        return;
      }
      case Step::Kind::Join: {
        source_count_ += 1;
        rebuild_exprs(s.layout);
        std::string jt;
        switch (s.join) {
          case sql::JoinType::Inner: jt = "INNER JOIN"; break;
          case sql::JoinType::Left: jt = "LEFT OUTER JOIN"; break;
          case sql::JoinType::Right: jt = "RIGHT OUTER JOIN"; break;
          case sql::JoinType::Full: jt = "FULL OUTER JOIN"; break;
        }
        std::string on = pred_text(s.pred);
        std::string joined = from_items_.back() + " " + jt + " " + s.right + " ON " + on;
        from_items_.back() = joined;
        return;
      }
      case Step::Kind::SetOp: {
        if (s.set_kind == Step::SetKind::Product) {
          source_count_ += 1;
          rebuild_exprs(s.layout);
          from_items_.push_back(s.right);
          return;
        }
        // Union-family operations never come out of the SQL dialect; for
        // hand-assembled plans, show the set operation over the pending
        // relation as a derived table.
        std::string op = s.set_kind == Step::SetKind::Union     ? "UNION"
                         : s.set_kind == Step::SetKind::Intersect ? "INTERSECT"
                                                                  : "EXCEPT";
        std::string inner = select_body(select_list());
        std::string derived =
            "(" + inner + " " + op + " SELECT * FROM " + s.right + ") set_scope";
        std::vector<std::string> keep_pre = std::move(pre_lines_);
        reset_segment();
        segment_open_ = true;
        pre_lines_ = std::move(keep_pre);
        from_items_.push_back(derived);
        source_count_ = 1;
        rebuild_exprs(s.layout);
        return;
      }
      case Step::Kind::Filter: {
        std::string text = pred_text(s.pred);
        if (s.role == Step::FilterRole::Having) {
          havings_.push_back(text);
        } else {
          wheres_.push_back(text);
        }
        return;
      }
      case Step::Kind::MatchLike:
        handle_match(s);
        return;
      case Step::Kind::Canonicalize:
        handle_canonicalize(s);
        return;
      case Step::Kind::CreateTemp:
        flush_select(s.temp);
        return;
      case Step::Kind::DropTemp:
        // Drops trail the whole script; the result statement, still pending
        // as segment state, must land first.
        if (segment_open_) flush_select("");
        statements_.push_back("DROP TABLE " + s.temp + ";");
        return;
      case Step::Kind::AssignVar: {
        for (const std::string& line : pre_lines_) statements_.push_back(line);
        pre_lines_.clear();
        statements_.push_back("DECLARE " + s.var + " int;");
        std::string expr = exprs_.at(std::size_t(s.source_col));
        std::string body = select_body(s.var + " = " + expr);
        statements_.push_back(body + ";");
        reset_segment();
        return;
      }
      case Step::Kind::GroupAggregate:
        handle_aggregate(s);
        return;
      case Step::Kind::EmitSumPair: {
        const PlanColumn& src = prev_layout_->at(std::size_t(s.column));
        bool q = source_count_ > 1;
        std::string name = qualified(src, q);
        exprs_ = {"SUM(" + name + ")", "COUNT(" + name + ")"};
        pair_ext_ = {"SUM(" + extension_name(src, q) + ")", ""};
        return;
      }
      case Step::Kind::Sort: {
        order_text_.clear();
        for (std::size_t i = 0; i < s.sort_keys.size(); ++i) {
          if (i) order_text_ += ", ";
          order_text_ += exprs_.at(std::size_t(s.sort_keys[i].col));
          order_text_ += s.sort_keys[i].desc ? " DESC" : " ASC";
        }
        return;
      }
      case Step::Kind::Project:
        handle_project(s);
        return;
      case Step::Kind::InsertRows:
        handle_insert(s);
        return;
      case Step::Kind::UpdateRows:
        handle_update(s);
        return;
      case Step::Kind::DeleteRows: {
        std::string stmt = "DELETE FROM " + s.table;
        if (!wheres_.empty()) {
          stmt += " WHERE ";
          for (std::size_t i = 0; i < wheres_.size(); ++i) {
            if (i) stmt += " AND ";
            stmt += wheres_[i];
          }
        }
        for (const std::string& line : pre_lines_) statements_.push_back(line);
        pre_lines_.clear();
        statements_.push_back(stmt + ";");
        reset_segment();
        return;
      }
    }
  }

  static std::string extension_name(const PlanColumn& c, bool qualify) {
    std::string name = c.name + "_Extension";
    if (!qualify || c.owner.empty()) return name;
    return c.owner + "." + name;
  }

  void handle_project(const Step& s) {
    projected_ = true;
    project_slots_ = s.cols;
    // Collapse to * when the projection keeps every slot in order and every
    // kept expression is a plain column name.
    project_star_ = exprs_.size() == s.cols.size() && s.cols.size() > 1;
    for (std::size_t i = 0; project_star_ && i < s.cols.size(); ++i) {
      if (s.cols[i] != int(i)) project_star_ = false;
      const std::string& e = exprs_.at(std::size_t(s.cols[i]));
      if (e.find('(') != std::string::npos) project_star_ = false;
    }
    std::vector<std::string> new_exprs;
    std::vector<std::string> new_ext;
    for (int c : s.cols) {
      new_exprs.push_back(exprs_.at(std::size_t(c)));
      new_ext.push_back(pair_ext_.at(std::size_t(c)));
    }
    exprs_ = std::move(new_exprs);
    pair_ext_ = std::move(new_ext);
    // Re-point projection slots at the reordered expression list.
    for (std::size_t i = 0; i < project_slots_.size(); ++i) {
      project_slots_[i] = int(i);
    }
  }

  void handle_aggregate(const Step& s) {
    std::vector<std::string> new_exprs;
    std::vector<std::string> new_ext;
    group_bys_.clear();
    for (int key : s.keys) {
      new_exprs.push_back(exprs_.at(std::size_t(key)));
      new_ext.push_back("");
      group_bys_.push_back(exprs_.at(std::size_t(key)));
    }
    bool q = source_count_ > 1;
    for (const AggSpec& spec : s.aggs) {
      std::string arg =
          spec.col < 0 ? "*" : qualified(prev_layout_->at(std::size_t(spec.col)), q);
      switch (spec.kind) {
        case AggSpec::Kind::Min:
          new_exprs.push_back("MIN(" + arg + ")");
          new_ext.push_back("");
          break;
        case AggSpec::Kind::Max:
          new_exprs.push_back("MAX(" + arg + ")");
          new_ext.push_back("");
          break;
        case AggSpec::Kind::Count:
          new_exprs.push_back("COUNT(" + arg + ")");
          new_ext.push_back("");
          break;
        case AggSpec::Kind::SumPair: {
          new_exprs.push_back("SUM(" + arg + ")");
          new_ext.push_back(
              "SUM(" + extension_name(prev_layout_->at(std::size_t(spec.col)), q) + ")");
          break;
        }
        case AggSpec::Kind::First:
          // Group members agree on the value; MIN picks it without a key.
          new_exprs.push_back("MIN(" + arg + ")");
          new_ext.push_back("");
          break;
      }
    }
    exprs_ = std::move(new_exprs);
    pair_ext_ = std::move(new_ext);
  }

  // Replaces `pool.` with `alias.` at identifier boundaries.
  static void requalify(std::string& text, const std::string& pool,
                        const std::string& alias) {
    std::string needle = pool + ".";
    std::size_t at = 0;
    while ((at = text.find(needle, at)) != std::string::npos) {
      bool boundary = at == 0;
      if (!boundary) {
        char prev = text[at - 1];
        boundary = !(std::isalnum(static_cast<unsigned char>(prev)) || prev == '_' ||
                     prev == '#' || prev == '@' || prev == '.');
      }
      if (boundary) {
        text.replace(at, needle.size(), alias + ".");
        at += alias.size() + 1;
      } else {
        at += needle.size();
      }
    }
  }

  void handle_canonicalize(const Step& s) {
    // Each grouping key gets its representative from a TOP 1 self-probe into
    // the key's own table, correlated through the equality UDF: every row in
    // the same equality class lands on the same stored code.
    std::vector<std::string> aliased;
    for (std::size_t i = 0; i < s.keys.size(); ++i) {
      const PlanColumn& key = prev_layout_->at(std::size_t(s.keys[i]));
      const PlanColumn& rep = s.layout.at(prev_layout_->size() + i);
      std::string pool = key.owner.empty() ? from_items_.back() : key.owner;
      std::string alias_a = pool + "_A";

      // Alias the pool in the outer FROM so the probe can tell the outer row
      // apart from its own scan; if the pool hides inside a join expression,
      // the bare table name still works as the outer qualifier.
      bool already = false;
      for (const std::string& a : aliased) already |= a == pool;
      bool has_alias = already;
      if (!already) {
        for (std::string& item : from_items_) {
          if (item == pool) {
            item = pool + " " + pool + "_B";
            has_alias = true;
            aliased.push_back(pool);
            for (std::string& w : wheres_) requalify(w, pool, pool + "_B");
            for (std::string& e : exprs_) requalify(e, pool, pool + "_B");
            break;
          }
        }
      }
      std::string outer = (has_alias ? pool + "_B" : pool) + "." + key.name;
      std::string probe = "(SELECT TOP 1 " + key.name + " FROM " + pool + " " +
                          alias_a + " WHERE dbo.EqualityCom(" + dec(s.key_xs[i]) +
                          ", " + alias_a + "." + key.name + ", " + outer + ") = 0)";
      canon_items_.push_back(probe + " AS " + rep.name);
      exprs_.push_back(probe);
      pair_ext_.push_back("");
    }
    project_star_ = true;
    projected_ = false;
  }

  void handle_match(const Step& s) {
    // Flags land in a real column so the match can run row by row through a
    // cursor; multi-source scopes materialize first so there is a single
    // table to alter.
    if (source_count_ > 1) {
      std::string scope = "#MATCH_SCOPE" + std::to_string(++scope_ord_);
      for (const std::string& line : pre_lines_) statements_.push_back(line);
      pre_lines_.clear();
      statements_.push_back("SELECT * INTO " + scope + " FROM " + from_clause() + ";");
      std::vector<PlanColumn> entering(prev_layout_ ? *prev_layout_
                                                    : std::vector<PlanColumn>{});
      reset_segment();
      segment_open_ = true;
      from_items_.push_back(scope);
      source_count_ = 1;
      rebuild_exprs(entering);
      tail_cleanup_.push_back("DROP TABLE " + scope + ";");
    }
    std::string table = from_items_.back();
    const PlanColumn& flag = s.layout.back();
    const PlanColumn& subject = s.layout.at(std::size_t(s.subject_col));
    std::string subject_name = subject.name;
    int n = ++cursor_ord_;
    std::string cur = "match_cursor" + std::to_string(n);
    std::string cell = "@cell" + std::to_string(n);
    std::string split =
        s.program.subject == PlanColumn::Layout::FixedText
            ? "dbo.Split(" + cell + ", " + std::to_string(s.program.fixed_digits) + ")"
            : "dbo.Split(" + cell + ", ',')";

    pre_lines_.push_back("ALTER TABLE " + table + " ADD " + flag.name + " BIT;");
    pre_lines_.push_back("DECLARE " + cell + " varchar(4000);");
    pre_lines_.push_back("DECLARE " + cur + " CURSOR FOR SELECT " + subject_name +
                         " FROM " + table + ";");
    pre_lines_.push_back("OPEN " + cur + ";");
    pre_lines_.push_back("FETCH NEXT FROM " + cur + " INTO " + cell + ";");
    pre_lines_.push_back("WHILE @@FETCH_STATUS = 0");
    pre_lines_.push_back("BEGIN");
    pre_lines_.push_back("  UPDATE " + table + " SET " + flag.name + " = CASE");
    pre_lines_.push_back("      WHEN " + cell + " = '0' THEN 2");
    pre_lines_.push_back("      WHEN dbo.MatchSplit(" + split + ", N'" +
                         program_text(s.program) + "') = 1 THEN 1");
    pre_lines_.push_back("      ELSE 0 END");
    pre_lines_.push_back("    WHERE CURRENT OF " + cur + ";");
    pre_lines_.push_back("  FETCH NEXT FROM " + cur + " INTO " + cell + ";");
    pre_lines_.push_back("END;");
    pre_lines_.push_back("CLOSE " + cur + ";");
    pre_lines_.push_back("DEALLOCATE " + cur + ";");
    if (table.rfind("#MATCH_SCOPE", 0) != 0) {
      tail_cleanup_.push_back("ALTER TABLE " + table + " DROP COLUMN " + flag.name + ";");
    }
    exprs_.push_back(flag.name);
    pair_ext_.push_back("");
  }

  void handle_insert(const Step& s) {
    std::string cols;
    for (std::size_t i = 0; i < s.columns.size(); ++i) {
      if (i) cols += ", ";
      cols += s.columns[i];
      if (s.layout[i].has_extension) cols += ", " + s.columns[i] + "_Extension";
    }
    if (s.from_current) {
      std::string list;
      for (std::size_t i = 0; i < s.sources.size(); ++i) {
        if (i) list += ", ";
        const WriteSource& src = s.sources[i];
        if (src.kind == WriteSource::Kind::ScopeColumn) {
          list += exprs_.at(std::size_t(src.column));
          if (s.layout[i].has_extension) {
            std::string ext = exprs_.at(std::size_t(src.column)) + "_Extension";
            list += ", " + ext;
          }
        } else {
          list += cell_text(src.cell);
          if (s.layout[i].has_extension) list += ", " + dec(src.cell.ext);
        }
      }
      std::string body = select_body(list);
      for (const std::string& line : pre_lines_) statements_.push_back(line);
      pre_lines_.clear();
      statements_.push_back("INSERT INTO " + s.table + " (" + cols + ") " + body + ";");
      reset_segment();
      return;
    }
    std::string rows;
    for (std::size_t r = 0; r < s.rows.size(); ++r) {
      if (r) rows += ", ";
      rows += "(";
      for (std::size_t i = 0; i < s.rows[r].size(); ++i) {
        if (i) rows += ", ";
        rows += cell_text(s.rows[r][i]);
        if (s.layout[i].has_extension) rows += ", " + dec(s.rows[r][i].ext);
      }
      rows += ")";
    }
    statements_.push_back("INSERT INTO " + s.table + " (" + cols + ") VALUES " + rows +
                          ";");
    reset_segment();
  }

  void handle_update(const Step& s) {
    std::string sets;
    for (std::size_t i = 0; i < s.sets.size(); ++i) {
      if (i) sets += ", ";
      const UpdateSet& set = s.sets[i];
      if (set.source.kind == WriteSource::Kind::ScopeColumn) {
        const std::string& expr = exprs_.at(std::size_t(set.source.column));
        sets += set.column + " = " + expr;
        if (s.layout[i].has_extension) {
          sets += ", " + set.column + "_Extension = " + expr + "_Extension";
        }
      } else {
        sets += set.column + " = " + cell_text(set.source.cell);
        if (s.layout[i].has_extension) {
          sets += ", " + set.column + "_Extension = " + dec(set.source.cell.ext);
        }
      }
    }
    std::string stmt = "UPDATE " + s.table + " SET " + sets;
    if (from_items_.size() > 1 ||
        (from_items_.size() == 1 && from_items_[0] != s.table)) {
      stmt += " FROM " + from_clause();
    }
    if (!wheres_.empty()) {
      stmt += " WHERE ";
      for (std::size_t i = 0; i < wheres_.size(); ++i) {
        if (i) stmt += " AND ";
        stmt += wheres_[i];
      }
    }
    for (const std::string& line : pre_lines_) statements_.push_back(line);
    pre_lines_.clear();
    statements_.push_back(stmt + ";");
    reset_segment();
  }
};

}  // namespace

std::string render_cipher_sql(const CipherPlan& plan) {
  if (plan.steps.empty()) return "";
  Renderer r(plan);
  return r.run();
}

}  // namespace opeadb
