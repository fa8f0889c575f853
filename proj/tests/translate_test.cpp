#include "opeadb/translate.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "opeadb/errors.hpp"
#include "opeadb/keyring.hpp"
#include "opeadb/manifest.hpp"
#include "opeadb/sql/parser.hpp"
#include "opeadb/sql/validate.hpp"

namespace opeadb {
namespace {

using sql::CmpOp;
using sql::parse_statement;
using sql::Resolution;
using sql::Session;
using sql::Statement;
using sql::validate_statement;

ColumnSpec col(std::string name, std::string anon, SemType sem, long long min,
               long long max, EncodingRule rule, std::string domain) {
  ColumnSpec c;
  c.name = std::move(name);
  c.anon_name = std::move(anon);
  c.sem = sem;
  c.min = min;
  c.max = max;
  c.rule = rule;
  c.domain = std::move(domain);
  return c;
}

ColumnSpec strcol(std::string name, std::string anon, SemType sem, unsigned width,
                  EncodingRule rule, std::string domain) {
  ColumnSpec c;
  c.name = std::move(name);
  c.anon_name = std::move(anon);
  c.sem = sem;
  c.width = width;
  c.rule = rule;
  c.domain = std::move(domain);
  return c;
}

DomainInfo dom(std::string id, std::uint64_t t, std::uint64_t max_sum = 0,
               std::uint64_t max_group = 2, unsigned r_bits = 8) {
  DomainInfo d;
  d.id = id;
  d.label = "lbl_" + id;
  d.config.t = t;
  d.config.max_sum = max_sum ? max_sum : t;
  d.config.max_group = max_group;
  d.config.r_bits = r_bits;
  return d;
}

SchemaManifest make_fixture() {
  SchemaManifest m;
  TableSpec customer;
  customer.name = "CUSTOMER";
  customer.anon_name = "A01";
  {
    ColumnSpec key = col("C_KEY", "A02", SemType::Integer, 1, 1000,
                         EncodingRule::Numeric, "key");
    key.nullable = false;
    customer.columns.push_back(key);
  }
  customer.columns.push_back(
      col("C_NATION", "A03", SemType::Integer, 0, 24, EncodingRule::Numeric, "nation"));
  {
    ColumnSpec qty =
        col("C_QTY", "A04", SemType::Integer, 1, 50, EncodingRule::Numeric, "qty");
    qty.needs_extension = true;
    customer.columns.push_back(qty);
  }
  customer.columns.push_back(
      strcol("C_NAME", "A05", SemType::Varchar, 10, EncodingRule::Fuzzy, "name"));
  customer.columns.push_back(
      strcol("C_CODE", "A06", SemType::Char, 2, EncodingRule::Packed, "code"));
  customer.columns.push_back(
      strcol("C_ADDR", "A07", SemType::Varchar, 8, EncodingRule::Fixed, "addr"));
  {
    ColumnSpec bonus =
        col("C_BONUS", "A61", SemType::Integer, 1, 50, EncodingRule::Numeric, "bonus");
    bonus.needs_extension = true;
    customer.columns.push_back(bonus);
  }
  {
    ColumnSpec rank =
        col("C_RANK", "A62", SemType::Integer, 2, 6, EncodingRule::Numeric, "rank");
    rank.needs_extension = true;
    customer.columns.push_back(rank);
  }

  TableSpec orders;
  orders.name = "ORDERS";
  orders.anon_name = "A11";
  orders.columns.push_back(
      col("O_KEY", "A12", SemType::Integer, 1, 5000, EncodingRule::Numeric, "okey"));
  orders.columns.push_back(
      col("O_CUST", "A13", SemType::Integer, 1, 1000, EncodingRule::Numeric, "key"));
  {
    ColumnSpec qty =
        col("O_QTY", "A14", SemType::Integer, 1, 50, EncodingRule::Numeric, "qty");
    qty.needs_extension = true;
    orders.columns.push_back(qty);
  }
  orders.columns.push_back(
      strcol("NOTE", "A15", SemType::Varchar, 6, EncodingRule::Fuzzy, "name"));
  {
    ColumnSpec total = col("O_TOTAL", "A63", SemType::Decimal, 100, 99999,
                           EncodingRule::Numeric, "total");
    total.scale = 2;
    orders.columns.push_back(total);
  }

  m.tables = {customer, orders};
  m.domains["key"] = dom("key", 1000);
  m.domains["nation"] = dom("nation", 25);
  m.domains["qty"] = dom("qty", 50, 5000, 128);
  m.domains["name"] = dom("name", 126);
  m.domains["code"] = dom("code", 126126);
  m.domains["addr"] = dom("addr", 126);
  m.domains["okey"] = dom("okey", 5000);
  m.domains["bonus"] = dom("bonus", 50, 200, 2);
  m.domains["rank"] = dom("rank", 5, 640, 128);
  m.domains["total"] = dom("total", 99900);
  m.principals["root"] = {"*"};
  m.validate();
  return m;
}

const SchemaManifest& fixture() {
  static SchemaManifest m = make_fixture();
  return m;
}

const KeyRing& ring() {
  static KeyRing k = [] {
    std::vector<std::uint8_t> seed(32, 0x5A);
    return KeyRing::derive(seed, fixture());
  }();
  return k;
}

Translation run(const std::string& text, std::uint64_t seed = 7) {
  Statement st = parse_statement(text);
  Resolution res = validate_statement(st, fixture(), Session{"root"});
  SplitRng rng(seed);
  return translate_statement(st, res, fixture(), ring(), rng);
}

std::string render(const std::string& text, std::uint64_t seed = 7) {
  return render_cipher_sql(run(text, seed).plan);
}

const Step* find_step(const CipherPlan& p, Step::Kind k) {
  for (const Step& s : p.steps) {
    if (s.kind == k) return &s;
  }
  return nullptr;
}

int count_steps(const CipherPlan& p, Step::Kind k) {
  int n = 0;
  for (const Step& s : p.steps) n += s.kind == k;
  return n;
}

const PredNode* where_pred(const CipherPlan& p) {
  for (const Step& s : p.steps) {
    if (s.kind == Step::Kind::Filter && s.role == Step::FilterRole::Where) {
      return &s.pred;
    }
  }
  return nullptr;
}

bool has(const std::string& text, const std::string& piece) {
  return text.find(piece) != std::string::npos;
}

// ---------------------------------------------------------------------------
// Statement shapes
// ---------------------------------------------------------------------------

TEST(Render, JoinUsesEqualityUdf) {
  std::string sql =
      render("SELECT C_NAME FROM CUSTOMER INNER JOIN ORDERS ON C_KEY = O_CUST");
  EXPECT_TRUE(has(sql, "INNER JOIN")) << sql;
  EXPECT_TRUE(has(sql, "dbo.EqualityCom(")) << sql;
  EXPECT_TRUE(has(sql, ") = 0")) << sql;
  EXPECT_FALSE(has(sql, "CUSTOMER")) << sql;
  EXPECT_FALSE(has(sql, "C_KEY")) << sql;
}

TEST(Render, RangeFilterAndExplicitAscOrder) {
  std::string sql =
      render("SELECT O_KEY FROM ORDERS WHERE O_QTY BETWEEN 5 AND 10 ORDER BY O_KEY");
  EXPECT_TRUE(has(sql, ") >= 0")) << sql;
  EXPECT_TRUE(has(sql, ") <= 0")) << sql;
  EXPECT_TRUE(has(sql, "ORDER BY A12 ASC")) << sql;
}

TEST(Render, PlainAggregatesPassThrough) {
  Translation t = run("SELECT MIN(O_QTY), MAX(O_QTY), COUNT(*) FROM ORDERS");
  std::string sql = render_cipher_sql(t.plan);
  EXPECT_TRUE(has(sql, "MIN(A14)")) << sql;
  EXPECT_TRUE(has(sql, "MAX(A14)")) << sql;
  EXPECT_TRUE(has(sql, "COUNT(*)")) << sql;
  ASSERT_EQ(t.fields.size(), 3u);
  EXPECT_EQ(t.fields[0].kind, OutputField::Kind::Cipher);
  EXPECT_EQ(t.fields[0].display, "MIN(O_QTY)");
  EXPECT_EQ(t.fields[2].kind, OutputField::Kind::PlainCount);
  EXPECT_EQ(t.fields[2].display, "COUNT(*)");
}

TEST(Render, GroupedHavingSumBuildsCanonicalTemp) {
  Translation t = run(
      "SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION HAVING SUM(C_QTY) > 20");
  std::string sql = render_cipher_sql(t.plan);
  EXPECT_TRUE(has(sql, "INTO #TEMPORARY_TABLE1")) << sql;
  EXPECT_TRUE(has(sql, "SELECT TOP 1")) << sql;
  EXPECT_TRUE(has(sql, "_Group")) << sql;
  EXPECT_TRUE(has(sql, "GROUP BY")) << sql;
  EXPECT_TRUE(has(sql, "dbo.SumEqualityCom(SUM(")) << sql;
  // The drop trails the result statement.
  std::string tail = "DROP TABLE #TEMPORARY_TABLE1;";
  ASSERT_GE(sql.size(), tail.size());
  EXPECT_EQ(sql.substr(sql.size() - tail.size()), tail) << sql;
  EXPECT_NE(find_step(t.plan, Step::Kind::Canonicalize), nullptr);
  EXPECT_NE(find_step(t.plan, Step::Kind::GroupAggregate), nullptr);
  ASSERT_EQ(t.fields.size(), 1u);
  EXPECT_EQ(t.fields[0].display, "C_NATION");
  EXPECT_EQ(t.fields[0].domain, "nation");
}

TEST(Render, LikeBuildsCursorSkeleton) {
  Translation t = run("SELECT C_NAME FROM CUSTOMER WHERE C_NAME LIKE 'ab%'");
  std::string sql = render_cipher_sql(t.plan);
  EXPECT_TRUE(has(sql, "ALTER TABLE A01 ADD A05_Match1 BIT;")) << sql;
  EXPECT_TRUE(has(sql, "DECLARE match_cursor1 CURSOR FOR SELECT A05 FROM A01;")) << sql;
  EXPECT_TRUE(has(sql, "WHILE @@FETCH_STATUS = 0")) << sql;
  EXPECT_TRUE(has(sql, "dbo.MatchSplit(dbo.Split(@cell1, ',')")) << sql;
  EXPECT_TRUE(has(sql, "A05_Match1 = 1")) << sql;
  EXPECT_TRUE(has(sql, "ALTER TABLE A01 DROP COLUMN A05_Match1;")) << sql;
  // The pattern text itself must never survive into the script.
  EXPECT_FALSE(has(sql, "ab")) << sql;
  const Step* m = find_step(t.plan, Step::Kind::MatchLike);
  ASSERT_NE(m, nullptr);
  EXPECT_TRUE(m->program.anchored_start);
  EXPECT_FALSE(m->program.anchored_end);
  ASSERT_EQ(m->program.segments.size(), 1u);
  EXPECT_EQ(m->program.min_length, 2u);
}

TEST(Render, ScalarSubqueryAssignsVariable) {
  std::string sql = render(
      "SELECT C_NAME FROM CUSTOMER WHERE C_NATION = (SELECT MIN(C_NATION) FROM "
      "CUSTOMER)");
  EXPECT_TRUE(has(sql, "DECLARE @inter_var2 int;")) << sql;
  EXPECT_TRUE(has(sql, "SELECT @inter_var2 = MIN(A03) FROM A01;")) << sql;
  EXPECT_TRUE(has(sql, ", @inter_var2) = 0")) << sql;
}

TEST(Render, ExistsMaterializesInterTable) {
  std::string sql = render(
      "SELECT C_NAME FROM CUSTOMER WHERE EXISTS (SELECT O_KEY FROM ORDERS WHERE "
      "O_QTY > 3)");
  EXPECT_TRUE(has(sql, "INTO #INTER_TABLE2")) << sql;
  EXPECT_TRUE(has(sql, "EXISTS (SELECT * FROM #INTER_TABLE2)")) << sql;
  EXPECT_TRUE(has(sql, "DROP TABLE #INTER_TABLE2;")) << sql;

  std::string neg = render(
      "SELECT C_NAME FROM CUSTOMER WHERE NOT EXISTS (SELECT O_KEY FROM ORDERS "
      "WHERE O_QTY > 3)");
  EXPECT_TRUE(has(neg, "NOT EXISTS (SELECT * FROM #INTER_TABLE2)")) << neg;
}

TEST(Render, DeleteFiltersOnCipher) {
  Translation t = run("DELETE FROM ORDERS WHERE O_QTY = 3");
  std::string sql = render_cipher_sql(t.plan);
  EXPECT_TRUE(has(sql, "DELETE FROM A11 WHERE dbo.EqualityCom(")) << sql;
  EXPECT_TRUE(t.mutation);
  EXPECT_TRUE(t.fields.empty());
  EXPECT_EQ(t.plan.outcome, CipherPlan::Outcome::Affected);
  EXPECT_FALSE(has(sql, "ROWID")) << sql;
}

TEST(Render, InsertExpandsExtensionColumns) {
  std::string sql =
      render("INSERT INTO ORDERS (O_KEY, O_CUST, O_QTY, NOTE) VALUES (10, 20, 5, 'xy')");
  EXPECT_TRUE(has(sql, "INSERT INTO A11 (A12, A13, A14, A14_Extension, A15, A63)"))
      << sql;
  EXPECT_TRUE(has(sql, "VALUES (")) << sql;
  // Unlisted nullable columns store the NULL sentinel.
  EXPECT_TRUE(has(sql, ", 0)")) << sql;
  EXPECT_FALSE(has(sql, "xy")) << sql;
}

TEST(Render, UpdateWritesPairedCipher) {
  std::string sql = render("UPDATE ORDERS SET O_QTY = 7 WHERE O_KEY = 10");
  EXPECT_TRUE(has(sql, "UPDATE A11 SET A14 = ")) << sql;
  EXPECT_TRUE(has(sql, "A14_Extension = ")) << sql;
  EXPECT_TRUE(has(sql, "WHERE dbo.EqualityCom(")) << sql;
}

TEST(Render, InsertSelectMapsScopeColumns) {
  std::string sql = render(
      "INSERT INTO ORDERS (O_KEY, O_CUST, O_QTY, NOTE) SELECT O_KEY, O_CUST, O_QTY, "
      "NOTE FROM ORDERS WHERE O_QTY < 5");
  EXPECT_TRUE(has(sql, "INSERT INTO A11 (A12, A13, A14, A14_Extension, A15, A63) "
                       "SELECT A12, A13, A14, A14_Extension, A15, 0 FROM A11 WHERE "
                       "dbo.EqualityCom("))
      << sql;
}

TEST(Render, SelectStarCollapses) {
  EXPECT_EQ(render("SELECT * FROM CUSTOMER"), "SELECT * FROM A01;");
}

TEST(Render, NullTestsUseTheSentinel) {
  std::string is_null = render("SELECT C_KEY FROM CUSTOMER WHERE C_NAME IS NULL");
  EXPECT_TRUE(has(is_null, ", A05, 0) = 0")) << is_null;
  std::string not_null = render("SELECT C_KEY FROM CUSTOMER WHERE C_NAME IS NOT NULL");
  EXPECT_TRUE(has(not_null, ", A05, 0) > 0")) << not_null;
}

TEST(Render, MultiSourceLikeMaterializesScope) {
  std::string sql = render(
      "SELECT C_NAME FROM CUSTOMER, ORDERS WHERE C_NAME LIKE 'a%' AND C_KEY = O_CUST");
  EXPECT_TRUE(has(sql, "INTO #MATCH_SCOPE1")) << sql;
  EXPECT_TRUE(has(sql, "DROP TABLE #MATCH_SCOPE1;")) << sql;
}

// ---------------------------------------------------------------------------
// Aggregate plumbing
// ---------------------------------------------------------------------------

TEST(Translate, BareSumEmitsPairAndCount) {
  Translation t = run("SELECT SUM(O_QTY) FROM ORDERS");
  EXPECT_NE(find_step(t.plan, Step::Kind::EmitSumPair), nullptr);
  EXPECT_EQ(find_step(t.plan, Step::Kind::GroupAggregate), nullptr);
  ASSERT_EQ(t.fields.size(), 1u);
  EXPECT_EQ(t.fields[0].kind, OutputField::Kind::SumPair);
  EXPECT_EQ(t.fields[0].display, "SUM(O_QTY)");
  EXPECT_EQ(t.fields[0].slot, 0);
  EXPECT_EQ(t.fields[0].count_slot, 1);
  EXPECT_EQ(render_cipher_sql(t.plan),
            "SELECT SUM(A14), SUM(A14_Extension), COUNT(A14) FROM A11;");
}

TEST(Translate, HiddenCountSlotsAppendAfterVisible) {
  Translation t = run("SELECT SUM(C_QTY), SUM(C_BONUS) FROM CUSTOMER");
  ASSERT_EQ(t.fields.size(), 2u);
  EXPECT_EQ(t.fields[0].slot, 0);
  EXPECT_EQ(t.fields[0].count_slot, 2);
  EXPECT_EQ(t.fields[1].slot, 1);
  EXPECT_EQ(t.fields[1].count_slot, 3);
  EXPECT_EQ(t.plan.output.size(), 4u);
}

TEST(Translate, SharedSumPairServesSumAvgCount) {
  Translation t = run("SELECT SUM(C_QTY), AVG(C_QTY), COUNT(C_QTY) FROM CUSTOMER");
  ASSERT_EQ(t.fields.size(), 3u);
  EXPECT_EQ(t.fields[0].kind, OutputField::Kind::SumPair);
  EXPECT_EQ(t.fields[1].kind, OutputField::Kind::Avg);
  EXPECT_EQ(t.fields[2].kind, OutputField::Kind::PlainCount);
  EXPECT_EQ(t.fields[0].count_slot, 2);
  EXPECT_EQ(t.fields[1].count_slot, 2);
  // The pair column serves all three items; nothing hidden is needed.
  EXPECT_EQ(t.plan.output.size(), 3u);
}

TEST(Translate, AvgAloneCarriesHiddenCount) {
  Translation t = run("SELECT AVG(C_BONUS) FROM CUSTOMER");
  ASSERT_EQ(t.fields.size(), 1u);
  EXPECT_EQ(t.fields[0].kind, OutputField::Kind::Avg);
  EXPECT_EQ(t.fields[0].slot, 0);
  EXPECT_EQ(t.fields[0].count_slot, 1);
  EXPECT_EQ(t.plan.output.size(), 2u);
  EXPECT_EQ(render_cipher_sql(t.plan),
            "SELECT SUM(A61), SUM(A61_Extension), COUNT(A61) FROM A01;");
}

// ---------------------------------------------------------------------------
// Sum comparison bounds
// ---------------------------------------------------------------------------

const PredNode* having_pred(const CipherPlan& p) {
  for (const Step& s : p.steps) {
    if (s.kind == Step::Kind::Filter && s.role == Step::FilterRole::Having) {
      return &s.pred;
    }
  }
  return nullptr;
}

TEST(SumBounds, UniformBoundsCollapseInRender) {
  Translation t = run(
      "SELECT C_KEY FROM CUSTOMER GROUP BY C_KEY HAVING SUM(C_BONUS) > 5");
  const PredNode* h = having_pred(t.plan);
  ASSERT_NE(h, nullptr);
  ASSERT_EQ(h->kind, PredNode::Kind::SumCmp);
  ASSERT_EQ(h->bounds_by_size.size(), 2u);  // bonus groups cap at 2
  const DomainKey& key = ring().key_for("bonus");
  EXPECT_EQ(h->bounds_by_size[0].tag, SumBound::Tag::Normal);
  EXPECT_EQ(h->bounds_by_size[0].lower, key.bounds(5).lower);
  EXPECT_EQ(h->bounds_by_size[0].upper_ext, key.ext_bounds(5).upper);
  EXPECT_EQ(h->bounds_by_size[1].lower, h->bounds_by_size[0].lower);
  std::string sql = render_cipher_sql(t.plan);
  std::size_t at = sql.find("dbo.SumEqualityCom(");
  ASSERT_NE(at, std::string::npos);
  std::size_t end = sql.find(") > 0", at);
  EXPECT_EQ(sql.substr(at, end - at).find('['), std::string::npos) << sql;
}

TEST(SumBounds, SmallSumAgainstShiftedCodesGoesAbove) {
  // C_RANK stores codes v-1 (min 2), so "sum of k values = 4" means a code
  // sum of 4-k, impossible once k exceeds 2: every code is at least 1.
  Translation t =
      run("SELECT C_KEY FROM CUSTOMER GROUP BY C_KEY HAVING SUM(C_RANK) = 4");
  const PredNode* h = having_pred(t.plan);
  ASSERT_NE(h, nullptr);
  ASSERT_EQ(h->bounds_by_size.size(), 128u);
  EXPECT_EQ(h->bounds_by_size[0].tag, SumBound::Tag::Normal);
  EXPECT_EQ(h->bounds_by_size[1].tag, SumBound::Tag::Normal);
  EXPECT_EQ(h->bounds_by_size[2].tag, SumBound::Tag::Above);
  EXPECT_EQ(h->bounds_by_size[127].tag, SumBound::Tag::Above);
  EXPECT_TRUE(has(render_cipher_sql(t.plan), "-inf"));
}

TEST(SumBounds, LargeSumAgainstSmallGroupsGoesBelow) {
  // 5000 exceeds what k < 100 rows of codes <= 50 can reach.
  Translation t =
      run("SELECT O_CUST FROM ORDERS GROUP BY O_CUST HAVING SUM(O_QTY) > 5000");
  const PredNode* h = having_pred(t.plan);
  ASSERT_NE(h, nullptr);
  ASSERT_EQ(h->bounds_by_size.size(), 128u);
  EXPECT_EQ(h->bounds_by_size[0].tag, SumBound::Tag::Below);
  EXPECT_EQ(h->bounds_by_size[98].tag, SumBound::Tag::Below);
  EXPECT_EQ(h->bounds_by_size[99].tag, SumBound::Tag::Normal);
  EXPECT_EQ(h->bounds_by_size[127].tag, SumBound::Tag::Normal);
  EXPECT_TRUE(has(render_cipher_sql(t.plan), "+inf"));
}

TEST(SumBounds, ConstantBeyondKeyBudgetThrows) {
  try {
    run("SELECT O_CUST FROM ORDERS GROUP BY O_CUST HAVING SUM(O_QTY) > 6000");
    FAIL() << "expected SumRangeExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SumRangeExceeded);
    EXPECT_TRUE(has(e.what(), "6000")) << e.what();
  }
}

TEST(SumBounds, AvgProbesScaleWithGroupSize) {
  Translation t =
      run("SELECT C_KEY FROM CUSTOMER GROUP BY C_KEY HAVING AVG(C_BONUS) = 3");
  const PredNode* h = having_pred(t.plan);
  ASSERT_NE(h, nullptr);
  ASSERT_EQ(h->bounds_by_size.size(), 2u);
  const DomainKey& key = ring().key_for("bonus");
  EXPECT_EQ(h->bounds_by_size[0].lower, key.bounds(3).lower);
  EXPECT_EQ(h->bounds_by_size[1].lower, key.bounds(6).lower);

  Translation below =
      run("SELECT C_KEY FROM CUSTOMER GROUP BY C_KEY HAVING AVG(C_BONUS) = 60");
  const PredNode* hb = having_pred(below.plan);
  ASSERT_NE(hb, nullptr);
  EXPECT_EQ(hb->bounds_by_size[0].tag, SumBound::Tag::Below);
  EXPECT_EQ(hb->bounds_by_size[1].tag, SumBound::Tag::Below);
}

// ---------------------------------------------------------------------------
// Literal lowering
// ---------------------------------------------------------------------------

TEST(Lowering, OutOfRangeConstantsFold) {
  const PredNode* p = where_pred(run("SELECT C_NAME FROM CUSTOMER WHERE C_NATION = 999").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::ConstBool);
  EXPECT_FALSE(p->value);

  p = where_pred(run("SELECT C_NAME FROM CUSTOMER WHERE C_NATION <> 999").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::NotNull);

  p = where_pred(run("SELECT C_NAME FROM CUSTOMER WHERE C_NATION < 999").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::NotNull);

  p = where_pred(run("SELECT C_NAME FROM CUSTOMER WHERE C_NATION > 999").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::ConstBool);
  EXPECT_FALSE(p->value);

  p = where_pred(run("SELECT C_NAME FROM CUSTOMER WHERE C_KEY = 0").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::ConstBool);
  EXPECT_FALSE(p->value);

  p = where_pred(run("SELECT C_NAME FROM CUSTOMER WHERE C_KEY > 0").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::NotNull);
}

std::uint64_t decode_total(const PredNode& p) {
  const DomainKey& key = ring().key_for("total");
  const PlanOperand& lit =
      p.a.kind == PlanOperand::Kind::Literal ? p.a : p.b;
  return key.decrypt(lit.literal.num);
}

TEST(Lowering, FinerScaleConstantsRoundTowardMinusInfinity) {
  // O_TOTAL has two decimal places stored as code = unscaled - 100 + 1.
  const PredNode* p =
      where_pred(run("SELECT O_KEY FROM ORDERS WHERE O_TOTAL = 12.345").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::ConstBool);
  EXPECT_FALSE(p->value);

  p = where_pred(run("SELECT O_KEY FROM ORDERS WHERE O_TOTAL <> 12.345").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::NotNull);

  p = where_pred(run("SELECT O_KEY FROM ORDERS WHERE O_TOTAL < 12.345").plan);
  ASSERT_NE(p, nullptr);
  ASSERT_EQ(p->kind, PredNode::Kind::Cmp);
  EXPECT_EQ(p->op, CmpOp::Le);
  EXPECT_EQ(decode_total(*p), 1234u - 100u + 1u);

  p = where_pred(run("SELECT O_KEY FROM ORDERS WHERE O_TOTAL >= 12.345").plan);
  ASSERT_NE(p, nullptr);
  ASSERT_EQ(p->kind, PredNode::Kind::Cmp);
  EXPECT_EQ(p->op, CmpOp::Ge);
  EXPECT_EQ(decode_total(*p), 1235u - 100u + 1u);

  p = where_pred(run("SELECT O_KEY FROM ORDERS WHERE O_TOTAL = 5.5").plan);
  ASSERT_NE(p, nullptr);
  ASSERT_EQ(p->kind, PredNode::Kind::Cmp);
  EXPECT_EQ(p->op, CmpOp::Eq);
  EXPECT_EQ(decode_total(*p), 550u - 100u + 1u);
}

TEST(Lowering, EmptyStringFoldsForEqualityOnly) {
  const PredNode* p =
      where_pred(run("SELECT C_KEY FROM CUSTOMER WHERE C_NAME = ''").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::ConstBool);
  EXPECT_FALSE(p->value);

  p = where_pred(run("SELECT C_KEY FROM CUSTOMER WHERE C_NAME <> ''").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::NotNull);

  // Ordering against '' keeps a comparison (on an order-comparable text
  // column); the operand is an empty cell, distinct from the NULL sentinel.
  p = where_pred(run("SELECT C_KEY FROM CUSTOMER WHERE C_ADDR > ''").plan);
  ASSERT_NE(p, nullptr);
  ASSERT_EQ(p->kind, PredNode::Kind::Cmp);
  const PlanOperand& lit = p->a.kind == PlanOperand::Kind::Literal ? p->a : p->b;
  EXPECT_EQ(lit.literal.kind, CipherCell::Kind::Text);
  EXPECT_EQ(lit.literal.text, "");
}

TEST(Lowering, OverlongTextOrderComparesCharwise) {
  const PredNode* p = where_pred(
      run("SELECT C_KEY FROM CUSTOMER WHERE C_ADDR > 'abcdefghi'").plan);
  ASSERT_NE(p, nullptr);
  ASSERT_EQ(p->kind, PredNode::Kind::Cmp);
  const PlanOperand& lit = p->a.kind == PlanOperand::Kind::Literal ? p->a : p->b;
  unsigned digits = fixed_cipher_digits(ring().key_for("addr"));
  EXPECT_EQ(lit.literal.text.size(), 9u * digits);

  p = where_pred(
      run("SELECT C_KEY FROM CUSTOMER WHERE C_ADDR = 'abcdefghi'").plan);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->kind, PredNode::Kind::ConstBool);
  EXPECT_FALSE(p->value);
}

// ---------------------------------------------------------------------------
// LIKE compilation
// ---------------------------------------------------------------------------

MatchProgram compile(const std::string& pattern, std::optional<char> esc = {}) {
  SplitRng rng(11);
  const DomainKey& key = ring().key_for("name");
  Int x = key.pick_equality_threshold(rng);
  return compile_like_pattern(pattern, esc, key, x, PlanColumn::Layout::FuzzyText, 0,
                              rng);
}

TEST(LikeCompile, SegmentsSplitOnPercent) {
  MatchProgram p = compile("aa%bb%yy");
  EXPECT_TRUE(p.anchored_start);
  EXPECT_TRUE(p.anchored_end);
  ASSERT_EQ(p.segments.size(), 3u);
  EXPECT_EQ(p.segments[0].atoms.size(), 2u);
  EXPECT_EQ(p.min_length, 6u);
}

TEST(LikeCompile, FloatingSegment) {
  MatchProgram p = compile("%abc%");
  EXPECT_FALSE(p.anchored_start);
  EXPECT_FALSE(p.anchored_end);
  ASSERT_EQ(p.segments.size(), 1u);
  EXPECT_EQ(p.min_length, 3u);
}

TEST(LikeCompile, EscapeMakesPercentLiteral) {
  MatchProgram p = compile("a!%c", '!');
  EXPECT_TRUE(p.anchored_start);
  EXPECT_TRUE(p.anchored_end);
  ASSERT_EQ(p.segments.size(), 1u);
  ASSERT_EQ(p.segments[0].atoms.size(), 3u);
  for (const MatchAtom& a : p.segments[0].atoms) {
    EXPECT_EQ(a.kind, MatchAtom::Kind::Literal);
  }
  EXPECT_EQ(p.min_length, 3u);
}

TEST(LikeCompile, ClassesAndWildcards) {
  MatchProgram p = compile("a[b-d]_%");
  ASSERT_EQ(p.segments.size(), 1u);
  ASSERT_EQ(p.segments[0].atoms.size(), 3u);
  EXPECT_EQ(p.segments[0].atoms[0].kind, MatchAtom::Kind::Literal);
  EXPECT_EQ(p.segments[0].atoms[1].kind, MatchAtom::Kind::Class);
  EXPECT_EQ(p.segments[0].atoms[1].ciphers.size(), 3u);
  EXPECT_EQ(p.segments[0].atoms[2].kind, MatchAtom::Kind::AnyOne);
  EXPECT_TRUE(p.anchored_start);
  EXPECT_FALSE(p.anchored_end);
}

TEST(LikeCompile, BlankAwareness) {
  MatchProgram p = compile("x ");
  ASSERT_EQ(p.segments.size(), 1u);
  ASSERT_EQ(p.segments[0].atoms.size(), 2u);
  EXPECT_FALSE(p.segments[0].atoms[0].matches_blank);
  EXPECT_TRUE(p.segments[0].atoms[1].matches_blank);

  MatchProgram cls = compile("[ b]");
  EXPECT_TRUE(cls.segments[0].atoms[0].matches_blank);
  MatchProgram neg = compile("[^ b]");
  EXPECT_TRUE(neg.segments[0].atoms[0].class_negated);
  EXPECT_FALSE(neg.segments[0].atoms[0].matches_blank);
}

// ---------------------------------------------------------------------------
// Hygiene
// ---------------------------------------------------------------------------

TEST(Hygiene, OneThresholdPerDomain) {
  Translation t =
      run("SELECT C_NAME FROM CUSTOMER WHERE C_NATION = 5 OR C_NATION = 7");
  const PredNode* p = where_pred(t.plan);
  ASSERT_NE(p, nullptr);
  ASSERT_EQ(p->kind, PredNode::Kind::Or);
  ASSERT_EQ(p->kids.size(), 2u);
  EXPECT_EQ(p->kids[0].x, p->kids[1].x);
  EXPECT_EQ(t.plan.thresholds.size(), 1u);
}

TEST(Hygiene, EveryTempIsDropped) {
  for (const char* sql :
       {"SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION HAVING SUM(C_QTY) > 20",
        "SELECT C_NAME FROM CUSTOMER WHERE EXISTS (SELECT O_KEY FROM ORDERS WHERE "
        "O_QTY > 3)"}) {
    Translation t = run(sql);
    EXPECT_EQ(count_steps(t.plan, Step::Kind::CreateTemp),
              count_steps(t.plan, Step::Kind::DropTemp))
        << sql;
    if (!t.plan.steps.empty()) {
      EXPECT_EQ(t.plan.steps.back().kind, Step::Kind::DropTemp) << sql;
    }
  }
}

TEST(Hygiene, DeterministicUnderFixedSeed) {
  const char* sql =
      "SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION HAVING SUM(C_QTY) > 20";
  Translation a = run(sql, 99);
  Translation b = run(sql, 99);
  EXPECT_EQ(a.plan.to_text(), b.plan.to_text());
  EXPECT_EQ(render_cipher_sql(a.plan), render_cipher_sql(b.plan));
}

TEST(Hygiene, PlanSurfacesLeakNothing) {
  std::vector<std::string> sqls = {
      "SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION HAVING SUM(C_QTY) > 20",
      "SELECT C_NAME FROM CUSTOMER WHERE C_NAME LIKE 'ab%' AND C_NATION = 5",
      "UPDATE ORDERS SET O_QTY = 7 WHERE O_KEY = 10",
  };
  std::string seed_hex = to_hex(ring().master_seed);
  for (const std::string& q : sqls) {
    Translation t = run(q);
    for (const std::string& surface :
         {t.plan.to_text(), render_cipher_sql(t.plan)}) {
      for (const char* name : {"CUSTOMER", "ORDERS", "C_NATION", "C_QTY", "C_NAME",
                               "O_QTY", "O_KEY", "NOTE"}) {
        EXPECT_FALSE(has(surface, name)) << q << "\n" << surface;
      }
      EXPECT_FALSE(has(surface, seed_hex)) << q;
      for (const auto& [id, info] : fixture().domains) {
        EXPECT_FALSE(has(surface, std::to_string(ring().key_for(id).sigma()))) << q;
      }
    }
  }
}

}  // namespace
}  // namespace opeadb
