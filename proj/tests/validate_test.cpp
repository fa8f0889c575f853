#include "opeadb/sql/validate.hpp"

#include <gtest/gtest.h>

#include "opeadb/errors.hpp"
#include "opeadb/manifest.hpp"
#include "opeadb/sql/parser.hpp"

namespace opeadb::sql {
namespace {

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

SchemaManifest fixture() {
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
  customer.columns.push_back(
      strcol("NOTE", "A08", SemType::Varchar, 6, EncodingRule::Fuzzy, "name"));

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
  orders.columns.push_back(
      col("O_QTY2", "A16", SemType::Integer, 1, 50, EncodingRule::Numeric, "qty"));

  m.tables = {customer, orders};
  m.domains["key"] = dom("key", 1000);
  m.domains["nation"] = dom("nation", 25);
  m.domains["qty"] = dom("qty", 50, 5000, 128);
  m.domains["name"] = dom("name", 126);
  m.domains["code"] = dom("code", 126126);
  m.domains["addr"] = dom("addr", 126);
  m.domains["okey"] = dom("okey", 5000);
  m.principals["root"] = {"*"};
  m.principals["alice"] = {"CUSTOMER"};
  m.principals["nobody"] = {};
  return m;
}

Resolution ok(const std::string& text, const std::string& who = "root") {
  SchemaManifest m = fixture();
  m.validate();
  Statement st = parse_statement(text);
  return validate_statement(st, m, Session{who});
}

void rejected(const std::string& text, ErrorKind kind, const char* fragment = nullptr,
              const std::string& who = "root") {
  SchemaManifest m = fixture();
  Statement st = parse_statement(text);
  try {
    validate_statement(st, m, Session{who});
    FAIL() << "expected rejection of: " << text;
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << text << " -> " << e.what();
    if (fragment) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  }
}

TEST(Manifest, JsonRoundTrip) {
  SchemaManifest m = fixture();
  SchemaManifest back = SchemaManifest::from_json(m.to_json());
  back.validate();
  ASSERT_EQ(back.tables.size(), 2u);
  EXPECT_EQ(back.tables[0].name, "CUSTOMER");
  EXPECT_EQ(back.tables[0].anon_name, "A01");
  ASSERT_EQ(back.tables[0].columns.size(), 7u);
  const ColumnSpec* qty = back.tables[0].find_column("c_qty");
  ASSERT_NE(qty, nullptr);
  EXPECT_TRUE(qty->needs_extension);
  EXPECT_EQ(back.domains.at("qty").config.max_sum, 5000u);
  EXPECT_TRUE(back.allows("root", "orders"));
  EXPECT_FALSE(back.allows("alice", "ORDERS"));
  EXPECT_FALSE(back.allows("ghost", "CUSTOMER"));
}

TEST(Manifest, ValidateCatchesIncoherence) {
  {
    SchemaManifest m = fixture();
    m.tables[1].anon_name = "A01";  // collision with CUSTOMER
    EXPECT_THROW(m.validate(), Error);
  }
  {
    SchemaManifest m = fixture();
    m.domains["nation"].config.t = 10;  // narrower than C_NATION's 25 codes
    EXPECT_THROW(m.validate(), Error);
  }
  {
    SchemaManifest m = fixture();
    m.tables[1].find_column("O_CUST");
    m.tables[1].columns[1].min = 0;  // same domain as C_KEY but shifted codes
    EXPECT_THROW(m.validate(), Error);
  }
  {
    SchemaManifest m = fixture();
    m.tables[1].columns[3].rule = EncodingRule::Fixed;  // NOTE departs from its domain
    EXPECT_THROW(m.validate(), Error);
  }
}

TEST(Manifest, AnonymizeIdentifier) {
  std::vector<std::uint8_t> key(32, 7);
  std::string a = anonymize_identifier(key, "CUSTOMER");
  EXPECT_EQ(a.size(), 17u);
  EXPECT_EQ(a[0], 'C');
  EXPECT_EQ(a, anonymize_identifier(key, "customer"));  // case-insensitive input
  EXPECT_NE(a, anonymize_identifier(key, "ORDERS"));
  std::vector<std::uint8_t> other(32, 8);
  EXPECT_NE(a, anonymize_identifier(other, "CUSTOMER"));
}

TEST(Validate, AcceptsRepresentativeQueries) {
  EXPECT_NO_THROW(ok("SELECT C_KEY, C_NATION FROM CUSTOMER WHERE C_NATION BETWEEN 3 "
                     "AND 17 ORDER BY C_NATION;"));
  EXPECT_NO_THROW(ok("SELECT O_KEY FROM ORDERS JOIN CUSTOMER ON ORDERS.O_CUST = "
                     "CUSTOMER.C_KEY WHERE C_QTY > 5;"));
  EXPECT_NO_THROW(ok("SELECT MIN(C_QTY), MAX(C_QTY), COUNT(C_QTY) FROM CUSTOMER;"));
  EXPECT_NO_THROW(ok("SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION HAVING "
                     "SUM(C_QTY) > 10;"));
  EXPECT_NO_THROW(ok("SELECT C_NAME FROM CUSTOMER WHERE C_NAME LIKE '%x_[ab]%';"));
  EXPECT_NO_THROW(ok("SELECT C_ADDR FROM CUSTOMER WHERE C_ADDR >= 'm' ORDER BY C_ADDR;"));
  EXPECT_NO_THROW(ok("SELECT C_KEY FROM CUSTOMER WHERE C_KEY = (SELECT MAX(O_CUST) "
                     "FROM ORDERS);"));
  EXPECT_NO_THROW(ok("SELECT C_KEY FROM CUSTOMER WHERE 5 >= (SELECT COUNT(O_KEY) "
                     "FROM ORDERS);"));
  EXPECT_NO_THROW(ok("SELECT C_KEY FROM CUSTOMER WHERE EXISTS (SELECT O_KEY FROM "
                     "ORDERS WHERE O_QTY > 40);"));
  EXPECT_NO_THROW(ok("INSERT INTO CUSTOMER (C_KEY, C_NATION, C_NAME) VALUES (7, 3, "
                     "'acme'), (8, NULL, DEFAULT);"));
  EXPECT_NO_THROW(ok("INSERT INTO ORDERS (O_CUST) SELECT C_KEY FROM "
                     "CUSTOMER WHERE C_NATION = 2;"));
  EXPECT_NO_THROW(ok("UPDATE CUSTOMER SET C_NATION = 4, C_NAME = DEFAULT WHERE "
                     "C_KEY = 9;"));
  EXPECT_NO_THROW(ok("UPDATE ORDERS SET O_QTY = 5 FROM ORDERS JOIN CUSTOMER ON "
                     "ORDERS.O_CUST = CUSTOMER.C_KEY WHERE C_NATION = 3;"));
  EXPECT_NO_THROW(ok("DELETE FROM ORDERS WHERE O_KEY BETWEEN 10 AND 20;"));
  EXPECT_NO_THROW(ok("SELECT C_CODE FROM CUSTOMER WHERE C_CODE = 'abc';"));
  EXPECT_NO_THROW(ok("SELECT C_KEY FROM CUSTOMER GROUP BY C_KEY HAVING COUNT(C_QTY) "
                     ">= 0 AND MIN(C_QTY) > 3;"));
  EXPECT_NO_THROW(ok("SELECT C_NATION, COUNT(C_KEY) FROM CUSTOMER GROUP BY C_NATION;"));
}

TEST(Validate, ResolutionFacts) {
  Resolution r = ok(
      "SELECT O_KEY FROM ORDERS JOIN CUSTOMER ON ORDERS.O_CUST = CUSTOMER.C_KEY "
      "WHERE C_QTY > 5;");
  ASSERT_EQ(r.scopes.size(), 1u);
  EXPECT_EQ(r.scopes.begin()->second.size(), 2u);
  EXPECT_EQ(r.columns.size(), 4u);  // O_KEY, O_CUST, C_KEY, C_QTY
}

TEST(Validate, PermissionChecks) {
  EXPECT_NO_THROW(ok("SELECT C_KEY FROM CUSTOMER", "alice"));
  rejected("SELECT O_KEY FROM ORDERS", ErrorKind::PermissionDenied, "alice", "alice");
  rejected("SELECT C_KEY FROM CUSTOMER", ErrorKind::PermissionDenied, nullptr, "nobody");
  rejected("SELECT C_KEY FROM CUSTOMER WHERE EXISTS (SELECT O_KEY FROM ORDERS)",
           ErrorKind::PermissionDenied, "ORDERS", "alice");
  rejected("DELETE FROM ORDERS", ErrorKind::PermissionDenied, nullptr, "alice");
}

TEST(Validate, UnknownAndAmbiguous) {
  rejected("SELECT x FROM NOWHERE", ErrorKind::UnknownIdentifier, "NOWHERE");
  rejected("SELECT GHOST FROM CUSTOMER", ErrorKind::UnknownIdentifier, "GHOST");
  rejected("SELECT NOTE FROM CUSTOMER, ORDERS", ErrorKind::UnknownIdentifier, "ambiguous");
  rejected("SELECT ORDERS.C_KEY FROM ORDERS", ErrorKind::UnknownIdentifier, nullptr);
  rejected("INSERT INTO CUSTOMER (GHOST) VALUES (1)", ErrorKind::UnknownIdentifier,
           "GHOST");
  rejected("UPDATE CUSTOMER SET GHOST = 1", ErrorKind::UnknownIdentifier, "GHOST");
}

TEST(Validate, UnsupportedFeatureCatalog) {
  rejected("SELECT C_QTY * 2 FROM CUSTOMER", ErrorKind::UnsupportedFeature, "arithmetic");
  rejected("SELECT ABS(C_QTY) FROM CUSTOMER", ErrorKind::UnsupportedFeature, "ABS");
  rejected("SELECT DISTINCT C_KEY FROM CUSTOMER", ErrorKind::UnsupportedFeature,
           "DISTINCT");
  rejected("SELECT COUNT(DISTINCT C_KEY) FROM CUSTOMER", ErrorKind::UnsupportedFeature,
           "DISTINCT");
  rejected("SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION HAVING SUM(C_QTY) > "
           "SUM(C_QTY)", ErrorKind::UnsupportedFeature, "SUM/AVG with another");
  rejected("SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION HAVING SUM(C_QTY) > "
           "C_NATION", ErrorKind::UnsupportedFeature, "positive integer");
  rejected("SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION HAVING SUM(C_QTY) > 0",
           ErrorKind::UnsupportedFeature, "positive integer");
  rejected("SELECT SUM(C_NATION) FROM CUSTOMER", ErrorKind::UnsupportedFeature,
           "additive");
  rejected("SELECT MIN(C_NAME) FROM CUSTOMER", ErrorKind::UnsupportedFeature,
           "order-comparable");
  rejected("SELECT C_NAME FROM CUSTOMER WHERE C_NAME < 'x'",
           ErrorKind::UnsupportedFeature, "order-comparable");
  rejected("SELECT C_NAME FROM CUSTOMER ORDER BY C_NAME", ErrorKind::UnsupportedFeature,
           "order-comparable");
  rejected("SELECT C_CODE FROM CUSTOMER WHERE C_CODE LIKE 'a%'",
           ErrorKind::UnsupportedFeature, "LIKE");
  rejected("SELECT C_KEY FROM CUSTOMER WHERE C_KEY LIKE '5%'",
           ErrorKind::UnsupportedFeature, "LIKE");
  rejected("SELECT C_KEY FROM CUSTOMER WHERE C_KEY = C_NATION",
           ErrorKind::UnsupportedFeature, "comparison domains");
  rejected("SELECT C_KEY FROM CUSTOMER WHERE C_KEY = NULL",
           ErrorKind::UnsupportedFeature, "IS NULL");
  rejected("SELECT C_KEY FROM CUSTOMER WHERE SUM(C_QTY) > 5",
           ErrorKind::UnsupportedFeature, "HAVING");
  rejected("SELECT C_KEY FROM CUSTOMER WHERE EXISTS (SELECT O_KEY FROM ORDERS WHERE "
           "O_CUST = C_KEY)", ErrorKind::UnsupportedFeature, "correlated");
  rejected("SELECT C_QTY FROM CUSTOMER WHERE C_QTY = (SELECT SUM(O_QTY) FROM ORDERS)",
           ErrorKind::UnsupportedFeature, "SUM and AVG");
  rejected("SELECT C_KEY FROM CUSTOMER WHERE C_KEY > (SELECT COUNT(O_KEY) FROM "
           "ORDERS)", ErrorKind::UnsupportedFeature, "COUNT results");
  rejected("SELECT C_KEY FROM CUSTOMER WHERE C_KEY = (SELECT MAX(O_QTY) FROM ORDERS)",
           ErrorKind::UnsupportedFeature, "comparison domains");
  rejected("SELECT C_NATION, SUM(C_QTY) FROM CUSTOMER", ErrorKind::UnsupportedFeature,
           "GROUP BY");
  rejected("SELECT C_KEY FROM CUSTOMER GROUP BY C_KEY ORDER BY C_NATION",
           ErrorKind::UnsupportedFeature, nullptr);
  rejected("SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION HAVING C_QTY > 5",
           ErrorKind::UnsupportedFeature, "grouping columns");
  rejected("SELECT C_KEY FROM CUSTOMER JOIN ORDERS ON CUSTOMER.NOTE LIKE 'x%'",
           ErrorKind::UnsupportedFeature, "join conditions");
  rejected("SELECT C_CODE FROM CUSTOMER WHERE C_CODE > 'abc'",
           ErrorKind::UnsupportedFeature, "wider than packed");
  rejected("INSERT INTO ORDERS (O_KEY, O_CUST) SELECT C_KEY, C_NATION FROM CUSTOMER",
           ErrorKind::UnsupportedFeature, "comparison domains");
  rejected("INSERT INTO ORDERS (O_KEY) SELECT COUNT(C_KEY) FROM CUSTOMER",
           ErrorKind::UnsupportedFeature, "COUNT results");
  rejected("UPDATE CUSTOMER SET C_NATION = C_KEY", ErrorKind::UnsupportedFeature,
           "comparison domains");
  rejected("SELECT C_KEY FROM CUSTOMER WHERE 5 IS NULL", ErrorKind::UnsupportedFeature,
           "IS NULL");
}

TEST(Validate, TypeAndRangeChecks) {
  rejected("SELECT C_KEY FROM CUSTOMER WHERE C_KEY = 'x'", ErrorKind::TypeMismatch,
           nullptr);
  rejected("SELECT C_NAME FROM CUSTOMER WHERE C_NAME = 5", ErrorKind::TypeMismatch,
           nullptr);
  rejected("INSERT INTO CUSTOMER (C_KEY, C_NATION) VALUES (1)", ErrorKind::TypeMismatch,
           "arity");
  rejected("INSERT INTO CUSTOMER (C_KEY, C_NATION) VALUES (1, 25)",
           ErrorKind::DomainRange, nullptr);
  rejected("INSERT INTO CUSTOMER (C_NATION) VALUES (3)", ErrorKind::DomainRange,
           "not nullable");
  rejected("INSERT INTO CUSTOMER (C_KEY) VALUES (NULL)", ErrorKind::DomainRange,
           "not nullable");
  rejected("UPDATE CUSTOMER SET C_KEY = NULL", ErrorKind::DomainRange, "not nullable");
  rejected("UPDATE CUSTOMER SET C_NATION = 99", ErrorKind::DomainRange, nullptr);
  rejected("UPDATE ORDERS SET O_QTY = 5 FROM CUSTOMER WHERE C_NATION = 3",
           ErrorKind::UnknownIdentifier, "must appear in FROM");
}

TEST(Validate, ConstantGatesAllowed) {
  EXPECT_NO_THROW(ok("SELECT C_KEY FROM CUSTOMER WHERE 1 = 1"));
  EXPECT_NO_THROW(ok("SELECT C_KEY FROM CUSTOMER WHERE C_NATION = 999"));  // folds false
  rejected("SELECT C_KEY FROM CUSTOMER WHERE 1 = 'x'", ErrorKind::TypeMismatch, nullptr);
}

TEST(Validate, GeometryMustMatchForCipherComparison) {
  // C_NAME (width 10) and NOTE (width 6) share a domain but encode cells
  // differently, so the store cannot compare or copy them.
  rejected("SELECT C_KEY FROM CUSTOMER WHERE C_NAME = NOTE",
           ErrorKind::UnsupportedFeature, "encode values differently");
  rejected("UPDATE CUSTOMER SET C_NAME = NOTE", ErrorKind::UnsupportedFeature,
           "cannot move between them");
  rejected("INSERT INTO CUSTOMER (C_KEY, C_NAME) SELECT 5, NOTE FROM ORDERS",
           ErrorKind::UnsupportedFeature, "cannot move between them");
  EXPECT_NO_THROW(ok("SELECT C_KEY FROM CUSTOMER INNER JOIN ORDERS ON C_KEY = O_CUST"));
}

TEST(Validate, ExtensionCipherMustAccompanyTransfers) {
  rejected("UPDATE ORDERS SET O_QTY = O_QTY2", ErrorKind::UnsupportedFeature,
           "cannot supply");
  rejected("INSERT INTO ORDERS (O_QTY) SELECT O_QTY2 FROM ORDERS",
           ErrorKind::UnsupportedFeature, "cannot supply");
  // Dropping the extension on the way into a plain column is fine.
  EXPECT_NO_THROW(ok("UPDATE ORDERS SET O_QTY2 = O_QTY"));
  rejected("UPDATE CUSTOMER SET C_QTY = C_NATION", ErrorKind::UnsupportedFeature,
           "across comparison domains");
}

TEST(Validate, AggregationCollapseRules) {
  rejected("SELECT SUM(C_QTY) FROM CUSTOMER ORDER BY C_KEY",
           ErrorKind::UnsupportedFeature, "collapsed by aggregation");
  EXPECT_NO_THROW(ok("SELECT C_NATION FROM CUSTOMER GROUP BY C_NATION ORDER BY "
                     "C_NATION"));
  // HAVING makes one group of the whole input, so bare columns and stars
  // fall under the grouped rules even without GROUP BY.
  rejected("SELECT C_KEY FROM CUSTOMER HAVING COUNT(C_KEY) > 1",
           ErrorKind::UnsupportedFeature, "must appear in GROUP BY");
  rejected("SELECT * FROM CUSTOMER HAVING COUNT(C_KEY) > 1",
           ErrorKind::UnsupportedFeature, "cannot mix");
  EXPECT_NO_THROW(ok("SELECT COUNT(C_KEY) FROM CUSTOMER HAVING COUNT(C_KEY) > 1"));
}

TEST(Validate, FromShapeRules) {
  rejected("SELECT C_KEY FROM CUSTOMER INNER JOIN ORDERS ON C_KEY = O_CUST, ORDERS",
           ErrorKind::UnsupportedFeature, "cannot mix with other FROM entries");
  rejected("UPDATE CUSTOMER SET C_NATION = 3 FROM CUSTOMER, CUSTOMER",
           ErrorKind::UnsupportedFeature, "only once");
  rejected("SELECT C_NATION FROM CUSTOMER GROUP BY ALL C_NATION",
           ErrorKind::UnsupportedFeature, "GROUP BY ALL");
}

}  // namespace
}  // namespace opeadb::sql
