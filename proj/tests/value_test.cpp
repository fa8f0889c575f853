#include "opeadb/value.hpp"

#include <gtest/gtest.h>

#include "opeadb/errors.hpp"

namespace opeadb {
namespace {

TEST(Value, KindsAndAccessors) {
  EXPECT_TRUE(Value::null().is_null());
  EXPECT_EQ(Value::integer(-7).as_integer(), -7);
  EXPECT_EQ(Value::text("hi").as_text(), "hi");
  EXPECT_THROW(Value::null().as_integer(), Error);
  EXPECT_THROW(Value::integer(1).as_text(), Error);
}

TEST(Value, Display) {
  EXPECT_EQ(Value::integer(42).display(), "42");
  EXPECT_EQ(Value::decimal(-1250, 2).display(), "-12.50");
  EXPECT_EQ(Value::decimal(5, 0).display(), "5");
  EXPECT_EQ(Value::decimal(5, 3).display(), "0.005");
  EXPECT_EQ(Value::text("a b").display(), "a b");
  EXPECT_EQ(Value::null().display(), "NULL");
  // Rationals print exactly when the reduced denominator is 2^a * 5^b.
  EXPECT_EQ(Value::rational(Int(7), Int(2)).display(), "3.5");
  EXPECT_EQ(Value::rational(Int(1), Int(8)).display(), "0.125");
  EXPECT_EQ(Value::rational(Int(10), Int(4)).display(), "2.5");
  EXPECT_EQ(Value::rational(Int(-3), Int(20)).display(), "-0.15");
  EXPECT_EQ(Value::rational(Int(1), Int(3)).display(), "1/3");
  EXPECT_EQ(Value::rational(Int(6), Int(3)).display(), "2");
}

TEST(Value, NumericCompareExactAcrossKinds) {
  EXPECT_EQ(Value::numeric_compare(Value::integer(2), Value::decimal(20, 1)), 0);
  EXPECT_LT(Value::numeric_compare(Value::decimal(19, 1), Value::integer(2)), 0);
  EXPECT_GT(Value::numeric_compare(Value::rational(Int(7), Int(3)), Value::integer(2)), 0);
  EXPECT_EQ(Value::numeric_compare(Value::rational(Int(5), Int(2)), Value::decimal(25, 1)), 0);
  EXPECT_THROW(Value::numeric_compare(Value::text("1"), Value::integer(1)), Error);
}

TEST(Value, Equals) {
  EXPECT_TRUE(Value::equals(Value::null(), Value::null()));
  EXPECT_FALSE(Value::equals(Value::null(), Value::integer(0)));
  EXPECT_TRUE(Value::equals(Value::integer(3), Value::decimal(30, 1)));
  EXPECT_TRUE(Value::equals(Value::text("ab"), Value::text("ab")));
  EXPECT_FALSE(Value::equals(Value::text("ab"), Value::text("ab ")));
  EXPECT_FALSE(Value::equals(Value::text("1"), Value::integer(1)));
}

}  // namespace
}  // namespace opeadb
