#include <gtest/gtest.h>

#include "partrace/expr.hpp"
#include "partrace/operation.hpp"

using namespace partrace;

TEST(Expr, CanonicalTextHasNoSpacesAndMinimalParens) {
  EXPECT_EQ(to_text(*parse_expression("x  >  0", true)), "x>0");
  EXPECT_EQ(to_text(*parse_expression("(x + 1) * 2 <= y - (z - 3)", true)), "(x+1)*2<=y-(z-3)");
  EXPECT_EQ(to_text(*parse_expression("a - (b + c)", false)), "a-(b+c)");
  EXPECT_EQ(to_text(*parse_expression("a - b + c", false)), "a-b+c");
  EXPECT_EQ(to_text(*parse_expression("!(x != 0)", true)), "!(x!=0)");
  EXPECT_EQ(to_text(*parse_expression("x > 0 && (y > 0 || z > 0)", true)), "x>0&&(y>0||z>0)");
  EXPECT_EQ(to_text(*parse_expression("-x", false)), "-x");
  EXPECT_EQ(to_text(*parse_expression("x > -10", true)), "x>-10");
}

TEST(Expr, ReparsingCanonicalTextIsStable) {
  for (const char* src : {"x>0", "!(x>0)", "x-(y-1)*3>=2", "!(a==b)&&(c<1||d>2)", "-(x+y)<0"}) {
    std::string once = to_text(*parse_expression(src, true));
    EXPECT_EQ(to_text(*parse_expression(once, true)), once) << src;
  }
}

TEST(Expr, ArbitraryPrecisionConstants) {
  auto e = parse_expression("123456789012345678901234567890 + 1", false);
  EXPECT_EQ(eval_int(*e, {}), Int("123456789012345678901234567891"));
}

TEST(Expr, NonLinearProductIsRejected) {
  EXPECT_THROW(parse_expression("x * y", false), ParseError);
  EXPECT_NO_THROW(parse_expression("x * (2 + 3)", false));
  EXPECT_NO_THROW(parse_expression("(1 - 3) * x", false));
}

TEST(Expr, SortErrors) {
  EXPECT_THROW(parse_expression("x + 1", true), ParseError);
  EXPECT_THROW(parse_expression("x > 0", false), ParseError);
  EXPECT_THROW(parse_expression("(x > 0) + 1", false), ParseError);
}

TEST(Expr, ErrorsCarryPosition) {
  try {
    parse_expression("x >\n  )", true);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.pos().line, 2);
    EXPECT_EQ(e.pos().column, 3);
  }
}

TEST(Expr, Evaluation) {
  std::map<std::string, Int> env{{"x", 3}, {"y", -2}};
  EXPECT_EQ(eval_int(*parse_expression("2*x - y", false), env), 8);
  EXPECT_TRUE(eval_bool(*parse_expression("x > y && !(y == 0)", true), env));
  EXPECT_FALSE(eval_bool(*parse_expression("x <= y || y >= 0", true), env));
}

TEST(Operation, TextIdentity) {
  auto a = Operation::assign("x", parse_expression("x - 1", false));
  EXPECT_EQ(a.text(), "x=x-1;");
  EXPECT_EQ(Operation::assume(parse_expression("x>0", true)).text(), "x>0");
  EXPECT_EQ(Operation::havoc("x").text(), "havoc x;");
  EXPECT_EQ(a, Operation::assign("x", parse_expression("x-1", false)));

  SymbolTable t;
  Symbol s1 = t.intern(a);
  Symbol s2 = t.intern(Operation::assign("x", parse_expression("x -1", false)));
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(t.size(), 1u);
}

TEST(Operation, Execute) {
  std::map<std::string, Int> st{{"x", 5}};
  EXPECT_TRUE(execute(Operation::assign("x", parse_expression("-x", false)), st));
  EXPECT_EQ(st["x"], -5);
  EXPECT_FALSE(execute(Operation::assume(parse_expression("x>0", true)), st));
  Int v = 42;
  EXPECT_TRUE(execute(Operation::havoc("x"), st, &v));
  EXPECT_EQ(st["x"], 42);
}
