#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curvemates/expression.hpp"

using namespace curvemates;

namespace {

const char* const kFigureFormulas[] = {
    "s-1",
    "s^2+s-2",
    "3*cos(s)",
    "3*sin(s)",
    "2*(1+7*sin(2*s)^2)^(-1/2)",
    "2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)",
    "3",
    "2*s",
    "sqrt(2)",
    "sqrt((s-1)^2*(s^2+4*s+5))",
    "1/(s^2+4*s+5)",
    "abs(3*sin(s))",
    "4*sqrt(7)*cos(2*s)/(9-7*cos(4*s))",
    "sqrt(9+4*s^2)",
    "6/(9+4*s^2)",
    "abs(2*s)",
    "3*sqrt(2)*sin(s)/(2+9*cos(s)^2)",
};

}  // namespace

TEST(Parse, FigureProfileValues) {
  EXPECT_DOUBLE_EQ(parse("3*cos(s)")(0.0), 3.0);
  EXPECT_DOUBLE_EQ(parse("s^2+s-2")(1.0), 0.0);
  EXPECT_DOUBLE_EQ(parse("sqrt(2)")(0.7), 1.4142135623730951);
  EXPECT_NEAR(parse("2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)")(std::numbers::pi / 4), 1.8708286933869707,
              1e-15);
}

TEST(Parse, Precedence) {
  EXPECT_DOUBLE_EQ(parse("2^3^2")(0), 512.0);
  EXPECT_DOUBLE_EQ(parse("-2^2")(0), -4.0);
  EXPECT_DOUBLE_EQ(parse("8/4/2")(0), 1.0);
  EXPECT_DOUBLE_EQ(parse("1-2-3")(0), -4.0);
  EXPECT_DOUBLE_EQ(parse("2*3+4*5")(0), 26.0);
  EXPECT_DOUBLE_EQ(parse(" 2 * ( s + 1 ) ")(2.0), 6.0);
  EXPECT_DOUBLE_EQ(parse("1.5e1*s")(2.0), 30.0);
  EXPECT_DOUBLE_EQ(parse("pi")(0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(parse("2^-1")(0), 0.5);
}

TEST(Parse, Errors) {
  try {
    parse("2*)s");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("   "), SyntaxError);
  EXPECT_THROW(parse("foo(s)"), SyntaxError);
  EXPECT_THROW(parse("x"), SyntaxError);
  EXPECT_THROW(parse("sin s"), SyntaxError);
  EXPECT_THROW(parse("(s"), SyntaxError);
  EXPECT_THROW(parse("s)"), SyntaxError);
  EXPECT_THROW(parse("s 2"), SyntaxError);
}

TEST(Eval, DomainErrors) {
  EXPECT_THROW(parse("1/s")(0.0), DomainError);
  EXPECT_THROW(parse("sqrt(s)")(-1.0), DomainError);
  EXPECT_THROW(parse("log(s)")(0.0), DomainError);
  EXPECT_THROW(parse("s^0.5")(-1.0), DomainError);
  EXPECT_THROW(parse("s^(-1)")(0.0), DomainError);
  EXPECT_DOUBLE_EQ(parse("s^3")(-2.0), -8.0);
  try {
    parse("1+1/s")(0.0);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.subterm(), "1/s");
    EXPECT_EQ(e.s(), 0.0);
  }
}

TEST(Differentiate, TextbookRules) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Expr d1 = differentiate(parse("3*cos(s)"));
  const Expr d2 = differentiate(parse("s^2+s-2"));
  for (int i = 0; i < 20; ++i) {
    const double s = u(rng);
    EXPECT_NEAR(d1(s), -3 * std::sin(s), 1e-15);
    EXPECT_NEAR(d2(s), 2 * s + 1, 1e-15);
  }
  EXPECT_TRUE(differentiate(parse("7")).is_number(0.0));
  EXPECT_TRUE(differentiate(parse("s")).is_number(1.0));
}

TEST(Differentiate, AgreesWithCentralDifference) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-5;
  for (const char* text : kFigureFormulas) {
    const Expr e = parse(text);
    const Expr de = differentiate(e);
    int checked = 0;
    while (checked < 50) {
      const double s = u(rng);
      double fd = 0.0;
      double value = 0.0;
      try {
        fd = (e(s + h) - e(s - h)) / (2 * h);
        value = de(s);
      } catch (const DomainError&) {
        continue;
      }
      EXPECT_LE(std::abs(value - fd), 1e-6 * (1 + std::abs(value))) << text << " at s=" << s;
      ++checked;
    }
  }
}

TEST(Differentiate, VariableExponent) {
  const Expr e = parse("s^s");
  const Expr d = differentiate(e);
  const double s = 1.3;
  EXPECT_NEAR(d(s), std::pow(s, s) * (std::log(s) + 1), 1e-13);
}

TEST(Differentiate, Linearity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Expr f = parse("sin(s)*exp(s)");
  const Expr g = parse("s^3-cos(2*s)");
  const Expr a = Expr::number(2.5), b = Expr::number(-0.75);
  const Expr lhs = differentiate(a * f + b * g);
  const Expr rhs = a * differentiate(f) + b * differentiate(g);
  for (int i = 0; i < 100; ++i) {
    const double s = u(rng);
    EXPECT_NEAR(lhs(s), rhs(s), 1e-12);
  }
}

TEST(Print, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const char* extra[] = {"-s^2", "-(-s)", "2*-s", "(-2)^2", "s-(s-1)", "1/(2/s)", "2^(s^2)", "-(s*2)",
                         "0.1+1e-5*s"};
  std::vector<std::string> texts(std::begin(kFigureFormulas), std::end(kFigureFormulas));
  texts.insert(texts.end(), std::begin(extra), std::end(extra));
  for (const auto& text : texts) {
    const Expr e = parse(text);
    const Expr back = parse(e.to_string());
    EXPECT_EQ(back.to_string(), e.to_string());
    for (int i = 0; i < 100; ++i) {
      const double s = u(rng);
      double a = 0.0, b = 0.0;
      try {
        a = e(s);
      } catch (const DomainError&) {
        EXPECT_THROW(back(s), DomainError);
        continue;
      }
      b = back(s);
      EXPECT_NEAR(a, b, 1e-12 * (1 + std::abs(a))) << text;
    }
  }
}

TEST(Eval, LongDoubleMatchesDouble) {
  const Expr e = parse("2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)");
  EXPECT_NEAR(static_cast<double>(e.eval<long double>(0.3L)), e(0.3), 1e-15);
}
