#include <cmath>
#include <random>

#include "doctest.h"
#include "g2lab/expression.hpp"

using namespace g2lab;

namespace {

double eval(const std::string& text, double u, double v, const Parameters& p = {}) {
  std::set<std::string> names;
  for (const auto& [k, _] : p) names.insert(k);
  return parse_expression(text, names).evaluate(u, v, p);
}

}  // namespace

TEST_CASE("parse_expression examples") {
  CHECK(eval("u^2 - v^2", 2, 3) == -5.0);
  CHECK(eval("sin(u)*cos(v)", 0, 0) == 0.0);
  CHECK(eval("2*u + -v^2", 1, 2) == -2.0);
  CHECK(eval("2*u + (-(v^2))", 1, 2) == -2.0);
}

TEST_CASE("precedence and associativity") {
  CHECK(eval("1 - 2 - 3", 0, 0) == -4.0);
  CHECK(eval("8 / 4 / 2", 0, 0) == 1.0);
  CHECK(eval("2 ^ 3 ^ 2", 0, 0) == 512.0);
  CHECK(eval("-2 ^ 2", 0, 0) == -4.0);
  CHECK(eval("(-2) ^ 2", 0, 0) == 4.0);
  CHECK(eval("2 * 3 + 4 * 5", 0, 0) == 26.0);
  CHECK(eval("u ^ -2", 2, 0) == 0.25);
  CHECK(eval("--u", 3, 0) == 3.0);
  CHECK(eval("1.5e2 + .5", 0, 0) == 150.5);
}

TEST_CASE("functions and parameters") {
  const Parameters p{{"r", 2.0}, {"k", 3.0}};
  CHECK(eval("r * cosh(v)", 0, 0, p) == 2.0);
  CHECK(std::abs(eval("exp(u) - sinh(u) - cosh(u)", 0.7, 0, p)) < 1e-15);
  CHECK(eval("k*u", 2, 0, p) == 6.0);
}

TEST_CASE("parse errors carry offset and expected tokens") {
  try {
    parse_expression("u + * v");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK_FALSE(e.expected().empty());
  }
  try {
    parse_expression("u + w");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(std::string(e.what()).find("unknown identifier 'w'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_expression("(u + v"), ParseError);
  CHECK_THROWS_AS(parse_expression("u^v"), ParseError);
  CHECK_THROWS_AS(parse_expression("u^1.5"), ParseError);
  CHECK_THROWS_AS(parse_expression("sin u"), ParseError);
  CHECK_THROWS_AS(parse_expression(""), ParseError);
  CHECK_THROWS_AS(parse_expression("u v"), ParseError);
}

TEST_CASE("parse-print-parse round trip is the identity on trees") {
  const char* samples[] = {"u^2 - v^2", "2*u + -v^2", "sin(u)*cos(v)/(1 + exp(-u))", "2^3^2 * u",
                           "-(-u)^3", "cosh(v) - 1e-3*sinh(u*v)", "u ^ -1"};
  for (const char* s : samples) {
    const Expr a = parse_expression(s);
    const Expr b = parse_expression(a.to_string());
    CHECK(a == b);
    CHECK(b.to_string() == a.to_string());
  }
  CHECK(parse_expression("2*u + -v^2").to_string() == "((2 * u) + (-(v ^ 2)))");
}

TEST_CASE("symbolic derivatives agree with central differences") {
  const Expr e = parse_expression("sin(u)*cosh(v) + u^3*v - exp(u*v)/(2 + v^2)");
  const Expr du = e.derivative("u"), dv = e.derivative("v");
  const Expr duv = du.derivative("v");
  const double u = 0.3, v = -0.4, h = 1e-4;
  const double fd_u = (e.evaluate(u + h, v) - e.evaluate(u - h, v)) / (2 * h);
  const double fd_v = (e.evaluate(u, v + h) - e.evaluate(u, v - h)) / (2 * h);
  const double fd_uv = (e.evaluate(u + h, v + h) - e.evaluate(u + h, v - h) - e.evaluate(u - h, v + h) +
                        e.evaluate(u - h, v - h)) / (4 * h * h);
  CHECK(std::abs(du.evaluate(u, v) - fd_u) < 1e-7);
  CHECK(std::abs(dv.evaluate(u, v) - fd_v) < 1e-7);
  CHECK(std::abs(duv.evaluate(u, v) - fd_uv) < 1e-5);
}

TEST_CASE("ImmersionExpr exact jet") {
  const ImmersionExpr f({"u", "v", "u^2 - v^2", "2*u*v", "0", "0", "t0"}, {{"t0", 0.5}});
  const auto j = f.exact_jet(0.0, 0.0);
  CHECK(j.f == Vector7{{0, 0, 0, 0, 0, 0, 0.5}});
  CHECK(j.fuu == Vector7{{0, 0, 2, 0, 0, 0, 0}});
  CHECK(j.fvv == Vector7{{0, 0, -2, 0, 0, 0, 0}});
  CHECK(j.fuv == Vector7{{0, 0, 0, 2, 0, 0, 0}});
  CHECK_THROWS_AS(ImmersionExpr({"u", "v", "q", "0", "0", "0", "0"}, {}), ParseError);
}

TEST_CASE("parser totality on random token strings") {
  const char* tokens[] = {"u", "v", "a", "1", "2.5", "1e3", "+", "-", "*", "/", "^", "(", ")", "sin", "cos",
                          "sinh", "cosh", "exp", " ", ".", "e", "x", "$", "^-", "((", "))", "0.", "9e-"};
  const int n_tokens = sizeof(tokens) / sizeof(tokens[0]);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> pick(0, n_tokens - 1), len(0, 24);
  int parsed = 0, rejected = 0;
  for (int n = 0; n < 10000; ++n) {
    std::string text;
    const int m = len(rng);
    for (int i = 0; i < m; ++i) text += tokens[pick(rng)];
    try {
      const Expr e = parse_expression(text, {"a"});
      (void)e.evaluate(0.3, 0.7, {{"a", 1.0}});
      CHECK(parse_expression(e.to_string(), {"a"}) == e);
      ++parsed;
    } catch (const ParseError& err) {
      CHECK(err.offset() <= text.size());
      ++rejected;
    }
  }
  CHECK(parsed + rejected == 10000);
  CHECK(parsed > 0);
}
