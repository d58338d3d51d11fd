#include <doctest.h>

#include <cmath>
#include <random>

#include "warpgeo/errors.hpp"
#include "warpgeo/expr.hpp"

using namespace warpgeo;

namespace {

Expr var(const char* n) { return Expr::variable(n); }

// Random expression over x, y, z. Leaves are variables or small constants.
Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 11);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  const char* names[] = {"x", "y", "z"};
  const int k = depth <= 0 ? pick(rng) % 2 : pick(rng);
  switch (k) {
    case 0: return Expr::variable(names[rng() % 3]);
    case 1: return Expr::constant(std::round(c(rng) * 4.0) / 4.0);
    case 2: return Expr::binary(Op::add, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 3: return Expr::binary(Op::sub, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4:
    case 5: return Expr::binary(Op::mul, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6: return Expr::binary(Op::div, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 7: return Expr::power(random_expr(rng, depth - 1), static_cast<double>(rng() % 4));
    case 8: return Expr::unary(Op::sin, random_expr(rng, depth - 1));
    case 9: return Expr::unary(Op::cos, random_expr(rng, depth - 1));
    case 10: return Expr::unary(Op::exp, random_expr(rng, depth - 1) * Expr::constant(0.25));
    default: return Expr::unary(Op::neg, random_expr(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  CHECK(parse("x1^2 + sin(t)") ==
        Expr::binary(Op::add, Expr::power(var("x1"), 2.0), Expr::unary(Op::sin, var("t"))));
  CHECK(parse("-(1/2)*x1") ==
        Expr::unary(Op::neg, Expr::binary(Op::mul,
                                          Expr::binary(Op::div, Expr::constant(1), Expr::constant(2)),
                                          var("x1"))));
}

TEST_CASE("leading minus covers the whole product term") {
  const Bindings b{{"x", 3.0}, {"y", 2.0}};
  CHECK(eval(parse("-x*y"), b) == doctest::Approx(-6.0));
  CHECK(eval(parse("-x^2"), b) == doctest::Approx(-9.0));
  CHECK(eval(parse("1 - x*y"), b) == doctest::Approx(-5.0));
  // same-precedence operators group to the left, including ^
  CHECK(eval(parse("2^3^2"), {}) == doctest::Approx(64.0));
  CHECK(eval(parse("8/4/2"), {}) == doctest::Approx(1.0));
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    parse("2*");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 2);
  }
  try {
    parse("x^");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(parse("foo(x)"), UnknownFunction);
  CHECK_THROWS_AS(parse("(x"), SyntaxError);
  CHECK_THROWS_AS(parse("x y"), SyntaxError);
  CHECK_THROWS_AS(parse("x^y"), SyntaxError);
  CHECK_THROWS_AS(parse(""), SyntaxError);
}

TEST_CASE("eval") {
  CHECK(eval(parse("2*x + sin(t)"), {{"x", 1.0}, {"t", 0.0}}) == doctest::Approx(2.0));
  CHECK(eval(parse("x^2"), {{"x", 3.0}}) == doctest::Approx(9.0));
  CHECK(eval(parse("pi"), {}) == doctest::Approx(M_PI));
  CHECK_THROWS_AS(eval(parse("1/x"), {{"x", 0.0}}), DomainError);
  CHECK_THROWS_AS(eval(parse("log(x)"), {{"x", -1.0}}), DomainError);
  CHECK_THROWS_AS(eval(parse("sqrt(x)"), {{"x", -1.0}}), DomainError);
  CHECK_THROWS_AS(eval(parse("x + y"), {{"x", 1.0}}), UnboundVariable);
}

TEST_CASE("eval_dual") {
  auto d = eval_dual(parse("x^2"), {{"x", 3.0}}, "x");
  CHECK(d.first == doctest::Approx(9.0));
  CHECK(d.second == doctest::Approx(6.0));
  d = eval_dual(parse("sin(t)"), {{"t", 0.0}}, "t");
  CHECK(d.first == doctest::Approx(0.0));
  CHECK(d.second == doctest::Approx(1.0));
  d = eval_dual(parse("x*y"), {{"x", 2.0}, {"y", 5.0}}, "y");
  CHECK(d.first == doctest::Approx(10.0));
  CHECK(d.second == doctest::Approx(2.0));
  CHECK_THROWS_AS(eval_dual(parse("x"), {{"x", 1.0}}, "q"), UnboundVariable);
}

TEST_CASE("to_string round-trips") {
  for (const char* s : {"x1^2 + sin(t)", "-(1/2)*x1", "1/4 + y^2/4", "-y/4", "exp(x1/4)*cos(y)",
                        "a - (b - c)", "a/(b*c)", "(a + b)^2", "-(x^2)", "2^3^2"}) {
    const Expr e = parse(s);
    CHECK_MESSAGE(parse(to_string(e)) == e, s);
  }
}

TEST_CASE("dual derivative matches central differences on random expressions") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int n = 0; n < 1000; ++n) {
    const Expr e = random_expr(rng, 4);
    const Bindings b{{"x", u(rng)}, {"y", u(rng)}, {"z", u(rng)}};
    const std::string seed = std::string(1, "xyz"[n % 3]);
    try {
      const auto [value, deriv] = eval_dual(e, b, seed);
      auto central = [&](double h) {
        Bindings lo = b, hi = b;
        lo.find(seed)->second -= h;
        hi.find(seed)->second += h;
        return (eval(e, hi) - eval(e, lo)) / (2.0 * h);
      };
      const double fd = central(1e-6);
      CHECK(value == doctest::Approx(eval(e, b)));
      // differences are only trusted where two step sizes agree
      if (std::abs(fd - central(1e-5)) > 1e-6 * (1.0 + std::abs(fd))) continue;
      CHECK_MESSAGE(std::abs(fd - deriv) <= 1e-5 * (1.0 + std::abs(deriv)), to_string(e));
      ++checked;
    } catch (const DomainError&) {
    }
  }
  CHECK(checked > 800);
}

TEST_CASE("Program evaluates like the tree walker") {
  const std::vector<std::string> vars{"x", "y"};
  const Expr e = parse("x*exp(y) - sqrt(x^2 + 1)/(2 + cos(y))");
  const Program p(e, vars);
  const double xs[] = {0.7, -0.3};
  CHECK(p.eval(std::span<const double>(xs)) ==
        doctest::Approx(eval(e, {{"x", 0.7}, {"y", -0.3}})));
  CHECK(p.eval_seeded(std::span<const double>(xs), 1).deriv ==
        doctest::Approx(eval_dual(e, {{"x", 0.7}, {"y", -0.3}}, "y").second));
}
