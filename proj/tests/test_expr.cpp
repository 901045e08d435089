#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "gsdde/error.hpp"
#include "gsdde/expr.hpp"

using namespace gsdde;

namespace {

double eval_at(const char* text, double x = 0, double y = 0, double t = 0, double u = 0) {
  return eval_expr(parse_expr(text), Bindings()
                                         .set(Var::X, x)
                                         .set(Var::Y, y)
                                         .set(Var::T, t)
                                         .set(Var::U, u));
}

// Polynomial in x with its exact derivative, for checking the finite
// differences. coeffs[i] multiplies x^i.
struct Poly {
  std::vector<double> coeffs;

  std::string text() const {
    std::string s;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (i) s += " + ";
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", coeffs[i]);
      s += "(" + std::string(buf) + ")*x^" + std::to_string(i);
    }
    return s;
  }
  double value(double x) const {
    double acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  }
  Poly derivative() const {
    Poly d;
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
      d.coeffs.push_back(static_cast<double>(i) * coeffs[i]);
    }
    if (d.coeffs.empty()) d.coeffs.push_back(0.0);
    return d;
  }
};

std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  const char* vars[] = {"x", "y", "t", "u"};
  switch (pick(rng)) {
    case 0: {
      std::uniform_real_distribution<double> v(0.0, 100.0);
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.6g", v(rng));
      return buf;
    }
    case 1: return vars[rng() % 4];
    case 2: return "-(" + random_expr(rng, depth - 1) + ")";
    case 3: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
    case 4: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
    case 5: return random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1);
    case 6: return "(" + random_expr(rng, depth - 1) + ")/(" + random_expr(rng, depth - 1) + ")";
    case 7: return "(" + random_expr(rng, depth - 1) + ")^(" + random_expr(rng, depth - 1) + ")";
    case 8: {
      const char* f[] = {"exp", "sin", "cos", "abs"};
      return std::string(f[rng() % 4]) + "(" + random_expr(rng, depth - 1) + ")";
    }
    default: {
      const char* f[] = {"pow", "min", "max"};
      return std::string(f[rng() % 3]) + "(" + random_expr(rng, depth - 1) + ", " +
             random_expr(rng, depth - 1) + ")";
    }
  }
}

}  // namespace

TEST_CASE("parse shapes") {
  CHECK(shape(parse_expr("-x^3 - y")) == "Sub(Neg(Pow(x,3)),y)");
  CHECK(shape(parse_expr("0.5*exp(-t)")) == "Mul(0.5,exp(Neg(t)))");
  CHECK(shape(parse_expr("-x^2")) == "Neg(Pow(x,2))");
  CHECK(shape(parse_expr("2^3^2")) == "Pow(2,Pow(3,2))");
  CHECK(shape(parse_expr("1 - 2 - 3")) == "Sub(Sub(1,2),3)");
  CHECK(shape(parse_expr("8 / 4 / 2")) == "Div(Div(8,4),2)");
  CHECK(shape(parse_expr("1.5e-3*x")) == "Mul(0.0015,x)");
}

TEST_CASE("parse errors carry offset and expectations") {
  try {
    parse_expr("x + ");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(e.code() == Errc::ParseError);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(parse_expr("(x"), ParseError);
  CHECK_THROWS_AS(parse_expr("x y"), ParseError);
  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("2 $ 3"), ParseError);

  auto code_of = [](const char* text) {
    try {
      parse_expr(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::IoError;
  };
  CHECK(code_of("z + 1") == Errc::UnknownIdentifier);
  CHECK(code_of("log(x)") == Errc::UnknownIdentifier);
  CHECK(code_of("x(2)") == Errc::UnknownIdentifier);
  CHECK(code_of("exp(x, y)") == Errc::ArityMismatch);
  CHECK(code_of("pow(x)") == Errc::ArityMismatch);
}

TEST_CASE("evaluation") {
  CHECK(eval_at("-x^3 - y", 2, 1) == -9.0);
  CHECK(eval_at("0.5*exp(-t)", 0, 0, 0) == 0.5);
  CHECK(eval_at("exp(-t)+x^2+x^4", 1, 0, 0) == 3.0);
  CHECK(eval_at("-x^2", 3) == -9.0);
  CHECK(eval_at("2^3^2") == 512.0);
  CHECK(eval_at("min(x, y) + max(x, y)", 2, 5) == 7.0);
  CHECK(eval_at("abs(u) + pow(2, 10)", 0, 0, 0, -4) == 1028.0);
  CHECK(eval_at("cos(0) + sin(0)") == 1.0);
}

TEST_CASE("checked evaluation errors") {
  const auto e = parse_expr("x + y");
  CHECK_THROWS_WITH_AS(eval_expr(e, Bindings().set(Var::X, 1.0)), doctest::Contains("y"),
                       Error);
  try {
    eval_expr(e, Bindings().set(Var::X, 1.0));
  } catch (const Error& err) {
    CHECK(err.code() == Errc::UnboundVariable);
  }
  try {
    eval_expr(parse_expr("1/x"), Bindings().set(Var::X, 0.0));
    FAIL("expected a domain error");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::DomainError);
  }
  // Unused bindings are fine; only referenced variables must be bound.
  CHECK(eval_expr(parse_expr("2*t"), Bindings().set(Var::T, 3.0)) == 6.0);
}

TEST_CASE("evaluation is pure") {
  const auto e = parse_expr("sin(x)*exp(-t) + y^3/(1 + x^2)");
  const double a = e.eval(0.3, -1.7, 2.5);
  const auto copy = e;
  for (int i = 0; i < 100; ++i) {
    CHECK(copy.eval(0.3, -1.7, 2.5) == a);
    CHECK(eval_expr(e, Bindings::xyt(0.3, -1.7, 2.5)) == a);
  }
}

TEST_CASE("print and parse round trip") {
  std::mt19937_64 rng(20261019);
  for (int i = 0; i < 500; ++i) {
    const std::string text = random_expr(rng, 5);
    const auto e = parse_expr(text);
    const std::string printed = to_string(e);
    const auto again = parse_expr(printed);
    INFO(text, " -> ", printed);
    CHECK(again == e);
    CHECK(to_string(again) == printed);
  }
}

TEST_CASE("variable mask") {
  const auto e = parse_expr("x + sin(t)");
  CHECK(e.uses(Var::X));
  CHECK(e.uses(Var::T));
  CHECK_FALSE(e.uses(Var::Y));
  CHECK_FALSE(e.uses(Var::U));
  CHECK(parse_expr("0").is_zero_literal());
  CHECK_FALSE(parse_expr("0*x").is_zero_literal());
}

TEST_CASE("finite differences on simple functions") {
  CHECK(std::fabs(partial_derivative(parse_expr("x^2"), Var::X,
                                     Bindings().set(Var::X, 3.0)) - 6.0) <= 1e-6);
  CHECK(std::fabs(second_partial_derivative(parse_expr("x^4"), Var::X,
                                            Bindings().set(Var::X, 1.0)) - 12.0) <= 1e-4);
  CHECK(std::fabs(partial_derivative(parse_expr("exp(-t)"), Var::T,
                                     Bindings().set(Var::T, 0.0)) + 1.0) <= 1e-6);
}

TEST_CASE("finite differences match exact polynomial derivatives") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(-10.0, 10.0);
  std::uniform_real_distribution<double> point(-3.0, 3.0);
  std::uniform_int_distribution<int> degree(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    Poly p;
    const int d = degree(rng);
    for (int i = 0; i <= d; ++i) p.coeffs.push_back(coeff(rng));
    const auto e = parse_expr(p.text());
    const double x = point(rng);
    const auto b = Bindings().set(Var::X, x);

    CHECK(e.eval(x, 0, 0) == doctest::Approx(p.value(x)).epsilon(1e-12));

    const double exact = p.derivative().value(x);
    const double fd = partial_derivative(e, Var::X, b);
    const double scale = std::max(1.0, std::fabs(exact));
    INFO("poly ", p.text(), " at x = ", x);
    CHECK(std::fabs(fd - exact) / scale <= 1e-4);

    const double exact2 = p.derivative().derivative().value(x);
    const double fd2 = second_partial_derivative(e, Var::X, b);
    CHECK(std::fabs(fd2 - exact2) / std::max(1.0, std::fabs(exact2)) <= 1e-4);
  }
}

TEST_CASE("finite difference stencil reports non-finite values") {
  try {
    partial_derivative(parse_expr("exp(x)"), Var::X, Bindings().set(Var::X, 709.78));
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DomainError);
  }
}
