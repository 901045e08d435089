#pragma once

// Small expression language used for coefficient functions and Lyapunov
// candidates.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-'? power
//   power  := atom ('^' power)?
//   atom   := number | ident | ident '(' args ')' | '(' expr ')'
//
// Variables: x, y, t, u. Functions: exp, sin, cos, abs (one argument) and
// pow, min, max (two arguments). Unary minus binds looser than '^', so
// "-x^2" is -(x^2).

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace gsdde {

enum class Var : std::uint8_t { X = 0, Y = 1, T = 2, U = 3 };
inline constexpr std::size_t kVarCount = 4;

char var_name(Var v) noexcept;

enum class Func : std::uint8_t { Exp, Sin, Cos, Abs, Pow, Min, Max };

enum class NodeKind : std::uint8_t {
  Number,
  Variable,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Call,
};

struct Node {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;
  Var var = Var::X;
  Func func = Func::Exp;
  std::vector<Node> children;
};

/// Variable bindings. Unset variables are reported as UnboundVariable by
/// the checked evaluator.
class Bindings {
 public:
  Bindings() = default;

  Bindings& set(Var v, double value) {
    values_[index(v)] = value;
    bound_ |= mask(v);
    return *this;
  }
  bool has(Var v) const noexcept { return (bound_ & mask(v)) != 0; }
  double get(Var v) const noexcept { return values_[index(v)]; }
  std::uint8_t mask_bits() const noexcept { return bound_; }
  const std::array<double, kVarCount>& values() const noexcept {
    return values_;
  }

  static Bindings xyt(double x, double y, double t) {
    return Bindings().set(Var::X, x).set(Var::Y, y).set(Var::T, t);
  }

 private:
  static std::size_t index(Var v) noexcept { return static_cast<std::size_t>(v); }
  static std::uint8_t mask(Var v) noexcept {
    return static_cast<std::uint8_t>(1u << index(v));
  }

  std::array<double, kVarCount> values_{};
  std::uint8_t bound_ = 0;
};

/// Immutable parsed expression. Copies share the tree and the compiled
/// postfix program, so values are cheap to pass around and safe to read
/// from many threads.
class Expr {
 public:
  Expr();  // the literal 0

  static Expr constant(double value);

  const Node& root() const noexcept;

  /// Bit i set iff variable Var(i) occurs in the expression.
  std::uint8_t variables() const noexcept;
  bool uses(Var v) const noexcept {
    return (variables() & (1u << static_cast<unsigned>(v))) != 0;
  }

  /// True for a bare numeric literal equal to zero.
  bool is_zero_literal() const noexcept;

  /// Unchecked evaluation on raw values indexed by Var. No binding or
  /// finiteness checks; intended for hot loops.
  double eval(const std::array<double, kVarCount>& v) const noexcept;
  double eval(double x, double y, double t, double u = 0.0) const noexcept {
    return eval(std::array<double, kVarCount>{x, y, t, u});
  }

  /// Source text this expression was parsed from (or printed form).
  const std::string& source() const noexcept;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  friend Expr parse_expr(std::string_view text);
  struct Instr;
  struct Impl;
  explicit Expr(Node root, std::string source);

  std::shared_ptr<const Impl> impl_;
};

Expr parse_expr(std::string_view text);

/// Checked evaluation: every variable occurring in `e` must be bound, and a
/// non-finite result raises DomainError.
double eval_expr(const Expr& e, const Bindings& bindings);

/// Fully parenthesized rendering; parse_expr(to_string(e)) == e.
std::string to_string(const Expr& e);

/// Constructor-style shape, e.g. "Sub(Neg(Pow(x,3)),y)".
std::string shape(const Expr& e);

bool structurally_equal(const Node& a, const Node& b);

inline constexpr double kFirstDerivativeStep = 1e-5;
inline constexpr double kSecondDerivativeStep = 1e-4;

/// Central difference of order 2 in `var` at `point`. The step is scaled by
/// max(1, |point[var]|).
double partial_derivative(const Expr& e, Var var, const Bindings& point,
                          double step = kFirstDerivativeStep);

/// Three-point second difference in `var`.
double second_partial_derivative(const Expr& e, Var var, const Bindings& point,
                                 double step = kSecondDerivativeStep);

}  // namespace gsdde
