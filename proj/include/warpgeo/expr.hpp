#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "warpgeo/dual.hpp"

namespace warpgeo {

enum class Op : std::uint8_t {
  constant,
  variable,
  add,
  sub,
  mul,
  div,
  pow,
  neg,
  sin,
  cos,
  tan,
  exp,
  log,
  sqrt,
};

const char* op_name(Op op);

/// Immutable expression tree over named coordinates.
///
/// Nodes are shared between copies; an Expr is never mutated after
/// construction, so values may be passed freely across threads. The power
/// node stores its exponent as a plain number: exponents are always constant.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr unary(Op op, Expr arg);
  static Expr power(Expr base, double exponent);

  Op op() const;
  // Constant value, or the exponent of a power node.
  double number() const;
  const std::string& name() const;
  Expr lhs() const;
  Expr rhs() const;
  Expr arg() const { return lhs(); }

  bool is_constant() const { return op() == Op::constant; }
  bool is_constant(double v) const { return is_constant() && number() == v; }

  // Sorted, de-duplicated variable names.
  std::vector<std::string> variables() const;
  bool depends_on(std::string_view name) const;
  Expr substitute(std::string_view name, double value) const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  struct Node;  // defined in expr.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Builders fold constants and drop additive zeros / multiplicative ones so
// that assembled tensors stay small. They do not otherwise simplify.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
inline Expr operator*(double c, const Expr& e) { return Expr::constant(c) * e; }
inline Expr operator+(double c, const Expr& e) { return Expr::constant(c) + e; }
inline Expr operator-(double c, const Expr& e) { return Expr::constant(c) - e; }
Expr apply(Op fn, const Expr& e);  // sin, cos, tan, exp, log, sqrt
Expr pow(const Expr& base, double exponent);

Expr parse(std::string_view text);

// Canonical, fully parenthesised rendering; parse(to_string(e)) == e for
// every tree produced by parse().
std::string to_string(const Expr& e);

/// An expression compiled to postfix code against a fixed variable order.
class Program {
 public:
  Program() = default;
  // Throws UnboundVariable if e mentions a name outside `variables`.
  Program(const Expr& e, std::span<const std::string> variables);

  double eval(std::span<const double> x) const;
  Dual eval(std::span<const Dual> x) const;
  // Value and exact partial derivative with respect to x[seed].
  Dual eval_seeded(std::span<const double> x, std::size_t seed) const;

  bool is_constant() const { return code_.size() == 1 && code_[0].op == Op::constant; }

 private:
  struct Instr {
    Op op;
    std::uint32_t slot;
    double number;
  };
  template <class T>
  T run(std::span<const T> x) const;

  std::vector<Instr> code_{{Op::constant, 0, 0.0}};
  std::size_t max_stack_ = 1;
};

using Bindings = std::map<std::string, double, std::less<>>;

double eval(const Expr& e, const Bindings& bindings);
// (value, d/d seed) by dual-number propagation.
std::pair<double, double> eval_dual(const Expr& e, const Bindings& bindings,
                                    std::string_view seed);

}  // namespace warpgeo
