#include "warpgeo/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include "warpgeo/errors.hpp"

namespace warpgeo {

struct Expr::Node {
  Op op = Op::constant;
  double number = 0.0;
  std::string name;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

bool is_unary_fn(Op op) {
  switch (op) {
    case Op::neg:
    case Op::sin:
    case Op::cos:
    case Op::tan:
    case Op::exp:
    case Op::log:
    case Op::sqrt:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div;
}

bool same_tree(const Expr::Node* x, const Expr::Node* y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->op != y->op) return false;
  switch (x->op) {
    case Op::constant:
      return x->number == y->number || (std::isnan(x->number) && std::isnan(y->number));
    case Op::variable:
      return x->name == y->name;
    case Op::pow:
      return x->number == y->number && same_tree(x->a.get(), y->a.get());
    default:
      return same_tree(x->a.get(), y->a.get()) && same_tree(x->b.get(), y->b.get());
  }
}

void collect_variables(const Expr::Node* n, std::set<std::string>& out) {
  if (!n) return;
  if (n->op == Op::variable) out.insert(n->name);
  collect_variables(n->a.get(), out);
  collect_variables(n->b.get(), out);
}

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::constant: return "const";
    case Op::variable: return "var";
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::pow: return "^";
    case Op::neg: return "neg";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::tan: return "tan";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sqrt: return "sqrt";
  }
  return "?";
}

Expr::Expr() {
  static const NodePtr zero = std::make_shared<const Node>();
  node_ = zero;
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->number = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) throw Error(std::string("not a binary operator: ") + op_name(op));
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
  if (!is_unary_fn(op)) throw Error(std::string("not a unary operator: ") + op_name(op));
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(arg.node_);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, double exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::pow;
  n->number = exponent;
  n->a = std::move(base.node_);
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
double Expr::number() const { return node_->number; }
const std::string& Expr::name() const { return node_->name; }

Expr Expr::lhs() const {
  if (!node_->a) throw Error("expression node has no operand");
  return Expr(node_->a);
}

Expr Expr::rhs() const {
  if (!node_->b) throw Error("expression node has no second operand");
  return Expr(node_->b);
}

std::vector<std::string> Expr::variables() const {
  std::set<std::string> names;
  collect_variables(node_.get(), names);
  return {names.begin(), names.end()};
}

bool Expr::depends_on(std::string_view name) const {
  const auto vars = variables();
  return std::find(vars.begin(), vars.end(), name) != vars.end();
}

Expr Expr::substitute(std::string_view name, double value) const {
  switch (op()) {
    case Op::constant:
      return *this;
    case Op::variable:
      return node_->name == name ? constant(value) : *this;
    case Op::pow:
      return power(lhs().substitute(name, value), number());
    default:
      if (is_binary(op()))
        return binary(op(), lhs().substitute(name, value), rhs().substitute(name, value));
      return unary(op(), lhs().substitute(name, value));
  }
}

bool operator==(const Expr& a, const Expr& b) { return same_tree(a.node_.get(), b.node_.get()); }

// ---------------------------------------------------------------------------
// Builders

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.number() + b.number());
  return Expr::binary(Op::add, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.number());
  if (a.op() == Op::neg) return a.arg();
  return Expr::unary(Op::neg, a);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.number() - b.number());
  return Expr::binary(Op::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.number() * b.number());
  return Expr::binary(Op::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return Expr::binary(Op::div, a, b);  // left for eval to reject
  if (a.is_constant(0.0)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.number() / b.number());
  return Expr::binary(Op::div, a, b);
}

Expr apply(Op fn, const Expr& e) {
  if (fn == Op::neg) return -e;
  return Expr::unary(fn, e);
}

Expr pow(const Expr& base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == 0.0) return Expr::constant(1.0);
  if (base.is_constant()) {
    const double v = std::pow(base.number(), exponent);
    if (std::isfinite(v)) return Expr::constant(v);
  }
  return Expr::power(base, exponent);
}

// ---------------------------------------------------------------------------
// Parser
//
//   expr     := term (('+' | '-') term)*
//   term     := ('-' | '+') term | product
//   product  := power (('*' | '/') signed)*
//   signed   := '-' signed | power
//   power    := primary ('^' exponent)*
//   exponent := '-'? primary            (must be free of variables)
//   primary  := number | ident | ident '(' expr ')' | '(' expr ')'

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    if (accept('-')) return Expr::unary(Op::neg, parse_term());
    if (accept('+')) return parse_term();
    return parse_product();
  }

  Expr parse_product() {
    Expr lhs = parse_power();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::mul, lhs, parse_signed());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::div, lhs, parse_signed());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_signed() {
    if (accept('-')) return Expr::unary(Op::neg, parse_signed());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    while (accept('^')) base = Expr::power(base, parse_exponent());
    return base;
  }

  double parse_exponent() {
    skip_ws();
    const std::size_t start = pos_;
    const bool negate = accept('-');
    Expr e = parse_primary();
    if (!e.variables().empty()) throw SyntaxError("exponent must be constant", start);
    double v = 0.0;
    try {
      v = Program(e, {}).eval(std::span<const double>{});
    } catch (const DomainError&) {
      throw SyntaxError("exponent is not a finite number", start);
    }
    return negate ? -v : v;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("expected operand", pos_);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    throw SyntaxError("expected operand", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(value))
      throw SyntaxError("malformed number", start);
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    const std::size_t after = pos_;
    if (accept('(')) {
      static const std::array<std::pair<std::string_view, Op>, 6> functions{{
          {"sin", Op::sin},
          {"cos", Op::cos},
          {"tan", Op::tan},
          {"exp", Op::exp},
          {"log", Op::log},
          {"sqrt", Op::sqrt},
      }};
      const auto it = std::find_if(functions.begin(), functions.end(),
                                   [&](const auto& f) { return f.first == name; });
      if (it == functions.end()) throw UnknownFunction(name, start);
      Expr arg = parse_expr();
      if (!accept(')')) throw SyntaxError("expected ')'", pos_);
      return Expr::unary(it->second, arg);
    }
    pos_ = after;
    if (name == "pi") return Expr::constant(std::numbers::pi);
    return Expr::variable(std::move(name));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return {buf.data(), ptr};
}

void print(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::constant:
      if (std::signbit(e.number())) {
        out += "(-";
        out += format_number(-e.number());
        out += ")";
      } else {
        out += format_number(e.number());
      }
      return;
    case Op::variable:
      out += e.name();
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      out += "(";
      print(e.lhs(), out);
      out += " ";
      out += op_name(e.op());
      out += " ";
      print(e.rhs(), out);
      out += ")";
      return;
    case Op::pow:
      out += "(";
      print(e.lhs(), out);
      out += "^";
      if (std::signbit(e.number())) {
        out += "(-" + format_number(-e.number()) + ")";
      } else {
        out += format_number(e.number());
      }
      out += ")";
      return;
    case Op::neg:
      out += "(-";
      print(e.arg(), out);
      out += ")";
      return;
    default:
      out += op_name(e.op());
      out += "(";
      print(e.arg(), out);
      out += ")";
      return;
  }
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Program

Program::Program(const Expr& e, std::span<const std::string> variables) {
  code_.clear();
  std::size_t depth = 0;
  max_stack_ = 0;
  auto emit = [&](auto&& self, const Expr& node) -> void {
    switch (node.op()) {
      case Op::constant:
        code_.push_back({Op::constant, 0, node.number()});
        ++depth;
        break;
      case Op::variable: {
        const auto it = std::find(variables.begin(), variables.end(), node.name());
        if (it == variables.end()) throw UnboundVariable(node.name());
        code_.push_back({Op::variable, static_cast<std::uint32_t>(it - variables.begin()), 0.0});
        ++depth;
        break;
      }
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
        self(self, node.lhs());
        self(self, node.rhs());
        code_.push_back({node.op(), 0, 0.0});
        --depth;
        break;
      case Op::pow:
        self(self, node.lhs());
        code_.push_back({Op::pow, 0, node.number()});
        break;
      default:
        self(self, node.arg());
        code_.push_back({node.op(), 0, 0.0});
        break;
    }
    max_stack_ = std::max(max_stack_, depth);
  };
  emit(emit, e);
}

namespace {

template <class T>
void check_finite(const T& r) {
  if constexpr (std::is_same_v<T, Dual>) {
    if (!std::isfinite(r.value) || !std::isfinite(r.deriv))
      throw DomainError("non-finite expression value");
  } else {
    if (!std::isfinite(r)) throw DomainError("non-finite expression value");
  }
}

}  // namespace

template <class T>
T Program::run(std::span<const T> x) const {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using std::tan;

  constexpr std::size_t kInline = 32;
  std::array<T, kInline> local{};
  std::vector<T> heap;
  T* stack = local.data();
  if (max_stack_ > kInline) {
    heap.resize(max_stack_);
    stack = heap.data();
  }
  std::size_t top = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::constant:
        stack[top++] = T(in.number);
        break;
      case Op::variable:
        if (in.slot >= x.size()) throw UnboundVariable("#" + std::to_string(in.slot));
        stack[top++] = x[in.slot];
        break;
      case Op::add:
        --top;
        stack[top - 1] = stack[top - 1] + stack[top];
        break;
      case Op::sub:
        --top;
        stack[top - 1] = stack[top - 1] - stack[top];
        break;
      case Op::mul:
        --top;
        stack[top - 1] = stack[top - 1] * stack[top];
        break;
      case Op::div:
        --top;
        if (value_of(stack[top]) == 0.0) throw DomainError("division by zero");
        stack[top - 1] = stack[top - 1] / stack[top];
        break;
      case Op::pow: {
        const double base = value_of(stack[top - 1]);
        if (base < 0.0 && in.number != std::floor(in.number))
          throw DomainError("fractional power of a negative number");
        if (base == 0.0 && in.number < 0.0) throw DomainError("division by zero in power");
        if constexpr (std::is_same_v<T, Dual>) {
          stack[top - 1] = warpgeo::pow(stack[top - 1], in.number);
        } else {
          stack[top - 1] = std::pow(stack[top - 1], in.number);
        }
        break;
      }
      case Op::neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::sin:
        stack[top - 1] = sin(stack[top - 1]);
        break;
      case Op::cos:
        stack[top - 1] = cos(stack[top - 1]);
        break;
      case Op::tan:
        stack[top - 1] = tan(stack[top - 1]);
        break;
      case Op::exp:
        stack[top - 1] = exp(stack[top - 1]);
        break;
      case Op::log:
        if (value_of(stack[top - 1]) <= 0.0) throw DomainError("log of a non-positive number");
        stack[top - 1] = log(stack[top - 1]);
        break;
      case Op::sqrt:
        if (value_of(stack[top - 1]) < 0.0) throw DomainError("sqrt of a negative number");
        if constexpr (std::is_same_v<T, Dual>) {
          if (stack[top - 1].value == 0.0 && stack[top - 1].deriv != 0.0)
            throw DomainError("sqrt is not differentiable at 0");
        }
        stack[top - 1] = sqrt(stack[top - 1]);
        break;
    }
  }
  check_finite(stack[0]);
  return stack[0];
}

double Program::eval(std::span<const double> x) const { return run<double>(x); }

Dual Program::eval(std::span<const Dual> x) const { return run<Dual>(x); }

Dual Program::eval_seeded(std::span<const double> x, std::size_t seed) const {
  constexpr std::size_t kInline = 16;
  std::array<Dual, kInline> local{};
  std::vector<Dual> heap;
  Dual* vars = local.data();
  if (x.size() > kInline) {
    heap.resize(x.size());
    vars = heap.data();
  }
  for (std::size_t i = 0; i < x.size(); ++i) vars[i] = Dual(x[i], i == seed ? 1.0 : 0.0);
  return run<Dual>(std::span<const Dual>(vars, x.size()));
}

double eval(const Expr& e, const Bindings& bindings) {
  std::vector<std::string> names;
  std::vector<double> values;
  for (const auto& [k, v] : bindings) {
    names.push_back(k);
    values.push_back(v);
  }
  return Program(e, names).eval(values);
}

std::pair<double, double> eval_dual(const Expr& e, const Bindings& bindings,
                                    std::string_view seed) {
  std::vector<std::string> names;
  std::vector<double> values;
  std::size_t seed_slot = bindings.size();
  for (const auto& [k, v] : bindings) {
    if (k == seed) seed_slot = names.size();
    names.push_back(k);
    values.push_back(v);
  }
  if (seed_slot == bindings.size()) throw UnboundVariable(std::string(seed));
  const Dual r = Program(e, names).eval_seeded(values, seed_slot);
  return {r.value, r.deriv};
}

}  // namespace warpgeo
