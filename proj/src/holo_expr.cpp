#include "normlab/holo_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "normlab/errors.hpp"

namespace normlab {

HoloExpr::HoloExpr(std::size_t dimension, NodePtr root)
    : dimension_(dimension), root_(std::move(root)) {
  if (dimension_ == 0) throw ArgumentError("expression dimension must be positive");
  if (!root_) throw ArgumentError("expression has no root");
}

namespace make {
NodePtr variable(std::size_t index) {
  return std::make_shared<const ExprNode>(ExprNode{node::Variable{index}});
}
NodePtr literal(Complex value) {
  return std::make_shared<const ExprNode>(ExprNode{node::Literal{value}});
}
NodePtr constant(NamedConstant which) {
  return std::make_shared<const ExprNode>(ExprNode{node::Constant{which}});
}
NodePtr negate(NodePtr operand) {
  return std::make_shared<const ExprNode>(ExprNode{node::Negate{std::move(operand)}});
}
NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const ExprNode>(
      ExprNode{node::Binary{op, std::move(lhs), std::move(rhs)}});
}
NodePtr power(NodePtr base, int exponent) {
  return std::make_shared<const ExprNode>(ExprNode{node::Power{std::move(base), exponent}});
}
NodePtr apply(UnaryFn fn, NodePtr arg) {
  return std::make_shared<const ExprNode>(ExprNode{node::Apply{fn, std::move(arg)}});
}
}  // namespace make

// ---------------------------------------------------------------------------
// Parser: recursive descent over the raw character stream.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' exponent)*
//   exponent:= ['-' | '+'] integer | '(' ['-' | '+'] integer ')'
//   primary := number | identifier | function '(' expr ')' | '(' expr ')'
// ---------------------------------------------------------------------------
namespace {

class Parser {
 public:
  Parser(std::string_view src, std::size_t dimension) : src_(src), dimension_(dimension) {}

  NodePtr parse_all() {
    skip_space();
    if (at_end()) throw ParseError("empty expression", pos_);
    NodePtr root = parse_expr();
    skip_space();
    if (!at_end()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return root;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (at_end()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "' but found '" + peek() + "'", pos_);
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make::binary(BinaryOp::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make::binary(BinaryOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make::binary(BinaryOp::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make::binary(BinaryOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make::negate(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    while (accept('^')) base = make::power(base, parse_exponent());
    return base;
  }

  int parse_exponent() {
    skip_space();
    const std::size_t start = pos_;
    const bool parenthesized = accept('(');
    int sign = 1;
    if (accept('-')) {
      sign = -1;
    } else {
      accept('+');
    }
    skip_space();
    const std::size_t digits_begin = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    const bool has_digits = pos_ > digits_begin;
    const char next = peek();
    if (!has_digits || next == '.' || next == 'e' || next == 'E' ||
        std::isalpha(static_cast<unsigned char>(next))) {
      throw ParseError("exponent must be an integer literal", start);
    }
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(src_.data() + digits_begin, src_.data() + pos_, value);
    if (ec != std::errc{} || ptr != src_.data() + pos_) {
      throw ParseError("exponent out of range", digits_begin);
    }
    if (parenthesized) expect(')');
    return sign * value;
  }

  NodePtr parse_primary() {
    skip_space();
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t b = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      return pos_ > b;
    };
    bool any = digits();
    if (peek() == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) throw ParseError("malformed number", start);
    if (peek() == 'e' || peek() == 'E') {
      // Only an exponent if digits follow; otherwise 'e' is left for the caller
      // and the trailing-input check reports it.
      const std::size_t save = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!digits()) pos_ = save;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc{} || ptr != src_.data() + pos_ || !std::isfinite(value)) {
      throw ParseError("number out of range", start);
    }
    return make::literal(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && std::isalnum(static_cast<unsigned char>(peek()))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    if (name == "exp") return parse_call(UnaryFn::Exp);
    if (name == "sin") return parse_call(UnaryFn::Sin);
    if (name == "cos") return parse_call(UnaryFn::Cos);
    if (name == "log") return parse_call(UnaryFn::Log);
    if (name == "i") return make::constant(NamedConstant::I);
    if (name == "pi") return make::constant(NamedConstant::Pi);
    if (name == "e") return make::constant(NamedConstant::E);
    if (name == "z") {
      if (dimension_ != 1) throw ParseError("bare 'z' is only allowed in dimension 1", start);
      return make::variable(1);
    }
    if (name.size() >= 2 && name[0] == 'z') {
      std::size_t index = 0;
      const auto digits = name.substr(1);
      const auto [ptr, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), index);
      if (ec == std::errc{} && ptr == digits.data() + digits.size() && digits[0] != '0') {
        if (index > dimension_) {
          throw ParseError("variable index " + std::to_string(index) + " exceeds dimension " +
                               std::to_string(dimension_),
                           start);
        }
        return make::variable(index);
      }
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  NodePtr parse_call(UnaryFn fn) {
    expect('(');
    NodePtr arg = parse_expr();
    expect(')');
    return make::apply(fn, arg);
  }

  std::string_view src_;
  std::size_t dimension_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation. One visitor templated on the scalar type: Complex for plain
// values, Dual for value + gradient.
// ---------------------------------------------------------------------------

struct Dual {
  Complex v;
  std::vector<Complex> g;
};

void check_finite(Complex v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw EvalError(std::string("non-finite value produced by ") + what);
  }
}

void check_finite(const Dual& d, const char* what) {
  check_finite(d.v, what);
  for (const auto& c : d.g) check_finite(c, what);
}

Complex divide_checked(Complex a, Complex b) {
  if (std::abs(b) < kPoleThreshold) throw PoleError("division by zero (pole)");
  return a / b;
}

Complex ipow(Complex base, int exponent) {
  if (exponent < 0) {
    if (std::abs(base) < kPoleThreshold) throw PoleError("negative power of zero (pole)");
    return Complex(1.0) / ipow(base, -exponent);
  }
  Complex result = 1.0;
  unsigned n = static_cast<unsigned>(exponent);
  while (n != 0) {
    if (n & 1u) result *= base;
    base *= base;
    n >>= 1u;
  }
  return result;
}

Complex constant_value(NamedConstant c) {
  switch (c) {
    case NamedConstant::I:
      return {0.0, 1.0};
    case NamedConstant::Pi:
      return std::numbers::pi;
    case NamedConstant::E:
      return std::numbers::e;
  }
  return 0.0;
}

// Scalar rules.
struct ScalarOps {
  std::size_t n;
  const CPoint& z;

  Complex variable(std::size_t index) const { return z[index - 1]; }
  Complex lift(Complex c) const { return c; }
  static Complex neg(const Complex& a) { return -a; }
  static Complex add(const Complex& a, const Complex& b) { return a + b; }
  static Complex sub(const Complex& a, const Complex& b) { return a - b; }
  static Complex mul(const Complex& a, const Complex& b) { return a * b; }
  static Complex div(const Complex& a, const Complex& b) { return divide_checked(a, b); }
  static Complex pow(const Complex& a, int k) { return ipow(a, k); }
  static Complex fn(UnaryFn f, const Complex& a) {
    switch (f) {
      case UnaryFn::Exp:
        return std::exp(a);
      case UnaryFn::Sin:
        return std::sin(a);
      case UnaryFn::Cos:
        return std::cos(a);
      case UnaryFn::Log:
        if (std::abs(a) < kPoleThreshold) throw BranchError("log applied at 0");
        return std::log(a);
    }
    return a;
  }
};

// Forward-mode rules. Each node carries d/dz_k for k = 1..n.
struct DualOps {
  std::size_t n;
  const CPoint& z;

  Dual variable(std::size_t index) const {
    Dual d{z[index - 1], std::vector<Complex>(n)};
    d.g[index - 1] = 1.0;
    return d;
  }
  Dual lift(Complex c) const { return {c, std::vector<Complex>(n)}; }

  // d(out) = factor * d(a)
  static Dual chain(Complex value, Complex factor, const Dual& a) {
    Dual r{value, a.g};
    for (auto& c : r.g) c *= factor;
    return r;
  }

  static Dual neg(const Dual& a) { return chain(-a.v, -1.0, a); }
  static Dual add(const Dual& a, const Dual& b) {
    Dual r{a.v + b.v, a.g};
    for (std::size_t k = 0; k < r.g.size(); ++k) r.g[k] += b.g[k];
    return r;
  }
  static Dual sub(const Dual& a, const Dual& b) {
    Dual r{a.v - b.v, a.g};
    for (std::size_t k = 0; k < r.g.size(); ++k) r.g[k] -= b.g[k];
    return r;
  }
  static Dual mul(const Dual& a, const Dual& b) {
    Dual r{a.v * b.v, std::vector<Complex>(a.g.size())};
    for (std::size_t k = 0; k < r.g.size(); ++k) r.g[k] = a.g[k] * b.v + a.v * b.g[k];
    return r;
  }
  static Dual div(const Dual& a, const Dual& b) {
    const Complex q = divide_checked(a.v, b.v);
    // (a/b)' = (a' - q b') / b
    Dual r{q, std::vector<Complex>(a.g.size())};
    for (std::size_t k = 0; k < r.g.size(); ++k) r.g[k] = (a.g[k] - q * b.g[k]) / b.v;
    return r;
  }
  static Dual pow(const Dual& a, int k) {
    if (k == 0) return {1.0, std::vector<Complex>(a.g.size())};
    return chain(ipow(a.v, k), static_cast<double>(k) * ipow(a.v, k - 1), a);
  }
  static Dual fn(UnaryFn f, const Dual& a) {
    switch (f) {
      case UnaryFn::Exp: {
        const Complex e = std::exp(a.v);
        return chain(e, e, a);
      }
      case UnaryFn::Sin:
        return chain(std::sin(a.v), std::cos(a.v), a);
      case UnaryFn::Cos:
        return chain(std::cos(a.v), -std::sin(a.v), a);
      case UnaryFn::Log:
        if (std::abs(a.v) < kPoleThreshold) throw BranchError("log applied at 0");
        return chain(std::log(a.v), 1.0 / a.v, a);
    }
    return a;
  }
};

template <class Ops>
auto eval_node(const ExprNode& n, const Ops& ops) -> decltype(ops.lift(Complex{})) {
  using T = decltype(ops.lift(Complex{}));
  return std::visit(
      [&](const auto& x) -> T {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, node::Variable>) {
          return ops.variable(x.index);
        } else if constexpr (std::is_same_v<X, node::Literal>) {
          return ops.lift(x.value);
        } else if constexpr (std::is_same_v<X, node::Constant>) {
          return ops.lift(constant_value(x.which));
        } else if constexpr (std::is_same_v<X, node::Negate>) {
          return Ops::neg(eval_node(*x.operand, ops));
        } else if constexpr (std::is_same_v<X, node::Binary>) {
          T a = eval_node(*x.lhs, ops);
          T b = eval_node(*x.rhs, ops);
          T r;
          switch (x.op) {
            case BinaryOp::Add:
              r = Ops::add(a, b);
              break;
            case BinaryOp::Sub:
              r = Ops::sub(a, b);
              break;
            case BinaryOp::Mul:
              r = Ops::mul(a, b);
              break;
            case BinaryOp::Div:
              r = Ops::div(a, b);
              break;
          }
          check_finite(r, "arithmetic");
          return r;
        } else if constexpr (std::is_same_v<X, node::Power>) {
          T r = Ops::pow(eval_node(*x.base, ops), x.exponent);
          check_finite(r, "power");
          return r;
        } else {
          T r = Ops::fn(x.fn, eval_node(*x.arg, ops));
          check_finite(r, "function application");
          return r;
        }
      },
      n.data);
}

void require_point(const HoloExpr& expr, const CPoint& z) {
  if (z.dimension() != expr.dimension()) {
    throw DomainError("point has dimension " + std::to_string(z.dimension()) +
                      ", expression expects " + std::to_string(expr.dimension()));
  }
  for (const auto& c : z) check_finite(c, "input point");
}

// ---------------------------------------------------------------------------
// Printing and comparison.
// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void print_node(const ExprNode& n, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, node::Variable>) {
          out += "z" + std::to_string(x.index);
        } else if constexpr (std::is_same_v<X, node::Literal>) {
          const double re = x.value.real();
          const double im = x.value.imag();
          if (im == 0.0 && !std::signbit(re)) {
            out += format_double(re);
          } else if (im == 0.0) {
            out += "(-" + format_double(-re) + ")";
          } else {
            out += "(" + format_double(re) + (std::signbit(im) ? "-" : "+") +
                   format_double(std::abs(im)) + "*i)";
          }
        } else if constexpr (std::is_same_v<X, node::Constant>) {
          out += x.which == NamedConstant::I ? "i" : x.which == NamedConstant::Pi ? "pi" : "e";
        } else if constexpr (std::is_same_v<X, node::Negate>) {
          out += "(-";
          print_node(*x.operand, out);
          out += ")";
        } else if constexpr (std::is_same_v<X, node::Binary>) {
          static constexpr const char* kOps[] = {" + ", " - ", " * ", " / "};
          out += "(";
          print_node(*x.lhs, out);
          out += kOps[static_cast<int>(x.op)];
          print_node(*x.rhs, out);
          out += ")";
        } else if constexpr (std::is_same_v<X, node::Power>) {
          out += "(";
          print_node(*x.base, out);
          out += "^" + std::to_string(x.exponent) + ")";
        } else {
          static constexpr const char* kFns[] = {"exp", "sin", "cos", "log"};
          out += kFns[static_cast<int>(x.fn)];
          out += "(";
          print_node(*x.arg, out);
          out += ")";
        }
      },
      n.data);
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (&a == &b) return true;
  if (a.data.index() != b.data.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using X = std::decay_t<decltype(x)>;
        const auto& y = std::get<X>(b.data);
        if constexpr (std::is_same_v<X, node::Variable>) {
          return x.index == y.index;
        } else if constexpr (std::is_same_v<X, node::Literal>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<X, node::Constant>) {
          return x.which == y.which;
        } else if constexpr (std::is_same_v<X, node::Negate>) {
          return equal_nodes(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<X, node::Binary>) {
          return x.op == y.op && equal_nodes(*x.lhs, *y.lhs) && equal_nodes(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<X, node::Power>) {
          return x.exponent == y.exponent && equal_nodes(*x.base, *y.base);
        } else {
          return x.fn == y.fn && equal_nodes(*x.arg, *y.arg);
        }
      },
      a.data);
}

NodePtr substitute(const NodePtr& n, const std::vector<NodePtr>& replacement) {
  return std::visit(
      [&](const auto& x) -> NodePtr {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, node::Variable>) {
          return replacement[x.index - 1];
        } else if constexpr (std::is_same_v<X, node::Literal> ||
                             std::is_same_v<X, node::Constant>) {
          return n;
        } else if constexpr (std::is_same_v<X, node::Negate>) {
          return make::negate(substitute(x.operand, replacement));
        } else if constexpr (std::is_same_v<X, node::Binary>) {
          return make::binary(x.op, substitute(x.lhs, replacement),
                              substitute(x.rhs, replacement));
        } else if constexpr (std::is_same_v<X, node::Power>) {
          return make::power(substitute(x.base, replacement), x.exponent);
        } else {
          return make::apply(x.fn, substitute(x.arg, replacement));
        }
      },
      n->data);
}

}  // namespace

HoloExpr parse(std::string_view source, std::size_t dimension) {
  if (dimension == 0) throw ArgumentError("dimension must be positive");
  Parser p(source, dimension);
  return HoloExpr(dimension, p.parse_all());
}

Complex evaluate(const HoloExpr& expr, const CPoint& z) {
  require_point(expr, z);
  return eval_node(expr.root(), ScalarOps{expr.dimension(), z});
}

Jet evaluate_jet(const HoloExpr& expr, const CPoint& z) {
  require_point(expr, z);
  Dual d = eval_node(expr.root(), DualOps{expr.dimension(), z});
  return Jet{d.v, std::move(d.g)};
}

HoloExpr affine_pullback(const HoloExpr& expr, const CPoint& base, Complex scale) {
  require_point(expr, base);
  check_finite(scale, "pullback scale");
  if (scale == Complex(0.0)) throw ArgumentError("affine pullback with zero scale");
  const NodePtr s = make::literal(scale);
  std::vector<NodePtr> replacement;
  replacement.reserve(expr.dimension());
  for (std::size_t k = 0; k < expr.dimension(); ++k) {
    replacement.push_back(make::binary(
        BinaryOp::Add, make::literal(base[k]),
        make::binary(BinaryOp::Mul, s, make::variable(k + 1))));
  }
  return HoloExpr(expr.dimension(), substitute(expr.root_ptr(), replacement));
}

std::string to_string(const HoloExpr& expr) {
  std::string out;
  print_node(expr.root(), out);
  return out;
}

bool structurally_equal(const HoloExpr& a, const HoloExpr& b) {
  return a.dimension() == b.dimension() && equal_nodes(a.root(), b.root());
}

}  // namespace normlab
