#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "normlab/cpoint.hpp"

namespace normlab {

/// Division by anything smaller than this in modulus raises PoleError.
inline constexpr double kPoleThreshold = 1e-300;

enum class BinaryOp { Add, Sub, Mul, Div };
enum class UnaryFn { Exp, Sin, Cos, Log };
enum class NamedConstant { I, Pi, E };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

namespace node {
struct Variable {
  std::size_t index;  // 1-based, as written in the source (z1, z2, ...)
};
struct Literal {
  Complex value;
};
struct Constant {
  NamedConstant which;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Power {
  NodePtr base;
  int exponent;
};
struct Apply {
  UnaryFn fn;
  NodePtr arg;
};
}  // namespace node

struct ExprNode {
  std::variant<node::Variable, node::Literal, node::Constant, node::Negate, node::Binary,
               node::Power, node::Apply>
      data;
};

/// Immutable AST of a holomorphic function of `dimension` complex variables.
/// Copies share structure.
class HoloExpr {
 public:
  HoloExpr(std::size_t dimension, NodePtr root);

  std::size_t dimension() const noexcept { return dimension_; }
  const ExprNode& root() const noexcept { return *root_; }
  const NodePtr& root_ptr() const noexcept { return root_; }

 private:
  std::size_t dimension_;
  NodePtr root_;
};

/// Value and complex gradient (df/dz_1, ..., df/dz_n) at a point.
struct Jet {
  Complex value;
  std::vector<Complex> gradient;
};

/// Parses the expression grammar documented in README.md.
/// Throws ParseError on syntax errors, unknown identifiers, out-of-range
/// variable indices and non-integer exponents.
HoloExpr parse(std::string_view source, std::size_t dimension);

Complex evaluate(const HoloExpr& expr, const CPoint& z);

/// Forward-mode evaluation carrying n complex dual components.
Jet evaluate_jet(const HoloExpr& expr, const CPoint& z);

/// The expression of zeta -> f(base + scale * zeta), built by substitution.
HoloExpr affine_pullback(const HoloExpr& expr, const CPoint& base, Complex scale);

/// Canonical, fully parenthesized text form. parse(to_string(e)) is
/// structurally equal to e for every tree produced by parse().
std::string to_string(const HoloExpr& expr);

bool structurally_equal(const HoloExpr& a, const HoloExpr& b);

// Node constructors, used by the parser and by the pullback.
namespace make {
NodePtr variable(std::size_t index);
NodePtr literal(Complex value);
NodePtr constant(NamedConstant which);
NodePtr negate(NodePtr operand);
NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
NodePtr power(NodePtr base, int exponent);
NodePtr apply(UnaryFn fn, NodePtr arg);
}  // namespace make

}  // namespace normlab
