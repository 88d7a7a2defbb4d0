#pragma once

#include "projgeom/manifold.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

/// Arithmetic expressions in the chart parameters y0, y1, ... with exact
/// value, gradient and Hessian by forward propagation of second-order jets.
namespace projgeom::expr {

class SyntaxError : public ValidationError {
 public:
  SyntaxError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class Op { Constant, Param, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Log, Sqrt, Abs };

struct Node {
  Op op = Op::Constant;
  double constant = 0.0;  // Constant
  int index = 0;          // parameter index (Param) or integer exponent (Pow)
  std::vector<std::shared_ptr<const Node>> args;
};

using NodePtr = std::shared_ptr<const Node>;

struct Jet2 {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

class Ast {
 public:
  Ast(NodePtr root, int param_dim) : root_(std::move(root)), param_dim_(param_dim) {}

  const Node& root() const { return *root_; }
  int param_dim() const { return param_dim_; }

  /// Prefix form, e.g. "pow(param 0, 2)" or "mul(sin(param 0), cos(param 1))".
  std::string to_string() const;

  /// Value only. abs and sqrt are allowed at 0.
  double eval(const Vec& y) const;

  /// order 1 fills grad, order 2 also hess. Throws DomainError at points where
  /// the expression (or a requested derivative) is undefined.
  Jet2 eval_jet2(const Vec& y, int order = 2) const;

 private:
  NodePtr root_;
  int param_dim_;
};

/// Precedence: ^ (integer literal exponents, left to right) binds tighter
/// than unary minus, then * and /, then + and -. Identifiers: y0..y{m-1},
/// pi, and the functions sin cos exp log sqrt abs.
Ast parse(const std::string& src, int param_dim);

/// Chart whose ambient coordinates are the given expressions.
Chart expression_chart(const std::vector<std::string>& components, int param_dim, Box domain);

}  // namespace projgeom::expr
