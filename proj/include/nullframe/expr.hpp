#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <string_view>

namespace nullframe {

// Positive root of x^2 - 3x - 1.
inline constexpr double kBronzeRatio = 3.302775637731994646559610633735247973125;

namespace expr {

enum class Op { Literal, Pi, Sigma, Param, Neg, Sin, Cos, Sinh, Cosh, Sqrt, Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Literal;
  double value = 0.0;  // Literal
  int index = 0;       // Param, 0-based
  int exponent = 0;    // Pow
  NodePtr lhs;
  NodePtr rhs;
};

// Value, gradient and Hessian of a scalar function of m parameters.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  static Jet2 constant(double v, int m);
  static Jet2 variable(double v, int index, int m);
};

class Expr {
 public:
  Expr() = default;
  Expr(NodePtr root, int param_count) : root_(std::move(root)), param_count_(param_count) {}

  const NodePtr& root() const { return root_; }
  int param_count() const { return param_count_; }

  double eval(const Eigen::VectorXd& t) const;
  Jet2 eval_jet2(const Eigen::VectorXd& t) const;

  // Fully parenthesized form; parsing it gives back an identical tree.
  std::string to_string() const;

 private:
  NodePtr root_;
  int param_count_ = 0;
};

Expr parse(std::string_view text, int param_count);

// Parses an expression without parameters and evaluates it.
double parse_constant(std::string_view text);

bool same_tree(const NodePtr& a, const NodePtr& b);

}  // namespace expr
}  // namespace nullframe
