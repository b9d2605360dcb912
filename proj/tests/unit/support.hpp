#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "nullframe/expr.hpp"
#include "nullframe/manifest.hpp"
#include "nullframe/report.hpp"

namespace testing {

using nullframe::Mat;
using nullframe::Vec;
namespace expr = nullframe::expr;

inline std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(seed * 0x9E3779B97F4A7C15ULL + 7); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(rng, -scale, scale);
  return v;
}

// Well conditioned: identity plus a small random perturbation, then a random column scaling.
inline Mat random_invertible(std::mt19937_64& rng, int k) {
  Mat c = Mat::Identity(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) c(i, j) += uniform(rng, -0.4, 0.4);
  for (int j = 0; j < k; ++j) c.col(j) *= uniform(rng, 0.5, 2.0) * (uniform(rng, 0, 1) < 0.5 ? -1 : 1);
  return c;
}

inline expr::NodePtr make(expr::Op op, expr::NodePtr lhs = nullptr, expr::NodePtr rhs = nullptr) {
  auto n = std::make_shared<expr::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

inline expr::NodePtr power(expr::NodePtr base, int k) {
  auto n = std::make_shared<expr::Node>();
  n->op = expr::Op::Pow;
  n->exponent = k;
  n->lhs = std::move(base);
  return n;
}

inline expr::NodePtr literal(double v) {
  auto n = std::make_shared<expr::Node>();
  n->op = expr::Op::Literal;
  n->value = v;
  return n;
}

// Random tree of depth <= depth over m parameters. Arguments of sqrt, divisors and bases of
// negative powers are shaped to stay away from their singular sets.
inline expr::NodePtr random_ast(std::mt19937_64& rng, int depth, int m) {
  using expr::Op;
  if (depth <= 1 || uniform(rng, 0, 1) < 0.2) {
    int pick = uniform_int(rng, 0, 5);
    if (pick <= 2) {
      auto n = std::make_shared<expr::Node>();
      n->op = Op::Param;
      n->index = uniform_int(rng, 0, m - 1);
      return n;
    }
    if (pick == 3) return make(uniform(rng, 0, 1) < 0.5 ? Op::Pi : Op::Sigma);
    return literal(uniform_int(rng, 1, 40) / 8.0);
  }
  auto sub = [&] { return random_ast(rng, depth - 1, m); };
  switch (uniform_int(rng, 0, 10)) {
    case 0: return make(Op::Neg, sub());
    case 1: return make(Op::Sin, sub());
    case 2: return make(Op::Cos, sub());
    case 3: return make(Op::Sinh, make(Op::Sin, sub()));
    case 4: return make(Op::Cosh, make(Op::Cos, sub()));
    case 5: return make(Op::Sqrt, make(Op::Add, literal(1.5), power(sub(), 2)));
    case 6: return make(Op::Add, sub(), sub());
    case 7: return make(Op::Sub, sub(), sub());
    case 8: return make(Op::Mul, sub(), sub());
    case 9: return make(Op::Div, sub(), make(Op::Add, literal(2.5), make(Op::Sin, sub())));
    default: {
      int k = uniform_int(rng, -2, 3);
      return power(k < 0 ? make(Op::Cosh, sub()) : sub(), k);
    }
  }
}

inline expr::Expr random_expr(std::mt19937_64& rng, int depth, int m) {
  return expr::Expr(random_ast(rng, depth, m), m);
}

inline std::vector<std::string> builtins() { return nullframe::builtin_names(); }

}  // namespace testing
