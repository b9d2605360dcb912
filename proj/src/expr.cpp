#include "nullframe/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "nullframe/error.hpp"

namespace nullframe::expr {

Jet2 Jet2::constant(double v, int m) {
  return {v, Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(m, m)};
}

Jet2 Jet2::variable(double v, int index, int m) {
  Jet2 j = constant(v, m);
  j.grad(index) = 1.0;
  return j;
}

namespace {

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int param_count) : s_(text), m_(param_count) {}

  NodePtr run() {
    NodePtr e = expression();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  int m_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Op::Add, lhs, term());
      else if (accept('-'))
        lhs = make(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Op::Mul, lhs, unary());
      else if (accept('/'))
        lhs = make(Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!accept('^')) return base;
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->lhs = base;
    n->exponent = exponent();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '^') fail("chained '^' needs parentheses");
    return n;
  }

  int exponent() {
    bool paren = accept('(');
    bool neg = accept('-');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    int k = 0;
    auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, k);
    if (ec != std::errc()) fail("exponent out of range");
    if (paren) expect(')');
    return neg ? -k : k;
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ - start == 1 && s_[start] == '.') fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      std::size_t digits = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (digits == pos_) {
        pos_ = save;
        fail("malformed exponent");
      }
    }
    auto n = std::make_shared<Node>();
    n->op = Op::Literal;
    auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, n->value);
    if (ec != std::errc() || !std::isfinite(n->value)) {
      pos_ = start;
      fail("malformed number");
    }
    return n;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (!std::isalpha(static_cast<unsigned char>(c))) fail(std::string("unexpected '") + c + "'");

    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string_view id = s_.substr(start, pos_ - start);

    if (id == "pi") return make(Op::Pi);
    if (id == "sigma") return make(Op::Sigma);

    Op fn = Op::Literal;
    if (id == "sin") fn = Op::Sin;
    else if (id == "cos") fn = Op::Cos;
    else if (id == "sinh") fn = Op::Sinh;
    else if (id == "cosh") fn = Op::Cosh;
    else if (id == "sqrt") fn = Op::Sqrt;
    if (fn != Op::Literal) {
      if (!accept('(')) fail("function '" + std::string(id) + "' needs parentheses");
      NodePtr arg = expression();
      expect(')');
      return make(fn, arg);
    }

    if (id.size() > 1 && id[0] == 't' &&
        id.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      long k = 0;
      auto [p, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), k);
      if (ec != std::errc() || k < 1 || k > m_)
        throw ParamOutOfRange("parameter '" + std::string(id) + "' at " + std::to_string(start) +
                              " outside t1..t" + std::to_string(m_));
      auto n = std::make_shared<Node>();
      n->op = Op::Param;
      n->index = static_cast<int>(k - 1);
      return n;
    }
    throw UnknownIdentifier("unknown identifier '" + std::string(id) + "' at " + std::to_string(start));
  }
};

double ipow(double x, int k) {
  if (k < 0) return 1.0 / ipow(x, -k);
  double r = 1.0;
  double b = x;
  while (k) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

double eval_node(const Node& n, const Eigen::VectorXd& t) {
  switch (n.op) {
    case Op::Literal: return n.value;
    case Op::Pi: return std::numbers::pi;
    case Op::Sigma: return kBronzeRatio;
    case Op::Param: return t(n.index);
    case Op::Neg: return -eval_node(*n.lhs, t);
    case Op::Sin: return std::sin(eval_node(*n.lhs, t));
    case Op::Cos: return std::cos(eval_node(*n.lhs, t));
    case Op::Sinh: return std::sinh(eval_node(*n.lhs, t));
    case Op::Cosh: return std::cosh(eval_node(*n.lhs, t));
    case Op::Sqrt: {
      double a = eval_node(*n.lhs, t);
      if (a < 0) throw DomainError("sqrt of negative value " + std::to_string(a));
      return std::sqrt(a);
    }
    case Op::Add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case Op::Sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
    case Op::Mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case Op::Div: {
      double b = eval_node(*n.rhs, t);
      if (b == 0.0) throw DomainError("division by zero");
      return eval_node(*n.lhs, t) / b;
    }
    case Op::Pow: {
      double a = eval_node(*n.lhs, t);
      if (a == 0.0 && n.exponent < 0) throw DomainError("zero to a negative power");
      return ipow(a, n.exponent);
    }
  }
  return 0.0;
}

void symmetrize(Eigen::MatrixXd& h) {
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = i + 1; j < h.cols(); ++j) h(j, i) = h(i, j);
}

// f(a) with f' = d1, f'' = d2 at a.value.
Jet2 chain(const Jet2& a, double v, double d1, double d2) {
  Jet2 r;
  r.value = v;
  r.grad = d1 * a.grad;
  r.hess = d1 * a.hess + d2 * (a.grad * a.grad.transpose());
  symmetrize(r.hess);
  return r;
}

Jet2 mul(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  r.grad = a.value * b.grad + b.value * a.grad;
  r.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
  symmetrize(r.hess);
  return r;
}

Jet2 jet_node(const Node& n, const Eigen::VectorXd& t) {
  const int m = static_cast<int>(t.size());
  switch (n.op) {
    case Op::Literal: return Jet2::constant(n.value, m);
    case Op::Pi: return Jet2::constant(std::numbers::pi, m);
    case Op::Sigma: return Jet2::constant(kBronzeRatio, m);
    case Op::Param: return Jet2::variable(t(n.index), n.index, m);
    case Op::Neg: {
      Jet2 a = jet_node(*n.lhs, t);
      return {-a.value, -a.grad, -a.hess};
    }
    case Op::Sin: {
      Jet2 a = jet_node(*n.lhs, t);
      double s = std::sin(a.value), c = std::cos(a.value);
      return chain(a, s, c, -s);
    }
    case Op::Cos: {
      Jet2 a = jet_node(*n.lhs, t);
      double s = std::sin(a.value), c = std::cos(a.value);
      return chain(a, c, -s, -c);
    }
    case Op::Sinh: {
      Jet2 a = jet_node(*n.lhs, t);
      double s = std::sinh(a.value), c = std::cosh(a.value);
      return chain(a, s, c, s);
    }
    case Op::Cosh: {
      Jet2 a = jet_node(*n.lhs, t);
      double s = std::sinh(a.value), c = std::cosh(a.value);
      return chain(a, c, s, c);
    }
    case Op::Sqrt: {
      Jet2 a = jet_node(*n.lhs, t);
      if (a.value < 0) throw DomainError("sqrt of negative value " + std::to_string(a.value));
      if (a.value == 0) {
        if (a.grad.isZero(0) && a.hess.isZero(0)) return Jet2::constant(0.0, m);
        throw NonFinite("sqrt is not differentiable at 0");
      }
      double r = std::sqrt(a.value);
      return chain(a, r, 0.5 / r, -0.25 / (r * a.value));
    }
    case Op::Add: {
      Jet2 a = jet_node(*n.lhs, t), b = jet_node(*n.rhs, t);
      return {a.value + b.value, a.grad + b.grad, a.hess + b.hess};
    }
    case Op::Sub: {
      Jet2 a = jet_node(*n.lhs, t), b = jet_node(*n.rhs, t);
      return {a.value - b.value, a.grad - b.grad, a.hess - b.hess};
    }
    case Op::Mul: return mul(jet_node(*n.lhs, t), jet_node(*n.rhs, t));
    case Op::Div: {
      Jet2 b = jet_node(*n.rhs, t);
      if (b.value == 0.0) throw DomainError("division by zero");
      double inv = 1.0 / b.value;
      return mul(jet_node(*n.lhs, t), chain(b, inv, -inv * inv, 2.0 * inv * inv * inv));
    }
    case Op::Pow: {
      Jet2 a = jet_node(*n.lhs, t);
      int k = n.exponent;
      if (k == 0) return Jet2::constant(1.0, m);
      if (a.value == 0.0 && k < 0) throw DomainError("zero to a negative power");
      double d1 = k * ipow(a.value, k - 1);
      double d2 = k == 1 ? 0.0 : k * (k - 1) * ipow(a.value, k - 2);
      return chain(a, ipow(a.value, k), d1, d2);
    }
  }
  return Jet2::constant(0.0, m);
}

const char* fn_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Sqrt: return "sqrt";
    default: return "";
  }
}

void print(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Literal: {
      char buf[64];
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, p);
      return;
    }
    case Op::Pi: out += "pi"; return;
    case Op::Sigma: out += "sigma"; return;
    case Op::Param: out += "t" + std::to_string(n.index + 1); return;
    case Op::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ")";
      return;
    case Op::Pow:
      out += "(";
      print(*n.lhs, out);
      out += "^";
      out += n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent);
      out += ")";
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      static constexpr const char* sym[] = {" + ", " - ", " * ", " / "};
      out += "(";
      print(*n.lhs, out);
      out += sym[static_cast<int>(n.op) - static_cast<int>(Op::Add)];
      print(*n.rhs, out);
      out += ")";
      return;
    }
    default:
      out += fn_name(n.op);
      out += "(";
      print(*n.lhs, out);
      out += ")";
      return;
  }
}

}  // namespace

double Expr::eval(const Eigen::VectorXd& t) const {
  if (t.size() != param_count_) throw DimensionMismatch("expression expects " + std::to_string(param_count_) + " parameters");
  double v = eval_node(*root_, t);
  if (!std::isfinite(v)) throw NonFinite("expression value is not finite");
  return v;
}

Jet2 Expr::eval_jet2(const Eigen::VectorXd& t) const {
  if (t.size() != param_count_) throw DimensionMismatch("expression expects " + std::to_string(param_count_) + " parameters");
  Jet2 j = jet_node(*root_, t);
  if (!std::isfinite(j.value) || !j.grad.allFinite() || !j.hess.allFinite())
    throw NonFinite("expression jet is not finite");
  return j;
}

std::string Expr::to_string() const {
  std::string s;
  print(*root_, s);
  return s;
}

Expr parse(std::string_view text, int param_count) {
  for (char c : text)
    if (static_cast<unsigned char>(c) > 127) throw SyntaxError(text.find(c), "non-ASCII character");
  return Expr(Parser(text, param_count).run(), param_count);
}

double parse_constant(std::string_view text) { return parse(text, 0).eval(Eigen::VectorXd(0)); }

bool same_tree(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return !a && !b;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::Literal:
      if (!(a->value == b->value)) return false;
      break;
    case Op::Param:
      if (a->index != b->index) return false;
      break;
    case Op::Pow:
      if (a->exponent != b->exponent) return false;
      break;
    default: break;
  }
  return same_tree(a->lhs, b->lhs) && same_tree(a->rhs, b->rhs);
}

}  // namespace nullframe::expr
