#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nullframe/error.hpp"
#include "support.hpp"

using namespace nullframe;
using namespace testing;

TEST_SUITE("exprdsl") {
  TEST_CASE("product of functions parses to a product node") {
    auto e = expr::parse("sin(t1)*cosh(t2)", 2);
    CHECK(e.root()->op == expr::Op::Mul);
    CHECK(e.root()->lhs->op == expr::Op::Sin);
    CHECK(e.root()->rhs->op == expr::Op::Cosh);
  }

  TEST_CASE("sigma is the positive bronze root") {
    auto e = expr::parse("sigma*t1", 1);
    Vec t(1);
    t << 1.0;
    CHECK(e.eval(t) == doctest::Approx(3.302775637731995).epsilon(1e-15));
    CHECK(std::abs(kBronzeRatio * kBronzeRatio - 3 * kBronzeRatio - 1) < 1e-14);
  }

  TEST_CASE("parameter beyond the declared count") {
    CHECK_THROWS_AS(expr::parse("t3", 2), ParamOutOfRange);
    CHECK_THROWS_AS(expr::parse("t0", 2), ParamOutOfRange);
  }

  TEST_CASE("unknown identifiers and syntax errors") {
    CHECK_THROWS_AS(expr::parse("tan(t1)", 1), UnknownIdentifier);
    CHECK_THROWS_AS(expr::parse("alpha", 1), UnknownIdentifier);
    CHECK_THROWS_AS(expr::parse("sin t1", 1), SyntaxError);
    CHECK_THROWS_AS(expr::parse("(t1", 1), SyntaxError);
    CHECK_THROWS_AS(expr::parse("t1 +", 1), SyntaxError);
    CHECK_THROWS_AS(expr::parse("t1^1.5", 1), SyntaxError);
    try {
      expr::parse("t1 * * t1", 1);
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.position() == 5);
    }
  }

  TEST_CASE("precedence and associativity") {
    Vec t(1);
    t << 2.0;
    CHECK(expr::parse("-t1^2", 1).eval(t) == -4.0);
    CHECK(expr::parse("2*3+4", 1).eval(t) == 10.0);
    CHECK(expr::parse("2+3*4", 1).eval(t) == 14.0);
    CHECK(expr::parse("8/2/2", 1).eval(t) == 2.0);
    CHECK(expr::parse("2-3-4", 1).eval(t) == -5.0);
    CHECK(expr::parse("(2-3)*4", 1).eval(t) == -4.0);
    CHECK(expr::parse("t1^(-2)", 1).eval(t) == 0.25);
    CHECK(expr::parse("3-sigma", 1).eval(t) == doctest::Approx(3 - kBronzeRatio));
    CHECK(expr::parse("cos(pi/6)", 1).eval(t) == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK(expr::parse("1.5e-3*t1", 1).eval(t) == doctest::Approx(3e-3));
  }

  TEST_CASE("jet of sin(t1)*cosh(t2) at the origin") {
    auto j = expr::parse("sin(t1)*cosh(t2)", 2).eval_jet2(Vec::Zero(2));
    CHECK(j.value == 0.0);
    CHECK(j.grad(0) == 1.0);
    CHECK(j.grad(1) == 0.0);
    CHECK(j.hess.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("jet of a constant") {
    Vec t(3);
    t << 0.3, -1.2, 7.0;
    auto j = expr::parse("3", 3).eval_jet2(t);
    CHECK(j.value == 3.0);
    CHECK(j.grad.cwiseAbs().maxCoeff() == 0.0);
    CHECK(j.hess.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("jet of t1*t1") {
    Vec t(1);
    t << 2.0;
    auto j = expr::parse("t1*t1", 1).eval_jet2(t);
    CHECK(j.value == 4.0);
    CHECK(j.grad(0) == 4.0);
    CHECK(j.hess(0, 0) == 2.0);
  }

  TEST_CASE("domain errors") {
    Vec t(1);
    t << -1.0;
    CHECK_THROWS_AS(expr::parse("sqrt(t1)", 1).eval(t), DomainError);
    CHECK_THROWS_AS(expr::parse("sqrt(t1)", 1).eval_jet2(t), DomainError);
    CHECK_THROWS_AS(expr::parse("1/(t1+1)", 1).eval(t), DomainError);
    CHECK_THROWS_AS(expr::parse("cosh(t1)^40000", 1).eval(Vec::Constant(1, 3.0)), NonFinite);
  }

  TEST_CASE("jets match central differences on random trees") {
    auto rng = rng_for(11);
    const double h = 1e-5;
    int accepted = 0, drawn = 0;
    double worst_grad = 0.0, worst_hess = 0.0;
    while (accepted < 1000) {
      ++drawn;
      REQUIRE(drawn < 5000);
      int m = uniform_int(rng, 1, 3);
      auto e = random_expr(rng, uniform_int(rng, 1, 6), m);
      Vec t = random_vec(rng, m);
      expr::Jet2 j;
      try {
        j = e.eval_jet2(t);
      } catch (const GeometryError&) {
        continue;
      }
      // Keep draws where a fixed step is meaningful.
      double scale = std::max({1.0, std::abs(j.value), j.grad.cwiseAbs().maxCoeff(), j.hess.cwiseAbs().maxCoeff()});
      if (scale > 1e3) continue;
      ++accepted;
      for (int a = 0; a < m; ++a) {
        Vec tp = t, tm = t;
        tp(a) += h;
        tm(a) -= h;
        double fd = (e.eval(tp) - e.eval(tm)) / (2 * h);
        double gs = std::max(1.0, j.grad.cwiseAbs().maxCoeff());
        worst_grad = std::max(worst_grad, std::abs(fd - j.grad(a)) / gs);
        Vec hd = (e.eval_jet2(tp).grad - e.eval_jet2(tm).grad) / (2 * h);
        double hs = std::max(1.0, j.hess.cwiseAbs().maxCoeff());
        worst_hess = std::max(worst_hess, (hd - j.hess.col(a)).cwiseAbs().maxCoeff() / hs);
      }
      CHECK(j.hess == j.hess.transpose());
    }
    INFO("worst gradient error " << worst_grad << ", worst Hessian error " << worst_hess);
    CHECK(worst_grad < 1e-6);
    CHECK(worst_hess < 1e-4);
  }

  TEST_CASE("printing round-trips to an identical tree") {
    auto rng = rng_for(12);
    for (int i = 0; i < 1000; ++i) {
      int m = uniform_int(rng, 1, 3);
      auto e = random_expr(rng, uniform_int(rng, 1, 6), m);
      std::string text = e.to_string();
      auto back = expr::parse(text, m);
      INFO(text);
      REQUIRE(expr::same_tree(e.root(), back.root()));
      CHECK(back.to_string() == text);
    }
  }

  TEST_CASE("parsing is deterministic") {
    const char* text = "-sin(t5)*cosh(t6)^2 + sqrt(2)*cos(t5)/(1 + sinh(t6)^2)";
    auto a = expr::parse(text, 6), b = expr::parse(text, 6);
    CHECK(expr::same_tree(a.root(), b.root()));
  }
}
