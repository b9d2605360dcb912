#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nullframe/error.hpp"
#include "nullframe/submanifold.hpp"
#include "support.hpp"

using namespace nullframe;
using namespace testing;

namespace {

Vec coords(int n, std::initializer_list<std::pair<int, double>> entries) {
  Vec v = Vec::Zero(n);
  for (auto [i, x] : entries) v(i - 1) = x;
  return v;
}

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_SUITE("structure") {
  TEST_CASE("bronze axiom residuals") {
    Mat J(2, 2);
    J << 3, 1, 1, 0;
    CHECK(verify_bronze(J) == 0.0);
    Mat D = Mat::Zero(2, 2);
    D(0, 0) = kBronzeRatio;
    D(1, 1) = 3 - kBronzeRatio;
    CHECK(verify_bronze(D) <= 1e-14);
    CHECK(verify_bronze(Mat::Identity(3, 3)) == 3.0);
  }

  TEST_CASE("compatibility with the metric") {
    Mat D = Mat::Zero(3, 3);
    D.diagonal() << kBronzeRatio, 3 - kBronzeRatio, kBronzeRatio;
    CHECK(verify_compatibility(D, SignatureMetric({-1, 1, 1})).max() <= 1e-14);
    Mat A(2, 2);
    A << 3, 1, 0, 0;
    CHECK(verify_compatibility(A, SignatureMetric({-1, 1})).symmetry > 0.5);
    for (const char* name : {"bronze16", "minimal11"}) {
      auto spec = builtin_example(name);
      INFO(name);
      CHECK(verify_bronze(spec.bronze.matrix) <= 1e-12);
      auto c = verify_compatibility(spec.bronze.matrix, spec.metric);
      CHECK(c.symmetry <= 1e-12);
      CHECK(c.quadratic <= 1e-12);
    }
  }

  TEST_CASE("eigenvalues are the two bronze roots") {
    for (const auto& name : builtins()) {
      INFO(name);
      CHECK(bronze_eigenvalue_residual(builtin_example(name).bronze.matrix) < 1e-9);
    }
    CHECK(bronze_eigenvalue_residual(Mat::Identity(2, 2)) > 1.0);
  }

  TEST_CASE("theta and the characteristic field") {
    auto spec = builtin_example("bronze16");
    CHECK(theta(spec.lm.eta, spec.lm, spec.metric) == doctest::Approx(1.0));
    Vec perp = coords(16, {{1, 1}});
    CHECK(theta(perp, spec.lm, spec.metric) == 0.0);
    LMParams lm{1.0, 1.0, coords(16, {{3, 1}})};
    Vec B2 = coords(16, {{3, 1}, {4, 1}, {6, 1}, {8, 1}});
    CHECK(theta(B2, lm, spec.metric) == 1.0);
  }

  TEST_CASE("(l, m) parameter validation") {
    SignatureMetric g({-1, 1, 1});
    Vec e3 = Vec::Unit(3, 2), e1 = Vec::Unit(3, 0);
    CHECK_NOTHROW(validate(LMParams{1.0, 0.0, e3}, g));
    CHECK_THROWS_AS(validate(LMParams{0.0, 0.0, e3}, g), ValidationError);
    CHECK_THROWS_AS(validate(LMParams{1.0, 1.0, 2.0 * e3}, g), ValidationError);
    CHECK_THROWS_AS(validate(LMParams{1.0, 1.0, e1}, g), ValidationError);
  }

  TEST_CASE("tangential split on the 16-dimensional instance") {
    auto spec = builtin_example("bronze16");
    auto d = decompose(spec, spec.domain_center());
    const Mat& J = spec.bronze.matrix;
    Vec B3 = d.frame.col(2), B5 = d.frame.col(4);
    auto s3 = split_J_tangent(J * B3, d);
    CHECK(max_abs(s3.fX - kBronzeRatio * B3) < 1e-9);
    CHECK(max_abs(s3.wlX) < 1e-9);
    CHECK(max_abs(s3.wsX) < 1e-9);
    auto s5 = split_J_tangent(J * B5, d);
    Vec W2 = coords(16, {{2, -1}, {5, kBronzeRatio}});
    CHECK(max_abs(s5.fX - 3 * B5) < 1e-9);
    CHECK(max_abs(s5.wsX + W2) < 1e-9);
    CHECK(max_abs(s5.wlX) < 1e-9);
    auto s0 = split_J_tangent(Vec::Zero(16), d);
    CHECK(max_abs(s0.fX) == 0.0);
    CHECK(max_abs(s0.wX()) == 0.0);
  }

  TEST_CASE("transversal split") {
    auto spec = builtin_example("bronze16");
    auto d = decompose(spec, spec.domain_center());
    const Mat& J = spec.bronze.matrix;
    const double a = std::numbers::pi / 6;
    Vec W1 = coords(16, {{9, std::sin(a)}, {11, std::cos(a)}});
    auto t1 = split_J_transversal(J * W1, d);
    CHECK(max_abs(t1.BV) < 1e-9);
    CHECK(max_abs(t1.CV - (3 - kBronzeRatio) * W1) < 1e-9);
    Vec N1 = d.ltr.col(0);
    auto tn = split_J_transversal(J * N1, d);
    CHECK(max_abs(tn.BV) < 1e-9);
    CHECK(max_abs(tn.CV - J * N1) < 1e-9);
    auto t0 = split_J_transversal(Vec::Zero(16), d);
    CHECK(max_abs(t0.BV) == 0.0);
    CHECK(max_abs(t0.CV) == 0.0);
  }

  TEST_CASE("split reconstructs J X for random tangent vectors") {
    auto rng = rng_for(31);
    for (const auto& name : builtins()) {
      auto spec = builtin_example(name);
      for (const auto& t : sample_points(spec, 5, 0)) {
        auto d = decompose(spec, t);
        for (int i = 0; i < 100; ++i) {
          Vec X = d.frame * random_vec(rng, d.k());
          Vec JX = spec.bronze.matrix * X;
          auto s = split_J_tangent(JX, d);
          INFO(name);
          CHECK(max_abs(s.fX + s.wlX + s.wsX - JX) <= 1e-9 * std::max(1.0, max_abs(JX)));
          Vec V = d.ltr * random_vec(rng, d.r()) + d.stmperp * random_vec(rng, d.w());
          Vec JV = spec.bronze.matrix * V;
          auto tv = split_J_transversal(JV, d);
          CHECK(max_abs(tv.BV + tv.CV - JV) <= 1e-9 * std::max(1.0, max_abs(JV)));
        }
      }
    }
  }

  TEST_CASE("J keeps an invariant radical inside the radical") {
    auto rng = rng_for(32);
    for (const auto& name : builtins()) {
      auto spec = builtin_example(name);
      for (const auto& t : sample_points(spec, 5, 1)) {
        auto d = decompose(spec, t);
        if (d.r() == 0 || d.generic.rad_invariant >= 1e-9) continue;
        for (int i = 0; i < 20; ++i) {
          Vec xi = d.rad * random_vec(rng, d.r());
          auto s = split_J_tangent(spec.bronze.matrix * xi, d);
          INFO(name);
          CHECK(max_abs(s.wlX) < 1e-9);
          CHECK(max_abs(s.wsX) < 1e-9);
          CHECK(distance_to_span(d.rad, s.fX) < 1e-9);
        }
      }
    }
  }
}
