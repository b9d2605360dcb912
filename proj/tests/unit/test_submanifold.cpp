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

Mat cols(std::initializer_list<Vec> vs) {
  Mat m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
  int j = 0;
  for (const auto& v : vs) m.col(j++) = v;
  return m;
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Vec minimal11_point(double t5, double t6) {
  Vec t = Vec::Zero(6);
  t(4) = t5;
  t(5) = t6;
  return t;
}

}  // namespace

TEST_SUITE("submanifold") {
  TEST_CASE("tangent frame of the 11-dimensional instance at (pi/2, 0)") {
    auto spec = builtin_example("minimal11");
    auto tf = tangent_frame(spec, minimal11_point(std::numbers::pi / 2, 0.0));
    REQUIRE(tf.frame.cols() == 5);
    CHECK(max_abs(tf.frame.col(3) - coords(11, {{10, -std::sqrt(2.0)}})) < 1e-12);
    CHECK(max_abs(tf.frame.col(4) - coords(11, {{6, 1.0}})) < 1e-12);
  }

  TEST_CASE("tangent frame of the 16-dimensional instance") {
    auto spec = builtin_example("bronze16");
    const double s = kBronzeRatio, a = std::numbers::pi / 6;
    for (const auto& t : sample_points(spec, 3, 0)) {
      auto tf = tangent_frame(spec, t);
      Mat stated = cols({coords(16, {{1, -1}, {4, 1}, {7, 1}, {8, -1}}), coords(16, {{3, 1}, {4, 1}, {6, 1}, {8, 1}}),
                         coords(16, {{1, 1}, {7, 1}}), coords(16, {{3, 1}, {6, -1}}), coords(16, {{2, s}, {5, 1}}),
                         coords(16, {{9, -std::cos(a)}, {11, std::sin(a)}}),
                         coords(16, {{10, -std::cos(a)}, {12, std::sin(a)}})});
      CHECK(max_abs(tf.frame.leftCols(7) - stated) < 1e-12);
      const double y7 = t(6), y8 = t(7);
      Mat B89 = cols({coords(16, {{13, -std::cos(y7) * std::cosh(y8)}, {15, -std::sin(y7) * std::sinh(y8)}}),
                      coords(16, {{13, -std::sin(y7) * std::sinh(y8)}, {15, std::cos(y7) * std::cosh(y8)}})});
      CHECK(max_abs(tf.frame.rightCols(2) - B89) < 1e-12);
    }
  }

  TEST_CASE("null curve frame") {
    auto spec = builtin_example("nullcurve2");
    auto tf = tangent_frame(spec, spec.domain_center());
    REQUIRE(tf.frame.cols() == 1);
    CHECK(tf.frame(0, 0) == 1.0);
    CHECK(tf.frame(1, 0) == 1.0);
  }

  TEST_CASE("degenerate parametrization is rejected") {
    auto doc = builtin_manifest("plane3");
    doc["embedding"] = {"t1", "t1", "0"};
    auto spec = spec_from_json(doc);
    CHECK_THROWS_AS(tangent_frame(spec, spec.domain_center()), DegenerateParametrization);
  }

  TEST_CASE("classification rule") {
    CHECK(classify(0, 3, 2).kind == ClassKind::NonDegenerate);
    CHECK(classify(2, 9, 7).to_string() == "RLightlike(2)");
    CHECK(classify(1, 5, 6).to_string() == "RLightlike(1)");
    CHECK(classify(1, 2, 1).kind == ClassKind::Coisotropic);
    CHECK(classify(1, 1, 2).kind == ClassKind::Isotropic);
    CHECK(classify(1, 1, 1).kind == ClassKind::TotallyLightlike);
  }

  TEST_CASE("decomposition of the 16-dimensional instance") {
    auto spec = builtin_example("bronze16");
    auto d = decompose(spec, spec.domain_center());
    CHECK(d.r() == 2);
    CHECK(d.classification.to_string() == "RLightlike(2)");
    CHECK(max_abs(gram(d.metric, d.frame) * Vec::Unit(9, 0)) <= 1e-9);
    CHECK(max_abs(gram(d.metric, d.frame) * Vec::Unit(9, 1)) <= 1e-9);
    CHECK(subspace_distance(d.rad, d.frame.leftCols(2)) < 1e-9);
    const auto& g = d.generic;
    CHECK(g.b0.cols() == 4);
    CHECK(g.bprime.cols() == 3);
    CHECK(g.proper);
    CHECK(g.screen_generic);
    Mat F = d.frame;
    CHECK(subspace_distance(g.b0, cols({F.col(2), F.col(3), F.col(5), F.col(6)})) < 1e-9);
    CHECK(subspace_distance(g.bprime, cols({F.col(4), F.col(7), F.col(8)})) < 1e-9);
    const double a = std::numbers::pi / 6;
    Mat W13 = cols({coords(16, {{9, std::sin(a)}, {11, std::cos(a)}}), coords(16, {{10, std::sin(a)}, {12, std::cos(a)}})});
    REQUIRE(g.mu.cols() == 2);
    CHECK(subspace_distance(g.mu, W13) < 1e-9);
    CHECK(g.mu_invariant <= 1e-9);
  }

  TEST_CASE("decomposition of the 11-dimensional instance") {
    auto spec = builtin_example("minimal11");
    for (const auto& t : sample_points(spec, 5, 0)) {
      auto d = decompose(spec, t);
      CHECK(d.classification.to_string() == "RLightlike(1)");
      const auto& g = d.generic;
      CHECK(g.b0.cols() == 2);
      CHECK(g.bprime.cols() == 2);
      CHECK(g.proper);
      CHECK(g.ltr_invariant <= 1e-9);
      Mat F = d.frame;
      CHECK(subspace_distance(g.b0, cols({F.col(0), F.col(1)})) < 1e-9);
      CHECK(subspace_distance(g.bprime, cols({F.col(3), F.col(4)})) < 1e-9);
      // mu contains the stated W4, W5 and also W1 = d/dy1.
      const double t5 = t(4), t6 = t(5), r2 = std::sqrt(2.0);
      Vec W1 = coords(11, {{1, 1}});
      Vec W5 = coords(11, {{6, -r2 * std::sinh(t6) * std::cosh(t6)},
                           {8, r2 * (std::sin(t5) * std::sin(t5) + std::sinh(t6) * std::sinh(t6))},
                           {10, std::sin(t5) * std::cos(t5)}});
      CHECK(g.mu.cols() == 3);
      CHECK(distance_to_span(g.mu, W1) < 1e-9);
      CHECK(distance_to_span(g.mu, W5) < 1e-9 * W5.norm());
      CHECK(g.mu_invariant <= 1e-9);
    }
  }

  TEST_CASE("invariant toy is screen generic but not proper") {
    auto spec = builtin_example("invariant4");
    auto d = decompose(spec, spec.domain_center());
    CHECK(d.generic.rad_invariant < 1e-9);
    CHECK(d.generic.bprime.cols() == 0);
    CHECK(subspace_distance(d.generic.b0, d.stm) < 1e-9);
    CHECK_FALSE(d.generic.proper);
  }

  TEST_CASE("classification of the toy instances") {
    auto cls = [](const char* name) {
      auto spec = builtin_example(name);
      return decompose(spec, spec.domain_center()).classification.to_string();
    };
    CHECK(cls("sphere4") == "NonDegenerate");
    CHECK(cls("plane3") == "NonDegenerate");
    CHECK(cls("invariant4") == "RLightlike(1)");
    // A null curve in a 2-dimensional ambient has codimension 1 = r = m.
    CHECK(cls("nullcurve2") == "TotallyLightlike");
    CHECK(cls("nullcurve3") == "Isotropic");
    CHECK(cls("nullplane3") == "Coisotropic");
  }

  TEST_CASE("the null toy instances are not proper") {
    for (const char* name : {"nullcurve2", "nullcurve3", "nullplane3"}) {
      auto spec = builtin_example(name);
      for (const auto& t : sample_points(spec, 5, 0)) CHECK_FALSE(decompose(spec, t).generic.proper);
    }
  }

  TEST_CASE("projections") {
    auto spec = builtin_example("bronze16");
    auto d = decompose(spec, spec.domain_center());
    Vec xi = d.frame.col(0);
    auto p = projections(xi, d);
    CHECK(max_abs(p.J0X) < 1e-12);
    CHECK(max_abs(p.J1X - xi) < 1e-12);
    CHECK(max_abs(p.QX) < 1e-12);
    Vec B3 = d.frame.col(2), B5 = d.frame.col(4);
    auto q = projections(B3 + B5, d);
    CHECK(max_abs(q.J0X - B3) < 1e-9);
    CHECK(max_abs(q.J1X) < 1e-9);
    CHECK(max_abs(q.QX - B5) < 1e-9);
    auto z = projections(Vec::Zero(16), d);
    CHECK(max_abs(z.J0X) == 0.0);
    CHECK(max_abs(z.QX) == 0.0);
    CHECK_THROWS_AS(projections(coords(16, {{14, 1.0}}), d), NotTangent);
  }

  TEST_CASE("decomposition contracts at sampled points") {
    auto rng = rng_for(41);
    for (const auto& name : builtins()) {
      auto spec = builtin_example(name);
      for (const auto& t : sample_points(spec, 10, 0)) {
        auto d = decompose(spec, t);
        INFO(name);
        const int k = d.k(), r = d.r(), s = d.s(), w = d.w(), n = d.n();
        CHECK(r + s == k);
        CHECK(d.tmperp.cols() == r + w);
        CHECK(d.ltr.cols() == r);
        CHECK(k + w + r == n);
        if (r) {
          CHECK(max_abs(gram(d.metric, d.rad)) < 1e-9);
          CHECK(max_abs(cross_gram(d.metric, d.ltr, d.rad) - Mat::Identity(r, r)) < 1e-9);
          CHECK(max_abs(gram(d.metric, d.ltr)) < 1e-9);
          CHECK(max_abs(cross_gram(d.metric, d.ltr, d.stm)) < 1e-9);
          CHECK(max_abs(cross_gram(d.metric, d.ltr, d.stmperp)) < 1e-9);
        }
        if (s) CHECK(std::abs(gram(d.metric, d.stm).determinant()) > 1e-9);
        if (w) CHECK(std::abs(gram(d.metric, d.stmperp).determinant()) > 1e-9);
        // B0 = J(S(TM)) ∩ S(TM).
        const Mat& J = spec.bronze.matrix;
        const auto& g = d.generic;
        for (Eigen::Index i = 0; i < g.b0.cols(); ++i) {
          Vec b = g.b0.col(i);
          CHECK(distance_to_span(d.stm, b) < 1e-8 * b.norm());
          CHECK(distance_to_span(Mat(J * d.stm), b) < 1e-8 * b.norm());
        }
        // Expansion of random ambient vectors over the full frame.
        for (int i = 0; i < 5; ++i) {
          Vec v = random_vec(rng, n);
          auto c = expand(d, v);
          CHECK(max_abs(c.tangent() + c.transversal() - v) < 1e-9);
        }
        if (g.rad_invariant < 1e-9 && g.bprime.cols() == 0 && r > 0) CHECK_FALSE(g.proper);
      }
    }
  }

  TEST_CASE("aligned decompositions follow the reference frame") {
    auto spec = builtin_example("minimal11");
    Vec t = spec.domain_center();
    auto base = decompose(spec, t);
    Vec t2 = t;
    t2(4) += 1e-4;
    auto near = decompose(spec, t2, &base);
    CHECK(max_abs(near.ltr - base.ltr) < 1e-2);
    CHECK(max_abs(near.generic.mu - base.generic.mu) < 1e-2);
    CHECK(near.screen_indices == base.screen_indices);
  }
}
