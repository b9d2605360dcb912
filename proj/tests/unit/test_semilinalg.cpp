#include <cmath>

#include "doctest.h"
#include "nullframe/error.hpp"
#include "nullframe/submanifold.hpp"
#include "support.hpp"

using namespace nullframe;
using namespace testing;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Mat cols(std::initializer_list<Vec> vs) {
  Mat m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
  int j = 0;
  for (const auto& v : vs) m.col(j++) = v;
  return m;
}

Vec coords(int n, std::initializer_list<std::pair<int, double>> entries) {
  Vec v = Vec::Zero(n);
  for (auto [i, x] : entries) v(i - 1) = x;
  return v;
}

const SignatureMetric lorentz3({-1, 1, 1});

}  // namespace

TEST_SUITE("semilinalg") {
  TEST_CASE("inner products") {
    CHECK(inner(lorentz3, v3(1, 1, 0), v3(1, 1, 0)) == 0.0);
    CHECK(inner(lorentz3, v3(1, 0, 0), v3(1, 0, 0)) == -1.0);
    SignatureMetric g = SignatureMetric::with_timelike(16, {3, 7});
    Vec B1 = coords(16, {{1, -1}, {4, 1}, {7, 1}, {8, -1}});
    Vec B2 = coords(16, {{3, 1}, {4, 1}, {6, 1}, {8, 1}});
    CHECK(inner(g, B1, B2) == 0.0);
    CHECK(inner(g, B1, B1) == 0.0);
    CHECK(inner(g, B2, B2) == 0.0);
    CHECK_THROWS_AS(inner(lorentz3, v3(1, 0, 0), Vec::Zero(2)), DimensionMismatch);
  }

  TEST_CASE("signature metric invariants") {
    CHECK_THROWS_AS(SignatureMetric::with_timelike(3, {}), ValidationError);
    CHECK_THROWS_AS(SignatureMetric::with_timelike(3, {0, 1, 2}), ValidationError);
    CHECK(SignatureMetric::with_timelike(11, {4}).index() == 1);
  }

  TEST_CASE("gram matrices") {
    Mat G = gram(lorentz3, cols({v3(1, 1, 0), v3(0, 0, 1)}));
    CHECK(G(0, 0) == 0.0);
    CHECK(G(0, 1) == 0.0);
    CHECK(G(1, 1) == 1.0);
    CHECK(gram(lorentz3, cols({v3(0, 1, 0)}))(0, 0) == 1.0);
    auto d = decompose(builtin_example("bronze16"), builtin_example("bronze16").domain_center());
    CHECK(gram(d.metric, d.frame.leftCols(2)).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("kernel basis oracles") {
    Mat G(2, 2);
    G << 0, 0, 0, 1;
    Mat K = kernel_basis(G);
    REQUIRE(K.cols() == 1);
    CHECK(std::abs(K(0, 0)) == doctest::Approx(1.0));
    CHECK(K(1, 0) == doctest::Approx(0.0));
    CHECK(kernel_basis(Mat::Constant(1, 1, -1.0)).cols() == 0);
    auto spec = builtin_example("bronze16");
    auto d = decompose(spec, spec.domain_center());
    Mat K16 = kernel_basis(gram(d.metric, d.frame));
    REQUIRE(K16.cols() == 2);
    Mat e12 = Mat::Zero(9, 2);
    e12(0, 0) = e12(1, 1) = 1.0;
    CHECK(subspace_distance(K16, e12) < 1e-9);
  }

  TEST_CASE("orthogonal spaces") {
    Mat perp = orthogonal_space(lorentz3, cols({v3(1, 1, 0), v3(0, 0, 1)}));
    REQUIRE(perp.cols() == 1);
    CHECK(subspace_distance(perp, cols({v3(1, 1, 0)})) < 1e-12);
    CHECK(orthogonal_space(lorentz3, Mat::Identity(3, 3)).cols() == 0);
    auto spec = builtin_example("minimal11");
    Vec t = spec.domain_center();
    auto d = decompose(spec, t);
    Mat tmperp = orthogonal_space(d.metric, d.frame);
    CHECK(tmperp.cols() == 6);
    CHECK(distance_to_span(tmperp, d.frame.col(2)) < 1e-9);
  }

  TEST_CASE("screen complements") {
    auto sel = screen_complement(lorentz3, cols({v3(1, 1, 0), v3(0, 0, 1)}), cols({v3(1, 1, 0)}));
    REQUIRE(sel.basis.cols() == 1);
    CHECK(sel.indices == std::vector<int>{1});
    CHECK(subspace_distance(sel.basis, cols({v3(0, 0, 1)})) < 1e-12);
    auto none = screen_complement(lorentz3, cols({v3(1, 1, 0)}), cols({v3(1, 1, 0)}));
    CHECK(none.basis.cols() == 0);
    auto spec = builtin_example("bronze16");
    auto d = decompose(spec, spec.domain_center());
    CHECK(d.screen_indices == std::vector<int>{2, 3, 4, 5, 6, 7, 8});
    CHECK(std::abs(gram(d.metric, d.stm).determinant()) > 1e-9);
  }

  TEST_CASE("lightlike transversal oracle") {
    Mat N = lightlike_transversal(lorentz3, cols({v3(1, 1, 0)}), cols({v3(0, 0, 1)}), Mat(3, 0));
    REQUIRE(N.cols() == 1);
    CHECK(N(0, 0) == doctest::Approx(-0.5));
    CHECK(N(1, 0) == doctest::Approx(0.5));
    CHECK(N(2, 0) == doctest::Approx(0.0));
  }

  TEST_CASE("lightlike transversal of the example instances") {
    for (const char* name : {"bronze16", "minimal11"}) {
      auto spec = builtin_example(name);
      auto d = decompose(spec, spec.domain_center());
      Mat P = cross_gram(d.metric, d.ltr, d.rad);
      CHECK((P - Mat::Identity(d.r(), d.r())).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(gram(d.metric, d.ltr).cwiseAbs().maxCoeff() < 1e-9);
    }
    // The stated N_1 satisfies the same defining relations; the constructed one may differ by a gauge.
    auto spec = builtin_example("bronze16");
    auto d = decompose(spec, spec.domain_center());
    Vec N1 = 0.25 * coords(16, {{1, -1}, {4, -1}, {7, 1}, {8, 1}});
    CHECK(inner(d.metric, N1, d.frame.col(0)) == doctest::Approx(1.0));
    CHECK(inner(d.metric, N1, N1) == doctest::Approx(0.0));
  }

  TEST_CASE("singular pairing is reported") {
    // A radical vector repeated in the screen: no transversal can be orthogonal to the screen and pair with it.
    CHECK_THROWS_AS(lightlike_transversal(lorentz3, cols({v3(1, 1, 0)}), cols({v3(1, 1, 0)}), Mat(3, 0)),
                    SingularPairing);
  }

  TEST_CASE("signature inference") {
    auto frame_of = [](const char* name) {
      auto spec = builtin_example(name);
      return decompose(spec, spec.domain_center()).frame;
    };
    auto b16 = infer_signature(frame_of("bronze16"), {0, 1}, 2);
    REQUIRE(b16.size() == 1);
    CHECK(b16[0].timelike == std::vector<int>{3, 7});
    auto m11 = infer_signature(frame_of("minimal11"), {2}, 1);
    REQUIRE(m11.size() == 1);
    CHECK(m11[0].timelike == std::vector<int>{4});
    CHECK_THROWS_AS(infer_signature(cols({v3(1, 0, 0)}), {0}, 1), NoConsistentSignature);
    CHECK_THROWS_AS(infer_signature(cols({v3(0, 1, 0)}), {0}, 2), NoConsistentSignature);
  }

  TEST_CASE("kernel subspace is invariant under recombination of the basis") {
    auto rng = rng_for(21);
    int trials = 0;
    while (trials < 100) {
      int n = uniform_int(rng, 3, 9);
      int q = uniform_int(rng, 1, n - 1);
      std::vector<int> pos;
      for (int i = 0; i < q; ++i) pos.push_back(i);
      SignatureMetric g = SignatureMetric::with_timelike(n, pos);
      // r null vectors spanning a totally null subspace plus random extra vectors.
      int r = uniform_int(rng, 1, std::min(q, n - q));
      Mat basis(n, 0);
      for (int i = 0; i < r; ++i) {
        Vec v = Vec::Zero(n);
        v(i) = 1.0;
        v(n - 1 - i) = 1.0;
        basis.conservativeResize(n, basis.cols() + 1);
        basis.col(basis.cols() - 1) = v;
      }
      int extra = uniform_int(rng, 0, n - 2 * r);
      for (int i = 0; i < extra; ++i) {
        Vec v = Vec::Zero(n);
        v(r + i) = 1.0;
        v += 0.3 * random_vec(rng, n);
        basis.conservativeResize(n, basis.cols() + 1);
        basis.col(basis.cols() - 1) = v;
      }
      if (numeric_rank(basis) < basis.cols()) continue;
      ++trials;
      Mat K = basis * kernel_basis(gram(g, basis));
      Mat C = random_invertible(rng, static_cast<int>(basis.cols()));
      Mat B2 = basis * C;
      Mat K2 = B2 * kernel_basis(gram(g, B2));
      REQUIRE(K.cols() == K2.cols());
      CHECK(subspace_distance(K, K2) < 1e-8);
    }
  }

  TEST_CASE("subspace helpers") {
    Mat a = cols({v3(1, 0, 0), v3(0, 1, 0)});
    Mat b = cols({v3(1, 1, 0), v3(1, -1, 0)});
    CHECK(subspace_distance(a, b) < 1e-12);
    CHECK(subspace_distance(a, cols({v3(0, 0, 1)})) == doctest::Approx(1.0));
    CHECK(distance_to_span(a, v3(3, 4, 5)) == doctest::Approx(5.0));
    CHECK(numeric_rank(cols({v3(1, 2, 3), v3(2, 4, 6)})) == 1);
    CHECK(numeric_rank(cols({v3(1e-6, 0, 0), v3(0, 1e6, 0)})) == 2);
  }
}
