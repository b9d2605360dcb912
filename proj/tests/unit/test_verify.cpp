#include <cmath>
#include <set>
#include <utility>

#include "doctest.h"
#include "nullframe/verify.hpp"
#include "support.hpp"

using namespace nullframe;
using namespace testing;

namespace {

std::vector<std::vector<TheoremCheck>> theorems_at(const ManifoldSpec& spec, int count, std::uint64_t seed) {
  std::vector<std::vector<TheoremCheck>> out;
  TheoremOptions opts;
  opts.seed = seed;
  for (const auto& t : sample_points(spec, count, seed)) {
    LocalGeometry geo(spec, t);
    out.push_back(theorem_checks(geo, spec.lm, 1e-8, opts));
  }
  return out;
}

const TheoremSummary* find(const std::vector<TheoremSummary>& all, const std::string& name) {
  for (const auto& s : all)
    if (s.name == name) return &s;
  return nullptr;
}

double condition(const TheoremSummary& s, const std::string& name) {
  for (const auto& c : s.max_conditions)
    if (c.name == name) return c.residual;
  return -1.0;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("identity suite on the two stated examples") {
    for (const char* name : {"bronze16", "minimal11"}) {
      auto spec = builtin_example(name);
      auto lms = random_lm_samples(spec, 5, 0);
      lms.insert(lms.begin(), spec.lm);
      auto rep = identity_suite(spec, sample_points(spec, 20, 0), lms);
      for (const auto& e : rep.entries) {
        INFO(name << " " << e.name << " " << e.max_residual << " " << e.note);
        CHECK(e.pass);
      }
      CHECK(rep.all_pass());
      CHECK(rep.find("lm_torsion") != nullptr);
      CHECK(rep.find("gauss_reconstruction")->samples > 0);
    }
  }

  TEST_CASE("identity suite on the toy instances") {
    for (const auto& name : builtins()) {
      auto spec = builtin_example(name);
      auto lms = random_lm_samples(spec, 2, 1);
      lms.insert(lms.begin(), spec.lm);
      auto rep = identity_suite(spec, sample_points(spec, 5, 1), lms);
      INFO(name);
      CHECK(rep.all_pass());
    }
  }

  TEST_CASE("random (l, m) draws") {
    auto spec = builtin_example("bronze16");
    auto a = random_lm_samples(spec, 50, 3), b = random_lm_samples(spec, 50, 3);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].l == b[i].l);
      CHECK(a[i].m == b[i].m);
      CHECK(std::abs(a[i].l) <= 2.0);
      CHECK(std::abs(a[i].m) <= 2.0);
      CHECK((a[i].l != 0.0 || a[i].m != 0.0));
      CHECK(a[i].eta == spec.lm.eta);
    }
  }

  TEST_CASE("theorem conditions agree with the direct properties") {
    // Known exceptions, each analysed separately below.
    const std::set<std::pair<std::string, std::string>> known = {{"minimal_conditions", "1"},
                                                                  {"induced_lm_type", "zeta_in_stmperp"}};
    for (const auto& name : builtins()) {
      auto spec = builtin_example(name);
      auto sums = summarize(theorems_at(spec, 8, 0), 1e-8);
      for (const auto& s : sums)
        for (const auto& c : s.inconsistent_conditions) {
          INFO(name << " " << s.name << " condition " << c);
          CHECK(known.count({s.name, c}) == 1);
        }
    }
  }

  TEST_CASE("barred trace condition for minimality is not met by minimal directions") {
    // trace A-bar_W differs from trace A_W by theta(W)(l s + m trace f); the unbarred traces are the consistent form.
    auto spec = builtin_example("bronze16");
    auto sums = summarize(theorems_at(spec, 5, 0), 1e-8);
    const auto* s = find(sums, "minimal_conditions");
    REQUIRE(s != nullptr);
    REQUIRE(s->max_direct.has_value());
    CHECK(*s->max_direct < 1e-8);
    CHECK(condition(*s, "1") > 1.0);
    CHECK(condition(*s, "1_unbarred") < 1e-8);
  }

  TEST_CASE("induced (l, m) type does not force the characteristic field into S(TM-perp)") {
    auto spec = builtin_example("minimal11");
    auto sums = summarize(theorems_at(spec, 5, 0), 1e-8);
    const auto* s = find(sums, "induced_lm_type");
    REQUIRE(s != nullptr);
    REQUIRE(s->max_direct.has_value());
    CHECK(*s->max_direct < 1e-8);
    CHECK(condition(*s, "zeta_in_stmperp") > 0.5);
    CHECK(s->inconsistent == 5);
  }

  TEST_CASE("sphere is totally umbilical with unit mean curvature") {
    auto spec = builtin_example("sphere4");
    for (const auto& t : sample_points(spec, 10, 0)) {
      auto fit = umbilical_fit(spec, t);
      CHECK(fit.residual < 1e-8);
      CHECK(fit.Hs.norm() == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(fit.Hl.norm() == 0.0);
    }
  }

  TEST_CASE("umbilical fit does not depend on the frame") {
    auto doc = builtin_manifest("sphere4");
    doc["frame"] = {{"matrix", {{2, 0}, {1, -0.5}}}};
    auto rescaled = spec_from_json(doc);
    auto spec = builtin_example("sphere4");
    for (const auto& t : sample_points(spec, 5, 2)) {
      auto a = umbilical_fit(spec, t), b = umbilical_fit(rescaled, t);
      CHECK(b.residual < 1e-8);
      CHECK((a.Hs - b.Hs).norm() < 1e-8);
    }
  }

  TEST_CASE("11-dimensional instance is not umbilical") {
    auto spec = builtin_example("minimal11");
    for (const auto& t : sample_points(spec, 20, 0)) CHECK(umbilical_fit(spec, t).residual > 1e-3);
    Vec t = Vec::Zero(6);
    t(4) = 1.0;
    t(5) = 0.3;
    CHECK(umbilical_fit(spec, t).residual > 0.1);
  }

  TEST_CASE("flat plane is minimal") {
    auto spec = builtin_example("plane3");
    for (const auto& t : sample_points(spec, 5, 0)) CHECK(minimality_check(spec, t).minimal);
  }

  TEST_CASE("sphere is not minimal") {
    auto spec = builtin_example("sphere4");
    auto v = minimality_check(spec, spec.domain_center());
    CHECK_FALSE(v.minimal);
    CHECK(v.trace.norm() == doctest::Approx(2.0).epsilon(1e-8));
  }

  TEST_CASE("the 11-dimensional instance is minimal") {
    // Expected to fail: h^s(B4,B4) = -h^s(B5,B5) but g(B4,B4) != g(B5,B5), so the screen trace is nonzero.
    auto spec = builtin_example("minimal11");
    for (const auto& t : sample_points(spec, 20, 0)) {
      auto v = minimality_check(spec, t);
      INFO("trace residual " << v.trace_residual << ", h^s on Rad " << v.hs_on_rad_residual);
      CHECK(v.hs_on_rad_residual < 1e-8);
      CHECK(v.minimal);
    }
  }
}
