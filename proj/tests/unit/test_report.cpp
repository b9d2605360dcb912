#include <cmath>
#include <string>

#include "doctest.h"
#include "nullframe/error.hpp"
#include "support.hpp"

using namespace nullframe;
using namespace testing;

namespace {

CheckOptions quick(int threads) {
  CheckOptions o;
  o.points = 6;
  o.seed = 4;
  o.lm_draws = 1;
  o.threads = threads;
  return o;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("Halton points in a box") {
    auto pts = halton_points({{0.0, 1.0}, {0.0, 1.0}}, 3, 1, 0.0);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0](0) == doctest::Approx(0.5));
    CHECK(pts[0](1) == doctest::Approx(1.0 / 3));
    CHECK(pts[1](0) == doctest::Approx(0.25));
    CHECK(pts[1](1) == doctest::Approx(2.0 / 3));
    CHECK(pts[2](0) == doctest::Approx(0.75));
    CHECK(pts[2](1) == doctest::Approx(1.0 / 9));
    auto inset = halton_points({{-1.0, 1.0}}, 200, 1);
    for (const auto& p : inset) {
      CHECK(p(0) >= -0.9);
      CHECK(p(0) <= 0.9);
    }
    CHECK_THROWS(halton_points({{0.0, 1.0}}, 2, 0));
  }

  TEST_CASE("seeds select disjoint blocks") {
    auto spec = builtin_example("minimal11");
    auto a = sample_points(spec, 10, 0), b = sample_points(spec, 10, 1), c = sample_points(spec, 10, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i] == c[i]);
      for (const auto& q : b) CHECK(a[i] != q);
    }
    auto both = halton_points(spec.domain, 20, 1);
    CHECK(both[10] == b[0]);
  }

  TEST_CASE("manifest validation errors name the field") {
    auto expect = [](json doc, const std::string& prefix) {
      try {
        spec_from_json(doc);
        FAIL("expected a validation error for " << prefix);
      } catch (const ValidationError& e) {
        INFO(e.what());
        CHECK(std::string(e.what()).rfind(prefix, 0) == 0);
      }
    };
    auto doc = builtin_manifest("bronze16");
    auto short_emb = doc;
    short_emb["embedding"].erase(short_emb["embedding"].size() - 1);
    expect(short_emb, "embedding");
    auto bad_dom = doc;
    bad_dom["params"]["domain"][0] = {1, -1};
    expect(bad_dom, "params.domain[0]");
    auto bad_expr = doc;
    bad_expr["embedding"][3] = "t10";
    expect(bad_expr, "embedding[3]");
    auto bad_index = doc;
    bad_index["ambient"]["index"] = 0;
    expect(bad_index, "ambient.index");
    auto bad_eta = builtin_manifest("plane3");
    bad_eta["lm"]["eta"] = {0, 2, 0};
    expect(bad_eta, "lm.eta");
    auto bad_claim = doc;
    bad_claim["claimed"]["radical_frame_indices"] = {1, 12};
    expect(bad_claim, "claimed.radical_frame_indices[1]");
    auto bad_frame = doc;
    bad_frame["frame"]["matrix"][1] = bad_frame["frame"]["matrix"][0];
    expect(bad_frame, "frame.matrix");
    CHECK_THROWS_AS(parse_manifest_text("{\"a\": 1,,}"), ParseError);
  }

  TEST_CASE("signature is inferred when positions are omitted") {
    auto doc = builtin_manifest("bronze16");
    auto spec = spec_from_json(doc);
    CHECK(spec.metric.timelike_positions() == std::vector<int>{3, 7});
    auto listing = infer_manifest_signature(doc);
    REQUIRE(listing.candidates.size() == 1);
    CHECK(coordinate_list(listing.candidates[0].timelike, listing.prefix) == "{z4,z8}");
    auto m11 = infer_manifest_signature(builtin_manifest("minimal11"));
    REQUIRE(m11.candidates.size() == 1);
    CHECK(coordinate_list(m11.candidates[0].timelike, m11.prefix) == "{y5}");
  }

  TEST_CASE("check document is identical across thread counts") {
    auto doc = builtin_manifest("bronze16");
    auto spec = spec_from_json(doc);
    auto one = run_check(spec, doc, quick(1));
    auto four = run_check(spec, doc, quick(4));
    CHECK(one.document.dump() == four.document.dump());
    CHECK(json::parse(one.document.dump()) == one.document);
  }

  TEST_CASE("claims table for the 16-dimensional instance") {
    auto doc = builtin_manifest("bronze16");
    auto spec = spec_from_json(doc);
    auto res = run_check(spec, doc, quick(2));
    CHECK(res.claims_ok);
    CHECK(res.residuals_ok);
    CHECK(res.exit_code() == 0);
    for (const auto& row : res.claims) {
      INFO(row.field);
      CHECK(row.match);
    }
    const auto& d = res.document;
    CHECK(d["schema_version"] == kSchemaVersion);
    CHECK(d["signature"]["timelike_positions"] == json({4, 8}));
    CHECK(d["summary"]["evaluated_points"] == 6);
    CHECK(d["verdict"]["exit_code"] == 0);
  }

  TEST_CASE("a false claim produces exit code 2") {
    auto doc = builtin_manifest("sphere4");
    doc["claimed"]["rad_dim"] = 1;
    auto spec = spec_from_json(doc);
    auto res = run_check(spec, doc, quick(1));
    CHECK_FALSE(res.claims_ok);
    CHECK(res.exit_code() == 2);
    bool named = false;
    for (const auto& msg : res.document["discrepancies"]) named |= msg.get<std::string>().find("rad_dim") != std::string::npos;
    CHECK(named);
  }

  TEST_CASE("identities command output") {
    auto doc = builtin_manifest("minimal11");
    auto spec = spec_from_json(doc);
    auto res = run_identities(spec, doc, quick(2));
    CHECK(res.residuals_ok);
    CHECK(res.document["identities"]["all_pass"] == true);
    CHECK(res.document["identities"]["lm_samples"].size() == 2);
  }

  TEST_CASE("text rendering mentions the verdict") {
    auto doc = builtin_manifest("plane3");
    auto spec = spec_from_json(doc);
    auto res = run_check(spec, doc, quick(1));
    std::string text = render_text(res);
    CHECK(text.find("plane3") != std::string::npos);
    CHECK(text.find("result: pass") != std::string::npos);
  }
}
