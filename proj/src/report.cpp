#include "nullframe/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <sstream>

#include "nullframe/error.hpp"
#include "nullframe/parallel.hpp"

#ifndef NULLFRAME_VERSION
#define NULLFRAME_VERSION "0.0.0"
#endif

namespace nullframe {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string point_text(const Vec& t) {
  std::string s = "(";
  for (int i = 0; i < t.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", t(i));
    s += buf;
  }
  return s + ")";
}

struct PointEval {
  bool ok = false;
  std::string error_kind, error;
  int k = 0, r = 0, s = 0, w = 0;
  std::string classification;
  ScreenGenericReport generic;
  double ltr_pairing = 0.0;
  std::vector<int> radical_frame;  // 1-based frame indices lying in Rad
  UmbilicalFit umbilical;
  MinimalityVerdict minimality;
  std::vector<TheoremCheck> theorems;
};

PointEval evaluate(const ManifoldSpec& spec, const Vec& t, const CheckOptions& opts, std::size_t index) {
  PointEval pe;
  try {
    Decomposition d = decompose(spec, t);
    pe.k = d.k();
    pe.r = d.r();
    pe.s = d.s();
    pe.w = d.w();
    pe.classification = d.classification.to_string();
    pe.generic = d.generic;
    if (d.r() > 0) {
      Mat P = cross_gram(d.metric, d.ltr, d.rad) - Mat::Identity(d.r(), d.r());
      Mat NN = gram(d.metric, d.ltr);
      pe.ltr_pairing = std::max(P.cwiseAbs().maxCoeff(), NN.cwiseAbs().maxCoeff());
      for (int a = 0; a < d.k(); ++a) {
        Vec col = d.frame.col(a);
        if (distance_to_span(d.rad, col) <= 1e-9 * std::max(1.0, col.norm())) pe.radical_frame.push_back(a + 1);
      }
    }
    LocalGeometry geo(spec, t);
    SffBundle bundle = levi_civita_bundle(geo);
    pe.umbilical = umbilical_fit(geo, bundle, opts.tol);
    pe.minimality = minimality_check(geo, bundle, opts.tol);
    if (opts.theorems) {
      TheoremOptions to;
      to.seed = opts.seed * 0x9E3779B97F4A7C15ULL + index + 1;
      pe.theorems = theorem_checks(geo, spec.lm, opts.tol, to);
    }
    pe.ok = true;
  } catch (const Error& e) {
    pe.error_kind = e.kind();
    pe.error = e.what();
  } catch (const std::exception& e) {
    pe.error_kind = "Exception";
    pe.error = e.what();
  }
  return pe;
}

json point_json(std::size_t i, const Vec& t, const PointEval& pe) {
  json p;
  p["index"] = i;
  p["t"] = vec_json(t);
  if (!pe.ok) {
    p["error"] = {{"kind", pe.error_kind}, {"message", pe.error}};
    return p;
  }
  p["classification"] = pe.classification;
  p["dims"] = {{"tm", pe.k}, {"rad", pe.r}, {"stm", pe.s}, {"stmperp", pe.w}, {"ltr", pe.r}};
  p["ltr_pairing_residual"] = pe.ltr_pairing;
  p["radical_frame_indices"] = pe.radical_frame;
  const auto& g = pe.generic;
  p["screen_generic"] = {{"screen_generic", g.screen_generic},
                         {"proper", g.proper},
                         {"rad_invariant", g.rad_invariant},
                         {"b0_dim", g.b0.cols()},
                         {"b0_nondegenerate", g.b0_nondegenerate},
                         {"bprime_dim", g.bprime.cols()},
                         {"g3_not_in_stm", g.g3_not_in_stm},
                         {"g3_not_in_stmperp", g.g3_not_in_stmperp},
                         {"mu_dim", g.mu.cols()},
                         {"mu_invariant", g.mu_invariant},
                         {"ltr_invariant", g.ltr_invariant}};
  json u = {{"residual", pe.umbilical.residual},
            {"Hl_norm", pe.umbilical.Hl.size() ? pe.umbilical.Hl.norm() : 0.0},
            {"Hs_norm", pe.umbilical.Hs.size() ? pe.umbilical.Hs.norm() : 0.0},
            {"Dl_residual", pe.umbilical.Dl_residual}};
  if (pe.umbilical.Hs_mu_component) u["Hs_mu_component"] = *pe.umbilical.Hs_mu_component;
  p["umbilical"] = u;
  p["minimality"] = {{"hs_on_rad_residual", pe.minimality.hs_on_rad_residual},
                     {"trace_residual", pe.minimality.trace_residual},
                     {"minimal", pe.minimality.minimal}};
  return p;
}

// A value shared by every evaluated point, or the sorted list of distinct values.
template <class T>
json uniform(const std::vector<T>& values) {
  std::vector<T> distinct = values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() == 1) return json(distinct[0]);
  json a = json::array();
  for (const auto& v : distinct) a.push_back(v);
  return a;
}

json header(const ManifoldSpec& spec, const json& manifest, const CheckOptions& opts, const char* command) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = {{"name", "nullframe"}, {"version", NULLFRAME_VERSION}};
  doc["command"] = command;
  doc["manifest"] = manifest;
  doc["options"] = {{"points", opts.points},
                    {"seed", opts.seed},
                    {"tol", opts.tol},
                    {"fd_tol", opts.fd_tol},
                    {"lm_draws", opts.lm_draws}};
  std::vector<int> timelike;
  for (int p : spec.metric.timelike_positions()) timelike.push_back(p + 1);
  doc["signature"] = {{"dim", spec.metric.dim()}, {"index", spec.metric.index()}, {"timelike_positions", timelike}};
  return doc;
}

std::vector<LMParams> lm_samples(const ManifoldSpec& spec, const CheckOptions& opts) {
  std::vector<LMParams> lms{spec.lm};
  for (const auto& lm : random_lm_samples(spec, opts.lm_draws, opts.seed)) lms.push_back(lm);
  return lms;
}

json lm_json(const std::vector<LMParams>& lms) {
  json a = json::array();
  for (const auto& lm : lms) a.push_back({{"l", lm.l}, {"m", lm.m}});
  return a;
}

void validate_options(const CheckOptions& opts) {
  if (opts.points < 1) throw ValidationError("points: must be positive");
  if (!(opts.tol > 0) || !(opts.fd_tol > 0)) throw ValidationError("tol: must be positive");
  if (opts.lm_draws < 0) throw ValidationError("lm_draws: must not be negative");
}

}  // namespace

std::vector<Vec> halton_points(const std::vector<std::pair<double, double>>& domain, int count,
                               std::uint64_t start, double inset) {
  const int dim = static_cast<int>(domain.size());
  if (dim > static_cast<int>(std::size(kPrimes))) throw ValidationError("halton_points: too many parameters");
  if (start == 0) throw ValidationError("halton_points: start index must be positive");
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec t(dim);
    for (int a = 0; a < dim; ++a) {
      double u = radical_inverse(start + static_cast<std::uint64_t>(i), kPrimes[a]);
      auto [lo, hi] = domain[a];
      t(a) = lo + (hi - lo) * (inset + (1.0 - 2.0 * inset) * u);
    }
    out.push_back(t);
  }
  return out;
}

std::vector<Vec> sample_points(const ManifoldSpec& spec, int count, std::uint64_t seed, double inset) {
  return halton_points(spec.domain, count, 1 + seed * static_cast<std::uint64_t>(count), inset);
}

json to_json(const ResidualReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json j = {{"name", e.name},
              {"anchor", e.anchor},
              {"max_residual", e.max_residual},
              {"tolerance", e.tolerance},
              {"pass", e.pass},
              {"skipped", e.skipped},
              {"samples", e.samples}};
    if (!e.note.empty()) j["note"] = e.note;
    entries.push_back(j);
  }
  return {{"all_pass", rep.all_pass()}, {"entries", entries}};
}

json to_json(const TheoremSummary& s) {
  json j = {{"name", s.name}, {"property", s.property}, {"points", s.points}, {"skipped", s.skipped}};
  if (!s.skip_reason.empty()) j["skip_reason"] = s.skip_reason;
  j["max_direct"] = s.max_direct ? json(*s.max_direct) : json(nullptr);
  json conds = json::array();
  for (const auto& c : s.max_conditions)
    conds.push_back({{"name", c.name}, {"statement", c.statement}, {"max_residual", c.residual}});
  j["conditions"] = conds;
  j["inconsistent_points"] = s.inconsistent;
  j["inconsistent_conditions"] = s.inconsistent_conditions;
  return j;
}

CheckResult run_identities(const ManifoldSpec& spec, const json& manifest, const CheckOptions& opts) {
  validate_options(opts);
  CheckResult res;
  auto points = sample_points(spec, opts.points, opts.seed);
  auto lms = lm_samples(spec, opts);
  SuiteOptions so;
  so.tol = opts.tol;
  so.fd_tol = opts.fd_tol;
  so.seed = opts.seed;
  so.threads = opts.threads;
  res.identities = identity_suite(spec, points, lms, so);
  res.residuals_ok = res.identities.all_pass();
  for (const auto& d : res.identities.discrepancies)
    if (d.rfind("point ", 0) == 0) ++res.point_errors;
  if (res.point_errors) res.residuals_ok = false;

  json doc = header(spec, manifest, opts, "identities");
  json pts = json::array();
  for (const auto& t : points) pts.push_back(vec_json(t));
  doc["sample_points"] = pts;
  json ids = to_json(res.identities);
  ids["lm_samples"] = lm_json(lms);
  doc["identities"] = ids;
  doc["discrepancies"] = res.identities.discrepancies;
  doc["verdict"] = {{"residuals_ok", res.residuals_ok}, {"exit_code", res.exit_code()}};
  res.document = std::move(doc);
  return res;
}

CheckResult run_check(const ManifoldSpec& spec, const json& manifest, const CheckOptions& opts) {
  validate_options(opts);
  CheckResult res;
  auto points = sample_points(spec, opts.points, opts.seed);

  std::vector<PointEval> evals(points.size());
  parallel_for(points.size(), opts.threads,
               [&](std::size_t i) { evals[i] = evaluate(spec, points[i], opts, i); });

  auto lms = lm_samples(spec, opts);
  SuiteOptions so;
  so.tol = opts.tol;
  so.fd_tol = opts.fd_tol;
  so.seed = opts.seed;
  so.threads = opts.threads;
  res.identities = identity_suite(spec, points, lms, so);

  std::vector<std::string> discrepancies = spec.notes;

  json pts = json::array();
  std::vector<int> rad_dims;
  std::vector<std::string> classes;
  std::vector<std::vector<int>> radical_frames;
  std::vector<std::vector<TheoremCheck>> per_point;
  bool generic = true, proper = true, minimal = true, umbilical = true;
  double max_hs_rad = 0.0, max_trace = 0.0, max_umb = 0.0, max_pairing = 0.0, max_ltr_inv = 0.0, max_mu_inv = 0.0,
         max_rad_inv = 0.0;
  Vec worst_trace_t;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const PointEval& pe = evals[i];
    pts.push_back(point_json(i, points[i], pe));
    if (!pe.ok) {
      ++res.point_errors;
      discrepancies.push_back("point " + point_text(points[i]) + " not evaluated: " + pe.error);
      continue;
    }
    rad_dims.push_back(pe.r);
    classes.push_back(pe.classification);
    radical_frames.push_back(pe.radical_frame);
    generic = generic && pe.generic.screen_generic;
    proper = proper && pe.generic.proper;
    minimal = minimal && pe.minimality.minimal;
    umbilical = umbilical && pe.umbilical.residual < opts.tol;
    max_hs_rad = std::max(max_hs_rad, pe.minimality.hs_on_rad_residual);
    if (pe.minimality.trace_residual >= max_trace) {
      max_trace = pe.minimality.trace_residual;
      worst_trace_t = points[i];
    }
    max_umb = std::max(max_umb, pe.umbilical.residual);
    max_pairing = std::max(max_pairing, pe.ltr_pairing);
    max_ltr_inv = std::max(max_ltr_inv, pe.generic.ltr_invariant);
    max_mu_inv = std::max(max_mu_inv, pe.generic.mu_invariant);
    max_rad_inv = std::max(max_rad_inv, pe.generic.rad_invariant);
    if (opts.theorems) per_point.push_back(pe.theorems);
  }
  const bool any = !rad_dims.empty();

  if (opts.theorems && any) res.theorems = summarize(per_point, opts.tol);
  for (const auto& s : res.theorems)
    for (const auto& c : s.inconsistent_conditions)
      discrepancies.push_back("theorem " + s.name + ": condition " + c + " fails at points where the property holds (" +
                              std::to_string(s.inconsistent) + " of " + std::to_string(s.points) + ")");
  for (const auto& d : res.identities.discrepancies) discrepancies.push_back(d);

  auto add_claim = [&](const std::string& field, json claimed, json found) {
    ClaimRow row{field, claimed, found, claimed == found};
    if (!row.match) res.claims_ok = false;
    res.claims.push_back(std::move(row));
  };
  if (any) {
    const Claims& c = spec.claimed;
    if (c.rad_dim) add_claim("rad_dim", *c.rad_dim, uniform(rad_dims));
    if (c.classification) add_claim("classification", *c.classification, uniform(classes));
    if (!c.radical_frame_indices.empty()) {
      std::vector<int> claimed;
      for (int k : c.radical_frame_indices) claimed.push_back(k + 1);
      add_claim("radical_frame_indices", claimed, uniform(radical_frames));
    }
    if (c.screen_generic) add_claim("screen_generic", *c.screen_generic, generic);
    if (c.proper) add_claim("proper", *c.proper, proper);
    if (c.minimal) {
      add_claim("minimal", *c.minimal, minimal);
      if (*c.minimal && !minimal)
        discrepancies.push_back("claimed minimal, but the screen trace of h reaches " + sci(max_trace) + " at " +
                                point_text(worst_trace_t) + " (h^s on Rad up to " + sci(max_hs_rad) + ")");
    }
  } else if (spec.claimed.rad_dim || spec.claimed.classification || spec.claimed.screen_generic ||
             spec.claimed.proper || spec.claimed.minimal) {
    res.claims_ok = false;
    discrepancies.push_back("no point could be evaluated; claims not compared");
  }
  for (const auto& row : res.claims)
    if (!row.match)
      discrepancies.push_back("claim " + row.field + ": stated " + row.claimed.dump() + ", found " + row.found.dump());

  res.residuals_ok = res.identities.all_pass() && res.point_errors == 0;

  json doc = header(spec, manifest, opts, "check");
  doc["points"] = pts;
  json summary;
  summary["evaluated_points"] = rad_dims.size();
  if (any) {
    summary["classification"] = uniform(classes);
    summary["rad_dim"] = uniform(rad_dims);
    summary["screen_generic"] = generic;
    summary["proper"] = proper;
    summary["max_ltr_pairing_residual"] = max_pairing;
    summary["max_rad_invariant"] = max_rad_inv;
    summary["max_mu_invariant"] = max_mu_inv;
    summary["max_ltr_invariant"] = max_ltr_inv;
    summary["umbilical"] = {{"umbilical", umbilical}, {"max_residual", max_umb}};
    summary["minimality"] = {
        {"minimal", minimal}, {"max_hs_on_rad_residual", max_hs_rad}, {"max_trace_residual", max_trace}};
  }
  doc["summary"] = summary;
  json ids = to_json(res.identities);
  ids["lm_samples"] = lm_json(lms);
  doc["identities"] = ids;
  json th = json::array();
  for (const auto& s : res.theorems) th.push_back(to_json(s));
  doc["theorems"] = th;
  json claims = json::array();
  for (const auto& row : res.claims)
    claims.push_back({{"field", row.field}, {"claimed", row.claimed}, {"found", row.found}, {"match", row.match}});
  doc["claims"] = claims;
  doc["discrepancies"] = discrepancies;
  doc["verdict"] = {{"claims_ok", res.claims_ok}, {"residuals_ok", res.residuals_ok}, {"exit_code", res.exit_code()}};
  res.document = std::move(doc);
  return res;
}

std::string render_text(const CheckResult& result) {
  const json& doc = result.document;
  std::ostringstream os;
  os << doc["command"].get<std::string>() << " " << doc["manifest"].value("name", std::string("(unnamed)")) << ": "
     << doc["options"]["points"].get<int>() << " points, seed " << doc["options"]["seed"].get<std::uint64_t>() << "\n";
  if (doc.contains("summary")) {
    const json& s = doc["summary"];
    if (s.contains("classification"))
      os << "  classification " << s["classification"].dump() << ", screen generic "
         << (s["screen_generic"].get<bool>() ? "yes" : "no") << ", proper " << (s["proper"].get<bool>() ? "yes" : "no")
         << ", minimal " << (s["minimality"]["minimal"].get<bool>() ? "yes" : "no") << ", umbilical "
         << (s["umbilical"]["umbilical"].get<bool>() ? "yes" : "no") << "\n";
  }
  long failed = 0, skipped = 0;
  for (const auto& e : result.identities.entries) {
    if (e.skipped) ++skipped;
    else if (!e.pass) ++failed;
  }
  os << "  identities: " << result.identities.entries.size() << " entries, " << failed << " failed, " << skipped
     << " skipped\n";
  for (const auto& e : result.identities.entries)
    if (!e.skipped && !e.pass) os << "    FAIL " << e.name << " " << sci(e.max_residual) << " > " << sci(e.tolerance) << "\n";
  for (const auto& s : result.theorems) {
    os << "  theorem " << s.name << ": ";
    if (s.points == 0) {
      os << "skipped (" << s.skip_reason << ")\n";
      continue;
    }
    os << (s.max_direct ? "property residual " + sci(*s.max_direct) : std::string("identity"));
    if (s.inconsistent) os << ", inconsistent at " << s.inconsistent << " points";
    os << "\n";
  }
  for (const auto& row : result.claims)
    os << "  claim " << row.field << ": stated " << row.claimed.dump() << ", found " << row.found.dump()
       << (row.match ? "" : "  MISMATCH") << "\n";
  if (doc.contains("discrepancies") && !doc["discrepancies"].empty()) {
    os << "  notes:\n";
    for (const auto& d : doc["discrepancies"]) os << "    - " << d.get<std::string>() << "\n";
  }
  os << "  result: " << (result.exit_code() == 0 ? "pass" : "fail") << "\n";
  return os.str();
}

}  // namespace nullframe
