#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nullframe/manifest.hpp"
#include "nullframe/verify.hpp"

namespace nullframe {

// Halton sequence (prime bases 2, 3, 5, ...) mapped into the box with a relative inset on
// every side. Points use sequence indices start, start + 1, ...; start must be positive.
std::vector<Vec> halton_points(const std::vector<std::pair<double, double>>& domain, int count,
                               std::uint64_t start, double inset = 0.05);

// Seed s selects the block of sequence indices [1 + s*count, 1 + (s+1)*count).
std::vector<Vec> sample_points(const ManifoldSpec& spec, int count, std::uint64_t seed, double inset = 0.05);

struct CheckOptions {
  int points = 20;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  double fd_tol = 1e-6;
  int lm_draws = 2;  // random (l, m) pairs added to the manifest's own pair
  int threads = 1;
  bool theorems = true;
};

struct ClaimRow {
  std::string field;
  json claimed;
  json found;
  bool match = false;
};

struct CheckResult {
  json document;
  std::vector<ClaimRow> claims;
  ResidualReport identities;
  std::vector<TheoremSummary> theorems;
  long point_errors = 0;
  bool claims_ok = true;
  bool residuals_ok = true;

  // 0 when every claim matches and every residual is within tolerance, otherwise 2.
  int exit_code() const { return claims_ok && residuals_ok ? 0 : 2; }
};

CheckResult run_check(const ManifoldSpec& spec, const json& manifest, const CheckOptions& opts);

// Identity suite only, with the manifest pair plus lm_draws random pairs.
CheckResult run_identities(const ManifoldSpec& spec, const json& manifest, const CheckOptions& opts);

json to_json(const ResidualReport& rep);
json to_json(const TheoremSummary& s);

// Plain-text rendering of a check document for the terminal.
std::string render_text(const CheckResult& result);

}  // namespace nullframe
