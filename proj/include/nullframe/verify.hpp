#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nullframe/connection.hpp"

namespace nullframe {

struct IdentityEntry {
  std::string name;
  std::string anchor;  // the identity, written out
  double max_residual = 0.0;
  double tolerance = 1e-8;
  bool pass = true;
  bool skipped = false;
  std::string note;
  long samples = 0;
};

struct ResidualReport {
  std::vector<IdentityEntry> entries;
  std::vector<std::string> discrepancies;

  bool all_pass() const;
  const IdentityEntry* find(const std::string& name) const;
};

struct SuiteOptions {
  double tol = 1e-8;
  double fd_tol = 1e-6;  // relative, jets vs finite differences
  std::uint64_t seed = 0;
  int random_args = 3;
  int threads = 1;
};

// (l, m) pairs drawn uniformly from [-2,2]^2 without (0,0); eta is taken from the spec.
std::vector<LMParams> random_lm_samples(const ManifoldSpec& spec, int count, std::uint64_t seed);

ResidualReport identity_suite(const ManifoldSpec& spec, const std::vector<Vec>& points,
                              const std::vector<LMParams>& lm_samples, const SuiteOptions& opts = {});

// A theorem condition evaluated next to the geometric property it characterizes.
struct ConditionResidual {
  std::string name;
  std::string statement;
  double residual = 0.0;
};

struct TheoremCheck {
  std::string name;
  std::string property;
  bool applicable = true;
  std::string skip_reason;
  std::optional<double> direct;  // absent for plain identities
  std::vector<ConditionResidual> conditions;
};

enum class Distribution { B0, Bprime, B };
enum class GeodesicMode { B_geodesic, mixed_geodesic };

const char* to_string(Distribution d);
const char* to_string(GeodesicMode m);

struct TheoremOptions {
  std::uint64_t seed = 0;
  int random_args = 3;
};

// The structural decisions (B0, B', screen generic) are read from the base decomposition.
TheoremCheck integrability_check(const LocalGeometry& geo, Distribution dist, const LMParams& lm,
                                 const TheoremOptions& opts = {});
TheoremCheck parallel_check(const LocalGeometry& geo, Distribution dist, const LMParams& lm,
                            const TheoremOptions& opts = {});
TheoremCheck geodesicity_check(const LocalGeometry& geo, GeodesicMode mode, const LMParams& lm,
                               const TheoremOptions& opts = {});
TheoremCheck foliation_check(const LocalGeometry& geo, const LMParams& lm, const TheoremOptions& opts = {});
TheoremCheck tangential_split_check(const LocalGeometry& geo, const LMParams& lm, const TheoremOptions& opts = {});
TheoremCheck b0_minimal_check(const LocalGeometry& geo, const LMParams& lm, const TheoremOptions& opts = {});
TheoremCheck induced_lm_check(const LocalGeometry& geo, const LMParams& lm);
TheoremCheck minimal_conditions_check(const LocalGeometry& geo, const LMParams& lm, double tol);
TheoremCheck umbilical_lemma_check(const LocalGeometry& geo, const LMParams& lm, const TheoremOptions& opts = {});

// Convenience wrappers that build the local geometry.
TheoremCheck integrability_check(const ManifoldSpec& spec, Distribution dist, const Vec& t);
TheoremCheck geodesicity_check(const ManifoldSpec& spec, GeodesicMode mode, const Vec& t);

// Every check at one point, in a fixed order.
std::vector<TheoremCheck> theorem_checks(const LocalGeometry& geo, const LMParams& lm, double tol,
                                         const TheoremOptions& opts = {});

struct TheoremSummary {
  std::string name;
  std::string property;
  long points = 0;
  long skipped = 0;
  std::string skip_reason;
  std::optional<double> max_direct;
  std::vector<ConditionResidual> max_conditions;
  // Points where the direct residual is below tol but some condition is not.
  long inconsistent = 0;
  std::vector<std::string> inconsistent_conditions;
};

std::vector<TheoremSummary> summarize(const std::vector<std::vector<TheoremCheck>>& per_point, double tol);

struct UmbilicalFit {
  Vec Hl;
  Vec Hs;
  double residual = 0.0;
  double Dl_residual = 0.0;
  std::optional<double> Hs_mu_component;  // reported when the fit holds and mu is nonempty
};

UmbilicalFit umbilical_fit(const LocalGeometry& geo, const SffBundle& bundle, double tol = 1e-8);
UmbilicalFit umbilical_fit(const ManifoldSpec& spec, const Vec& t, double tol = 1e-8);

struct MinimalityVerdict {
  double hs_on_rad_residual = 0.0;
  double trace_residual = 0.0;
  Vec trace;  // sum G^-1[a][b] h(e_a, e_b) over the screen
  bool minimal = false;
};

MinimalityVerdict minimality_check(const LocalGeometry& geo, const SffBundle& bundle, double tol = 1e-8);
MinimalityVerdict minimality_check(const ManifoldSpec& spec, const Vec& t, double tol = 1e-8);

}  // namespace nullframe
