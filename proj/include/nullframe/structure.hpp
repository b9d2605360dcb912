#pragma once

#include <cstdint>

#include "nullframe/semilinalg.hpp"

namespace nullframe {

struct Decomposition;

// Constant (1,1)-tensor on the flat ambient space.
struct BronzeStructure {
  Mat matrix;

  Vec apply(const Vec& v) const { return matrix * v; }
  int dim() const { return static_cast<int>(matrix.rows()); }
};

// max |J^2 - 3J - I|
double verify_bronze(const Mat& J);

struct CompatibilityResidual {
  double symmetry = 0.0;   // max |g(Je_i, e_j) - g(e_i, Je_j)|
  double quadratic = 0.0;  // max |g(JX, JY) - 3 g(X, JY) - g(X, Y)| over random pairs
  double max() const { return symmetry > quadratic ? symmetry : quadratic; }
};

CompatibilityResidual verify_compatibility(const Mat& J, const SignatureMetric& g, int random_pairs = 100,
                                           std::uint64_t seed = 0);

// Largest distance of an eigenvalue of J from {sigma, 3 - sigma}.
double bronze_eigenvalue_residual(const Mat& J);

struct LMParams {
  double l = 0.0;
  double m = 0.0;
  Vec eta;
};

// Throws ValidationError when (l, m) = (0, 0) or eta is not unit spacelike.
void validate(const LMParams& lm, const SignatureMetric& g, double tol = 1e-9);

double theta(const Vec& X, const LMParams& lm, const SignatureMetric& g);

struct JSplit {
  Vec fX;
  Vec wlX;
  Vec wsX;
  Vec wX() const { return wlX + wsX; }
};

struct TransversalSplit {
  Vec BV;
  Vec CV;
};

JSplit split_J_tangent(const Vec& JX, const Decomposition& decomp);
TransversalSplit split_J_transversal(const Vec& JV, const Decomposition& decomp);

}  // namespace nullframe
