#include "nullframe/structure.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "nullframe/error.hpp"
#include "nullframe/expr.hpp"
#include "nullframe/submanifold.hpp"

namespace nullframe {

double verify_bronze(const Mat& J) {
  if (J.rows() != J.cols()) throw DimensionMismatch("bronze matrix is not square");
  Mat r = J * J - 3.0 * J - Mat::Identity(J.rows(), J.cols());
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

CompatibilityResidual verify_compatibility(const Mat& J, const SignatureMetric& g, int random_pairs,
                                           std::uint64_t seed) {
  if (J.rows() != g.dim() || J.cols() != g.dim()) throw DimensionMismatch("bronze matrix and metric differ in size");
  CompatibilityResidual out;
  // g(J e_i, e_j) = eps_j J_ji
  Mat lowered = g.lower(J);
  out.symmetry = (lowered - lowered.transpose()).cwiseAbs().maxCoeff();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < random_pairs; ++k) {
    Vec x(g.dim()), y(g.dim());
    for (int i = 0; i < g.dim(); ++i) x(i) = unif(rng);
    for (int i = 0; i < g.dim(); ++i) y(i) = unif(rng);
    double lhs = inner(g, J * x, J * y);
    double rhs = 3.0 * inner(g, x, J * y) + inner(g, x, y);
    out.quadratic = std::max(out.quadratic, std::abs(lhs - rhs));
  }
  return out;
}

double bronze_eigenvalue_residual(const Mat& J) {
  Eigen::EigenSolver<Mat> es(J, false);
  double worst = 0.0;
  for (const std::complex<double>& lam : es.eigenvalues()) {
    double d = std::min(std::abs(lam - kBronzeRatio), std::abs(lam - (3.0 - kBronzeRatio)));
    worst = std::max(worst, d);
  }
  return worst;
}

void validate(const LMParams& lm, const SignatureMetric& g, double tol) {
  if (lm.l == 0.0 && lm.m == 0.0) throw ValidationError("lm: (l, m) must not both vanish");
  if (lm.eta.size() != g.dim()) throw ValidationError("lm.eta has the wrong dimension");
  if (!lm.eta.allFinite()) throw ValidationError("lm.eta is not finite");
  if (std::abs(inner(g, lm.eta, lm.eta) - 1.0) > tol) throw ValidationError("lm.eta not unit spacelike");
}

double theta(const Vec& X, const LMParams& lm, const SignatureMetric& g) { return inner(g, X, lm.eta); }

JSplit split_J_tangent(const Vec& JX, const Decomposition& decomp) {
  FrameComponents c = expand(decomp, JX);
  return {c.tangent(), c.ltr, c.stmperp};
}

TransversalSplit split_J_transversal(const Vec& JV, const Decomposition& decomp) {
  FrameComponents c = expand(decomp, JV);
  return {c.tangent(), c.transversal()};
}

}  // namespace nullframe
