#include "nullframe/submanifold.hpp"

#include <algorithm>
#include <cmath>

#include "nullframe/error.hpp"

namespace nullframe {

namespace {

constexpr double kContinuityLimit = 0.1;

double smallest_eig_ratio(const Mat& G) {
  if (G.rows() == 0) return 1.0;
  Vec mags = Eigen::SelfAdjointEigenSolver<Mat>(G, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs();
  return mags.minCoeff() / std::max(1.0, mags.maxCoeff());
}

// Euclidean projection of the columns of v onto span(basis).
Mat project_onto(const Mat& basis, const Mat& v) {
  if (basis.cols() == 0) return Mat::Zero(v.rows(), v.cols());
  Mat q = orthonormal_span(basis);
  return q * (q.transpose() * v);
}

void check_continuity(const Mat& now, const Mat& before, const char* what) {
  if (now.cols() != before.cols())
    throw FrameDiscontinuity(std::string(what) + " changed dimension between neighbouring points");
  double d = subspace_distance(now, before);
  if (d >= kContinuityLimit)
    throw FrameDiscontinuity(std::string(what) + " jumped by subspace distance " + std::to_string(d));
}

Mat safe_inverse(const Mat& G) {
  if (G.rows() == 0) return Mat(0, 0);
  return G.inverse();
}

// Least-squares coefficients of v over the columns of basis.
Mat coefficients(const Mat& basis, const Mat& v) {
  if (basis.cols() == 0) return Mat(0, v.cols());
  return basis.colPivHouseholderQr().solve(v);
}

}  // namespace

Vec ManifoldSpec::domain_center() const {
  Vec t(param_dim);
  for (int i = 0; i < param_dim; ++i) t(i) = 0.5 * (domain[i].first + domain[i].second);
  return t;
}

void validate(const ManifoldSpec& spec) {
  const int n = spec.ambient_dim, m = spec.param_dim;
  if (m < 1) throw ValidationError("params.count must be positive");
  if (spec.metric.dim() != n) throw ValidationError("ambient.dim does not match the metric");
  if (static_cast<int>(spec.embedding.size()) != n)
    throw ValidationError("embedding has " + std::to_string(spec.embedding.size()) + " expressions for ambient dimension " + std::to_string(n));
  for (const auto& e : spec.embedding)
    if (e.param_count() != m) throw ValidationError("embedding expression arity differs from params.count");
  if (spec.bronze.matrix.rows() != n || spec.bronze.matrix.cols() != n)
    throw ValidationError("bronze.matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  if (static_cast<int>(spec.domain.size()) != m) throw ValidationError("params.domain needs one interval per parameter");
  for (const auto& [lo, hi] : spec.domain)
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("params.domain intervals must satisfy lo < hi");
  if (spec.frame_matrix.size()) {
    if (spec.frame_matrix.cols() != m || spec.frame_matrix.rows() > m)
      throw ValidationError("frame.matrix must have " + std::to_string(m) + " columns and at most as many rows");
    Vec sv = Eigen::JacobiSVD<Mat>(spec.frame_matrix).singularValues();
    if (sv.minCoeff() <= 1e-9) throw ValidationError("frame.matrix rows are not independent");
  }
  validate(spec.lm, spec.metric);
}

std::string Classification::to_string() const {
  switch (kind) {
    case ClassKind::NonDegenerate: return "NonDegenerate";
    case ClassKind::RLightlike: return "RLightlike(" + std::to_string(r) + ")";
    case ClassKind::Coisotropic: return "Coisotropic";
    case ClassKind::Isotropic: return "Isotropic";
    case ClassKind::TotallyLightlike: return "TotallyLightlike";
  }
  return "?";
}

Classification classify(int r, int m, int n) {
  if (r == 0) return {ClassKind::NonDegenerate, 0};
  if (r < std::min(m, n)) return {ClassKind::RLightlike, r};
  if (r == n && n < m) return {ClassKind::Coisotropic, r};
  if (r == m && m < n) return {ClassKind::Isotropic, r};
  return {ClassKind::TotallyLightlike, r};
}

FrameComponents expand(const Decomposition& d, const Vec& v, double tol) {
  const SignatureMetric& g = d.metric;
  if (v.size() != d.n()) throw DimensionMismatch("vector length differs from the ambient dimension");
  Vec lv = g.lower(v);
  FrameComponents c;
  c.ltr_coef = d.rad.transpose() * lv;
  c.rad_coef = d.ltr.transpose() * lv;
  c.screen_coef = d.stm_gram_inv * (d.stm.transpose() * lv);
  c.stmperp_coef = d.stmperp_gram_inv * (d.stmperp.transpose() * lv);
  c.ltr = d.ltr * c.ltr_coef;
  c.rad = d.rad * c.rad_coef;
  c.screen = d.stm * c.screen_coef;
  c.stmperp = d.stmperp * c.stmperp_coef;
  c.residual = (v - c.screen - c.rad - c.ltr - c.stmperp).norm();
  if (c.residual > tol * std::max(1.0, v.norm()))
    throw FrameIncomplete("frame expansion leaves residual " + std::to_string(c.residual));
  return c;
}

TangentFrame tangent_frame(const ManifoldSpec& spec, const Vec& t) {
  const int n = spec.ambient_dim, m = spec.param_dim;
  if (t.size() != m) throw DimensionMismatch("parameter point has the wrong dimension");
  TangentFrame f;
  f.point.resize(n);
  f.jacobian.resize(n, m);
  f.hessians.reserve(n);
  for (int i = 0; i < n; ++i) {
    expr::Jet2 j = spec.embedding[i].eval_jet2(t);
    f.point(i) = j.value;
    f.jacobian.row(i) = j.grad.transpose();
    f.hessians.push_back(std::move(j.hess));
  }
  f.frame = f.jacobian * spec.frame_rows().transpose();
  if (numeric_rank(f.frame) < f.frame.cols())
    throw DegenerateParametrization("tangent frame has rank " + std::to_string(numeric_rank(f.frame)) + " < " +
                                    std::to_string(f.frame.cols()));
  return f;
}

Decomposition decompose(const ManifoldSpec& spec, const Vec& t, const Decomposition* ref) {
  const SignatureMetric& g = spec.metric;
  TangentFrame tf = tangent_frame(spec, t);
  Decomposition d;
  d.t = t;
  d.point = std::move(tf.point);
  d.metric = g;
  d.jacobian = std::move(tf.jacobian);
  d.hessians = std::move(tf.hessians);
  d.frame = std::move(tf.frame);
  const int k = d.k(), n = d.n();

  // Radical: kernel of the Gram of the unit-normalized frame, mapped back to frame coefficients.
  Vec norms = d.frame.colwise().norm();
  Mat kern = kernel_basis(gram(g, normalize_columns(d.frame)));
  Mat rad_span = norms.cwiseInverse().asDiagonal() * kern;
  if (ref) {
    if (rad_span.cols() != ref->rad_coef.cols()) throw FrameDiscontinuity("radical dimension changed between neighbouring points");
    d.rad_coef = project_onto(rad_span, ref->rad_coef);
    check_continuity(d.rad_coef, ref->rad_coef, "radical");
  } else {
    d.rad_coef = pivot_basis(rad_span);
  }
  d.rad = d.frame * d.rad_coef;

  if (ref) {
    d.screen_indices = ref->screen_indices;
    d.stm.resize(n, static_cast<Eigen::Index>(d.screen_indices.size()));
    for (std::size_t j = 0; j < d.screen_indices.size(); ++j) d.stm.col(static_cast<Eigen::Index>(j)) = d.frame.col(d.screen_indices[j]);
    if (d.stm.cols() && smallest_eig_ratio(gram(g, normalize_columns(d.stm))) <= kRankTol)
      throw FrameDiscontinuity("reused screen selection became degenerate");
  } else {
    ScreenSelection sel = screen_complement(g, d.frame, d.rad);
    d.screen_indices = sel.indices;
    d.stm = sel.basis;
  }

  d.tmperp = orthogonal_space(g, d.frame);
  Mat qperp = orthonormal_span(d.tmperp);
  Mat qrad = orthonormal_span(d.rad);
  Mat stmperp_span = qrad.cols() ? Mat(qperp * null_space(qrad.transpose() * qperp)) : qperp;
  if (stmperp_span.cols() != qperp.cols() - qrad.cols())
    throw NoNondegenerateComplement("radical is not contained in TM-perp");
  if (ref) {
    if (stmperp_span.cols() != ref->stmperp.cols()) throw FrameDiscontinuity("S(TM-perp) dimension changed between neighbouring points");
    d.stmperp = project_onto(stmperp_span, ref->stmperp);
    check_continuity(d.stmperp, ref->stmperp, "S(TM-perp)");
  } else {
    d.stmperp = stmperp_span.cols() ? pivot_basis(stmperp_span) : stmperp_span;
  }
  if (d.stmperp.cols() && smallest_eig_ratio(gram(g, normalize_columns(d.stmperp))) <= kRankTol)
    throw NoNondegenerateComplement("S(TM-perp) is degenerate");

  d.ltr = lightlike_transversal(g, d.rad, d.stm, d.stmperp);
  d.stm_gram_inv = safe_inverse(gram(g, d.stm));
  d.stmperp_gram_inv = safe_inverse(gram(g, d.stmperp));
  d.classification = classify(d.r(), k, n - k);
  if (ref) {
    check_continuity(d.stm, ref->stm, "S(TM)");
    check_continuity(d.ltr, ref->ltr, "ltr(TM)");
  }
  d.generic = screen_generic_report(spec, d, ref ? &ref->generic : nullptr);
  return d;
}

ScreenGenericReport screen_generic_report(const ManifoldSpec& spec, const Decomposition& d,
                                          const ScreenGenericReport* ref) {
  const SignatureMetric& g = d.metric;
  const Mat& J = spec.bronze.matrix;
  ScreenGenericReport rep;

  auto invariance = [&](const Mat& basis) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < basis.cols(); ++i)
      worst = std::max(worst, distance_to_span(basis, J * basis.col(i)) / basis.col(i).norm());
    return worst;
  };
  rep.rad_invariant = invariance(d.rad);
  rep.ltr_invariant = invariance(d.ltr);

  // B0 = J(S(TM)) ∩ S(TM): joint kernel of [S, -JS].
  const Eigen::Index s = d.stm.cols();
  Mat b0_span(s, 0);
  if (s) {
    Mat sn = normalize_columns(d.stm);
    Mat jsn = normalize_columns(J * sn);
    Mat stack(d.n(), 2 * s);
    stack << sn, -jsn;
    Mat ker = null_space(stack);
    Mat vecs = sn * ker.topRows(s);
    b0_span = vecs.cols() ? coefficients(d.stm, orthonormal_span(vecs)) : Mat(s, 0);
  }
  if (ref) {
    if (b0_span.cols() != ref->b0_coef.cols()) throw FrameDiscontinuity("B0 dimension changed between neighbouring points");
    rep.b0_coef = project_onto(b0_span, ref->b0_coef);
  } else {
    rep.b0_coef = b0_span.cols() ? pivot_basis(b0_span) : b0_span;
  }
  rep.b0 = d.stm * rep.b0_coef;
  rep.b0_nondegenerate = rep.b0.cols() == 0 || smallest_eig_ratio(gram(g, normalize_columns(rep.b0))) > kRankTol;

  // B' = g-orthogonal complement of B0 inside S(TM).
  Mat bp_span = rep.b0.cols() ? null_space(cross_gram(g, normalize_columns(rep.b0), d.stm)) : Mat(Mat::Identity(s, s));
  if (ref) {
    if (bp_span.cols() != ref->bprime_coef.cols()) throw FrameDiscontinuity("B' dimension changed between neighbouring points");
    rep.bprime_coef = project_onto(bp_span, ref->bprime_coef);
  } else {
    rep.bprime_coef = bp_span.cols() ? pivot_basis(bp_span) : bp_span;
  }
  rep.bprime = d.stm * rep.bprime_coef;

  rep.w_bprime.resize(d.n(), rep.bprime.cols());
  for (Eigen::Index j = 0; j < rep.bprime.cols(); ++j) {
    Vec z = rep.bprime.col(j);
    Vec jz = J * z;
    FrameComponents c = expand(d, jz);
    double scale = std::max(jz.norm(), 1e-300);
    if ((jz - c.screen).norm() > kRankTol * scale) rep.g3_not_in_stm = true;
    if ((jz - c.stmperp).norm() > kRankTol * scale) rep.g3_not_in_stmperp = true;
    rep.f_bprime_residual = std::max(rep.f_bprime_residual, distance_to_span(rep.bprime, c.tangent()) / z.norm());
    rep.w_bprime.col(j) = c.stmperp;
  }

  // mu = complement of w(B') in S(TM-perp), chosen g-orthogonal.
  const Eigen::Index w = d.stmperp.cols();
  Mat wspan = orthonormal_span(rep.w_bprime);
  Mat mu_span = wspan.cols() ? null_space(cross_gram(g, wspan, d.stmperp)) : Mat(Mat::Identity(w, w));
  if (ref) {
    if (mu_span.cols() != ref->mu_coef.cols()) throw FrameDiscontinuity("mu dimension changed between neighbouring points");
    rep.mu_coef = project_onto(mu_span, ref->mu_coef);
  } else {
    rep.mu_coef = mu_span.cols() ? pivot_basis(mu_span) : mu_span;
  }
  rep.mu = d.stmperp * rep.mu_coef;
  rep.mu_invariant = invariance(rep.mu);

  rep.proper = rep.b0.cols() > 0 && rep.bprime.cols() > 0;
  rep.screen_generic = d.r() > 0 && rep.rad_invariant < kRankTol && rep.b0_nondegenerate &&
                       (rep.bprime.cols() == 0 || (rep.g3_not_in_stm && rep.g3_not_in_stmperp));
  return rep;
}

Vec frame_coefficients(const Decomposition& d, const Vec& X, double tol) {
  Vec x = d.frame.colPivHouseholderQr().solve(X);
  double res = (d.frame * x - X).norm();
  if (res > tol * std::max(1.0, X.norm())) throw NotTangent("vector is not tangent (residual " + std::to_string(res) + ")");
  return x;
}

Projections projections(const Vec& X, const Decomposition& d) {
  FrameComponents c = expand(d, X);
  if (c.transversal().norm() > 1e-8 * std::max(1.0, X.norm()))
    throw NotTangent("vector has a transversal component of size " + std::to_string(c.transversal().norm()));
  const ScreenGenericReport& rep = d.generic;
  Mat both(rep.b0_coef.rows(), rep.b0_coef.cols() + rep.bprime_coef.cols());
  both << rep.b0_coef, rep.bprime_coef;
  Vec coef = both.cols() ? Vec(both.colPivHouseholderQr().solve(c.screen_coef)) : Vec();
  Projections p;
  p.J0X = rep.b0.cols() ? Vec(rep.b0 * coef.head(rep.b0.cols())) : Vec(Vec::Zero(X.size()));
  p.QX = rep.bprime.cols() ? Vec(rep.bprime * coef.tail(rep.bprime.cols())) : Vec(Vec::Zero(X.size()));
  p.J1X = c.rad;
  return p;
}

}  // namespace nullframe
