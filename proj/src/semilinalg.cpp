#include "nullframe/semilinalg.hpp"

#include <algorithm>
#include <cmath>

#include "nullframe/error.hpp"

namespace nullframe {

SignatureMetric::SignatureMetric(std::vector<int> eps) : eps_(std::move(eps)) {
  for (int e : eps_)
    if (e != 1 && e != -1) throw ValidationError("metric signs must be +1 or -1");
  int q = index();
  if (q < 1 || q > dim() - 1)
    throw ValidationError("metric index " + std::to_string(q) + " outside 1.." + std::to_string(dim() - 1));
}

SignatureMetric SignatureMetric::with_timelike(int dim, const std::vector<int>& positions) {
  std::vector<int> eps(dim, 1);
  for (int p : positions) {
    if (p < 0 || p >= dim) throw ValidationError("timelike position " + std::to_string(p + 1) + " out of range");
    if (eps[p] == -1) throw ValidationError("timelike position " + std::to_string(p + 1) + " repeated");
    eps[p] = -1;
  }
  return SignatureMetric(std::move(eps));
}

int SignatureMetric::index() const { return static_cast<int>(std::count(eps_.begin(), eps_.end(), -1)); }

std::vector<int> SignatureMetric::timelike_positions() const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (eps_[i] < 0) out.push_back(i);
  return out;
}

Vec SignatureMetric::lower(const Vec& v) const {
  if (v.size() != dim()) throw DimensionMismatch("vector has " + std::to_string(v.size()) + " components, metric " + std::to_string(dim()));
  Vec r = v;
  for (int i = 0; i < dim(); ++i)
    if (eps_[i] < 0) r(i) = -r(i);
  return r;
}

Mat SignatureMetric::lower(const Mat& a) const {
  if (a.rows() != dim()) throw DimensionMismatch("matrix has " + std::to_string(a.rows()) + " rows, metric " + std::to_string(dim()));
  Mat r = a;
  for (int i = 0; i < dim(); ++i)
    if (eps_[i] < 0) r.row(i) = -r.row(i);
  return r;
}

const char* to_string(BundleLabel label) {
  switch (label) {
    case BundleLabel::TM: return "TM";
    case BundleLabel::RadTM: return "RadTM";
    case BundleLabel::STM: return "STM";
    case BundleLabel::TMperp: return "TMperp";
    case BundleLabel::STMperp: return "STMperp";
    case BundleLabel::ltrTM: return "ltrTM";
    case BundleLabel::B0: return "B0";
    case BundleLabel::Bprime: return "Bprime";
    case BundleLabel::mu: return "mu";
  }
  return "?";
}

double inner(const SignatureMetric& g, const Vec& u, const Vec& v) {
  if (u.size() != v.size()) throw DimensionMismatch("inner product of vectors of different length");
  return g.lower(u).dot(v);
}

Mat gram(const SignatureMetric& g, const Mat& basis) { return cross_gram(g, basis, basis); }

Mat cross_gram(const SignatureMetric& g, const Mat& a, const Mat& b) {
  if (b.rows() != g.dim()) throw DimensionMismatch("basis dimension differs from metric");
  return g.lower(a).transpose() * b;
}

Mat normalize_columns(const Mat& a) {
  Mat r = a;
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    double n = r.col(j).norm();
    if (n > 0) r.col(j) /= n;
  }
  return r;
}

namespace {

double threshold(const Eigen::VectorXd& singular, double tol) {
  double smax = singular.size() ? singular.maxCoeff() : 0.0;
  return tol * std::max(1.0, smax);
}

}  // namespace

int numeric_rank(const Mat& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(normalize_columns(a));
  const Vec& s = svd.singularValues();
  double thr = threshold(s, tol);
  return static_cast<int>((s.array() > thr).count());
}

Mat null_space(const Mat& a, double tol) {
  const Eigen::Index c = a.cols();
  if (a.rows() == 0) return Mat::Identity(c, c);
  if (c == 0) return Mat(0, 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  double thr = threshold(s, tol);
  Eigen::Index rank = (s.array() > thr).count();
  return svd.matrixV().rightCols(c - rank);
}

Mat orthonormal_span(const Mat& a, double tol) {
  if (a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(normalize_columns(a), Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  double thr = threshold(s, tol);
  Eigen::Index rank = (s.array() > thr).count();
  return svd.matrixU().leftCols(rank);
}

double subspace_distance(const Mat& a, const Mat& b) {
  Mat qa = orthonormal_span(a), qb = orthonormal_span(b);
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  Mat d = qa * qa.transpose() - qb * qb.transpose();
  return Eigen::JacobiSVD<Mat>(d).singularValues()(0);
}

double distance_to_span(const Mat& basis, const Vec& v) {
  if (basis.cols() == 0) return v.norm();
  Mat q = orthonormal_span(basis);
  return (v - q * (q.transpose() * v)).norm();
}

Mat pivot_basis(const Mat& a, std::vector<int>* pivots) {
  Mat q = orthonormal_span(a);
  const Eigen::Index d = q.cols();
  std::vector<int> piv;
  Mat m = q;
  for (Eigen::Index s = 0; s < d; ++s) {
    Vec norms = m.rowwise().norm();
    double best = norms.maxCoeff();
    int p = 0;
    for (Eigen::Index i = 0; i < norms.size(); ++i)
      if (norms(i) >= best * (1.0 - 1e-9)) {
        p = static_cast<int>(i);
        break;
      }
    piv.push_back(p);
    Eigen::RowVectorXd u = m.row(p) / norms(p);
    m -= (m * u.transpose()) * u;
  }
  Mat sub(d, d);
  for (Eigen::Index s = 0; s < d; ++s) sub.row(s) = q.row(piv[s]);
  Mat basis = q * sub.inverse();
  for (Eigen::Index s = 0; s < d; ++s) {
    basis.row(piv[s]).setZero();
    basis(piv[s], s) = 1.0;
  }
  if (pivots) *pivots = piv;
  return basis;
}

Mat kernel_basis(const Mat& G, double tol) {
  const Eigen::Index k = G.rows();
  if (k == 0) return Mat(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  Vec mags = es.eigenvalues().cwiseAbs();
  double thr = threshold(mags, tol);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < k; ++i)
    if (mags(i) <= thr) idx.push_back(i);
  Mat out(k, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(idx[j]);
  return out;
}

Mat orthogonal_space(const SignatureMetric& g, const Mat& basis, const Mat& within) {
  if (within.rows() != g.dim() || (basis.cols() > 0 && basis.rows() != g.dim()))
    throw DimensionMismatch("orthogonal_space: dimensions differ from the metric");
  Mat wn = normalize_columns(within);
  if (basis.cols() == 0) return wn;
  Mat c = null_space(cross_gram(g, normalize_columns(basis), wn));
  return wn * c;
}

Mat orthogonal_space(const SignatureMetric& g, const Mat& basis) {
  return orthogonal_space(g, basis, Mat::Identity(g.dim(), g.dim()));
}

namespace {

double smallest_eig_ratio(const Mat& G) {
  if (G.rows() == 0) return 1.0;
  Vec mags = Eigen::SelfAdjointEigenSolver<Mat>(G, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs();
  return mags.minCoeff() / std::max(1.0, mags.maxCoeff());
}

Mat columns(const Mat& a, const std::vector<int>& idx) {
  Mat out(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(idx[j]);
  return out;
}

}  // namespace

ScreenSelection screen_complement(const SignatureMetric& g, const Mat& tm, const Mat& rad, double tol) {
  const Eigen::Index n = tm.rows();
  Mat tmn = normalize_columns(tm);
  Mat qrad = orthonormal_span(rad, tol);
  for (Eigen::Index i = 0; i < rad.cols(); ++i)
    if (distance_to_span(tm, rad.col(i)) > 1e-8 * std::max(1.0, rad.col(i).norm()))
      throw NoNondegenerateComplement("radical vector outside the tangent space");
  const int target = numeric_rank(tm, tol) - static_cast<int>(qrad.cols());

  auto select = [&](bool gram_check) {
    std::vector<int> chosen;
    for (Eigen::Index j = 0; j < tm.cols() && static_cast<int>(chosen.size()) < target; ++j) {
      std::vector<int> trial = chosen;
      trial.push_back(static_cast<int>(j));
      Mat sel = columns(tmn, trial);
      Mat stack(n, qrad.cols() + sel.cols());
      stack << qrad, sel;
      if (numeric_rank(stack, tol) != stack.cols()) continue;
      if (gram_check && smallest_eig_ratio(gram(g, sel)) <= tol) continue;
      chosen = std::move(trial);
    }
    return chosen;
  };

  std::vector<int> chosen = select(true);
  if (static_cast<int>(chosen.size()) < target) chosen = select(false);
  if (static_cast<int>(chosen.size()) < target)
    throw NoNondegenerateComplement("could not complete a complement of the radical");
  ScreenSelection out{columns(tm, chosen), chosen};
  if (smallest_eig_ratio(gram(g, normalize_columns(out.basis))) <= tol)
    throw NoNondegenerateComplement("screen Gram is degenerate; the radical is not the full Gram kernel");
  return out;
}

Mat lightlike_transversal(const SignatureMetric& g, const Mat& rad, const Mat& stm, const Mat& stmperp,
                          double tol) {
  const Eigen::Index n = g.dim(), r = rad.cols();
  if (r == 0) return Mat(n, 0);
  const Eigen::Index s = stm.cols() + stmperp.cols();
  Mat rows(s + r, n);
  if (stm.cols()) rows.topRows(stm.cols()) = g.lower(normalize_columns(stm)).transpose();
  if (stmperp.cols()) rows.middleRows(stm.cols(), stmperp.cols()) = g.lower(normalize_columns(stmperp)).transpose();
  rows.bottomRows(r) = g.lower(rad).transpose();
  Mat rhs = Mat::Zero(s + r, r);
  rhs.bottomRows(r).setIdentity();

  Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  double thr = threshold(sv, tol);
  Vec inv = Vec::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) inv(i) = 1.0 / sv(i);
  Mat v = svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * rhs);
  if ((rows * v - rhs).cwiseAbs().maxCoeff() > 1e-8)
    throw SingularPairing("no transversal vectors pair with the radical");

  Mat p = cross_gram(g, v, rad);
  if (Eigen::JacobiSVD<Mat>(p).singularValues().minCoeff() <= tol)
    throw SingularPairing("pairing matrix with the radical is singular");
  v = v * p.inverse().transpose();
  return v - 0.5 * rad * gram(g, v);
}

std::vector<SignatureCandidate> infer_signature(const Mat& tm, const std::vector<int>& claimed_rad, int q,
                                                int rad_dim, double tol) {
  const int n = static_cast<int>(tm.rows());
  if (q < 1 || q > n - 1) throw ValidationError("index " + std::to_string(q) + " outside 1.." + std::to_string(n - 1));
  for (int i : claimed_rad)
    if (i < 0 || i >= tm.cols()) throw ValidationError("claimed radical index out of range");
  Mat tmn = normalize_columns(tm);
  std::vector<SignatureCandidate> out;
  std::vector<int> pos(q);
  for (int i = 0; i < q; ++i) pos[i] = i;
  for (;;) {
    SignatureMetric g = SignatureMetric::with_timelike(n, pos);
    Mat G = gram(g, tmn);
    bool ok = true;
    for (int i : claimed_rad)
      if (G.col(i).cwiseAbs().maxCoeff() > tol) ok = false;
    int kdim = static_cast<int>(kernel_basis(G, tol).cols());
    if (claimed_rad.empty() && kdim != rad_dim) ok = false;
    if (!claimed_rad.empty() && rad_dim >= 0 && kdim != rad_dim) ok = false;
    if (ok) out.push_back({pos, kdim});
    int k = q - 1;
    while (k >= 0 && pos[k] == n - q + k) --k;
    if (k < 0) break;
    ++pos[k];
    for (int j = k + 1; j < q; ++j) pos[j] = pos[j - 1] + 1;
  }
  if (out.empty()) throw NoConsistentSignature("no placement of " + std::to_string(q) + " timelike coordinates makes the claimed radical null");
  return out;
}

}  // namespace nullframe
