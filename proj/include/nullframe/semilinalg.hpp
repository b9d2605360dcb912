#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace nullframe {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Relative singular-value threshold for every rank decision.
inline constexpr double kRankTol = 1e-9;

class SignatureMetric {
 public:
  SignatureMetric() = default;
  explicit SignatureMetric(std::vector<int> eps);
  // positions are 0-based coordinate indices carrying a minus sign.
  static SignatureMetric with_timelike(int dim, const std::vector<int>& positions);

  int dim() const { return static_cast<int>(eps_.size()); }
  int index() const;
  const std::vector<int>& eps() const { return eps_; }
  std::vector<int> timelike_positions() const;

  // E v, with E = diag(eps).
  Vec lower(const Vec& v) const;
  Mat lower(const Mat& a) const;

 private:
  std::vector<int> eps_;
};

enum class BundleLabel { TM, RadTM, STM, TMperp, STMperp, ltrTM, B0, Bprime, mu };
const char* to_string(BundleLabel label);

struct SubspaceBasis {
  Mat vectors;  // one column per basis vector
  BundleLabel label = BundleLabel::TM;

  int dim() const { return static_cast<int>(vectors.cols()); }
};

double inner(const SignatureMetric& g, const Vec& u, const Vec& v);
Mat gram(const SignatureMetric& g, const Mat& basis);
// Matrix of inner(a_i, b_j).
Mat cross_gram(const SignatureMetric& g, const Mat& a, const Mat& b);

Mat normalize_columns(const Mat& a);
int numeric_rank(const Mat& a, double tol = kRankTol);
// Euclidean orthonormal basis of the right null space of a (rows are constraints).
Mat null_space(const Mat& a, double tol = kRankTol);
// Euclidean orthonormal basis of the column span.
Mat orthonormal_span(const Mat& a, double tol = kRankTol);
// Spectral-norm distance between the orthogonal projectors onto span(a) and span(b).
double subspace_distance(const Mat& a, const Mat& b);
// Euclidean distance of v from span(basis), basis need not be orthonormal.
double distance_to_span(const Mat& basis, const Vec& v);

// Basis of span(a) that equals the identity on a greedily chosen set of pivot rows.
// Pivot choice: largest remaining row norm, earliest row on ties.
Mat pivot_basis(const Mat& a, std::vector<int>* pivots = nullptr);

Mat kernel_basis(const Mat& G, double tol = kRankTol);

Mat orthogonal_space(const SignatureMetric& g, const Mat& basis, const Mat& within);
Mat orthogonal_space(const SignatureMetric& g, const Mat& basis);

struct ScreenSelection {
  Mat basis;
  std::vector<int> indices;  // columns of tm that were selected
};

ScreenSelection screen_complement(const SignatureMetric& g, const Mat& tm, const Mat& rad,
                                  double tol = kRankTol);

Mat lightlike_transversal(const SignatureMetric& g, const Mat& rad, const Mat& stm, const Mat& stmperp,
                          double tol = kRankTol);

struct SignatureCandidate {
  std::vector<int> timelike;  // 0-based coordinate positions
  int kernel_dim = 0;         // dimension of the tangent Gram kernel under it
};

// All placements of q minus signs under which the claimed radical columns of tm lie in the
// kernel of the tangent Gram. When claimed_rad is empty, rad_dim selects candidates whose
// kernel has exactly that dimension instead.
std::vector<SignatureCandidate> infer_signature(const Mat& tm, const std::vector<int>& claimed_rad, int q,
                                                int rad_dim = -1, double tol = kRankTol);

}  // namespace nullframe
