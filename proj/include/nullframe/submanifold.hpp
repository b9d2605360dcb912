#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nullframe/expr.hpp"
#include "nullframe/semilinalg.hpp"
#include "nullframe/structure.hpp"

namespace nullframe {

// Expectations stated by the manifest author; compared, never trusted.
struct Claims {
  std::optional<int> rad_dim;
  std::optional<std::string> classification;
  std::optional<bool> screen_generic;
  std::optional<bool> proper;
  std::optional<bool> minimal;
  std::vector<int> radical_frame_indices;  // 0-based frame vector indices
};

struct ManifoldSpec {
  std::string name;
  int param_dim = 0;
  int ambient_dim = 0;
  SignatureMetric metric;
  std::vector<expr::Expr> embedding;
  BronzeStructure bronze;
  LMParams lm;
  Mat frame_matrix;  // k x m, rows combine coordinate tangents; empty means identity
  std::vector<std::pair<double, double>> domain;
  Claims claimed;
  std::vector<std::string> notes;

  int frame_dim() const { return frame_matrix.size() ? static_cast<int>(frame_matrix.rows()) : param_dim; }
  Mat frame_rows() const { return frame_matrix.size() ? frame_matrix : Mat::Identity(param_dim, param_dim); }
  Vec domain_center() const;
};

// Checks cross-dimensions, frame rank and expression arity; throws ValidationError.
void validate(const ManifoldSpec& spec);

enum class ClassKind { NonDegenerate, RLightlike, Coisotropic, Isotropic, TotallyLightlike };

struct Classification {
  ClassKind kind = ClassKind::NonDegenerate;
  int r = 0;
  std::string to_string() const;
};

// r = dim Rad, m = dim M, n = codimension.
Classification classify(int r, int m, int n);

struct ScreenGenericReport {
  double rad_invariant = 0.0;
  Mat b0;             // ambient vectors
  Mat b0_coef;        // coefficients over the screen vectors
  bool b0_nondegenerate = true;
  Mat bprime;
  Mat bprime_coef;
  bool g3_not_in_stm = false;
  bool g3_not_in_stmperp = false;
  double f_bprime_residual = 0.0;  // how far f(B') leaves B'
  Mat w_bprime;                    // S(TM-perp) parts of J applied to B'
  Mat mu;
  Mat mu_coef;  // coefficients over the S(TM-perp) vectors
  double mu_invariant = 0.0;
  double ltr_invariant = 0.0;
  bool proper = false;
  bool screen_generic = false;
};

struct Decomposition {
  Vec t;
  Vec point;
  SignatureMetric metric;
  Mat jacobian;               // n x m
  std::vector<Mat> hessians;  // one m x m block per ambient coordinate
  Mat frame;                  // n x k tangent frame
  Mat rad_coef;               // k x r, radical vectors over the frame
  Mat rad;                    // n x r
  std::vector<int> screen_indices;
  Mat stm;                    // n x s
  Mat tmperp;                 // n x (n - k + r)
  Mat stmperp;                // n x w
  Mat ltr;                    // n x r
  Mat stm_gram_inv;
  Mat stmperp_gram_inv;
  Classification classification;
  ScreenGenericReport generic;

  int k() const { return static_cast<int>(frame.cols()); }
  int r() const { return static_cast<int>(rad.cols()); }
  int s() const { return static_cast<int>(stm.cols()); }
  int w() const { return static_cast<int>(stmperp.cols()); }
  int n() const { return static_cast<int>(frame.rows()); }
};

// Components of an ambient vector along S(TM), Rad, ltr and S(TM-perp).
struct FrameComponents {
  Vec screen, rad, ltr, stmperp;
  Vec screen_coef, rad_coef, ltr_coef, stmperp_coef;
  double residual = 0.0;

  Vec tangent() const { return screen + rad; }
  Vec transversal() const { return ltr + stmperp; }
};

// Throws FrameIncomplete when the parts do not reconstruct v within tol (relative to max(1,|v|)).
FrameComponents expand(const Decomposition& d, const Vec& v, double tol = 1e-8);

struct TangentFrame {
  Vec point;
  Mat jacobian;
  std::vector<Mat> hessians;
  Mat frame;
};

TangentFrame tangent_frame(const ManifoldSpec& spec, const Vec& t);

// With a reference decomposition at a nearby point, every basis is carried over by projection so
// that the constructed frames vary smoothly; used for finite differences.
Decomposition decompose(const ManifoldSpec& spec, const Vec& t, const Decomposition* reference = nullptr);

ScreenGenericReport screen_generic_report(const ManifoldSpec& spec, const Decomposition& d,
                                          const ScreenGenericReport* reference = nullptr);

struct Projections {
  Vec J0X;  // along B0
  Vec J1X;  // along Rad
  Vec QX;   // along B'
};

Projections projections(const Vec& X, const Decomposition& d);

// Frame coefficients of a tangent vector; throws NotTangent.
Vec frame_coefficients(const Decomposition& d, const Vec& X, double tol = 1e-8);

}  // namespace nullframe
