#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nullframe/submanifold.hpp"

namespace nullframe {

// A vector field along M, given by its value at each (aligned) decomposition.
using FieldRule = std::function<Vec(const Decomposition&)>;
using ScalarRule = std::function<double(const Decomposition&)>;

struct FdOptions {
  double step = 1e-5;
};

// Geometry at one parameter point plus the neighbouring decompositions needed to
// differentiate constructed fields. Tangent directions are given as frame coefficients x,
// i.e. X = sum_a x_a B_a.
class LocalGeometry {
 public:
  LocalGeometry(const ManifoldSpec& spec, const Vec& t, FdOptions fd = {});

  const ManifoldSpec& spec() const { return *spec_; }
  const Decomposition& base() const { return base_; }
  const SignatureMetric& metric() const { return spec_->metric; }
  int k() const { return base_.k(); }

  Vec tangent(const Vec& x) const { return base_.frame * x; }
  Vec J(const Vec& v) const { return spec_->bronze.matrix * v; }

  // Exact from jets: derivative of the coordinate-combination field sum_d q_d dF/dt_d along sum_c p_c d/dt_c.
  Vec ambient_param_derivative(const Vec& p, const Vec& q) const;
  // Exact: derivative of the constant-coefficient field B y along B x.
  Vec ambient_derivative(const Vec& x, const Vec& y) const;
  const Vec& frame_derivative(int a, int b) const { return db_[a][b]; }

  // Central differences with one Richardson halving along B x.
  Vec derivative(const Vec& x, const FieldRule& field) const;
  double derivative(const Vec& x, const ScalarRule& field) const;

  // Largest Richardson correction seen so far (diagnostic for the FD error).
  double fd_correction() const { return fd_correction_; }

 private:
  const ManifoldSpec* spec_;
  Decomposition base_;
  std::vector<std::array<Decomposition, 4>> shifted_;  // t - s p, t + s p, t - s p / 2, t + s p / 2
  std::vector<double> steps_;
  std::vector<std::vector<Vec>> db_;
  mutable double fd_correction_ = 0.0;
};

// Omega-bar_X V = nabla-bar_X V + theta(V)(l X + m J X), given V, X and nabla-bar_X V.
Vec lm_apply(const Vec& X, const Vec& V, const Vec& DV, const LMParams& lm, const BronzeStructure& J,
             const SignatureMetric& g);

// Omega-bar_X Y - Omega-bar_Y X for constant-coefficient frame fields (their bracket vanishes).
Vec torsion_lm(const LocalGeometry& geo, const Vec& x, const Vec& y, const LMParams& lm);

// X g(Y,Z) - g(Omega-bar_X Y, Z) - g(Y, Omega-bar_X Z) minus the closed-form non-metricity,
// for constant-coefficient frame fields; X g(Y,Z) is differentiated numerically.
double nonmetricity(const LocalGeometry& geo, const Vec& x, const Vec& y, const Vec& z, const LMParams& lm);

using Table = std::vector<std::vector<Vec>>;

// Second fundamental forms and shape operators over the frame basis.
// [a][b] tables: a, b tangent frame indices. [i][a]: i indexes ltr (N_i), S(TM-perp) (W_j) or
// radical (xi_i) basis vectors. Screen tables [a][alpha]: alpha indexes screen vectors.
struct SffBundle {
  Table ambient, nabla, hl, hs;
  Table AN, nabla_l, Ds;
  Table AW, nabla_s, Dl;
  Table nabla_star, hstar;
  Table Astar, nabla_star_t;
  Table dN, dW, dxi;

  bool has_lm = false;
  LMParams lm;
  Table bar_nabla, bar_hl, bar_hs;
  Table bar_AN, bar_nabla_l, bar_Ds;
  Table bar_AW, bar_nabla_s, bar_Dl;
  Table bar_nabla_star, bar_hstar;
  Table bar_Astar, bar_nabla_star_t;
  // Largest |direct split - correction formula| over the frame basis, keyed by object.
  std::map<std::string, double> route_discrepancy;
};

SffBundle levi_civita_bundle(const LocalGeometry& geo);
void lm_bundle(SffBundle& bundle, const LocalGeometry& geo, const LMParams& lm);

// Field rules for the aligned frames.
FieldRule frame_field(const Vec& y);
FieldRule rad_field(const Vec& c);
FieldRule ltr_field(const Vec& nu);
FieldRule stmperp_field(const Vec& omega);
FieldRule screen_field(const Vec& ys);

}  // namespace nullframe
