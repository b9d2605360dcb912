#include "nullframe/connection.hpp"

#include <algorithm>
#include <cmath>

#include "nullframe/error.hpp"

namespace nullframe {

namespace {

Vec unit(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Table make_table(int rows, int cols) { return Table(rows, std::vector<Vec>(cols)); }

}  // namespace

LocalGeometry::LocalGeometry(const ManifoldSpec& spec, const Vec& t, FdOptions fd)
    : spec_(&spec), base_(decompose(spec, t)) {
  const Mat R = spec.frame_rows();
  const int k = static_cast<int>(R.rows());
  shifted_.reserve(k);
  steps_.resize(k);
  for (int a = 0; a < k; ++a) {
    Vec p = R.row(a).transpose();
    double s = fd.step / std::max(1.0, p.norm());
    steps_[a] = s;
    shifted_.push_back({decompose(spec, t - s * p, &base_), decompose(spec, t + s * p, &base_),
                        decompose(spec, t - 0.5 * s * p, &base_), decompose(spec, t + 0.5 * s * p, &base_)});
  }
  db_.assign(k, std::vector<Vec>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) db_[a][b] = ambient_param_derivative(R.row(a).transpose(), R.row(b).transpose());
}

Vec LocalGeometry::ambient_param_derivative(const Vec& p, const Vec& q) const {
  const int n = base_.n();
  if (p.size() != spec_->param_dim || q.size() != spec_->param_dim)
    throw DimensionMismatch("parameter direction has wrong length");
  Vec out(n);
  for (int i = 0; i < n; ++i) out(i) = p.dot(base_.hessians[i] * q);
  return out;
}

Vec LocalGeometry::ambient_derivative(const Vec& x, const Vec& y) const {
  if (x.size() != k() || y.size() != k()) throw DimensionMismatch("frame coefficients have wrong length");
  Vec out = Vec::Zero(base_.n());
  for (int a = 0; a < k(); ++a) {
    if (x(a) == 0.0) continue;
    for (int b = 0; b < k(); ++b)
      if (y(b) != 0.0) out += x(a) * y(b) * db_[a][b];
  }
  return out;
}

Vec LocalGeometry::derivative(const Vec& x, const FieldRule& field) const {
  if (x.size() != k()) throw DimensionMismatch("frame coefficients have wrong length");
  Vec out = Vec::Zero(base_.n());
  for (int a = 0; a < k(); ++a) {
    if (x(a) == 0.0) continue;
    const auto& sh = shifted_[a];
    const double s = steps_[a];
    Vec d1 = (field(sh[1]) - field(sh[0])) / (2.0 * s);
    Vec d2 = (field(sh[3]) - field(sh[2])) / s;
    Vec rich = (4.0 * d2 - d1) / 3.0;
    fd_correction_ = std::max(fd_correction_, max_abs(rich - d2));
    out += x(a) * rich;
  }
  return out;
}

double LocalGeometry::derivative(const Vec& x, const ScalarRule& field) const {
  if (x.size() != k()) throw DimensionMismatch("frame coefficients have wrong length");
  double out = 0.0;
  for (int a = 0; a < k(); ++a) {
    if (x(a) == 0.0) continue;
    const auto& sh = shifted_[a];
    const double s = steps_[a];
    double d1 = (field(sh[1]) - field(sh[0])) / (2.0 * s);
    double d2 = (field(sh[3]) - field(sh[2])) / s;
    double rich = (4.0 * d2 - d1) / 3.0;
    fd_correction_ = std::max(fd_correction_, std::abs(rich - d2));
    out += x(a) * rich;
  }
  return out;
}

Vec lm_apply(const Vec& X, const Vec& V, const Vec& DV, const LMParams& lm, const BronzeStructure& J,
             const SignatureMetric& g) {
  return DV + theta(V, lm, g) * (lm.l * X + lm.m * J.apply(X));
}

Vec torsion_lm(const LocalGeometry& geo, const Vec& x, const Vec& y, const LMParams& lm) {
  const auto& g = geo.metric();
  const auto& J = geo.spec().bronze;
  Vec X = geo.tangent(x), Y = geo.tangent(y);
  return lm_apply(X, Y, geo.ambient_derivative(x, y), lm, J, g) - lm_apply(Y, X, geo.ambient_derivative(y, x), lm, J, g);
}

double nonmetricity(const LocalGeometry& geo, const Vec& x, const Vec& y, const Vec& z, const LMParams& lm) {
  const auto& g = geo.metric();
  const auto& J = geo.spec().bronze;
  Vec X = geo.tangent(x), Y = geo.tangent(y), Z = geo.tangent(z);
  ScalarRule gyz = [&](const Decomposition& d) { return inner(g, d.frame * y, d.frame * z); };
  double lhs = geo.derivative(x, gyz) - inner(g, lm_apply(X, Y, geo.ambient_derivative(x, y), lm, J, g), Z) -
               inner(g, Y, lm_apply(X, Z, geo.ambient_derivative(x, z), lm, J, g));
  Vec JX = J.apply(X);
  double rhs = -lm.l * (theta(Y, lm, g) * inner(g, X, Z) + theta(Z, lm, g) * inner(g, Y, X)) -
               lm.m * (theta(Y, lm, g) * inner(g, JX, Z) + theta(Z, lm, g) * inner(g, Y, JX));
  return lhs - rhs;
}

FieldRule frame_field(const Vec& y) {
  return [y](const Decomposition& d) -> Vec { return d.frame * y; };
}
FieldRule rad_field(const Vec& c) {
  return [c](const Decomposition& d) -> Vec { return d.rad * c; };
}
FieldRule ltr_field(const Vec& nu) {
  return [nu](const Decomposition& d) -> Vec { return d.ltr * nu; };
}
FieldRule stmperp_field(const Vec& omega) {
  return [omega](const Decomposition& d) -> Vec { return d.stmperp * omega; };
}
FieldRule screen_field(const Vec& ys) {
  return [ys](const Decomposition& d) -> Vec { return d.stm * ys; };
}

SffBundle levi_civita_bundle(const LocalGeometry& geo) {
  const Decomposition& d = geo.base();
  const int k = d.k(), r = d.r(), s = d.s(), w = d.w();
  SffBundle b;
  b.ambient = make_table(k, k);
  b.nabla = b.hl = b.hs = make_table(k, k);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) {
      b.ambient[a][c] = geo.frame_derivative(a, c);
      FrameComponents fc = expand(d, b.ambient[a][c]);
      b.nabla[a][c] = fc.tangent();
      b.hl[a][c] = fc.ltr;
      b.hs[a][c] = fc.stmperp;
    }
  b.dN = b.AN = b.nabla_l = b.Ds = make_table(r, k);
  b.dxi = b.Astar = b.nabla_star_t = make_table(r, k);
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < k; ++a) {
      Vec x = unit(k, a);
      b.dN[i][a] = geo.derivative(x, ltr_field(unit(r, i)));
      FrameComponents fc = expand(d, b.dN[i][a]);
      b.AN[i][a] = -fc.tangent();
      b.nabla_l[i][a] = fc.ltr;
      b.Ds[i][a] = fc.stmperp;
      b.dxi[i][a] = geo.derivative(x, rad_field(unit(r, i)));
      FrameComponents fx = expand(d, b.dxi[i][a]);
      b.Astar[i][a] = -fx.screen;
      b.nabla_star_t[i][a] = fx.rad;
    }
  b.dW = b.AW = b.nabla_s = b.Dl = make_table(w, k);
  for (int j = 0; j < w; ++j)
    for (int a = 0; a < k; ++a) {
      b.dW[j][a] = geo.derivative(unit(k, a), stmperp_field(unit(w, j)));
      FrameComponents fc = expand(d, b.dW[j][a]);
      b.AW[j][a] = -fc.tangent();
      b.Dl[j][a] = fc.ltr;
      b.nabla_s[j][a] = fc.stmperp;
    }
  b.nabla_star = b.hstar = make_table(k, s);
  for (int a = 0; a < k; ++a)
    for (int al = 0; al < s; ++al) {
      Vec dv = geo.derivative(unit(k, a), screen_field(unit(s, al)));
      FrameComponents fc = expand(d, dv);
      b.nabla_star[a][al] = fc.screen;
      b.hstar[a][al] = fc.rad;
    }
  return b;
}

void lm_bundle(SffBundle& b, const LocalGeometry& geo, const LMParams& lm) {
  const Decomposition& d = geo.base();
  const auto& g = geo.metric();
  const auto& J = geo.spec().bronze;
  const int k = d.k(), r = d.r(), s = d.s(), w = d.w();
  b.has_lm = true;
  b.lm = lm;
  b.route_discrepancy.clear();
  auto note = [&](const std::string& key, const Vec& v) {
    double& slot = b.route_discrepancy[key];
    slot = std::max(slot, max_abs(v));
  };
  for (const char* key : {"nabla", "hl", "hs", "AN", "nabla_l", "Ds", "AW", "nabla_s", "Dl", "nabla_star", "hstar",
                          "Astar", "nabla_star_t"})
    b.route_discrepancy[key] = 0.0;

  std::vector<Vec> X(k);
  std::vector<JSplit> JX(k);
  for (int a = 0; a < k; ++a) {
    X[a] = d.frame.col(a);
    JX[a] = split_J_tangent(J.apply(X[a]), d);
  }
  auto omega = [&](int a, const Vec& V, const Vec& DV) { return lm_apply(X[a], V, DV, lm, J, g); };

  b.bar_nabla = b.bar_hl = b.bar_hs = make_table(k, k);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) {
      Vec Y = d.frame.col(c);
      FrameComponents fc = expand(d, omega(a, Y, b.ambient[a][c]));
      b.bar_nabla[a][c] = fc.tangent();
      b.bar_hl[a][c] = fc.ltr;
      b.bar_hs[a][c] = fc.stmperp;
      double th = theta(Y, lm, g);
      note("nabla", fc.tangent() - (b.nabla[a][c] + lm.l * th * X[a] + lm.m * th * JX[a].fX));
      note("hl", fc.ltr - (b.hl[a][c] + lm.m * th * JX[a].wlX));
      note("hs", fc.stmperp - (b.hs[a][c] + lm.m * th * JX[a].wsX));
    }
  b.bar_AN = b.bar_nabla_l = b.bar_Ds = make_table(r, k);
  b.bar_Astar = b.bar_nabla_star_t = make_table(r, k);
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < k; ++a) {
      Vec N = d.ltr.col(i);
      double th = theta(N, lm, g);
      FrameComponents fc = expand(d, omega(a, N, b.dN[i][a]));
      b.bar_AN[i][a] = -fc.tangent();
      b.bar_nabla_l[i][a] = fc.ltr;
      b.bar_Ds[i][a] = fc.stmperp;
      note("AN", b.bar_AN[i][a] - (b.AN[i][a] - lm.l * th * X[a] - lm.m * th * JX[a].fX));
      note("nabla_l", fc.ltr - (b.nabla_l[i][a] + lm.m * th * JX[a].wlX));
      note("Ds", fc.stmperp - (b.Ds[i][a] + lm.m * th * JX[a].wsX));

      Vec xi = d.rad.col(i);
      double tx = theta(xi, lm, g);
      FrameComponents fx = expand(d, omega(a, xi, b.dxi[i][a]));
      b.bar_Astar[i][a] = -fx.screen;
      b.bar_nabla_star_t[i][a] = fx.rad;
      FrameComponents px = expand(d, X[a]);
      FrameComponents pf = expand(d, JX[a].fX);
      note("Astar", b.bar_Astar[i][a] - (b.Astar[i][a] - lm.l * tx * px.screen - lm.m * tx * pf.screen));
      note("nabla_star_t", fx.rad - (b.nabla_star_t[i][a] + lm.l * tx * px.rad + lm.m * tx * pf.rad));
    }
  b.bar_AW = b.bar_nabla_s = b.bar_Dl = make_table(w, k);
  for (int j = 0; j < w; ++j)
    for (int a = 0; a < k; ++a) {
      Vec W = d.stmperp.col(j);
      double th = theta(W, lm, g);
      FrameComponents fc = expand(d, omega(a, W, b.dW[j][a]));
      b.bar_AW[j][a] = -fc.tangent();
      b.bar_Dl[j][a] = fc.ltr;
      b.bar_nabla_s[j][a] = fc.stmperp;
      note("AW", b.bar_AW[j][a] - (b.AW[j][a] - lm.l * th * X[a] - lm.m * th * JX[a].fX));
      note("nabla_s", fc.stmperp - (b.nabla_s[j][a] + lm.m * th * JX[a].wsX));
      note("Dl", fc.ltr - (b.Dl[j][a] + lm.m * th * JX[a].wlX));
    }
  b.bar_nabla_star = b.bar_hstar = make_table(k, s);
  for (int a = 0; a < k; ++a)
    for (int al = 0; al < s; ++al) {
      Vec PY = d.stm.col(al);
      Vec dv = geo.derivative(unit(k, a), screen_field(unit(s, al)));
      FrameComponents fc = expand(d, omega(a, PY, dv));
      b.bar_nabla_star[a][al] = fc.screen;
      b.bar_hstar[a][al] = fc.rad;
      double th = theta(PY, lm, g);
      FrameComponents px = expand(d, X[a]);
      FrameComponents pf = expand(d, JX[a].fX);
      note("nabla_star", fc.screen - (b.nabla_star[a][al] + lm.l * th * px.screen + lm.m * th * pf.screen));
      note("hstar", fc.rad - (b.hstar[a][al] + lm.l * th * px.rad + lm.m * th * pf.rad));
    }
}

}  // namespace nullframe
