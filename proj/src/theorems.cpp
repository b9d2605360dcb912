#include <algorithm>
#include <cmath>
#include <random>

#include "nullframe/error.hpp"
#include "nullframe/verify.hpp"

namespace nullframe {

const char* to_string(Distribution d) {
  switch (d) {
    case Distribution::B0: return "B0";
    case Distribution::Bprime: return "Bprime";
    case Distribution::B: return "B";
  }
  return "?";
}

const char* to_string(GeodesicMode m) {
  return m == GeodesicMode::B_geodesic ? "B_geodesic" : "mixed_geodesic";
}

namespace {

Vec random_vec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// Objects of the (l,m)-type connection on arbitrary fields at the base point.
struct Ctx {
  const LocalGeometry& geo;
  const Decomposition& d;
  const SignatureMetric& g;
  const Mat& J;
  LMParams lm;

  Ctx(const LocalGeometry& geo_, const LMParams& lm_)
      : geo(geo_), d(geo_.base()), g(geo_.metric()), J(geo_.spec().bronze.matrix), lm(lm_) {}

  double ip(const Vec& a, const Vec& b) const { return inner(g, a, b); }
  double th(const Vec& v) const { return theta(v, lm, g); }
  FrameComponents split(const Vec& v) const { return expand(d, v); }
  Vec tangent(const Vec& v) const { return split(v).tangent(); }
  Vec transversal(const Vec& v) const { return split(v).transversal(); }

  // Omega-bar_X V, X tangent at the base point.
  Vec omega(const Vec& X, const FieldRule& V) const {
    Vec x = frame_coefficients(d, X, 1e-7);
    return lm_apply(X, V(d), geo.derivative(x, V), lm, geo.spec().bronze, g);
  }
  // Levi-Civita bracket of tangent fields.
  Vec bracket(const FieldRule& X, const FieldRule& Y) const {
    Vec Xv = X(d), Yv = Y(d);
    return geo.derivative(frame_coefficients(d, Xv, 1e-7), Y) - geo.derivative(frame_coefficients(d, Yv, 1e-7), X);
  }

  FieldRule J_of(const FieldRule& V) const {
    const Mat* Jp = &J;
    return [Jp, V](const Decomposition& dd) -> Vec { return *Jp * V(dd); };
  }
  FieldRule f_of(const FieldRule& V) const {
    const Mat* Jp = &J;
    return [Jp, V](const Decomposition& dd) -> Vec { return expand(dd, *Jp * V(dd)).tangent(); };
  }
  FieldRule w_of(const FieldRule& V) const {
    const Mat* Jp = &J;
    return [Jp, V](const Decomposition& dd) -> Vec { return expand(dd, *Jp * V(dd)).transversal(); };
  }
  FieldRule wl_of(const FieldRule& V) const {
    const Mat* Jp = &J;
    return [Jp, V](const Decomposition& dd) -> Vec { return expand(dd, *Jp * V(dd)).ltr; };
  }
  FieldRule ws_of(const FieldRule& V) const {
    const Mat* Jp = &J;
    return [Jp, V](const Decomposition& dd) -> Vec { return expand(dd, *Jp * V(dd)).stmperp; };
  }
  double outside(const Vec& v, bool b0, bool rad, bool bprime) const {
    Projections p = projections(v, d);
    double out = 0.0;
    if (b0) out += p.J0X.norm();
    if (rad) out += p.J1X.norm();
    if (bprime) out += p.QX.norm();
    return out;
  }
};

FieldRule b0_field(const Vec& x) {
  return [x](const Decomposition& dd) -> Vec { return dd.generic.b0 * x; };
}
FieldRule bprime_field(const Vec& z) {
  return [z](const Decomposition& dd) -> Vec { return dd.generic.bprime * z; };
}
FieldRule b_field(const Vec& x, const Vec& c) {
  return [x, c](const Decomposition& dd) -> Vec { return dd.generic.b0 * x + dd.rad * c; };
}

void bump(ConditionResidual& c, double v) { c.residual = std::max(c.residual, std::abs(v)); }

void bump(std::optional<double>& c, double v) { c = std::max(c.value_or(0.0), std::abs(v)); }

bool needs_generic(const LocalGeometry& geo, TheoremCheck& out) {
  if (!geo.base().generic.screen_generic) {
    out.applicable = false;
    out.skip_reason = "decomposition is not screen generic";
    return false;
  }
  return true;
}

bool needs_dims(TheoremCheck& out, long have, long need, const std::string& what) {
  if (have < need) {
    out.applicable = false;
    out.skip_reason = what + " has dimension " + std::to_string(have) + " < " + std::to_string(need);
    return false;
  }
  return true;
}

}  // namespace

TheoremCheck integrability_check(const LocalGeometry& geo, Distribution dist, const LMParams& lm,
                                 const TheoremOptions& opts) {
  TheoremCheck out;
  out.name = std::string(to_string(dist)) + "_integrable";
  out.property = "[X,Y] stays in the distribution";
  if (!needs_generic(geo, out)) return out;
  Ctx c(geo, lm);
  const Decomposition& d = c.d;
  const int nb0 = static_cast<int>(d.generic.b0.cols()), nbp = static_cast<int>(d.generic.bprime.cols());
  const int r = d.r();
  std::mt19937_64 rng(opts.seed * 0x2545F4914F6CDD1DULL + 17);

  if (dist == Distribution::B0) {
    if (!needs_dims(out, nb0, 2, "B0")) return out;
    ConditionResidual ci{"i", "g(h*(X,JY),JN) + 3g(h*(Y,JX),N) = g(h*(Y,JX),JN) + 3g(h*(X,JY),N)", 0.0};
    ConditionResidual cii{"ii",
                          "g(Omega*_X JY,fZ) + g(h^s(X,JY),JZ) + 3g(Omega*_Y JX,Z) = g(Omega*_Y JX,fZ) + "
                          "g(h^s(Y,JX),JZ) + 3g(Omega*_X JY,Z)",
                          0.0};
    for (int t = 0; t < opts.random_args; ++t) {
      FieldRule Xf = b0_field(random_vec(rng, nb0)), Yf = b0_field(random_vec(rng, nb0));
      Vec X = Xf(d), Y = Yf(d);
      bump(out.direct, c.outside(c.bracket(Xf, Yf), false, true, true));
      FrameComponents oxjy = c.split(c.omega(X, c.J_of(Yf))), oyjx = c.split(c.omega(Y, c.J_of(Xf)));
      if (r > 0) {
        Vec N = d.ltr * random_vec(rng, r), JN = c.J * N;
        bump(ci, c.ip(oxjy.rad, JN) + 3 * c.ip(oyjx.rad, N) - c.ip(oyjx.rad, JN) - 3 * c.ip(oxjy.rad, N));
      }
      if (nbp > 0) {
        Vec Z = d.generic.bprime * random_vec(rng, nbp), JZ = c.J * Z, fZ = c.tangent(JZ);
        bump(cii, c.ip(oxjy.screen, fZ) + c.ip(oxjy.stmperp, JZ) + 3 * c.ip(oyjx.screen, Z) - c.ip(oyjx.screen, fZ) -
                      c.ip(oyjx.stmperp, JZ) - 3 * c.ip(oxjy.screen, Z));
      }
    }
    if (r > 0) out.conditions.push_back(ci);
    out.conditions.push_back(cii);
  } else if (dist == Distribution::Bprime) {
    if (!needs_dims(out, nbp, 2, "B'")) return out;
    ConditionResidual ci{"i",
                         "Omega*_Y fZ + A_{wY}Z + 3Omega*_Z Y - Omega*_Z fY - A_{wZ}Y - 3Omega*_Y Z has no B0 component",
                         0.0};
    ConditionResidual cii{"ii",
                          "A_{wY}Z + h*(Y,fZ) + 3h*(Z,Y) = A_{wZ}Y + h*(Z,fY) + 3h*(Y,Z), paired with JN",
                          0.0};
    for (int t = 0; t < opts.random_args; ++t) {
      FieldRule Yf = bprime_field(random_vec(rng, nbp)), Zf = bprime_field(random_vec(rng, nbp));
      Vec Y = Yf(d), Z = Zf(d);
      bump(out.direct, c.outside(c.bracket(Yf, Zf), true, true, false));
      FrameComponents oyfz = c.split(c.omega(Y, c.f_of(Zf))), ozfy = c.split(c.omega(Z, c.f_of(Yf)));
      FrameComponents ozy = c.split(c.omega(Z, Yf)), oyz = c.split(c.omega(Y, Zf));
      Vec AwyZ = -c.tangent(c.omega(Z, c.w_of(Yf))), AwzY = -c.tangent(c.omega(Y, c.w_of(Zf)));
      Vec V = oyfz.screen + AwyZ + 3 * ozy.screen - ozfy.screen - AwzY - 3 * oyz.screen;
      bump(ci, c.outside(V, true, false, false));
      if (r > 0) {
        Vec JN = c.J * (d.ltr * random_vec(rng, r));
        Vec U = AwyZ + oyfz.rad + 3 * ozy.rad - AwzY - ozfy.rad - 3 * oyz.rad;
        bump(cii, c.ip(U, JN));
      }
    }
    out.conditions.push_back(ci);
    if (r > 0) out.conditions.push_back(cii);
  } else {
    if (!needs_dims(out, nb0 + r, 2, "B")) return out;
    ConditionResidual ci{"i",
                         "g(Omega_X JY,fZ) + g(h^s(X,JY),JZ) + 3g(Omega_Y JX,Z) = g(Omega_Y JX,fZ) + g(h^s(Y,JX),JZ) + "
                         "3g(Omega_X JY,Z)",
                         0.0};
    for (int t = 0; t < opts.random_args; ++t) {
      FieldRule Xf = b_field(random_vec(rng, nb0), random_vec(rng, r));
      FieldRule Yf = b_field(random_vec(rng, nb0), random_vec(rng, r));
      Vec X = Xf(d), Y = Yf(d);
      bump(out.direct, c.outside(c.bracket(Xf, Yf), false, false, true));
      if (nbp > 0) {
        Vec Z = d.generic.bprime * random_vec(rng, nbp), JZ = c.J * Z, fZ = c.tangent(JZ);
        FrameComponents oxjy = c.split(c.omega(X, c.J_of(Yf))), oyjx = c.split(c.omega(Y, c.J_of(Xf)));
        bump(ci, c.ip(oxjy.tangent(), fZ) + c.ip(oxjy.stmperp, JZ) + 3 * c.ip(oyjx.tangent(), Z) -
                     c.ip(oyjx.tangent(), fZ) - c.ip(oyjx.stmperp, JZ) - 3 * c.ip(oxjy.tangent(), Z));
      }
    }
    out.conditions.push_back(ci);
  }
  return out;
}

TheoremCheck parallel_check(const LocalGeometry& geo, Distribution dist, const LMParams& lm,
                            const TheoremOptions& opts) {
  TheoremCheck out;
  out.name = std::string(to_string(dist)) + "_parallel";
  out.property = "Omega_X Y stays in the distribution";
  if (!needs_generic(geo, out)) return out;
  Ctx c(geo, lm);
  const Decomposition& d = c.d;
  const int nb0 = static_cast<int>(d.generic.b0.cols()), nbp = static_cast<int>(d.generic.bprime.cols());
  const int r = d.r();
  std::mt19937_64 rng(opts.seed * 0x2545F4914F6CDD1DULL + 29);
  if (dist == Distribution::B0) {
    if (!needs_dims(out, nb0, 1, "B0")) return out;
    ConditionResidual ci{"i", "g(h*(X,JY),JN) = 3g(h*(X,JY),N)", 0.0};
    ConditionResidual cii{"ii", "g(Omega*_X JY,fZ) + g(h^s(X,JY),JZ) = 3g(Omega*_X JY,Z)", 0.0};
    for (int t = 0; t < opts.random_args; ++t) {
      Vec X = d.generic.b0 * random_vec(rng, nb0);
      FieldRule Yf = b0_field(random_vec(rng, nb0));
      bump(out.direct, c.outside(c.tangent(c.omega(X, Yf)), false, true, true));
      FrameComponents oxjy = c.split(c.omega(X, c.J_of(Yf)));
      if (r > 0) {
        Vec N = d.ltr * random_vec(rng, r);
        bump(ci, c.ip(oxjy.rad, c.J * N) - 3 * c.ip(oxjy.rad, N));
      }
      if (nbp > 0) {
        Vec Z = d.generic.bprime * random_vec(rng, nbp), JZ = c.J * Z, fZ = c.tangent(JZ);
        bump(cii, c.ip(oxjy.screen, fZ) + c.ip(oxjy.stmperp, JZ) - 3 * c.ip(oxjy.screen, Z));
      }
    }
    if (r > 0) out.conditions.push_back(ci);
    out.conditions.push_back(cii);
  } else if (dist == Distribution::Bprime) {
    if (!needs_dims(out, nbp, 1, "B'")) return out;
    ConditionResidual ci{"i", "g(h*(Y,fZ),JN) + 3g(A_{wZ}Y,N) = 3g(h*(Y,fZ),N) + g(A_{wZ}Y,JN)", 0.0};
    ConditionResidual cii{"ii", "g(Omega*_Y fZ,JX) + 3g(A_{wZ}Y,X) = g(A_{wZ}Y,JX) + 3g(Omega*_Y fZ,X)", 0.0};
    for (int t = 0; t < opts.random_args; ++t) {
      Vec Y = d.generic.bprime * random_vec(rng, nbp);
      FieldRule Zf = bprime_field(random_vec(rng, nbp));
      bump(out.direct, c.outside(c.tangent(c.omega(Y, Zf)), true, true, false));
      FrameComponents oyfz = c.split(c.omega(Y, c.f_of(Zf)));
      Vec AwzY = -c.tangent(c.omega(Y, c.w_of(Zf)));
      if (r > 0) {
        Vec N = d.ltr * random_vec(rng, r), JN = c.J * N;
        bump(ci, c.ip(oyfz.rad, JN) + 3 * c.ip(AwzY, N) - 3 * c.ip(oyfz.rad, N) - c.ip(AwzY, JN));
      }
      if (nb0 > 0) {
        Vec X = d.generic.b0 * random_vec(rng, nb0), JX = c.J * X;
        bump(cii, c.ip(oyfz.screen, JX) + 3 * c.ip(AwzY, X) - c.ip(AwzY, JX) - 3 * c.ip(oyfz.screen, X));
      }
    }
    if (r > 0) out.conditions.push_back(ci);
    if (nb0 > 0) out.conditions.push_back(cii);
  } else {
    out.applicable = false;
    out.skip_reason = "parallelism of B is covered by the foliation check";
  }
  return out;
}

TheoremCheck geodesicity_check(const LocalGeometry& geo, GeodesicMode mode, const LMParams& lm,
                               const TheoremOptions& opts) {
  TheoremCheck out;
  out.name = to_string(mode);
  out.property = mode == GeodesicMode::B_geodesic ? "h-bar^l(X,Y) = h-bar^s(X,Y) = 0 for X,Y in B"
                                                  : "h-bar^l(X,Z) = h-bar^s(X,Z) = 0 for X in B, Z in B'";
  if (!needs_generic(geo, out)) return out;
  Ctx c(geo, lm);
  const Decomposition& d = c.d;
  const int nb0 = static_cast<int>(d.generic.b0.cols()), nbp = static_cast<int>(d.generic.bprime.cols());
  const int r = d.r(), w = d.w();
  std::mt19937_64 rng(opts.seed * 0x2545F4914F6CDD1DULL + 41);
  if (mode == GeodesicMode::B_geodesic) {
    if (!needs_dims(out, nb0 + r, 1, "B")) return out;
    for (int t = 0; t < opts.random_args; ++t) {
      Vec X = d.generic.b0 * random_vec(rng, nb0) + d.rad * random_vec(rng, r);
      FrameComponents o = c.split(c.omega(X, b_field(random_vec(rng, nb0), random_vec(rng, r))));
      bump(out.direct, o.ltr.norm() + o.stmperp.norm());
    }
    return out;
  }
  if (!needs_dims(out, nb0 + r, 1, "B") || !needs_dims(out, nbp, 1, "B'")) return out;
  ConditionResidual ai{"A.i",
                       "g(h^l(X,fZ),xi) + l theta(Z)g(JX,xi) + 3m theta(Z)g(JX,xi) + m theta(Z)g(X,xi) = -g(D^l(X,wZ),xi) "
                       "+ l theta(JZ)g(X,xi) + m theta(JZ)g(JX,xi)",
                       0.0};
  ConditionResidual aii{"A.ii",
                        "3g(h^s(X,fZ) + Omega^s_X wZ,W) + g(A_{wZ}X,fW) = g(Omega_X fZ + h^s(X,fZ),JW) + g(Omega^s_X "
                        "wZ,wW)",
                        0.0};
  ConditionResidual bi{"B.i", "C(h^l(X,fZ) + D^l(X,wZ)) = 0", 0.0};
  ConditionResidual bii{"B.ii", "w(Omega_X fZ - A_{wZ}X) = -C(h^s(X,fZ) + Omega^s_X wZ)", 0.0};
  ConditionResidual biii{"B.iii", "h^s(X,fZ) + D^l(X,wZ) = -h^l(X,fZ) - Omega^s_X wZ", 0.0};
  for (int t = 0; t < opts.random_args; ++t) {
    Vec X = d.generic.b0 * random_vec(rng, nb0) + d.rad * random_vec(rng, r);
    FieldRule Zf = bprime_field(random_vec(rng, nbp));
    Vec Z = Zf(d), JZ = c.J * Z, JX = c.J * X;
    FrameComponents o = c.split(c.omega(X, Zf));
    bump(out.direct, o.ltr.norm() + o.stmperp.norm());
    FrameComponents ofz = c.split(c.omega(X, c.f_of(Zf)));
    FrameComponents owz = c.split(c.omega(X, c.w_of(Zf)));
    Vec AwzX = -owz.tangent();
    if (r > 0) {
      Vec xi = d.rad * random_vec(rng, r);
      bump(ai, c.ip(ofz.ltr, xi) + lm.l * c.th(Z) * c.ip(JX, xi) + 3 * lm.m * c.th(Z) * c.ip(JX, xi) +
                   lm.m * c.th(Z) * c.ip(X, xi) + c.ip(owz.ltr, xi) - lm.l * c.th(JZ) * c.ip(X, xi) -
                   lm.m * c.th(JZ) * c.ip(JX, xi));
    }
    if (w > 0) {
      Vec W = d.stmperp * random_vec(rng, w), JW = c.J * W;
      FrameComponents jw = c.split(JW);
      bump(aii, 3 * c.ip(ofz.stmperp + owz.stmperp, W) + c.ip(AwzX, jw.tangent()) -
                    c.ip(ofz.tangent() + ofz.stmperp, JW) - c.ip(owz.stmperp, jw.transversal()));
    }
    bump(bi, c.transversal(c.J * (ofz.ltr + owz.ltr)).norm());
    bump(bii, (c.transversal(c.J * (ofz.tangent() - AwzX)) + c.transversal(c.J * (ofz.stmperp + owz.stmperp))).norm());
    bump(biii, (ofz.stmperp + owz.ltr + ofz.ltr + owz.stmperp).norm());
  }
  if (r > 0) out.conditions.push_back(ai);
  if (w > 0) out.conditions.push_back(aii);
  out.conditions.push_back(bi);
  out.conditions.push_back(bii);
  out.conditions.push_back(biii);
  return out;
}

TheoremCheck foliation_check(const LocalGeometry& geo, const LMParams& lm, const TheoremOptions& opts) {
  TheoremCheck out;
  out.name = "B_totally_geodesic_foliation";
  out.property = "Omega-bar_X Y stays in B for X,Y in B";
  if (!needs_generic(geo, out)) return out;
  Ctx c(geo, lm);
  const Decomposition& d = c.d;
  const int nb0 = static_cast<int>(d.generic.b0.cols()), r = d.r();
  if (!needs_dims(out, nb0 + r, 1, "B")) return out;
  std::mt19937_64 rng(opts.seed * 0x2545F4914F6CDD1DULL + 53);
  ConditionResidual geod{"B_geodesic", "h-bar^l = h-bar^s = 0 on B", 0.0};
  ConditionResidual par{"B_parallel", "Omega_X Y in B for X,Y in B", 0.0};
  for (int t = 0; t < opts.random_args; ++t) {
    Vec X = d.generic.b0 * random_vec(rng, nb0) + d.rad * random_vec(rng, r);
    FrameComponents o = c.split(c.omega(X, b_field(random_vec(rng, nb0), random_vec(rng, r))));
    double q = c.outside(o.tangent(), false, false, true);
    bump(out.direct, q + o.ltr.norm() + o.stmperp.norm());
    bump(geod, o.ltr.norm() + o.stmperp.norm());
    bump(par, q);
  }
  out.conditions = {geod, par};
  return out;
}

TheoremCheck tangential_split_check(const LocalGeometry& geo, const LMParams& lm, const TheoremOptions& opts) {
  TheoremCheck out;
  out.name = "mixed_tangential_identity";
  out.property =
      "f(Omega_X fZ - A_{wZ}X) + B(h^s(X,fZ) + Omega^s_X wZ) + 3A_{wZ}X + 3l theta(JZ)X + l theta(Z)X + m theta(Z)JX = "
      "3Omega_X fZ + l theta(JZ)JX + m theta(JZ)X + Omega_X Z";
  if (!needs_generic(geo, out)) return out;
  Ctx c(geo, lm);
  const Decomposition& d = c.d;
  const int nb0 = static_cast<int>(d.generic.b0.cols()), nbp = static_cast<int>(d.generic.bprime.cols());
  if (!needs_dims(out, nb0, 1, "B0") || !needs_dims(out, nbp, 1, "B'")) return out;
  std::mt19937_64 rng(opts.seed * 0x2545F4914F6CDD1DULL + 67);
  ConditionResidual id{"identity", out.property, 0.0};
  const double l = lm.l, m = lm.m;
  for (int t = 0; t < opts.random_args; ++t) {
    Vec X = d.generic.b0 * random_vec(rng, nb0), JX = c.J * X;
    FieldRule Zf = bprime_field(random_vec(rng, nbp));
    Vec Z = Zf(d), JZ = c.J * Z;
    FrameComponents ofz = c.split(c.omega(X, c.f_of(Zf))), owz = c.split(c.omega(X, c.w_of(Zf)));
    Vec AwzX = -owz.tangent();
    Vec OXZ = c.tangent(c.omega(X, Zf));
    Vec lhs = c.tangent(c.J * (ofz.tangent() - AwzX)) + c.tangent(c.J * (ofz.stmperp + owz.stmperp)) + 3 * AwzX +
              3 * l * c.th(JZ) * X + l * c.th(Z) * X + m * c.th(Z) * JX;
    Vec rhs = 3 * ofz.tangent() + l * c.th(JZ) * JX + m * c.th(JZ) * X + OXZ;
    bump(id, (lhs - rhs).norm());
  }
  out.conditions = {id};
  return out;
}

TheoremCheck b0_minimal_check(const LocalGeometry& geo, const LMParams& lm, const TheoremOptions& opts) {
  TheoremCheck out;
  out.name = "B0_minimal";
  out.property =
      "Omega_X X + Omega_{JX}JX - l{theta(X)X + theta(JX)JX} - m{theta(X)fX + theta(JX)f^2X} stays in B0";
  if (!needs_generic(geo, out)) return out;
  Ctx c(geo, lm);
  const Decomposition& d = c.d;
  const int nb0 = static_cast<int>(d.generic.b0.cols()), w = d.w();
  if (!needs_dims(out, nb0, 1, "B0")) return out;
  std::mt19937_64 rng(opts.seed * 0x2545F4914F6CDD1DULL + 79);
  ConditionResidual cond{"i",
                         "3{g(fX,A_W fX) + l theta(W)g(X,f^2X) + m theta(W)g(fX,f^2X)} = -2{g(A_W fX,X) + l "
                         "theta(W)g(X,fX) + m theta(W)g(X,f^2X)}",
                         0.0};
  const double l = lm.l, m = lm.m;
  for (int t = 0; t < opts.random_args; ++t) {
    FieldRule Xf = b0_field(random_vec(rng, nb0));
    Vec X = Xf(d), JX = c.J * X, fX = c.tangent(JX), f2X = c.tangent(c.J * fX);
    Vec V = c.tangent(c.omega(X, Xf)) + c.tangent(c.omega(JX, c.J_of(Xf))) - l * (c.th(X) * X + c.th(JX) * JX) -
            m * (c.th(X) * fX + c.th(JX) * f2X);
    bump(out.direct, c.outside(V, false, true, true));
    if (w > 0) {
      FieldRule Wf = stmperp_field(random_vec(rng, w));
      Vec W = Wf(d);
      Vec AwfX = -c.tangent(c.omega(fX, Wf));
      bump(cond, 3 * (c.ip(fX, AwfX) + l * c.th(W) * c.ip(X, f2X) + m * c.th(W) * c.ip(fX, f2X)) +
                     2 * (c.ip(AwfX, X) + l * c.th(W) * c.ip(X, fX) + m * c.th(W) * c.ip(X, f2X)));
    }
  }
  if (w > 0) out.conditions = {cond};
  return out;
}

TheoremCheck induced_lm_check(const LocalGeometry& geo, const LMParams& lm) {
  TheoremCheck out;
  out.name = "induced_lm_type";
  out.property = "(Omega_X g)(Y,Z) takes the (l,m)-type form with f in place of J";
  if (!needs_generic(geo, out)) return out;
  const Decomposition& d = geo.base();
  const auto& g = geo.metric();
  const int k = d.k();
  SffBundle b = levi_civita_bundle(geo);
  lm_bundle(b, geo, lm);
  ConditionResidual hl{"hl_vanishes", "h-bar^l = 0", 0.0};
  ConditionResidual zeta{"zeta_in_stmperp", "characteristic field lies in S(TM-perp)", 0.0};
  // By the corrected induced non-metricity formula the defect is g(h^l(X,Y),Z) + g(h^l(X,Z),Y).
  for (int a = 0; a < k; ++a)
    for (int bb = 0; bb < k; ++bb) {
      bump(hl, b.bar_hl[a][bb].norm());
      for (int cc = 0; cc < k; ++cc)
        bump(out.direct, inner(g, b.hl[a][bb], d.frame.col(cc)) + inner(g, b.hl[a][cc], d.frame.col(bb)));
    }
  bump(zeta, d.stmperp.cols() ? distance_to_span(d.stmperp, lm.eta) / lm.eta.norm() : 1.0);
  out.conditions = {hl, zeta};
  return out;
}

TheoremCheck minimal_conditions_check(const LocalGeometry& geo, const LMParams& lm, double tol) {
  TheoremCheck out;
  out.name = "minimal_conditions";
  out.property = "minimal: h^s = 0 on Rad and trace h over S(TM) = 0";
  if (!needs_generic(geo, out)) return out;
  const Decomposition& d = geo.base();
  const auto& g = geo.metric();
  const int k = d.k(), r = d.r(), s = d.s(), w = d.w(), n = d.n();
  if (!needs_dims(out, s, 1, "S(TM)")) return out;
  SffBundle b = levi_civita_bundle(geo);
  MinimalityVerdict v = minimality_check(geo, b, tol);
  out.direct = std::max(v.hs_on_rad_residual, v.trace_residual);
  lm_bundle(b, geo, lm);
  ConditionResidual tr{"1", "trace A-bar*_xi = trace A-bar_W = 0 on S(TM)", 0.0};
  ConditionResidual dl{"2", "g(D-bar^l(X,W),Y) = l theta(W)g(X,Y) + m theta(W)g(fX,Y) for X,Y in Rad", 0.0};
  const Mat& Gi = d.stm_gram_inv;
  auto screen_trace = [&](const std::vector<Vec>& row) {
    double acc = 0.0;
    for (int al = 0; al < s; ++al)
      for (int be = 0; be < s; ++be) acc += Gi(al, be) * inner(g, row[d.screen_indices[al]], d.stm.col(be));
    return acc;
  };
  ConditionResidual tru{"1_unbarred", "trace A*_xi = trace A_W = 0 on S(TM) (Levi-Civita shape operators)", 0.0};
  for (int i = 0; i < r; ++i) {
    bump(tr, screen_trace(b.bar_Astar[i]));
    bump(tru, screen_trace(b.Astar[i]));
  }
  for (int j = 0; j < w; ++j) {
    bump(tr, screen_trace(b.bar_AW[j]));
    bump(tru, screen_trace(b.AW[j]));
  }
  for (int j = 0; j < w; ++j) {
    Vec W = d.stmperp.col(j);
    for (int i = 0; i < r; ++i) {
      Vec Dl = Vec::Zero(n);
      for (int c = 0; c < k; ++c) Dl += d.rad_coef(c, i) * b.bar_Dl[j][c];
      Vec X = d.rad.col(i), fX = split_J_tangent(geo.spec().bronze.matrix * X, d).fX;
      for (int i2 = 0; i2 < r; ++i2) {
        Vec Y = d.rad.col(i2);
        bump(dl, inner(g, Dl, Y) - lm.l * theta(W, lm, g) * inner(g, X, Y) - lm.m * theta(W, lm, g) * inner(g, fX, Y));
      }
    }
  }
  out.conditions = {tr, tru};
  if (r > 0 && w > 0) out.conditions.push_back(dl);
  return out;
}

TheoremCheck umbilical_lemma_check(const LocalGeometry& geo, const LMParams& lm, const TheoremOptions& opts) {
  TheoremCheck out;
  out.name = "umbilical_lemma";
  out.property = "totally umbilical: h(X,Y) = H g(X,Y)";
  Ctx c(geo, lm);
  const Decomposition& d = c.d;
  const int k = d.k(), r = d.r();
  SffBundle b = levi_civita_bundle(geo);
  out.direct = umbilical_fit(geo, b).residual;
  std::mt19937_64 rng(opts.seed * 0x2545F4914F6CDD1DULL + 97);
  const double l = lm.l, m = lm.m;
  ConditionResidual ci{"i",
                       "Omega_X fY - A_{w_l Y}X - A_{w_s Y}X - l theta(JY)X - m theta(JY)fX = f Omega_X Y + B h^s(X,Y) - "
                       "l theta(Y)fX - 3m theta(Y)fX - m theta(Y)X",
                       0.0};
  ConditionResidual cii{"ii",
                        "h^l(X,fY) + Omega^l_X w_l Y - m theta(JY)w_l X = w_l Omega_X Y + C h^l(X,Y) - l theta(Y)w_l X "
                        "- 3m theta(Y)w_l X",
                        0.0};
  ConditionResidual ciii{"iii",
                         "h^s(X,fY) + D^s(X,w_l Y) + Omega^s_X w_s Y - m theta(JY)w_s X = w_s Omega_X Y + C h^s(X,Y) - "
                         "l theta(Y)w_s X - 3m theta(Y)w_s X",
                         0.0};
  for (int t = 0; t < opts.random_args; ++t) {
    Vec x = random_vec(rng, k);
    FieldRule Yf = frame_field(random_vec(rng, k));
    Vec X = d.frame * x, Y = Yf(d), JY = c.J * Y;
    JSplit jx = split_J_tangent(c.J * X, d);
    FrameComponents oxy = c.split(c.omega(X, Yf));
    FrameComponents ofy = c.split(c.omega(X, c.f_of(Yf)));
    FrameComponents owl = c.split(c.omega(X, c.wl_of(Yf)));
    FrameComponents ows = c.split(c.omega(X, c.ws_of(Yf)));
    FrameComponents jO = c.split(c.J * oxy.tangent());
    FrameComponents jhl = c.split(c.J * oxy.ltr);
    FrameComponents jhs = c.split(c.J * oxy.stmperp);
    Vec lhs1 = ofy.tangent() + owl.tangent() + ows.tangent() - l * c.th(JY) * X - m * c.th(JY) * jx.fX;
    Vec rhs1 = jO.tangent() + jhs.tangent() - l * c.th(Y) * jx.fX - 3 * m * c.th(Y) * jx.fX - m * c.th(Y) * X;
    bump(ci, (lhs1 - rhs1).norm());
    if (r > 0) {
      Vec lhs2 = ofy.ltr + owl.ltr - m * c.th(JY) * jx.wlX;
      Vec rhs2 = jO.ltr + jhl.ltr - l * c.th(Y) * jx.wlX - 3 * m * c.th(Y) * jx.wlX;
      bump(cii, (lhs2 - rhs2).norm());
    }
    Vec lhs3 = ofy.stmperp + owl.stmperp + ows.stmperp - m * c.th(JY) * jx.wsX;
    Vec rhs3 = jO.stmperp + jhs.stmperp - l * c.th(Y) * jx.wsX - 3 * m * c.th(Y) * jx.wsX;
    bump(ciii, (lhs3 - rhs3).norm());
  }
  out.conditions.push_back(ci);
  if (r > 0) out.conditions.push_back(cii);
  out.conditions.push_back(ciii);
  return out;
}

TheoremCheck integrability_check(const ManifoldSpec& spec, Distribution dist, const Vec& t) {
  LocalGeometry geo(spec, t);
  TheoremCheck out = integrability_check(geo, dist, spec.lm);
  if (!out.applicable && out.skip_reason.find("dimension") != std::string::npos)
    throw DistributionTooSmall(out.skip_reason);
  return out;
}

TheoremCheck geodesicity_check(const ManifoldSpec& spec, GeodesicMode mode, const Vec& t) {
  LocalGeometry geo(spec, t);
  return geodesicity_check(geo, mode, spec.lm);
}

std::vector<TheoremCheck> theorem_checks(const LocalGeometry& geo, const LMParams& lm, double tol,
                                         const TheoremOptions& opts) {
  std::vector<TheoremCheck> out;
  out.push_back(integrability_check(geo, Distribution::B0, lm, opts));
  out.push_back(integrability_check(geo, Distribution::Bprime, lm, opts));
  out.push_back(integrability_check(geo, Distribution::B, lm, opts));
  out.push_back(parallel_check(geo, Distribution::B0, lm, opts));
  out.push_back(parallel_check(geo, Distribution::Bprime, lm, opts));
  out.push_back(geodesicity_check(geo, GeodesicMode::B_geodesic, lm, opts));
  out.push_back(geodesicity_check(geo, GeodesicMode::mixed_geodesic, lm, opts));
  out.push_back(foliation_check(geo, lm, opts));
  out.push_back(tangential_split_check(geo, lm, opts));
  out.push_back(b0_minimal_check(geo, lm, opts));
  out.push_back(induced_lm_check(geo, lm));
  out.push_back(minimal_conditions_check(geo, lm, tol));
  out.push_back(umbilical_lemma_check(geo, lm, opts));
  return out;
}

std::vector<TheoremSummary> summarize(const std::vector<std::vector<TheoremCheck>>& per_point, double tol) {
  std::vector<TheoremSummary> out;
  for (const auto& checks : per_point) {
    if (checks.empty()) continue;
    if (out.empty()) {
      for (const auto& c : checks) {
        TheoremSummary s;
        s.name = c.name;
        s.property = c.property;
        out.push_back(s);
      }
    }
    for (std::size_t i = 0; i < checks.size() && i < out.size(); ++i) {
      const TheoremCheck& c = checks[i];
      TheoremSummary& s = out[i];
      if (!c.applicable) {
        ++s.skipped;
        if (s.skip_reason.empty()) s.skip_reason = c.skip_reason;
        continue;
      }
      ++s.points;
      if (c.direct) s.max_direct = std::max(s.max_direct.value_or(0.0), *c.direct);
      bool direct_ok = c.direct && *c.direct < tol;
      bool bad = false;
      for (const auto& cond : c.conditions) {
        if (direct_ok && cond.residual >= tol &&
            std::find(s.inconsistent_conditions.begin(), s.inconsistent_conditions.end(), cond.name) ==
                s.inconsistent_conditions.end())
          s.inconsistent_conditions.push_back(cond.name);
        auto it = std::find_if(s.max_conditions.begin(), s.max_conditions.end(),
                               [&](const ConditionResidual& x) { return x.name == cond.name; });
        if (it == s.max_conditions.end()) {
          s.max_conditions.push_back(cond);
        } else {
          it->residual = std::max(it->residual, cond.residual);
        }
        if (cond.residual >= tol) bad = true;
      }
      if (direct_ok && bad) ++s.inconsistent;
    }
  }
  return out;
}

}  // namespace nullframe

namespace nullframe {

UmbilicalFit umbilical_fit(const LocalGeometry& geo, const SffBundle& b, double tol) {
  const Decomposition& d = geo.base();
  const auto& g = geo.metric();
  const int k = d.k(), r = d.r(), s = d.s(), w = d.w(), n = d.n();
  UmbilicalFit fit;
  fit.Hl = Vec::Zero(n);
  fit.Hs = Vec::Zero(n);

  Mat C;
  Vec eps;
  if (s > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(gram(g, d.stm));
    Vec lam = es.eigenvalues();
    C = es.eigenvectors() * lam.cwiseAbs().cwiseSqrt().cwiseInverse().asDiagonal();
    eps = lam.unaryExpr([](double v) { return v < 0 ? -1.0 : 1.0; });
  }
  auto h_on = [&](const Table& t, int a, int c) {
    Vec out = Vec::Zero(n);
    for (int al = 0; al < s; ++al)
      for (int be = 0; be < s; ++be) {
        double wgt = C(al, a) * C(be, c);
        if (wgt != 0.0) out += wgt * t[d.screen_indices[al]][d.screen_indices[be]];
      }
    return out;
  };
  for (int a = 0; a < s; ++a) {
    fit.Hl += eps(a) * h_on(b.hl, a, a);
    fit.Hs += eps(a) * h_on(b.hs, a, a);
  }
  if (s > 0) {
    fit.Hl /= s;
    fit.Hs /= s;
  }
  for (int a = 0; a < s; ++a)
    for (int c = 0; c < s; ++c) {
      double gab = a == c ? eps(a) : 0.0;
      Vec dl = h_on(b.hl, a, c) - gab * fit.Hl;
      Vec ds = h_on(b.hs, a, c) - gab * fit.Hs;
      fit.residual = std::max({fit.residual, dl.cwiseAbs().maxCoeff(), ds.cwiseAbs().maxCoeff()});
    }
  // g(X, xi) = 0, so h must vanish whenever one argument is radical.
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < r; ++i) {
      Vec hx = Vec::Zero(n);
      for (int c = 0; c < k; ++c) hx += d.rad_coef(c, i) * (b.hl[a][c] + b.hs[a][c]);
      fit.residual = std::max(fit.residual, hx.cwiseAbs().maxCoeff());
    }
  for (int j = 0; j < w; ++j)
    for (int a = 0; a < k; ++a)
      if (b.Dl[j][a].size()) fit.Dl_residual = std::max(fit.Dl_residual, b.Dl[j][a].cwiseAbs().maxCoeff());

  const Mat& mu = d.generic.mu;
  if (fit.residual < tol && mu.cols() > 0) {
    Mat G = gram(g, mu);
    Vec coef = G.ldlt().solve(cross_gram(g, mu, fit.Hs));
    fit.Hs_mu_component = (mu * coef).norm();
  }
  return fit;
}

UmbilicalFit umbilical_fit(const ManifoldSpec& spec, const Vec& t, double tol) {
  LocalGeometry geo(spec, t);
  return umbilical_fit(geo, levi_civita_bundle(geo), tol);
}

MinimalityVerdict minimality_check(const LocalGeometry& geo, const SffBundle& b, double tol) {
  const Decomposition& d = geo.base();
  const int k = d.k(), r = d.r(), s = d.s(), n = d.n();
  MinimalityVerdict v;
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < r; ++i) {
      Vec hx = Vec::Zero(n);
      for (int c = 0; c < k; ++c) hx += d.rad_coef(c, i) * b.hs[a][c];
      v.hs_on_rad_residual = std::max(v.hs_on_rad_residual, hx.cwiseAbs().maxCoeff());
    }
  v.trace = Vec::Zero(n);
  for (int al = 0; al < s; ++al)
    for (int be = 0; be < s; ++be) {
      int p = d.screen_indices[al], q = d.screen_indices[be];
      v.trace += d.stm_gram_inv(al, be) * (b.hl[p][q] + b.hs[p][q]);
    }
  v.trace_residual = n ? v.trace.cwiseAbs().maxCoeff() : 0.0;
  v.minimal = v.hs_on_rad_residual < tol && v.trace_residual < tol;
  return v;
}

MinimalityVerdict minimality_check(const ManifoldSpec& spec, const Vec& t, double tol) {
  LocalGeometry geo(spec, t);
  return minimality_check(geo, levi_civita_bundle(geo), tol);
}

}  // namespace nullframe
