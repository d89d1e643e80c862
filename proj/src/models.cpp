#include "gnvort/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "gnvort/stencil.hpp"

namespace gnvort {

namespace {

void require_tier(const ModelState& s, std::initializer_list<Tier> ok, const char* where) {
  for (Tier t : ok)
    if (s.tier == t) {
      s.check_layout();
      return;
    }
  throw ValidationError("tier", std::string(where) + " cannot evaluate tier " +
                                    std::string(tier_name(s.tier)));
}

Tendency empty_tendency(const ModelState& s) {
  Tendency t;
  t.d_zeta = Field(s.grid);
  t.d_vbar = zero_vector(s.grid);
  for (const Field& f : s.vsharp) t.d_vsharp.push_back(Field(f.grid()));
  for (const Field& f : s.E) t.d_E.push_back(Field(f.grid()));
  for (const Field& f : s.F) t.d_F.push_back(Field(f.grid()));
  return t;
}

Field mass_tendency(const Field& h, const VectorField& v) { return -div(scale(h, v)); }

// Irrotational bracket grad(zeta) + eps mu Q1(V).
VectorField irrotational_bracket(const ModelState& s, const Field& h, const Bathymetry& bathy,
                                 const ScaleParams& sc) {
  VectorField br = grad(s.zeta);
  axpy(br, sc.epsilon * sc.mu, apply_Q1(h, bathy.b, s.vbar, sc));
  return br;
}

// d_V = -eps (V.grad)V - (1 + mu T)^{-1} bracket
VectorField momentum_tendency(const ModelState& s, const Field& h, const Bathymetry& bathy,
                              const ScaleParams& sc, const VectorField& bracket,
                              const DispersiveSolveSettings& solve) {
  VectorField dv = scale(-sc.epsilon, advect(s.vbar, s.vbar));
  axpy(dv, -1.0, invert_dispersive(h, bathy.b, bracket, sc, solve));
  return dv;
}

// (V.grad)W + (W.grad)V
VectorField lie_transport(const VectorField& V, const VectorField& W) {
  return add(advect(V, W), advect(W, V));
}

// Storage index of a symmetric tensor entry = number of y indices.
template <class... I>
std::size_t sym_index(I... idx) {
  return static_cast<std::size_t>((idx + ...));
}

}  // namespace

Tendency rhs_sv(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc) {
  require_tier(s, {Tier::SaintVenant}, "rhs_sv");
  const Field h = derive_depth(s, bathy, sc);
  Tendency t = empty_tendency(s);
  const std::size_t dim = s.vbar.size();
  t.d_zeta = mass_tendency(h, s.vbar);
  const VectorField gz = grad(s.zeta);
  // d(hV) = -h grad zeta - eps div(h V (x) V); d_V = (d(hV) - eps V d_zeta) / h
  for (std::size_t i = 0; i < dim; ++i) {
    Field flux_div = ddx(h * s.vbar[i] * s.vbar[0]);
    if (dim == 2) flux_div += ddy(h * s.vbar[i] * s.vbar[1]);
    Field dhv = -(h * gz[i]);
    dhv.axpy(-sc.epsilon, flux_div);
    dhv.axpy(-sc.epsilon, s.vbar[i] * t.d_zeta);
    t.d_vbar[i] = dhv / h;
  }
  return t;
}

Tendency rhs_gn(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc,
                const DispersiveSolveSettings& solve) {
  require_tier(s, {Tier::GnIrrotational}, "rhs_gn");
  const Field h = derive_depth(s, bathy, sc);
  Tendency t = empty_tendency(s);
  t.d_zeta = mass_tendency(h, s.vbar);
  t.d_vbar = momentum_tendency(s, h, bathy, sc, irrotational_bracket(s, h, bathy, sc), solve);
  return t;
}

Tendency rhs_gn1d_const(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc,
                        const DispersiveSolveSettings& solve) {
  require_tier(s, {Tier::GnConstVort1d}, "rhs_gn1d_const");
  const Field h = derive_depth(s, bathy, sc);
  const double eps = sc.epsilon, mu = sc.mu, w = s.omega;
  const double mu32 = mu * std::sqrt(mu);
  Tendency t = empty_tendency(s);
  t.d_zeta = mass_tendency(h, s.vbar);
  VectorField br = irrotational_bracket(s, h, bathy, sc);
  const VectorField vs{w * h};
  br[0].axpy(eps * mu, ddx((w * w / 12.0) * pow3(h)) / h);
  axpy(br, eps * mu32, apply_C(h, vs, s.vbar, sc));
  axpy(br, eps * sc.beta * mu32, apply_Cb(h, bathy.b, vs, s.vbar, sc));
  t.d_vbar = momentum_tendency(s, h, bathy, sc, br, solve);
  return t;
}

Tendency rhs_gn1d_general(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc,
                          const DispersiveSolveSettings& solve) {
  require_tier(s, {Tier::GnGeneral1d}, "rhs_gn1d_general");
  const Field h = derive_depth(s, bathy, sc);
  const double eps = sc.epsilon, mu = sc.mu, smu = std::sqrt(mu);
  Tendency t = empty_tendency(s);
  t.d_zeta = mass_tendency(h, s.vbar);
  VectorField br = irrotational_bracket(s, h, bathy, sc);
  br[0].axpy(eps * mu, ddx(s.E[0]) / h);
  axpy(br, eps * mu * smu, apply_C(h, s.vsharp, s.vbar, sc));
  t.d_vbar = momentum_tendency(s, h, bathy, sc, br, solve);

  const Field& v = s.vbar[0];
  const Field vx = ddx(v);
  t.d_vsharp = scale(-eps, lie_transport(s.vbar, s.vsharp));
  t.d_E[0] = -eps * (v * ddx(s.E[0]) + 3.0 * (s.E[0] * vx));
  t.d_E[0].axpy(-eps * smu, ddx(s.F[0]));
  t.d_F[0] = -eps * (v * ddx(s.F[0]) + 4.0 * (s.F[0] * vx));
  return t;
}

Tendency rhs_gn1d_medium(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc,
                         const DispersiveSolveSettings& solve) {
  require_tier(s, {Tier::GnMedium1d}, "rhs_gn1d_medium");
  const Field h = derive_depth(s, bathy, sc);
  const double eps = sc.epsilon, mu = sc.mu;
  Tendency t = empty_tendency(s);
  t.d_zeta = mass_tendency(h, s.vbar);
  VectorField br = irrotational_bracket(s, h, bathy, sc);
  br[0].axpy(eps * mu, ddx(s.E[0]));
  t.d_vbar = momentum_tendency(s, h, bathy, sc, br, solve);
  const Field& v = s.vbar[0];
  t.d_E[0] = -eps * (v * ddx(s.E[0]) + 3.0 * (s.E[0] * ddx(v)));
  return t;
}

Tendency rhs_gn2d(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc,
                  const DispersiveSolveSettings& solve) {
  require_tier(s, {Tier::GnGeneral2d}, "rhs_gn2d");
  const Field h = derive_depth(s, bathy, sc);
  const double eps = sc.epsilon, mu = sc.mu, smu = std::sqrt(mu);
  const Grid& g = s.grid;
  Tendency t = empty_tendency(s);
  t.d_zeta = mass_tendency(h, s.vbar);

  const VectorField& E = s.E;
  const VectorField& F = s.F;
  const VectorField divE{ddx(E[kE11]) + ddy(E[kE12]), ddx(E[kE12]) + ddy(E[kE22])};
  VectorField br = irrotational_bracket(s, h, bathy, sc);
  for (int c = 0; c < 2; ++c) br[c].axpy(eps * mu, divE[c] / h);
  axpy(br, eps * mu * smu, apply_C(h, s.vsharp, s.vbar, sc));
  t.d_vbar = momentum_tendency(s, h, bathy, sc, br, solve);

  t.d_vsharp = scale(-eps, lie_transport(s.vbar, s.vsharp));

  // J[i][l] = d_l V_i
  std::array<std::array<Field, 2>, 2> J;
  for (int i = 0; i < 2; ++i)
    for (int l = 0; l < 2; ++l) J[i][l] = ddaxis(s.vbar[i], l);
  const Field d = J[0][0] + J[1][1];

  // E_ij: -eps [V.grad E + d E + J E + E J^T] - eps sqrt(mu) d_l F_lij + eps sqrt(mu) D_ij
  const VectorField D = apply_D(h, s.vsharp, s.vbar, sc);
  const std::array<std::array<int, 2>, 3> epairs{{{0, 0}, {0, 1}, {1, 1}}};
  for (std::size_t c = 0; c < 3; ++c) {
    const int i = epairs[c][0], j = epairs[c][1];
    Field acc = advect(s.vbar, E[c]) + d * E[c];
    for (int l = 0; l < 2; ++l) acc += J[i][l] * E[sym_index(l, j)] + E[sym_index(i, l)] * J[j][l];
    Field divF = ddx(F[sym_index(0, i, j)]) + ddy(F[sym_index(1, i, j)]);
    Field out = -eps * acc;
    out.axpy(-eps * smu, divF);
    out.axpy(eps * smu, D[c]);
    t.d_E[c] = std::move(out);
  }

  // F_ijk: -eps [V.grad F + d F + J_il F_ljk + J_jl F_ilk + J_kl F_ijl],
  // evaluated on all 8 entries and averaged over index permutations.
  std::array<Field, 4> adv;
  for (std::size_t c = 0; c < 4; ++c) adv[c] = advect(s.vbar, F[c]) + d * F[c];
  Field full[2][2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Field acc = adv[sym_index(i, j, k)];
        for (int l = 0; l < 2; ++l) {
          acc += J[i][l] * F[sym_index(l, j, k)];
          acc += J[j][l] * F[sym_index(i, l, k)];
          acc += J[k][l] * F[sym_index(i, j, l)];
        }
        full[i][j][k] = std::move(acc);
      }
  const std::array<std::array<int, 3>, 4> reps{{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}}};
  for (std::size_t c = 0; c < 4; ++c) {
    std::array<int, 3> p = reps[c];
    Field sum(g);
    int count = 0;
    do {
      sum += full[p[0]][p[1]][p[2]];
      ++count;
    } while (std::next_permutation(p.begin(), p.end()));
    t.d_F[c] = (-eps / count) * sum;
  }
  return t;
}

Tendency compute_rhs(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc,
                     const DispersiveSolveSettings& solve) {
  switch (s.tier) {
    case Tier::SaintVenant: return rhs_sv(s, bathy, sc);
    case Tier::GnIrrotational: return rhs_gn(s, bathy, sc, solve);
    case Tier::GnConstVort1d: return rhs_gn1d_const(s, bathy, sc, solve);
    case Tier::GnGeneral1d: return rhs_gn1d_general(s, bathy, sc, solve);
    case Tier::GnMedium1d: return rhs_gn1d_medium(s, bathy, sc, solve);
    case Tier::GnGeneral2d: return rhs_gn2d(s, bathy, sc, solve);
  }
  throw ValidationError("tier", "unknown tier");
}

RhsFunction make_rhs(const Bathymetry& bathy, const ScaleParams& scales,
                     const DispersiveSolveSettings& solve) {
  return [bathy, scales, solve](const ModelState& s) { return compute_rhs(s, bathy, scales, solve); };
}

std::vector<double> theta_levels(int n) {
  if (n < 2) throw ValidationError("n_theta", "needs at least 2 levels");
  std::vector<double> th(n);
  for (int k = 0; k < n; ++k) th[k] = static_cast<double>(k) / (n - 1);
  th[n - 1] = 1.0;
  return th;
}

std::vector<double> trapezoid_weights(int n) {
  if (n < 2) throw ValidationError("n_theta", "needs at least 2 levels");
  const double dth = 1.0 / (n - 1);
  std::vector<double> w(n, dth);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

namespace {

void check_profile(const LevelProfile& p) {
  if (p.size() < 2) throw ValidationError("shear", "profile needs at least 2 theta levels");
  for (const VectorField& lv : p) {
    if (lv.size() != p[0].size()) throw GridMismatch("shear profile: component count differs");
    for (std::size_t c = 0; c < lv.size(); ++c)
      require_same_grid(lv[c], p[0][0], "shear profile");
  }
}

// Running trapezoid integral of per-level values from theta = 0.
std::vector<Field> cumulative(const std::vector<Field>& f, double dth) {
  std::vector<Field> out(f.size(), Field(f[0].grid()));
  for (std::size_t k = 1; k < f.size(); ++k) {
    out[k] = out[k - 1];
    out[k].axpy(0.5 * dth, f[k - 1]);
    out[k].axpy(0.5 * dth, f[k]);
  }
  return out;
}

Field quadrature(const std::vector<Field>& f) {
  const std::vector<double> w = trapezoid_weights(static_cast<int>(f.size()));
  Field out(f[0].grid());
  for (std::size_t k = 0; k < f.size(); ++k) out.axpy(w[k], f[k]);
  return out;
}

}  // namespace

VectorField theta_mean(const LevelProfile& profile) {
  check_profile(profile);
  VectorField out;
  for (std::size_t c = 0; c < profile[0].size(); ++c) {
    std::vector<Field> comp;
    for (const VectorField& lv : profile) comp.push_back(lv[c]);
    out.push_back(quadrature(comp));
  }
  return out;
}

LevelProfile star_profile(LevelProfile profile) {
  const VectorField mean = theta_mean(profile);
  for (VectorField& lv : profile)
    for (std::size_t c = 0; c < lv.size(); ++c) lv[c] -= mean[c];
  return profile;
}

LevelProfile linear_shear_profile(const Field& h, double omega, int n_theta) {
  const std::vector<double> th = theta_levels(n_theta);
  LevelProfile p;
  for (double t : th) {
    VectorField lv = zero_vector(h.grid());
    lv[0] = (omega * (t - 0.5)) * h;
    p.push_back(std::move(lv));
  }
  return p;
}

CascadeData init_cascade_from_shear(const LevelProfile& profile, const Field& h,
                                    const ScaleParams&, double mean_tol) {
  check_profile(profile);
  const std::size_t dim = profile[0].size();
  if (dim != static_cast<std::size_t>(h.grid().dim()))
    throw GridMismatch("init_cascade_from_shear: profile dimension differs from grid");
  require_same_grid(h, profile[0][0], "init_cascade_from_shear");
  const VectorField mean = theta_mean(profile);
  const double m = max_abs(mean);
  if (m > mean_tol) {
    std::ostringstream os;
    os << "shear profile theta-mean reaches " << m << " (tolerance " << mean_tol << ")";
    throw MeanNotZero(os.str());
  }
  const int n = static_cast<int>(profile.size());
  const double dth = 1.0 / (n - 1);
  auto level_component = [&](std::size_t c) {
    std::vector<Field> out;
    for (const VectorField& lv : profile) out.push_back(lv[c]);
    return out;
  };

  CascadeData cd;
  for (std::size_t c = 0; c < dim; ++c) {
    // V# = -24 int_0^1 int_theta^1 I1 dtheta' dtheta with I1 = int_0^theta' V*
    const std::vector<Field> I1 = cumulative(level_component(c), dth);
    const std::vector<Field> C1 = cumulative(I1, dth);
    const Field total = C1.back();
    std::vector<Field> tail;
    for (const Field& f : C1) tail.push_back(total - f);
    cd.vsharp.push_back(-24.0 * quadrature(tail));
  }

  // E_ij = h int V*_i V*_j, F_ijk = h int V*_i V*_j V*_k on stored entries.
  const std::vector<std::vector<int>> epat =
      dim == 1 ? std::vector<std::vector<int>>{{0, 0}}
               : std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 1}};
  const std::vector<std::vector<int>> fpat =
      dim == 1 ? std::vector<std::vector<int>>{{0, 0, 0}}
               : std::vector<std::vector<int>>{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  auto moment = [&](const std::vector<int>& idx) {
    std::vector<Field> prod;
    for (const VectorField& lv : profile) {
      Field p = lv[idx[0]];
      for (std::size_t q = 1; q < idx.size(); ++q) p *= lv[idx[q]];
      prod.push_back(std::move(p));
    }
    return h * quadrature(prod);
  };
  for (const auto& idx : epat) cd.E.push_back(moment(idx));
  for (const auto& idx : fpat) cd.F.push_back(moment(idx));
  return cd;
}

}  // namespace gnvort
