#include "gnvort/reconstruct.hpp"

#include <algorithm>
#include <cmath>

#include "gnvort/operators.hpp"
#include "gnvort/stencil.hpp"

namespace gnvort {

namespace {

LevelProfile zeros_like(const LevelProfile& p) {
  LevelProfile out;
  for (const VectorField& lv : p) out.push_back(zero_vector(lv[0].grid()));
  return out;
}

void axpy_levels(LevelProfile& a, double s, const LevelProfile& b) {
  for (std::size_t k = 0; k < a.size(); ++k) axpy(a[k], s, b[k]);
}

// -eps [(V.grad)X + (X.grad)V]
VectorField transport(const VectorField& V, const VectorField& X, double eps) {
  return scale(-eps, add(advect(V, X), advect(X, V)));
}

ModelState lerp(const ModelState& a, const ModelState& b, double w) {
  ModelState out = a;
  auto mix = [w](Field& x, const Field& y) {
    x *= (1.0 - w);
    x.axpy(w, y);
  };
  mix(out.zeta, b.zeta);
  for (std::size_t c = 0; c < out.vbar.size(); ++c) mix(out.vbar[c], b.vbar[c]);
  for (std::size_t c = 0; c < out.vsharp.size(); ++c) mix(out.vsharp[c], b.vsharp[c]);
  for (std::size_t c = 0; c < out.E.size(); ++c) mix(out.E[c], b.E[c]);
  for (std::size_t c = 0; c < out.F.size(); ++c) mix(out.F[c], b.F[c]);
  out.t = (1.0 - w) * a.t + w * b.t;
  return out;
}

VectorField divergence_of_E(const ModelState& s) {
  if (s.E.empty()) return zero_vector(s.grid);
  if (s.grid.dim() == 1) return {ddx(s.E[0])};
  return {ddx(s.E[kE11]) + ddy(s.E[kE12]), ddx(s.E[kE12]) + ddy(s.E[kE22])};
}

}  // namespace

ShearLevels make_shear_levels(const LevelProfile& vstar, ReconstructionOrder order,
                              const LevelProfile* q_profile) {
  const int n = static_cast<int>(vstar.size());
  if (n < 3) throw ValidationError("output.n_theta", "needs at least 3 levels");
  ShearLevels lv;
  lv.theta = theta_levels(n);
  lv.vstar = vstar;
  lv.order = order;
  const double dth = 1.0 / (n - 1);
  if (q_profile) {
    if (q_profile->size() != vstar.size()) throw GridMismatch("q profile: level count differs");
    lv.q = *q_profile;
  } else {
    lv.q = zeros_like(vstar);
    const std::size_t dim = vstar[0].size();
    for (std::size_t c = 0; c < dim; ++c) {
      for (int k = 1; k < n - 1; ++k)
        lv.q[k][c] = (0.5 / dth) * (vstar[k + 1][c] - vstar[k - 1][c]);
      lv.q[0][c] = (0.5 / dth) * (-3.0 * vstar[0][c] + 4.0 * vstar[1][c] - vstar[2][c]);
      lv.q[n - 1][c] =
          (0.5 / dth) * (3.0 * vstar[n - 1][c] - 4.0 * vstar[n - 2][c] + vstar[n - 3][c]);
    }
  }
  lv.Q = zeros_like(vstar);
  for (int k = 1; k < n; ++k) {
    lv.Q[k] = lv.Q[k - 1];
    axpy(lv.Q[k], 0.5 * dth, vstar[k - 1]);
    axpy(lv.Q[k], 0.5 * dth, vstar[k]);
  }
  return lv;
}

ShearLevels zero_shear_levels(const Grid& grid, int n_theta, ReconstructionOrder order) {
  return make_shear_levels(LevelProfile(n_theta, zero_vector(grid)), order);
}

ShearTendency rhs_shear_levels(const ShearLevels& lv, const ModelState& s,
                               const Bathymetry& bathy, const ScaleParams& sc,
                               ReconstructionOrder order) {
  const std::size_t n = lv.theta.size();
  if (lv.vstar.size() != n || lv.q.size() != n || lv.Q.size() != n)
    throw GridMismatch("shear levels: inconsistent level counts");
  for (const VectorField& v : lv.vstar) {
    if (v.size() != s.vbar.size()) throw GridMismatch("shear levels: dimension differs");
    require_same_grid(v[0], s.zeta, "rhs_shear_levels");
  }
  const double eps = sc.epsilon;
  ShearTendency t;
  for (std::size_t k = 0; k < n; ++k) {
    t.d_vstar.push_back(transport(s.vbar, lv.vstar[k], eps));
    t.d_q.push_back(transport(s.vbar, lv.q[k], eps));
    t.d_Q.push_back(transport(s.vbar, lv.Q[k], eps));
  }
  if (order == ReconstructionOrder::First) return t;

  const double esm = eps * std::sqrt(sc.mu);
  const Field h = derive_depth(s, bathy, sc);
  const Field ih = map(h, [](double x) { return 1.0 / x; });
  const VectorField divE_h = scale(ih, divergence_of_E(s));
  const int dim = s.grid.dim();
  // omega grad^perp(div V), 2D only
  VectorField swirl;
  if (dim == 2) swirl = scale(curl(s.vbar), perp_grad(div(s.vbar)));
  const Field h2 = square(h);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = lv.theta[k];
    VectorField src = divE_h;
    axpy(src, 1.0, scale(ih * div(scale(h, lv.Q[k])), lv.q[k]));
    if (dim == 2) axpy(src, 1.0, scale((-(1.0 - 3.0 * th * th) / 6.0) * h2, swirl));
    axpy(t.d_vstar[k], -esm, advect(lv.vstar[k], lv.vstar[k]));
    axpy(t.d_vstar[k], esm, src);
  }
  return t;
}

ReconstructedVelocity reconstruct_velocity(const ShearLevels& lv, const ModelState& s,
                                           const Bathymetry& bathy, const ScaleParams& sc,
                                           ReconstructionOrder order) {
  const Field h = derive_depth(s, bathy, sc);
  const double mu = sc.mu, smu = std::sqrt(mu);
  const VectorField gb = grad(bathy.b);
  const VectorField gh = grad(h);
  ReconstructedVelocity out;
  out.theta = lv.theta;
  for (std::size_t k = 0; k < lv.theta.size(); ++k) {
    const double th = lv.theta[k];
    require_same_grid(lv.vstar[k][0], h, "reconstruct_velocity");
    // level-line slope grad(-1 + beta b + theta h)
    VectorField slope = scale(sc.beta, gb);
    axpy(slope, th, gh);

    VectorField V = s.vbar;
    axpy(V, smu, lv.vstar[k]);
    VectorField inner = scale(th, s.vbar);
    axpy(inner, smu, lv.Q[k]);
    Field w = -div(scale(h, inner)) + dot(slope, V);
    if (order == ReconstructionOrder::Second) {
      const VectorField Ts = level_dispersive_correction(h, bathy.b, s.vbar, th, sc);
      const VectorField Ti = level_dispersive_correction_integral(h, bathy.b, s.vbar, th, sc);
      w.axpy(-mu, div(scale(h, Ti)));
      w.axpy(mu, dot(slope, Ts));
      axpy(V, mu, Ts);
    }
    out.V.push_back(std::move(V));
    out.w.push_back(mu * w);
  }
  return out;
}

VorticitySplit vertical_vorticity_split(const ModelState& s, const ShearLevels& lv,
                                        const Bathymetry& bathy, const ScaleParams& sc) {
  if (s.grid.dim() != 2) throw GridMismatch("vertical vorticity split needs a 2D grid");
  if (lv.theta.size() < 2 || lv.theta.front() != 0.0 || lv.theta.back() != 1.0)
    throw ValidationError("levels", "theta = 0 and theta = 1 must be present");
  const Field h = derive_depth(s, bathy, sc);
  VorticitySplit out;
  out.omega0 = curl(s.vbar) + (sc.mu / 3.0) * (h * dot(perp_grad(h), grad(div(s.vbar))));
  const Field top = dot(perp_grad(s.zeta), lv.vstar.back());
  const Field bottom = dot(perp_grad(bathy.b), lv.vstar.front());
  out.omega1 = -((sc.epsilon * top - sc.beta * bottom) / h);
  out.omega = out.omega0 + std::sqrt(sc.mu) * out.omega1;
  return out;
}

Field rhs_omega_bar0(const Field& omega0, const ModelState& s, const Bathymetry& bathy,
                     const ScaleParams& sc) {
  if (s.tier != Tier::GnGeneral2d) throw ValidationError("tier", "rhs_omega_bar0 needs gn_general_2d");
  s.check_layout();
  require_same_grid(omega0, s.zeta, "rhs_omega_bar0");
  const Field h = derive_depth(s, bathy, sc);
  const double eps = sc.epsilon, mu = sc.mu;
  const Field ih = map(h, [](double x) { return 1.0 / x; });
  Field out = -eps * div(scale(omega0, s.vbar));
  out.axpy(-eps * mu, curl(scale(ih, divergence_of_E(s))));
  out.axpy(-eps * mu * std::sqrt(mu), curl(apply_C(h, s.vsharp, s.vbar, sc)));
  return out;
}

void SnapshotSeries::push(const ModelState& state) {
  if (!states_.empty() && !(state.t > states_.back().t))
    throw NonMonotoneTime("snapshot times must increase");
  states_.push_back(state);
}

double SnapshotSeries::t_begin() const {
  if (states_.empty()) throw Error("empty snapshot series");
  return states_.front().t;
}

double SnapshotSeries::t_end() const {
  if (states_.empty()) throw Error("empty snapshot series");
  return states_.back().t;
}

ModelState SnapshotSeries::at(double t) const {
  if (states_.empty()) throw Error("empty snapshot series");
  if (t <= states_.front().t) return states_.front();
  if (t >= states_.back().t) return states_.back();
  auto it = std::upper_bound(states_.begin(), states_.end(), t,
                             [](double v, const ModelState& s) { return v < s.t; });
  const ModelState& b = *it;
  const ModelState& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  ModelState out = lerp(a, b, w);
  out.t = t;
  return out;
}

ShearLevels evolve_shear_levels(ShearLevels lv, const SnapshotSeries& flow,
                                const Bathymetry& bathy, const ScaleParams& sc, double t_end,
                                double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
  const ReconstructionOrder order = lv.order;
  auto stage = [&](const ShearLevels& base, const ShearTendency& k, double a, double t) {
    ShearLevels out = base;
    axpy_levels(out.vstar, a, k.d_vstar);
    axpy_levels(out.q, a, k.d_q);
    axpy_levels(out.Q, a, k.d_Q);
    out.t = t;
    return out;
  };
  const double t_tol = 1e-12 * std::max(1.0, std::abs(t_end));
  while (lv.t < t_end - t_tol) {
    const double h = std::min(dt, t_end - lv.t);
    const double t0 = lv.t;
    const ShearTendency k1 = rhs_shear_levels(lv, flow.at(t0), bathy, sc, order);
    const ShearLevels s2 = stage(lv, k1, 0.5 * h, t0 + 0.5 * h);
    const ShearTendency k2 = rhs_shear_levels(s2, flow.at(s2.t), bathy, sc, order);
    const ShearLevels s3 = stage(lv, k2, 0.5 * h, t0 + 0.5 * h);
    const ShearTendency k3 = rhs_shear_levels(s3, flow.at(s3.t), bathy, sc, order);
    const ShearLevels s4 = stage(lv, k3, h, t0 + h);
    const ShearTendency k4 = rhs_shear_levels(s4, flow.at(s4.t), bathy, sc, order);
    for (auto [k, w] : {std::pair{&k1, 1.0}, {&k2, 2.0}, {&k3, 2.0}, {&k4, 1.0}}) {
      axpy_levels(lv.vstar, w * h / 6.0, k->d_vstar);
      axpy_levels(lv.q, w * h / 6.0, k->d_q);
      axpy_levels(lv.Q, w * h / 6.0, k->d_Q);
    }
    lv.t = std::abs(t_end - (t0 + h)) <= t_tol ? t_end : t0 + h;
  }
  return lv;
}

Field evolve_omega_bar0(Field omega0, const SnapshotSeries& flow, const Bathymetry& bathy,
                        const ScaleParams& sc, double t0, double t_end, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
  double t = t0;
  const double t_tol = 1e-12 * std::max(1.0, std::abs(t_end));
  while (t < t_end - t_tol) {
    const double h = std::min(dt, t_end - t);
    const Field k1 = rhs_omega_bar0(omega0, flow.at(t), bathy, sc);
    const Field k2 = rhs_omega_bar0(omega0 + (0.5 * h) * k1, flow.at(t + 0.5 * h), bathy, sc);
    const Field k3 = rhs_omega_bar0(omega0 + (0.5 * h) * k2, flow.at(t + 0.5 * h), bathy, sc);
    const Field k4 = rhs_omega_bar0(omega0 + h * k3, flow.at(t + h), bathy, sc);
    omega0.axpy(h / 6.0, k1);
    omega0.axpy(h / 3.0, k2);
    omega0.axpy(h / 3.0, k3);
    omega0.axpy(h / 6.0, k4);
    t += h;
  }
  return omega0;
}

}  // namespace gnvort
