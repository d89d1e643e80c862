#include "gnvort/timestep.hpp"

#include <cmath>
#include <sstream>

#include "gnvort/stencil.hpp"

namespace gnvort {

void StepSettings::validate() const {
  if (!(cfl_number > 0.0 && cfl_number <= 1.0))
    throw ValidationError("time.cfl", "must lie in (0, 1]");
  if (fixed_dt && !(*fixed_dt > 0.0)) throw ValidationError("time.fixed_dt", "must be > 0");
  if (!(t_end >= 0.0)) throw ValidationError("time.t_end", "must be >= 0");
  if (max_steps < 1) throw ValidationError("max_steps", "must be >= 1");
  if (!(filter_delta >= 0.0)) throw ValidationError("time.filter_delta", "must be >= 0");
}

double max_wave_speed(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc) {
  const Field h = derive_depth(s, bathy, sc);
  const std::size_t n = s.grid.size();
  const int dim = s.grid.dim();
  const double smu = std::sqrt(sc.mu);
  double cmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double v2 = 0.0;
    for (const Field& f : s.vbar) v2 += f[k] * f[k];
    double shear = 0.0;
    if (!s.E.empty()) {
      const double trE = dim == 1 ? s.E[0][k] : s.E[kE11][k] + s.E[kE22][k];
      shear = std::sqrt(std::max(trE, 0.0)) / h[k];
    }
    if (!s.vsharp.empty()) {
      double w2 = 0.0;
      for (const Field& f : s.vsharp) w2 += f[k] * f[k];
      shear = std::max(shear, std::sqrt(w2));
    }
    if (s.tier == Tier::GnConstVort1d) shear = std::max(shear, std::abs(s.omega) * h[k]);
    const double c = std::sqrt(h[k]) + sc.epsilon * std::sqrt(v2) + sc.epsilon * smu * shear;
    cmax = std::max(cmax, c);
  }
  return cmax;
}

double stable_dt(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc,
                 const StepSettings& st) {
  double dt;
  if (st.fixed_dt) {
    derive_depth(s, bathy, sc);
    dt = *st.fixed_dt;
  } else {
    dt = st.cfl_number * s.grid.min_spacing() / max_wave_speed(s, bathy, sc);
  }
  const double remaining = st.t_end - s.t;
  if (remaining > 0.0 && dt >= remaining) dt = remaining;
  return dt;
}

ModelState advance(const ModelState& s, const Tendency& t, double dt) {
  ModelState out = s;
  out.zeta.axpy(dt, t.d_zeta);
  axpy(out.vbar, dt, t.d_vbar);
  if (!out.vsharp.empty()) axpy(out.vsharp, dt, t.d_vsharp);
  if (!out.E.empty()) axpy(out.E, dt, t.d_E);
  if (!out.F.empty()) axpy(out.F, dt, t.d_F);
  return out;
}

namespace {

void accumulate(Tendency& acc, const Tendency& t, double w) {
  acc.d_zeta.axpy(w, t.d_zeta);
  axpy(acc.d_vbar, w, t.d_vbar);
  if (!acc.d_vsharp.empty()) axpy(acc.d_vsharp, w, t.d_vsharp);
  if (!acc.d_E.empty()) axpy(acc.d_E, w, t.d_E);
  if (!acc.d_F.empty()) axpy(acc.d_F, w, t.d_F);
}

Field fourth_difference(const Field& f) {
  const Grid& g = f.grid();
  const int nx = g.nx(), ny = g.ny();
  Field out(g);
  auto wx = [nx](int i) { return ((i % nx) + nx) % nx; };
  auto wy = [ny](int j) { return ((j % ny) + ny) % ny; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double v = f(wx(i + 2), j) - 4.0 * f(wx(i + 1), j) + 6.0 * f(i, j) -
                 4.0 * f(wx(i - 1), j) + f(wx(i - 2), j);
      if (g.dim() == 2)
        v += f(i, wy(j + 2)) - 4.0 * f(i, wy(j + 1)) + 6.0 * f(i, j) - 4.0 * f(i, wy(j - 1)) +
             f(i, wy(j - 2));
      out(i, j) = v;
    }
  return out;
}

}  // namespace

ModelState rk4_step(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc, double dt,
                    const RhsFunction& rhs) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
  (void)bathy;
  (void)sc;
  const Tendency k1 = rhs(s);
  ModelState s2 = advance(s, k1, 0.5 * dt);
  s2.t = s.t + 0.5 * dt;
  const Tendency k2 = rhs(s2);
  ModelState s3 = advance(s, k2, 0.5 * dt);
  s3.t = s.t + 0.5 * dt;
  const Tendency k3 = rhs(s3);
  ModelState s4 = advance(s, k3, dt);
  s4.t = s.t + dt;
  const Tendency k4 = rhs(s4);

  Tendency sum = k1;
  accumulate(sum, k2, 2.0);
  accumulate(sum, k3, 2.0);
  accumulate(sum, k4, 1.0);
  ModelState out = advance(s, sum, dt / 6.0);
  out.t = s.t + dt;
  return out;
}

RhsFunction with_filter(RhsFunction rhs, double delta) {
  if (delta == 0.0) return rhs;
  return [rhs = std::move(rhs), delta](const ModelState& s) {
    Tendency t = rhs(s);
    t.d_zeta.axpy(-delta, fourth_difference(s.zeta));
    for (std::size_t c = 0; c < s.vbar.size(); ++c)
      t.d_vbar[c].axpy(-delta, fourth_difference(s.vbar[c]));
    return t;
  };
}

ModelState integrate(ModelState state, const Bathymetry& bathy, const ScaleParams& scales,
                     const StepSettings& settings, const RhsFunction& rhs,
                     const std::function<void(const ModelState&, long)>& observer) {
  settings.validate();
  long step = 0;
  // Stop within a relative round-off window of t_end.
  const double t_tol = 1e-12 * std::max(1.0, std::abs(settings.t_end));
  while (state.t < settings.t_end - t_tol) {
    if (step >= settings.max_steps) {
      std::ostringstream os;
      os << "step budget of " << settings.max_steps << " exhausted at t = " << state.t;
      throw Error(os.str());
    }
    const double dt = stable_dt(state, bathy, scales, settings);
    const double t_next = state.t + dt;
    state = rk4_step(state, bathy, scales, dt, rhs);
    // land exactly on t_end when the step was capped
    state.t = std::abs(settings.t_end - t_next) <= t_tol ? settings.t_end : t_next;
    ++step;
    if (observer) observer(state, step);
  }
  return state;
}

}  // namespace gnvort
