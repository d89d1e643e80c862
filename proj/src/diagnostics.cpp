#include "gnvort/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gnvort/stencil.hpp"
#include "gnvort/timestep.hpp"

namespace gnvort {

namespace {

struct Densities {
  Field e_p, e_k, e_rot;
};

Densities dimensionless_densities(const ModelState& s, const Bathymetry& bathy,
                                  const ScaleParams& sc) {
  s.check_layout();
  const Field h = derive_depth(s, bathy, sc);
  const double mu = sc.mu, beta = sc.beta;
  Densities d;
  d.e_p = 0.5 * square(s.zeta);
  Field v2 = square(s.vbar[0]);
  for (std::size_t c = 1; c < s.vbar.size(); ++c) v2 += square(s.vbar[c]);
  d.e_k = 0.5 * (h * v2);
  if (s.tier != Tier::SaintVenant) {
    const Field bv = dot(grad(bathy.b), s.vbar);
    const Field a = h * div(s.vbar) - (1.5 * beta) * bv;
    const Field disp = (1.0 / 3.0) * square(a) + (0.25 * beta * beta) * square(bv);
    d.e_k.axpy(0.5 * mu, h * disp);
  }
  d.e_rot = Field(s.grid);
  switch (s.tier) {
    case Tier::GnConstVort1d:
      d.e_rot = (mu * s.omega * s.omega / 24.0) * pow3(h);
      break;
    case Tier::GnGeneral1d:
    case Tier::GnMedium1d:
      d.e_rot = (0.5 * mu) * s.E[0];
      break;
    case Tier::GnGeneral2d:
      d.e_rot = (0.5 * mu) * (s.E[kE11] + s.E[kE22]);
      break;
    default:
      break;
  }
  return d;
}

double total_energy(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc) {
  const Densities d = dimensionless_densities(s, bathy, sc);
  return integrate(d.e_p) + integrate(d.e_k) + integrate(d.e_rot);
}

}  // namespace

EnergyReport energy_report(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc) {
  Densities d = dimensionless_densities(s, bathy, sc);
  double density_scale = 1.0, measure_scale = 1.0, mass_scale = 1.0;
  EnergyReport r;
  if (sc.physical) {
    const PhysicalScales& p = *sc.physical;
    density_scale = p.g * sc.epsilon * sc.epsilon * p.h0 * p.h0;
    measure_scale = std::pow(p.length, s.grid.dim());
    mass_scale = sc.epsilon * p.h0 * measure_scale;
    r.dimensional = true;
    d.e_p *= density_scale;
    d.e_k *= density_scale;
    d.e_rot *= density_scale;
  }
  r.mass = integrate(s.zeta) * mass_scale;
  r.e_p = integrate(d.e_p) * measure_scale;
  r.e_k = integrate(d.e_k) * measure_scale;
  r.e_rot = integrate(d.e_rot) * measure_scale;
  r.energy_total = r.e_p + r.e_k + r.e_rot;
  r.e_p_density = std::move(d.e_p);
  r.e_k_density = std::move(d.e_k);
  r.e_rot_density = std::move(d.e_rot);
  return r;
}

VectorField energy_flux(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc,
                        const Tendency& tend) {
  const Field h = derive_depth(s, bathy, sc);
  const Densities dens = dimensionless_densities(s, bathy, sc);
  const double eps = sc.epsilon, mu = sc.mu, beta = sc.beta, smu = std::sqrt(mu);
  const int dim = s.grid.dim();
  const VectorField& V = s.vbar;

  // q = mu h^2 [-(1/3) D_t(h div V) + (1/2) D_t(beta grad b . V)], D_t = d_t + eps V.grad
  Field scalar = h * s.zeta + eps * dens.e_k;
  if (s.tier != Tier::SaintVenant) {
    const VectorField gb = grad(bathy.b);
    const Field d = div(V);
    const Field hd = h * d;
    const Field bv = beta * dot(gb, V);
    const Field dt_hd = (eps * tend.d_zeta) * d + h * div(tend.d_vbar);
    const Field dt_bv = beta * dot(gb, tend.d_vbar);
    const Field Dhd = dt_hd + eps * advect(V, hd);
    const Field Dbv = dt_bv + eps * advect(V, bv);
    scalar.axpy(mu, square(h) * ((-1.0 / 3.0) * Dhd + 0.5 * Dbv));
  }
  VectorField flux = scale(scalar, V);

  switch (s.tier) {
    case Tier::GnConstVort1d: {
      const double w = s.omega;
      flux[0].axpy(eps * mu * w * w / 8.0, pow3(h) * V[0]);
      const VectorField vs{w * h};
      flux[0].axpy(eps * mu * smu, flux_C(h, vs, V)[0]);
      flux[0].axpy(eps * beta * mu * smu, flux_Cb(h, bathy.b, vs[0], V[0]));
      break;
    }
    case Tier::GnGeneral1d:
      flux[0].axpy(1.5 * eps * mu, s.E[0] * V[0]);
      flux[0].axpy(0.5 * eps * mu * smu, s.F[0]);
      flux[0].axpy(eps * mu * smu, flux_C(h, s.vsharp, V)[0]);
      break;
    case Tier::GnMedium1d:
      flux[0].axpy(1.5 * eps * mu, s.E[0] * V[0]);
      break;
    case Tier::GnGeneral2d: {
      const Field trE = s.E[kE11] + s.E[kE22];
      const VectorField EV{s.E[kE11] * V[0] + s.E[kE12] * V[1],
                           s.E[kE12] * V[0] + s.E[kE22] * V[1]};
      const VectorField Fc{s.F[kF111] + s.F[kF122], s.F[kF112] + s.F[kF222]};
      const VectorField FC = flux_C(h, s.vsharp, V);
      for (int c = 0; c < dim; ++c) {
        flux[c].axpy(eps * mu, 0.5 * (trE * V[c]) + EV[c]);
        flux[c].axpy(0.5 * eps * mu * smu, Fc[c]);
        flux[c].axpy(eps * mu * smu, FC[c]);
      }
      break;
    }
    default:
      break;
  }
  return flux;
}

double energy_rate(const ModelState& s, const Bathymetry& bathy, const ScaleParams& sc,
                   const Tendency& tend, double delta) {
  const ModelState plus = advance(s, tend, delta);
  const ModelState minus = advance(s, tend, -delta);
  return (total_energy(plus, bathy, sc) - total_energy(minus, bathy, sc)) / (2.0 * delta);
}

ConservationSample make_sample(const ModelState& s, const Bathymetry& bathy,
                               const ScaleParams& sc) {
  const EnergyReport r = energy_report(s, bathy, sc);
  ConservationSample out;
  out.t = s.t;
  out.mass = r.mass;
  out.energy_total = r.energy_total;
  out.e_p = r.e_p;
  out.e_k = r.e_k;
  out.e_rot = r.e_rot;
  out.max_surface = s.zeta.max_abs();
  return out;
}

double ConservationTrace::max_mass_drift() const {
  double m = 0.0;
  for (double d : mass_drift) m = std::max(m, d);
  return m;
}

double ConservationTrace::max_energy_drift() const {
  double m = 0.0;
  for (double d : energy_drift) m = std::max(m, d);
  return m;
}

ConservationTrace conservation_monitor(ConservationTrace trace, const ConservationSample& sample) {
  if (!trace.samples.empty() && !(sample.t > trace.samples.back().t)) {
    std::ostringstream os;
    os << "sample time " << sample.t << " does not exceed last time " << trace.samples.back().t;
    throw NonMonotoneTime(os.str());
  }
  trace.samples.push_back(sample);
  const ConservationSample& first = trace.samples.front();
  auto drift = [](double q, double q0) {
    return std::abs(q - q0) / std::max(std::abs(q0), ConservationTrace::kFloor);
  };
  trace.mass_drift.push_back(drift(sample.mass, first.mass));
  trace.energy_drift.push_back(drift(sample.energy_total, first.energy_total));
  return trace;
}

}  // namespace gnvort
