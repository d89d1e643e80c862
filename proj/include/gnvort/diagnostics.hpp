#pragma once

// Energy densities, energy fluxes and conservation traces.

#include <vector>

#include "gnvort/models.hpp"

namespace gnvort {

struct EnergyReport {
  double mass = 0.0;
  double energy_total = 0.0;
  double e_p = 0.0;
  double e_k = 0.0;
  double e_rot = 0.0;
  /// True when physical scales were supplied and the numbers above are in
  /// SI units (J per unit width in 1D, J in 2D; mass in m^2 or m^3).
  bool dimensional = false;

  // Pointwise densities in the same units as the totals.
  Field e_p_density;
  Field e_k_density;
  Field e_rot_density;
};

/// Densities and grid quadratures. For the dimensionless convention
/// e_p = zeta^2/2, e_k = h|V|^2/2 + mu-order dispersive part, e_rot =
/// mu * (E/2 or Tr E/2 or omega^2 h^3/24); with physical scales the energy
/// is multiplied by g eps^2 H0^2 per unit area and the mass by eps H0.
EnergyReport energy_report(const ModelState& state, const Bathymetry& bathy,
                           const ScaleParams& scales);

/// Dimensionless total energy flux (base plus rotational part). Time
/// derivatives inside the flux are taken from `tend`.
VectorField energy_flux(const ModelState& state, const Bathymetry& bathy,
                        const ScaleParams& scales, const Tendency& tend);

/// Time derivative of the dimensionless total energy along `tend`, by a
/// centered difference of size `delta` in state space.
double energy_rate(const ModelState& state, const Bathymetry& bathy, const ScaleParams& scales,
                   const Tendency& tend, double delta = 1e-6);

struct ConservationSample {
  double t = 0.0;
  double mass = 0.0;
  double energy_total = 0.0;
  double e_p = 0.0;
  double e_k = 0.0;
  double e_rot = 0.0;
  double max_surface = 0.0;  // max |zeta|
};

struct ConservationTrace {
  std::vector<ConservationSample> samples;
  std::vector<double> mass_drift;
  std::vector<double> energy_drift;
  static constexpr double kFloor = 1e-14;

  double max_mass_drift() const;
  double max_energy_drift() const;
};

ConservationSample make_sample(const ModelState& state, const Bathymetry& bathy,
                               const ScaleParams& scales);

/// Appends `sample`. Drifts are |Q(t) - Q(0)| / max(|Q(0)|, 1e-14). Throws
/// NonMonotoneTime unless sample.t exceeds the last time.
ConservationTrace conservation_monitor(ConservationTrace trace, const ConservationSample& sample);

}  // namespace gnvort
