#pragma once

// Explicit RK4 time stepping with CFL step control.

#include <functional>
#include <optional>

#include "gnvort/models.hpp"

namespace gnvort {

struct StepSettings {
  double cfl_number = 0.4;
  std::optional<double> fixed_dt;
  double t_end = 1.0;
  long max_steps = 1000000;
  /// Strength of the optional fourth-difference filter; 0 disables it.
  double filter_delta = 0.0;

  void validate() const;
};

/// Largest characteristic speed sqrt(h) + eps|V| + eps sqrt(mu) s over the grid.
double max_wave_speed(const ModelState& state, const Bathymetry& bathy, const ScaleParams& scales);

/// CFL step, or fixed_dt if set, shortened so that t never passes t_end.
double stable_dt(const ModelState& state, const Bathymetry& bathy, const ScaleParams& scales,
                 const StepSettings& settings);

/// state + dt * tendency, time unchanged.
ModelState advance(const ModelState& state, const Tendency& tend, double dt);

ModelState rk4_step(const ModelState& state, const Bathymetry& bathy, const ScaleParams& scales,
                    double dt, const RhsFunction& rhs);

/// Adds -delta (u_{i+2} - 4u_{i+1} + 6u_i - 4u_{i-1} + u_{i-2}) along each
/// axis to the zeta and Vbar tendencies.
RhsFunction with_filter(RhsFunction rhs, double delta);

/// Steps from state.t to settings.t_end. `observer` (if set) is called after
/// every step with the new state and the step count.
ModelState integrate(ModelState state, const Bathymetry& bathy, const ScaleParams& scales,
                     const StepSettings& settings, const RhsFunction& rhs,
                     const std::function<void(const ModelState&, long)>& observer = {});

}  // namespace gnvort
