#pragma once

// Tendency assembly for every tier and cascade initial data from a shear
// profile.

#include <functional>
#include <vector>

#include "gnvort/core.hpp"
#include "gnvort/operators.hpp"

namespace gnvort {

/// Time derivatives with the same component layout as the ModelState.
struct Tendency {
  Field d_zeta;
  VectorField d_vbar;
  VectorField d_vsharp;
  VectorField d_E;
  VectorField d_F;
};

Tendency rhs_sv(const ModelState& state, const Bathymetry& bathy, const ScaleParams& scales);

/// Irrotational Green-Naghdi, 1D or 2D.
Tendency rhs_gn(const ModelState& state, const Bathymetry& bathy, const ScaleParams& scales,
                const DispersiveSolveSettings& solve = {});

Tendency rhs_gn1d_const(const ModelState& state, const Bathymetry& bathy,
                        const ScaleParams& scales, const DispersiveSolveSettings& solve = {});
Tendency rhs_gn1d_general(const ModelState& state, const Bathymetry& bathy,
                          const ScaleParams& scales, const DispersiveSolveSettings& solve = {});
Tendency rhs_gn1d_medium(const ModelState& state, const Bathymetry& bathy,
                         const ScaleParams& scales, const DispersiveSolveSettings& solve = {});
Tendency rhs_gn2d(const ModelState& state, const Bathymetry& bathy, const ScaleParams& scales,
                  const DispersiveSolveSettings& solve = {});

/// Dispatches on state.tier.
Tendency compute_rhs(const ModelState& state, const Bathymetry& bathy, const ScaleParams& scales,
                     const DispersiveSolveSettings& solve = {});

using RhsFunction = std::function<Tendency(const ModelState&)>;

/// Tier-dispatching tendency bound to fixed bathymetry, scales and solver.
RhsFunction make_rhs(const Bathymetry& bathy, const ScaleParams& scales,
                     const DispersiveSolveSettings& solve = {});

// ---------------------------------------------------------------------------
// Shear profiles on uniform theta levels
// ---------------------------------------------------------------------------

/// Uniform levels 0 = theta_0 < ... < theta_{n-1} = 1.
std::vector<double> theta_levels(int n);

/// Composite trapezoid weights for the uniform levels.
std::vector<double> trapezoid_weights(int n);

/// One vector field per theta level.
using LevelProfile = std::vector<VectorField>;

/// Trapezoid theta-mean of the profile at every grid point.
VectorField theta_mean(const LevelProfile& profile);

/// Subtracts the discrete theta-mean so the result is starred exactly.
LevelProfile star_profile(LevelProfile profile);

/// Linear shear omega * h * (theta - 1/2), first component only.
LevelProfile linear_shear_profile(const Field& h, double omega, int n_theta);

struct CascadeData {
  VectorField vsharp;
  VectorField E;
  VectorField F;
};

/// V#, E and F by trapezoid quadrature on the levels of `profile`. Throws
/// MeanNotZero if some grid point has a theta-mean above `mean_tol`.
CascadeData init_cascade_from_shear(const LevelProfile& profile, const Field& h,
                                    const ScaleParams& scales, double mean_tol = 1e-10);

}  // namespace gnvort
