#pragma once

// Level-line shear evolution, velocity reconstruction on level lines and the
// vertical vorticity split. Everything here runs after the main solve and
// reads (zeta, Vbar, E, V#) from stored snapshots.

#include <vector>

#include "gnvort/models.hpp"

namespace gnvort {

enum class ReconstructionOrder { First, Second };

struct ShearLevels {
  std::vector<double> theta;  // uniform, theta.front() == 0, theta.back() == 1
  LevelProfile vstar;         // V*_theta
  LevelProfile q;             // d_theta V*_theta
  LevelProfile Q;             // int_0^theta V*
  ReconstructionOrder order = ReconstructionOrder::First;
  double t = 0.0;
};

/// Builds levels from a starred profile on uniform theta levels. q is taken
/// from `q_profile` if given, else from second-order differences in theta;
/// Q is the running trapezoid integral.
ShearLevels make_shear_levels(const LevelProfile& vstar, ReconstructionOrder order,
                              const LevelProfile* q_profile = nullptr);

/// Zero shear on `n_theta` levels.
ShearLevels zero_shear_levels(const Grid& grid, int n_theta, ReconstructionOrder order);

struct ShearTendency {
  LevelProfile d_vstar;
  LevelProfile d_q;
  LevelProfile d_Q;
};

ShearTendency rhs_shear_levels(const ShearLevels& levels, const ModelState& state,
                               const Bathymetry& bathy, const ScaleParams& scales,
                               ReconstructionOrder order);

struct ReconstructedVelocity {
  std::vector<double> theta;
  LevelProfile V;          // horizontal velocity on each level
  std::vector<Field> w;    // vertical velocity on each level
};

ReconstructedVelocity reconstruct_velocity(const ShearLevels& levels, const ModelState& state,
                                           const Bathymetry& bathy, const ScaleParams& scales,
                                           ReconstructionOrder order);

struct VorticitySplit {
  Field omega0;
  Field omega1;
  Field omega;  // omega0 + sqrt(mu) omega1
};

/// 2D only; uses the bottom (theta = 0) and surface (theta = 1) levels.
VorticitySplit vertical_vorticity_split(const ModelState& state, const ShearLevels& levels,
                                        const Bathymetry& bathy, const ScaleParams& scales);

/// Time derivative of the averaged vertical vorticity omega0.
Field rhs_omega_bar0(const Field& omega0, const ModelState& state, const Bathymetry& bathy,
                     const ScaleParams& scales);

/// Stored main-solve states with linear interpolation in time.
class SnapshotSeries {
 public:
  void push(const ModelState& state);
  bool empty() const { return states_.empty(); }
  std::size_t size() const { return states_.size(); }
  const ModelState& operator[](std::size_t k) const { return states_[k]; }
  double t_begin() const;
  double t_end() const;
  /// Linear interpolation; outside the stored range the nearest state is
  /// returned (a single stored state is therefore a frozen flow).
  ModelState at(double t) const;

 private:
  std::vector<ModelState> states_;
};

/// RK4 evolution of the levels from levels.t to t_end with fixed step dt,
/// reading the flow from `flow`.
ShearLevels evolve_shear_levels(ShearLevels levels, const SnapshotSeries& flow,
                                const Bathymetry& bathy, const ScaleParams& scales, double t_end,
                                double dt);

/// RK4 evolution of omega0 from t0 to t_end with fixed step dt.
Field evolve_omega_bar0(Field omega0, const SnapshotSeries& flow, const Bathymetry& bathy,
                        const ScaleParams& scales, double t0, double t_end, double dt);

}  // namespace gnvort
