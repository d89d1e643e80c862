#pragma once

// Spatial operators of the Green-Naghdi systems with vorticity and the
// inversion of 1 + mu*T. All inputs are dimensionless grid fields; b is the
// unscaled bottom profile (beta is applied inside the formulas).

#include "gnvort/core.hpp"

namespace gnvort {

struct DispersiveSolveSettings {
  enum class Method { Auto, DirectBanded, Iterative };

  double rel_tolerance = 1e-10;
  /// 0 selects 10 * (number of grid points).
  int max_iterations = 0;
  Method method = Method::Auto;
  /// Krylov restart length of the iterative solver.
  int restart = 40;

  void validate() const;
};

VectorField apply_T(const Field& h, const Field& b, const VectorField& V, const ScaleParams& s);
VectorField apply_Q1(const Field& h, const Field& b, const VectorField& V, const ScaleParams& s);

/// Solves (1 + mu T) V = rhs. Auto picks the banded direct solve in 1D and
/// restarted GMRES in 2D.
VectorField invert_dispersive(const Field& h, const Field& b, const VectorField& rhs,
                              const ScaleParams& s, const DispersiveSolveSettings& settings = {});

/// rhs - (1 + mu T) V in max norm.
double dispersive_residual(const Field& h, const Field& b, const VectorField& V,
                           const VectorField& rhs, const ScaleParams& s);

/// Coupling operator C(V#, Vbar); the dimension is taken from the grid.
VectorField apply_C(const Field& h, const VectorField& vsharp, const VectorField& vbar,
                    const ScaleParams& s);

/// Bottom coupling C_b(v#, vbar), 1D only.
VectorField apply_Cb(const Field& h, const Field& b, const VectorField& vsharp,
                     const VectorField& vbar, const ScaleParams& s);

/// Source D(V#, Vbar) of the 2D E equation, stored as (D11, D12, D22).
VectorField apply_D(const Field& h, const VectorField& vsharp, const VectorField& vbar,
                    const ScaleParams& s);

/// T*_theta Vbar.
VectorField level_dispersive_correction(const Field& h, const Field& b, const VectorField& vbar,
                                        double theta, const ScaleParams& s);

/// Closed-form integral of T*_t Vbar over t in [0, theta].
VectorField level_dispersive_correction_integral(const Field& h, const Field& b,
                                                 const VectorField& vbar, double theta,
                                                 const ScaleParams& s);

/// Energy flux paired with C: h C(V#,V).V - div(flux_C) vanishes in 1D and
/// equals Tr D / 2 in 2D, up to truncation error.
VectorField flux_C(const Field& h, const VectorField& vsharp, const VectorField& vbar);

/// Energy flux paired with C_b (1D): h C_b(v#,v) v - d_x(flux_Cb) -> 0.
Field flux_Cb(const Field& h, const Field& b, const Field& vsharp, const Field& vbar);

}  // namespace gnvort
