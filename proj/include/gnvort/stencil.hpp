#pragma once

// Second-order centered periodic differences and small vector-calculus
// helpers shared by the operator and model code. Derivatives along y of a
// 1D field are identically zero.

#include "gnvort/core.hpp"

namespace gnvort {

Field ddx(const Field& f);
Field ddy(const Field& f);
/// axis 0 = x, 1 = y
Field ddaxis(const Field& f, int axis);

VectorField grad(const Field& f);
/// Gradient rotated by +90 degrees: (-d_y f, d_x f). 2D only.
VectorField perp_grad(const Field& f);
Field div(const VectorField& v);
/// Scalar curl d_x v_y - d_y v_x. 2D only.
Field curl(const VectorField& v);

Field dot(const VectorField& a, const VectorField& b);
VectorField scale(const Field& s, const VectorField& v);
VectorField scale(double s, VectorField v);
VectorField add(VectorField a, const VectorField& b);
VectorField sub(VectorField a, const VectorField& b);
/// a += s * b componentwise.
void axpy(VectorField& a, double s, const VectorField& b);

/// (a . grad) f
Field advect(const VectorField& a, const Field& f);
/// Componentwise (a . grad) v
VectorField advect(const VectorField& a, const VectorField& v);

/// Trapezoid (periodic rectangle) quadrature of a grid field.
double integrate(const Field& f);

Field pow3(const Field& f);
Field square(const Field& f);

}  // namespace gnvort
