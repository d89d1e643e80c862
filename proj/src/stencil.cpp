#include "gnvort/stencil.hpp"

namespace gnvort {

Field ddx(const Field& f) {
  const Grid& g = f.grid();
  const int nx = g.nx(), ny = g.ny();
  const double c = 1.0 / (2.0 * g.dx());
  Field out(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int ip = i + 1 == nx ? 0 : i + 1;
      const int im = i == 0 ? nx - 1 : i - 1;
      out(i, j) = (f(ip, j) - f(im, j)) * c;
    }
  return out;
}

Field ddy(const Field& f) {
  const Grid& g = f.grid();
  Field out(g);
  if (g.dim() == 1) return out;
  const int nx = g.nx(), ny = g.ny();
  const double c = 1.0 / (2.0 * g.dy());
  for (int j = 0; j < ny; ++j) {
    const int jp = j + 1 == ny ? 0 : j + 1;
    const int jm = j == 0 ? ny - 1 : j - 1;
    for (int i = 0; i < nx; ++i) out(i, j) = (f(i, jp) - f(i, jm)) * c;
  }
  return out;
}

Field ddaxis(const Field& f, int axis) { return axis == 0 ? ddx(f) : ddy(f); }

VectorField grad(const Field& f) {
  if (f.grid().dim() == 1) return {ddx(f)};
  return {ddx(f), ddy(f)};
}

VectorField perp_grad(const Field& f) {
  if (f.grid().dim() != 2) throw GridMismatch("perp_grad needs a 2D grid");
  return {-ddy(f), ddx(f)};
}

Field div(const VectorField& v) {
  Field out = ddx(v[0]);
  if (v.size() > 1) out += ddy(v[1]);
  return out;
}

Field curl(const VectorField& v) {
  if (v.size() != 2) throw GridMismatch("curl needs a 2D vector field");
  return ddx(v[1]) - ddy(v[0]);
}

Field dot(const VectorField& a, const VectorField& b) {
  if (a.size() != b.size()) throw GridMismatch("dot: component count differs");
  Field out = a[0] * b[0];
  for (std::size_t c = 1; c < a.size(); ++c) out += a[c] * b[c];
  return out;
}

VectorField scale(const Field& s, const VectorField& v) {
  VectorField out;
  out.reserve(v.size());
  for (const Field& f : v) out.push_back(s * f);
  return out;
}

VectorField scale(double s, VectorField v) {
  for (Field& f : v) f *= s;
  return v;
}

VectorField add(VectorField a, const VectorField& b) {
  if (a.size() != b.size()) throw GridMismatch("add: component count differs");
  for (std::size_t c = 0; c < a.size(); ++c) a[c] += b[c];
  return a;
}

VectorField sub(VectorField a, const VectorField& b) {
  if (a.size() != b.size()) throw GridMismatch("sub: component count differs");
  for (std::size_t c = 0; c < a.size(); ++c) a[c] -= b[c];
  return a;
}

void axpy(VectorField& a, double s, const VectorField& b) {
  if (a.size() != b.size()) throw GridMismatch("axpy: component count differs");
  for (std::size_t c = 0; c < a.size(); ++c) a[c].axpy(s, b[c]);
}

Field advect(const VectorField& a, const Field& f) {
  Field out = a[0] * ddx(f);
  if (a.size() > 1) out += a[1] * ddy(f);
  return out;
}

VectorField advect(const VectorField& a, const VectorField& v) {
  VectorField out;
  out.reserve(v.size());
  for (const Field& f : v) out.push_back(advect(a, f));
  return out;
}

double integrate(const Field& f) { return f.sum() * f.grid().cell_measure(); }

Field pow3(const Field& f) { return map(f, [](double x) { return x * x * x; }); }
Field square(const Field& f) { return map(f, [](double x) { return x * x; }); }

}  // namespace gnvort
