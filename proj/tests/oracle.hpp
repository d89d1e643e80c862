#pragma once

// Test-side calculus on closed-form functions of (x, y). Derivatives use a
// five-point difference with a tiny step on the continuous function, so the
// oracle does not share any stencil code with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "gnvort/core.hpp"

namespace oracle {

using gnvort::Field;
using gnvort::Grid;

class Fn {
 public:
  Fn(double c = 0.0) : f_(std::make_shared<std::function<double(double, double)>>(
                           [c](double, double) { return c; })) {}
  template <class F,
            class = std::enable_if_t<std::is_invocable_r_v<double, F, double, double> &&
                                     !std::is_convertible_v<F, double>>>
  Fn(F f) : f_(std::make_shared<std::function<double(double, double)>>(std::move(f))) {}

  double operator()(double x, double y = 0.0) const { return (*f_)(x, y); }

 private:
  std::shared_ptr<std::function<double(double, double)>> f_;
};

inline constexpr double kStep = 2e-3;

inline Fn dx(const Fn& f) {
  return [f](double x, double y) {
    const double e = kStep;
    return (f(x - 2 * e, y) - 8 * f(x - e, y) + 8 * f(x + e, y) - f(x + 2 * e, y)) / (12 * e);
  };
}
inline Fn dy(const Fn& f) {
  return [f](double x, double y) {
    const double e = kStep;
    return (f(x, y - 2 * e) - 8 * f(x, y - e) + 8 * f(x, y + e) - f(x, y + 2 * e)) / (12 * e);
  };
}

inline Fn operator+(const Fn& a, const Fn& b) {
  return [a, b](double x, double y) { return a(x, y) + b(x, y); };
}
inline Fn operator-(const Fn& a, const Fn& b) {
  return [a, b](double x, double y) { return a(x, y) - b(x, y); };
}
inline Fn operator*(const Fn& a, const Fn& b) {
  return [a, b](double x, double y) { return a(x, y) * b(x, y); };
}
inline Fn operator/(const Fn& a, const Fn& b) {
  return [a, b](double x, double y) { return a(x, y) / b(x, y); };
}
inline Fn operator*(double s, const Fn& a) {
  return [s, a](double x, double y) { return s * a(x, y); };
}
inline Fn operator-(const Fn& a) { return -1.0 * a; }

/// Value of a continuous function at every grid point (ignoring a cached
/// evaluation would make deep trees slow, so evaluate once per point).
inline Field on(const Grid& g, const Fn& f) {
  Field out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out(i, j) = f(g.x(i), g.y(j));
  return out;
}

/// Largest |discrete - exact| over the grid.
inline double error(const Field& discrete, const Fn& exact) {
  const Grid& g = discrete.grid();
  double m = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      m = std::max(m, std::abs(discrete(i, j) - exact(g.x(i), g.y(j))));
  return m;
}

/// Observed orders between successive errors on grids refined by 2.
inline std::vector<double> orders(const std::vector<double>& errs) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) out.push_back(std::log2(errs[k] / errs[k + 1]));
  return out;
}

inline double min_order(const std::vector<double>& errs) {
  const std::vector<double> o = orders(errs);
  return *std::min_element(o.begin(), o.end());
}

}  // namespace oracle
