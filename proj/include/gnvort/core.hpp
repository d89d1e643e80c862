#pragma once

// Dimensionless parameters, periodic grids, grid fields and the prognostic
// state of every model tier.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gnvort {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Water depth reached the dry-state guard.
class PositivityError : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Iterative dispersive solve exhausted its budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Shear profile handed to the cascade initializer is not starred.
class MeanNotZero : public Error {
 public:
  using Error::Error;
};

class NonMonotoneTime : public Error {
 public:
  using Error::Error;
};

/// A convergence study was given repeated or too few resolutions.
class DegenerateStudy : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// ---------------------------------------------------------------------------
// Scales
// ---------------------------------------------------------------------------

/// Physical scales used only to convert diagnostics to dimensional units.
struct PhysicalScales {
  double g = 9.81;       // m/s^2
  double h0 = 1.0;       // m
  double length = 1.0;   // m

  bool operator==(const PhysicalScales&) const = default;
};

struct ScaleParams {
  double epsilon = 1.0;  // a_surf / H0
  double beta = 0.0;     // a_bott / H0
  double mu = 0.01;      // (H0 / L)^2
  std::optional<PhysicalScales> physical;

  /// Throws ValidationError on mu <= 0, epsilon < 0 or beta < 0.
  void validate() const;

  /// Non-fatal regime notes, e.g. beta > 2 sqrt(mu) (large bottom variations
  /// outside the medium-amplitude regime assumed by the general tiers).
  std::vector<std::string> regime_warnings() const;

  bool operator==(const ScaleParams&) const = default;
};

// ---------------------------------------------------------------------------
// Grid and fields
// ---------------------------------------------------------------------------

/// Uniform grid, periodic in every direction. A 1D grid has ny == 1.
class Grid {
 public:
  Grid() = default;
  static Grid line(int n, double length);
  static Grid plane(int nx, int ny, double lx, double ly);

  int dim() const { return dim_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double dx() const { return lx_ / nx_; }
  double dy() const { return ly_ / ny_; }
  double min_spacing() const;
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  double x(int i) const { return i * dx(); }
  double y(int j) const { return j * dy(); }
  /// Area (2D) or length (1D) of one cell.
  double cell_measure() const { return dim_ == 1 ? dx() : dx() * dy(); }

  bool operator==(const Grid&) const = default;

 private:
  Grid(int dim, int nx, int ny, double lx, double ly);
  int dim_ = 1;
  int nx_ = 0;
  int ny_ = 1;
  double lx_ = 1.0;
  double ly_ = 1.0;
};

/// Scalar field on a Grid, stored x-fastest.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& grid, double value = 0.0);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int i, int j = 0) {
    return data_[static_cast<std::size_t>(j) * grid_.nx() + i];
  }
  double operator()(int i, int j = 0) const {
    return data_[static_cast<std::size_t>(j) * grid_.nx() + i];
  }
  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(const Field& other);
  Field& operator*=(double s);
  /// this += s * other
  Field& axpy(double s, const Field& other);

  double sum() const;
  double min() const;
  double max() const;
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// Throws GridMismatch unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* where);

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, const Field& b);
Field operator/(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator+(double s, Field a);
Field operator-(Field a);

/// Pointwise map.
template <class Fn>
Field map(const Field& f, Fn fn) {
  Field out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = fn(f[k]);
  return out;
}

/// Field sampled from a function of (x, y).
template <class Fn>
Field sample(const Grid& g, Fn fn) {
  Field out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out(i, j) = fn(g.x(i), g.y(j));
  return out;
}

/// One Field per horizontal component (size == grid dim).
using VectorField = std::vector<Field>;

VectorField zero_vector(const Grid& g);
double max_abs(const VectorField& v);

// ---------------------------------------------------------------------------
// Bathymetry and state
// ---------------------------------------------------------------------------

/// Dimensionless bottom profile; the bottom sits at z = -1 + beta * b.
struct Bathymetry {
  Field b;
  static Bathymetry flat(const Grid& g) { return {Field(g)}; }
};

enum class Tier {
  SaintVenant,
  GnIrrotational,
  GnConstVort1d,
  GnGeneral1d,
  GnMedium1d,
  GnGeneral2d,
};

std::string_view tier_name(Tier t);
/// Accepts the config spellings (sv, gn_irrot, gn_const_vort_1d, ...).
Tier parse_tier(std::string_view name);

bool tier_has_vsharp(Tier t);
bool tier_has_E(Tier t);
bool tier_has_F(Tier t);
/// 0 if the tier runs in either dimension.
int tier_required_dim(Tier t);

// Storage order of the symmetric tensors in 2D.
enum SymIndex2 : std::size_t { kE11 = 0, kE12 = 1, kE22 = 2 };
enum SymIndex3 : std::size_t { kF111 = 0, kF112 = 1, kF122 = 2, kF222 = 3 };

/// Number of stored components of E / F for a grid dimension.
std::size_t e_components(int dim);
std::size_t f_components(int dim);

struct ModelState {
  Tier tier = Tier::SaintVenant;
  Grid grid;
  double omega = 0.0;  // constant-vorticity tier only
  double t = 0.0;

  Field zeta;
  VectorField vbar;
  VectorField vsharp;  // general tiers
  VectorField E;       // 1 component in 1D, (E11, E12, E22) in 2D
  VectorField F;       // 1 component in 1D, (F111, F112, F122, F222) in 2D

  /// Zero state with the component layout of `tier`.
  static ModelState zeros(Tier tier, const Grid& grid, double omega = 0.0);

  /// Throws GridMismatch if a field does not have the tier's layout.
  void check_layout() const;
};

/// h = 1 + eps*zeta - beta*b. Throws PositivityError if min h <= h_min.
Field derive_depth(const ModelState& state, const Bathymetry& bathy,
                   const ScaleParams& scales, double h_min = 1e-8);

/// Pointwise realizability of E: E >= 0 in 1D, positive semi-definite in 2D,
/// up to `tol`.
bool E_is_realizable(const ModelState& state, double tol = 0.0);

}  // namespace gnvort
