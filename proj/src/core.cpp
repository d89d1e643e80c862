#include "gnvort/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gnvort {

void ScaleParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("mu", "must be > 0");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ValidationError("epsilon", "must be >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("beta", "must be >= 0");
  if (physical) {
    if (!(physical->g > 0.0)) throw ValidationError("g", "must be > 0");
    if (!(physical->h0 > 0.0)) throw ValidationError("h0", "must be > 0");
    if (!(physical->length > 0.0)) throw ValidationError("l_scale", "must be > 0");
  }
}

std::vector<std::string> ScaleParams::regime_warnings() const {
  std::vector<std::string> out;
  if (beta > 2.0 * std::sqrt(mu)) {
    std::ostringstream os;
    os << "beta = " << beta << " exceeds 2*sqrt(mu) = " << 2.0 * std::sqrt(mu)
       << "; the general vorticity tiers assume medium bottom variations";
    out.push_back(os.str());
  }
  return out;
}

Grid::Grid(int dim, int nx, int ny, double lx, double ly)
    : dim_(dim), nx_(nx), ny_(ny), lx_(lx), ly_(ly) {}

Grid Grid::line(int n, double length) {
  if (n < 8) throw ValidationError("grid.n", "needs at least 8 points");
  if (!(length > 0.0)) throw ValidationError("grid.length", "must be > 0");
  return Grid(1, n, 1, length, 1.0);
}

Grid Grid::plane(int nx, int ny, double lx, double ly) {
  if (nx < 8) throw ValidationError("grid.nx", "needs at least 8 points");
  if (ny < 8) throw ValidationError("grid.ny", "needs at least 8 points");
  if (!(lx > 0.0)) throw ValidationError("grid.lx", "must be > 0");
  if (!(ly > 0.0)) throw ValidationError("grid.ly", "must be > 0");
  return Grid(2, nx, ny, lx, ly);
}

double Grid::min_spacing() const { return dim_ == 1 ? dx() : std::min(dx(), dy()); }

Field::Field(const Grid& grid, double value) : grid_(grid), data_(grid.size(), value) {}

void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (!(a.grid() == b.grid()) || a.size() != b.size())
    throw GridMismatch(std::string(where) + ": fields live on different grids");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other, "Field::operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other, "Field::operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Field& Field::operator*=(const Field& other) {
  require_same_grid(*this, other, "Field::operator*=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] *= other.data_[k];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  require_same_grid(*this, other, "Field::axpy");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
  return *this;
}

double Field::sum() const {
  double s = 0.0;
  for (double v : data_) s += v;
  return s;
}

double Field::min() const { return *std::min_element(data_.begin(), data_.end()); }
double Field::max() const { return *std::max_element(data_.begin(), data_.end()); }

double Field::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, const Field& b) { return a *= b; }

Field operator/(Field a, const Field& b) {
  require_same_grid(a, b, "operator/");
  for (std::size_t k = 0; k < a.size(); ++k) a[k] /= b[k];
  return a;
}

Field operator*(double s, Field a) { return a *= s; }

Field operator+(double s, Field a) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += s;
  return a;
}

Field operator-(Field a) { return a *= -1.0; }

VectorField zero_vector(const Grid& g) { return VectorField(g.dim(), Field(g)); }

double max_abs(const VectorField& v) {
  double m = 0.0;
  for (const Field& f : v) m = std::max(m, f.max_abs());
  return m;
}

std::string_view tier_name(Tier t) {
  switch (t) {
    case Tier::SaintVenant: return "sv";
    case Tier::GnIrrotational: return "gn_irrot";
    case Tier::GnConstVort1d: return "gn_const_vort_1d";
    case Tier::GnGeneral1d: return "gn_general_1d";
    case Tier::GnMedium1d: return "gn_medium_1d";
    case Tier::GnGeneral2d: return "gn_general_2d";
  }
  return "?";
}

Tier parse_tier(std::string_view name) {
  for (Tier t : {Tier::SaintVenant, Tier::GnIrrotational, Tier::GnConstVort1d, Tier::GnGeneral1d,
                 Tier::GnMedium1d, Tier::GnGeneral2d})
    if (tier_name(t) == name) return t;
  throw ValidationError("model.tier", "unknown tier '" + std::string(name) + "'");
}

bool tier_has_vsharp(Tier t) { return t == Tier::GnGeneral1d || t == Tier::GnGeneral2d; }
bool tier_has_E(Tier t) {
  return t == Tier::GnGeneral1d || t == Tier::GnGeneral2d || t == Tier::GnMedium1d;
}
bool tier_has_F(Tier t) { return t == Tier::GnGeneral1d || t == Tier::GnGeneral2d; }

int tier_required_dim(Tier t) {
  switch (t) {
    case Tier::SaintVenant:
    case Tier::GnIrrotational: return 0;
    case Tier::GnGeneral2d: return 2;
    default: return 1;
  }
}

std::size_t e_components(int dim) { return dim == 1 ? 1 : 3; }
std::size_t f_components(int dim) { return dim == 1 ? 1 : 4; }

ModelState ModelState::zeros(Tier tier, const Grid& grid, double omega) {
  const int req = tier_required_dim(tier);
  if (req != 0 && req != grid.dim())
    throw GridMismatch(std::string(tier_name(tier)) + " requires a " + std::to_string(req) +
                       "D grid");
  ModelState s;
  s.tier = tier;
  s.grid = grid;
  s.omega = omega;
  s.zeta = Field(grid);
  s.vbar = zero_vector(grid);
  if (tier_has_vsharp(tier)) s.vsharp = zero_vector(grid);
  if (tier_has_E(tier)) s.E = VectorField(e_components(grid.dim()), Field(grid));
  if (tier_has_F(tier)) s.F = VectorField(f_components(grid.dim()), Field(grid));
  return s;
}

void ModelState::check_layout() const {
  const int req = tier_required_dim(tier);
  if (req != 0 && req != grid.dim())
    throw GridMismatch(std::string(tier_name(tier)) + " requires a " + std::to_string(req) +
                       "D grid");
  auto check = [&](const VectorField& v, std::size_t n, const char* name) {
    if (v.size() != n)
      throw GridMismatch(std::string(name) + ": expected " + std::to_string(n) + " components");
    for (const Field& f : v)
      if (!(f.grid() == grid)) throw GridMismatch(std::string(name) + ": wrong grid");
  };
  if (!(zeta.grid() == grid) || zeta.size() != grid.size())
    throw GridMismatch("zeta: wrong grid");
  check(vbar, grid.dim(), "vbar");
  check(vsharp, tier_has_vsharp(tier) ? grid.dim() : 0, "vsharp");
  check(E, tier_has_E(tier) ? e_components(grid.dim()) : 0, "E");
  check(F, tier_has_F(tier) ? f_components(grid.dim()) : 0, "F");
}

Field derive_depth(const ModelState& state, const Bathymetry& bathy, const ScaleParams& scales,
                   double h_min) {
  require_same_grid(state.zeta, bathy.b, "derive_depth");
  Field h(state.grid);
  double hmin = INFINITY;
  for (std::size_t k = 0; k < h.size(); ++k) {
    h[k] = 1.0 + scales.epsilon * state.zeta[k] - scales.beta * bathy.b[k];
    hmin = std::min(hmin, h[k]);
  }
  if (!(hmin > h_min)) {
    std::ostringstream os;
    os << "water depth min h = " << hmin << " at t = " << state.t << " (dry state)";
    throw PositivityError(os.str());
  }
  return h;
}

bool E_is_realizable(const ModelState& state, double tol) {
  if (state.E.empty()) return true;
  if (state.grid.dim() == 1) return state.E[0].min() >= -tol;
  for (std::size_t k = 0; k < state.grid.size(); ++k) {
    const double a = state.E[kE11][k], b = state.E[kE12][k], c = state.E[kE22][k];
    if (a < -tol || c < -tol || a * c - b * b < -tol) return false;
  }
  return true;
}

}  // namespace gnvort
