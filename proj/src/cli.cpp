#include "gnvort/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "gnvort/operators.hpp"
#include "gnvort/stencil.hpp"

namespace gnvort {

namespace fs = std::filesystem;

constexpr const char* kVersion = "gnvort 1.0.0";

// ---------------------------------------------------------------------------
// Formatting and files
// ---------------------------------------------------------------------------

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? s.npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

double parse_double(const std::string& v, int line, const std::string& key) {
  if (v.empty()) throw ParseError(line, key + ": missing value");
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d))
    throw ParseError(line, key + ": '" + v + "' is not a finite number");
  return d;
}

int parse_int(const std::string& v, int line, const std::string& key) {
  if (v.empty()) throw ParseError(line, key + ": missing value");
  char* end = nullptr;
  errno = 0;
  const long d = std::strtol(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE || d < INT32_MIN || d > INT32_MAX)
    throw ParseError(line, key + ": '" + v + "' is not an integer");
  return static_cast<int>(d);
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ParseError(line, key + ": '" + v + "' is not a boolean");
}

using KeyHandler = void (*)(ScenarioConfig&, const std::string&, int, const std::string&);

struct PhysicalSeen {
  bool any = false;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"model", {"tier"}},
      {"grid", {"dim", "n", "nx", "ny", "length", "lx", "ly"}},
      {"scales", {"epsilon", "beta", "mu", "g", "h0", "l_scale"}},
      {"bathymetry", {"kind", "amplitude", "wavenumber", "file"}},
      {"initial", {"kind", "amplitude", "x0", "y0", "sigma", "file"}},
      {"shear", {"kind", "omega", "coeffs", "file"}},
      {"time", {"t_end", "cfl", "fixed_dt", "filter_delta"}},
      {"output", {"sample_every", "fields", "reconstruction", "n_theta", "order"}},
  };
  return keys;
}

std::string bathy_kind_name(ScenarioConfig::BathyKind k) {
  switch (k) {
    case ScenarioConfig::BathyKind::Flat: return "flat";
    case ScenarioConfig::BathyKind::Sinusoidal: return "sinusoidal";
    case ScenarioConfig::BathyKind::File: return "file";
  }
  return "?";
}

std::string initial_kind_name(ScenarioConfig::InitialKind k) {
  switch (k) {
    case ScenarioConfig::InitialKind::Rest: return "rest";
    case ScenarioConfig::InitialKind::GaussianHump: return "gaussian_hump";
    case ScenarioConfig::InitialKind::File: return "file";
  }
  return "?";
}

std::string shear_kind_name(ScenarioConfig::ShearKind k) {
  switch (k) {
    case ScenarioConfig::ShearKind::None: return "none";
    case ScenarioConfig::ShearKind::Linear: return "linear";
    case ScenarioConfig::ShearKind::Polynomial: return "polynomial";
    case ScenarioConfig::ShearKind::File: return "file";
  }
  return "?";
}

fs::path resolve(const std::string& file, const fs::path& base) {
  fs::path p(file);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

Grid ScenarioConfig::grid() const {
  return dim == 1 ? Grid::line(nx, lx) : Grid::plane(nx, ny, lx, ly);
}

StepSettings ScenarioConfig::step_settings() const {
  StepSettings st;
  st.cfl_number = cfl;
  st.fixed_dt = fixed_dt;
  st.t_end = t_end;
  st.filter_delta = filter_delta;
  return st;
}

void validate_config(const ScenarioConfig& c) {
  if (c.dim != 1 && c.dim != 2) throw ValidationError("grid.dim", "must be 1 or 2");
  if (c.dim == 1) {
    if (c.nx < 8) throw ValidationError("grid.n", "needs at least 8 points");
    if (!(c.lx > 0.0)) throw ValidationError("grid.length", "must be > 0");
  } else {
    if (c.nx < 8) throw ValidationError("grid.nx", "needs at least 8 points");
    if (c.ny < 8) throw ValidationError("grid.ny", "needs at least 8 points");
    if (!(c.lx > 0.0)) throw ValidationError("grid.lx", "must be > 0");
    if (!(c.ly > 0.0)) throw ValidationError("grid.ly", "must be > 0");
  }
  try {
    c.scales.validate();
  } catch (const ValidationError& e) {
    throw ValidationError("scales." + e.field(), e.what());
  }
  const int req = tier_required_dim(c.tier);
  if (req != 0 && req != c.dim)
    throw ValidationError("model.tier", std::string(tier_name(c.tier)) + " requires grid.dim = " +
                                            std::to_string(req));
  using SK = ScenarioConfig::ShearKind;
  if (c.tier == Tier::GnConstVort1d && (c.shear_kind != SK::Linear || !c.shear_omega))
    throw ValidationError("shear.omega",
                          "gn_const_vort_1d requires shear.kind = linear with shear.omega");
  if (c.shear_kind == SK::Linear && !c.shear_omega)
    throw ValidationError("shear.omega", "linear shear needs omega");
  if (c.shear_kind == SK::Polynomial && c.shear_coeffs.empty())
    throw ValidationError("shear.coeffs", "polynomial shear needs coefficients");
  if (c.shear_kind == SK::File && c.shear_file.empty())
    throw ValidationError("shear.file", "missing file name");
  if (c.bathy_kind == ScenarioConfig::BathyKind::File && c.bathy_file.empty())
    throw ValidationError("bathymetry.file", "missing file name");
  if (c.initial_kind == ScenarioConfig::InitialKind::File && c.initial_file.empty())
    throw ValidationError("initial.file", "missing file name");
  if (!(c.init_sigma > 0.0)) throw ValidationError("initial.sigma", "must be > 0");
  if (!(c.t_end >= 0.0)) throw ValidationError("time.t_end", "must be >= 0");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ValidationError("time.cfl", "must lie in (0, 1]");
  if (c.fixed_dt && !(*c.fixed_dt > 0.0)) throw ValidationError("time.fixed_dt", "must be > 0");
  if (!(c.filter_delta >= 0.0)) throw ValidationError("time.filter_delta", "must be >= 0");
  if (c.sample_every < 1) throw ValidationError("output.sample_every", "must be >= 1");
  if (c.n_theta < 3) throw ValidationError("output.n_theta", "needs at least 3 levels");
}

ScenarioConfig parse_config(std::string_view text, const fs::path& base_dir) {
  ScenarioConfig c;
  std::string section;
  std::set<std::string> seen;
  bool have_tier = false, have_mu = false;
  bool have_n = false, have_len = false, have_nx = false, have_ny = false, have_lx = false,
       have_ly = false;
  PhysicalScales phys;
  bool any_phys = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!known_keys().count(section)) throw ParseError(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (section.empty()) throw ParseError(line, "key '" + key + "' outside of any section");
    if (!known_keys().at(section).count(key))
      throw ParseError(line, "unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (!seen.insert(full).second) throw ParseError(line, "duplicate key " + full);

    if (full == "model.tier") {
      try {
        c.tier = parse_tier(val);
      } catch (const ValidationError&) {
        throw ParseError(line, "unknown tier '" + val + "'");
      }
      have_tier = true;
    } else if (full == "grid.dim") {
      c.dim = parse_int(val, line, full);
    } else if (full == "grid.n") {
      c.nx = parse_int(val, line, full);
      have_n = true;
    } else if (full == "grid.nx") {
      c.nx = parse_int(val, line, full);
      have_nx = true;
    } else if (full == "grid.ny") {
      c.ny = parse_int(val, line, full);
      have_ny = true;
    } else if (full == "grid.length") {
      c.lx = parse_double(val, line, full);
      have_len = true;
    } else if (full == "grid.lx") {
      c.lx = parse_double(val, line, full);
      have_lx = true;
    } else if (full == "grid.ly") {
      c.ly = parse_double(val, line, full);
      have_ly = true;
    } else if (full == "scales.epsilon") {
      c.scales.epsilon = parse_double(val, line, full);
    } else if (full == "scales.beta") {
      c.scales.beta = parse_double(val, line, full);
    } else if (full == "scales.mu") {
      c.scales.mu = parse_double(val, line, full);
      have_mu = true;
    } else if (full == "scales.g") {
      phys.g = parse_double(val, line, full);
      any_phys = true;
    } else if (full == "scales.h0") {
      phys.h0 = parse_double(val, line, full);
      any_phys = true;
    } else if (full == "scales.l_scale") {
      phys.length = parse_double(val, line, full);
      any_phys = true;
    } else if (full == "bathymetry.kind") {
      if (val == "flat") c.bathy_kind = ScenarioConfig::BathyKind::Flat;
      else if (val == "sinusoidal") c.bathy_kind = ScenarioConfig::BathyKind::Sinusoidal;
      else if (val == "file") c.bathy_kind = ScenarioConfig::BathyKind::File;
      else throw ParseError(line, "unknown bathymetry kind '" + val + "'");
    } else if (full == "bathymetry.amplitude") {
      c.bathy_amplitude = parse_double(val, line, full);
    } else if (full == "bathymetry.wavenumber") {
      c.bathy_wavenumber = parse_double(val, line, full);
    } else if (full == "bathymetry.file") {
      c.bathy_file = val;
    } else if (full == "initial.kind") {
      if (val == "rest") c.initial_kind = ScenarioConfig::InitialKind::Rest;
      else if (val == "gaussian_hump") c.initial_kind = ScenarioConfig::InitialKind::GaussianHump;
      else if (val == "file") c.initial_kind = ScenarioConfig::InitialKind::File;
      else throw ParseError(line, "unknown initial kind '" + val + "'");
    } else if (full == "initial.amplitude") {
      c.init_amplitude = parse_double(val, line, full);
    } else if (full == "initial.x0") {
      c.init_x0 = parse_double(val, line, full);
    } else if (full == "initial.y0") {
      c.init_y0 = parse_double(val, line, full);
    } else if (full == "initial.sigma") {
      c.init_sigma = parse_double(val, line, full);
    } else if (full == "initial.file") {
      c.initial_file = val;
    } else if (full == "shear.kind") {
      if (val == "none") c.shear_kind = ScenarioConfig::ShearKind::None;
      else if (val == "linear") c.shear_kind = ScenarioConfig::ShearKind::Linear;
      else if (val == "polynomial") c.shear_kind = ScenarioConfig::ShearKind::Polynomial;
      else if (val == "file") c.shear_kind = ScenarioConfig::ShearKind::File;
      else throw ParseError(line, "unknown shear kind '" + val + "'");
    } else if (full == "shear.omega") {
      c.shear_omega = parse_double(val, line, full);
    } else if (full == "shear.coeffs") {
      c.shear_coeffs.clear();
      for (const std::string& item : split(val, ','))
        c.shear_coeffs.push_back(parse_double(item, line, full));
    } else if (full == "shear.file") {
      c.shear_file = val;
    } else if (full == "time.t_end") {
      c.t_end = parse_double(val, line, full);
    } else if (full == "time.cfl") {
      c.cfl = parse_double(val, line, full);
    } else if (full == "time.fixed_dt") {
      c.fixed_dt = parse_double(val, line, full);
    } else if (full == "time.filter_delta") {
      c.filter_delta = parse_double(val, line, full);
    } else if (full == "output.sample_every") {
      c.sample_every = parse_int(val, line, full);
    } else if (full == "output.fields") {
      c.write_fields = parse_bool(val, line, full);
    } else if (full == "output.reconstruction") {
      c.reconstruction = parse_bool(val, line, full);
    } else if (full == "output.n_theta") {
      c.n_theta = parse_int(val, line, full);
    } else if (full == "output.order") {
      if (val == "first") c.order = ReconstructionOrder::First;
      else if (val == "second") c.order = ReconstructionOrder::Second;
      else throw ParseError(line, "unknown reconstruction order '" + val + "'");
    }
  }

  if (!have_tier) throw ValidationError("model.tier", "is required");
  if (!have_mu) throw ValidationError("scales.mu", "is required");
  if (any_phys) c.scales.physical = phys;
  if (c.dim == 1) {
    if (have_nx || have_ny || have_lx || have_ly)
      throw ValidationError("grid", "use n and length for dim = 1");
    if (!have_n) throw ValidationError("grid.n", "is required");
    if (!have_len) throw ValidationError("grid.length", "is required");
    c.ny = 0;
    c.ly = 0.0;
  } else {
    if (have_n || have_len) throw ValidationError("grid", "use nx, ny, lx, ly for dim = 2");
    if (!have_nx) throw ValidationError("grid.nx", "is required");
    if (!have_ny) throw ValidationError("grid.ny", "is required");
    if (!have_lx) throw ValidationError("grid.lx", "is required");
    if (!have_ly) throw ValidationError("grid.ly", "is required");
  }
  validate_config(c);

  auto check_file = [&](const std::string& f, const char* field) {
    if (!f.empty() && !fs::exists(resolve(f, base_dir)))
      throw ValidationError(field, "file '" + f + "' does not exist");
  };
  if (c.bathy_kind == ScenarioConfig::BathyKind::File) check_file(c.bathy_file, "bathymetry.file");
  if (c.initial_kind == ScenarioConfig::InitialKind::File)
    check_file(c.initial_file, "initial.file");
  if (c.shear_kind == ScenarioConfig::ShearKind::File) check_file(c.shear_file, "shear.file");
  return c;
}

ScenarioConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const fs::path base = fs::absolute(path).parent_path();
  ScenarioConfig c = parse_config(ss.str(), base);
  auto absolutize = [&](std::string& f) {
    if (!f.empty()) f = fs::absolute(resolve(f, base)).lexically_normal().string();
  };
  if (c.bathy_kind == ScenarioConfig::BathyKind::File) absolutize(c.bathy_file);
  if (c.initial_kind == ScenarioConfig::InitialKind::File) absolutize(c.initial_file);
  if (c.shear_kind == ScenarioConfig::ShearKind::File) absolutize(c.shear_file);
  return c;
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream o;
  auto num = [](double v) { return format_number(v); };
  o << "[model]\ntier = " << tier_name(c.tier) << "\n\n[grid]\ndim = " << c.dim << "\n";
  if (c.dim == 1) {
    o << "n = " << c.nx << "\nlength = " << num(c.lx) << "\n";
  } else {
    o << "nx = " << c.nx << "\nny = " << c.ny << "\nlx = " << num(c.lx) << "\nly = " << num(c.ly)
      << "\n";
  }
  o << "\n[scales]\nepsilon = " << num(c.scales.epsilon) << "\nbeta = " << num(c.scales.beta)
    << "\nmu = " << num(c.scales.mu) << "\n";
  if (c.scales.physical) {
    o << "g = " << num(c.scales.physical->g) << "\nh0 = " << num(c.scales.physical->h0)
      << "\nl_scale = " << num(c.scales.physical->length) << "\n";
  }
  o << "\n[bathymetry]\nkind = " << bathy_kind_name(c.bathy_kind)
    << "\namplitude = " << num(c.bathy_amplitude) << "\nwavenumber = " << num(c.bathy_wavenumber)
    << "\n";
  if (!c.bathy_file.empty()) o << "file = " << c.bathy_file << "\n";
  o << "\n[initial]\nkind = " << initial_kind_name(c.initial_kind)
    << "\namplitude = " << num(c.init_amplitude) << "\nx0 = " << num(c.init_x0)
    << "\ny0 = " << num(c.init_y0) << "\nsigma = " << num(c.init_sigma) << "\n";
  if (!c.initial_file.empty()) o << "file = " << c.initial_file << "\n";
  o << "\n[shear]\nkind = " << shear_kind_name(c.shear_kind) << "\n";
  if (c.shear_omega) o << "omega = " << num(*c.shear_omega) << "\n";
  if (!c.shear_coeffs.empty()) {
    o << "coeffs = ";
    for (std::size_t k = 0; k < c.shear_coeffs.size(); ++k)
      o << (k ? ", " : "") << num(c.shear_coeffs[k]);
    o << "\n";
  }
  if (!c.shear_file.empty()) o << "file = " << c.shear_file << "\n";
  o << "\n[time]\nt_end = " << num(c.t_end) << "\ncfl = " << num(c.cfl) << "\n";
  if (c.fixed_dt) o << "fixed_dt = " << num(*c.fixed_dt) << "\n";
  o << "filter_delta = " << num(c.filter_delta) << "\n";
  o << "\n[output]\nsample_every = " << c.sample_every
    << "\nfields = " << (c.write_fields ? "true" : "false")
    << "\nreconstruction = " << (c.reconstruction ? "true" : "false")
    << "\nn_theta = " << c.n_theta
    << "\norder = " << (c.order == ReconstructionOrder::First ? "first" : "second") << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Tabulated inputs
// ---------------------------------------------------------------------------

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  }
  int require(const std::string& name, const std::string& file) const {
    const int c = column(name);
    if (c < 0) throw ValidationError(file, "missing column '" + name + "'");
    return c;
  }
};

Table read_table(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError(file, "cannot open tabulated input");
  Table t;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    if (t.header.empty()) {
      t.header = split(s, ',');
      continue;
    }
    const std::vector<std::string> cells = split(s, ',');
    if (cells.size() != t.header.size())
      throw ParseError(line, file + ": expected " + std::to_string(t.header.size()) + " columns");
    std::vector<double> row;
    for (const std::string& c : cells) row.push_back(parse_double(c, line, file));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ValidationError(file, "empty tabulated input");
  return t;
}

// Fills `f` from rows [begin, begin + grid size) after checking coordinates.
void fill_from_rows(Field& f, const Table& t, std::size_t begin, int col, const std::string& file) {
  const Grid& g = f.grid();
  const int cx = t.require("x", file);
  const int cy = g.dim() == 2 ? t.require("y", file) : -1;
  const double tol = 1e-9 * std::max(g.lx(), g.dim() == 2 ? g.ly() : 0.0);
  if (t.rows.size() < begin + g.size())
    throw GridMismatch(file + ": fewer rows than grid points");
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::vector<double>& row = t.rows[begin + static_cast<std::size_t>(j) * g.nx() + i];
      if (std::abs(row[cx] - g.x(i)) > tol || (cy >= 0 && std::abs(row[cy] - g.y(j)) > tol))
        throw GridMismatch(file + ": coordinates do not match the configured grid");
      f(i, j) = row[col];
    }
}

std::vector<std::string> e_names(int dim) {
  return dim == 1 ? std::vector<std::string>{"E_11"}
                  : std::vector<std::string>{"E_11", "E_12", "E_22"};
}
std::vector<std::string> f_names(int dim) {
  return dim == 1 ? std::vector<std::string>{"F_111"}
                  : std::vector<std::string>{"F_111", "F_112", "F_122", "F_222"};
}
std::vector<std::string> axis_names(const std::string& stem, int dim) {
  return dim == 1 ? std::vector<std::string>{stem + "_x"}
                  : std::vector<std::string>{stem + "_x", stem + "_y"};
}

// Shear profile (first component) h * sum c_k theta^k, starred on its levels.
LevelProfile polynomial_profile(const Field& h, const std::vector<double>& coeffs, int n) {
  LevelProfile p;
  for (double th : theta_levels(n)) {
    double v = 0.0, pw = 1.0;
    for (double ck : coeffs) {
      v += ck * pw;
      pw *= th;
    }
    VectorField lv = zero_vector(h.grid());
    lv[0] = v * h;
    p.push_back(std::move(lv));
  }
  return star_profile(std::move(p));
}

LevelProfile polynomial_q(const Field& h, const std::vector<double>& coeffs, int n) {
  LevelProfile p;
  for (double th : theta_levels(n)) {
    double v = 0.0, pw = 1.0;
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
      v += static_cast<double>(k) * coeffs[k] * pw;
      pw *= th;
    }
    VectorField lv = zero_vector(h.grid());
    lv[0] = v * h;
    p.push_back(std::move(lv));
  }
  return p;
}

LevelProfile profile_from_file(const std::string& file, const Grid& g) {
  const Table t = read_table(file);
  const int cth = t.require("theta", file);
  const std::vector<std::string> names = axis_names("vstar", g.dim());
  std::vector<int> cols;
  for (const std::string& n : names) cols.push_back(t.require(n, file));
  if (t.rows.empty() || t.rows.size() % g.size() != 0)
    throw GridMismatch(file + ": row count is not a multiple of the grid size");
  const std::size_t nlev = t.rows.size() / g.size();
  LevelProfile p;
  for (std::size_t k = 0; k < nlev; ++k) {
    const std::size_t begin = k * g.size();
    const double th = t.rows[begin][cth];
    const double expect = nlev > 1 ? static_cast<double>(k) / (nlev - 1) : 0.0;
    if (std::abs(th - expect) > 1e-9)
      throw ValidationError("shear.file", "theta levels must be uniform from 0 to 1");
    for (std::size_t r = begin; r < begin + g.size(); ++r)
      if (t.rows[r][cth] != th) throw ValidationError("shear.file", "mixed theta inside a block");
    VectorField lv = zero_vector(g);
    for (int c = 0; c < g.dim(); ++c) fill_from_rows(lv[c], t, begin, cols[c], file);
    p.push_back(std::move(lv));
  }
  if (p.size() < 3) throw ValidationError("shear.file", "needs at least 3 theta levels");
  return p;
}

}  // namespace

Bathymetry make_bathymetry(const ScenarioConfig& c) {
  const Grid g = c.grid();
  switch (c.bathy_kind) {
    case ScenarioConfig::BathyKind::Flat: return Bathymetry::flat(g);
    case ScenarioConfig::BathyKind::Sinusoidal: {
      const double k = 2.0 * M_PI * c.bathy_wavenumber / c.lx;
      const double a = c.bathy_amplitude;
      return {sample(g, [=](double x, double) { return a * std::sin(k * x); })};
    }
    case ScenarioConfig::BathyKind::File: {
      const Table t = read_table(c.bathy_file);
      Bathymetry b{Field(g)};
      fill_from_rows(b.b, t, 0, t.require("b", c.bathy_file), c.bathy_file);
      return b;
    }
  }
  return Bathymetry::flat(g);
}

InitialData make_initial_data(const ScenarioConfig& c, const Bathymetry& bathy) {
  const Grid g = c.grid();
  InitialData out;
  ModelState& s = out.state;
  s = ModelState::zeros(c.tier, g, c.shear_omega.value_or(0.0));
  if (c.tier != Tier::GnConstVort1d) s.omega = 0.0;
  bool cascade_from_file = false;
  switch (c.initial_kind) {
    case ScenarioConfig::InitialKind::Rest:
      break;
    case ScenarioConfig::InitialKind::GaussianHump: {
      const double a = c.init_amplitude, x0 = c.init_x0, y0 = c.init_y0, sg = c.init_sigma;
      const bool two = g.dim() == 2;
      s.zeta = sample(g, [=](double x, double y) {
        const double r2 = (x - x0) * (x - x0) + (two ? (y - y0) * (y - y0) : 0.0);
        return a * std::exp(-r2 / (2.0 * sg * sg));
      });
      break;
    }
    case ScenarioConfig::InitialKind::File: {
      const std::string& f = c.initial_file;
      const Table t = read_table(f);
      fill_from_rows(s.zeta, t, 0, t.require("zeta", f), f);
      const std::vector<std::string> vn = axis_names("vbar", g.dim());
      for (int k = 0; k < g.dim(); ++k) fill_from_rows(s.vbar[k], t, 0, t.require(vn[k], f), f);
      auto optional_group = [&](VectorField& dst, const std::vector<std::string>& names) {
        bool any = false;
        for (std::size_t k = 0; k < dst.size(); ++k) {
          const int col = t.column(names[k]);
          if (col >= 0) {
            fill_from_rows(dst[k], t, 0, col, f);
            any = true;
          }
        }
        return any;
      };
      cascade_from_file |= optional_group(s.vsharp, axis_names("vsharp", g.dim()));
      cascade_from_file |= optional_group(s.E, e_names(g.dim()));
      cascade_from_file |= optional_group(s.F, f_names(g.dim()));
      break;
    }
  }
  const Field h = derive_depth(s, bathy, c.scales);

  // Cascade data and reconstruction levels from the shear specification.
  constexpr int kCascadeLevels = 129;
  using SK = ScenarioConfig::ShearKind;
  const bool general = tier_has_E(c.tier);
  if (c.shear_kind != SK::None && cascade_from_file)
    throw ValidationError("shear.kind", "cascade fields given both in initial.file and [shear]");
  switch (c.shear_kind) {
    case SK::None:
      break;
    case SK::Linear: {
      const double w = *c.shear_omega;
      if (general) {
        const Field E = (w * w / 12.0) * pow3(h);
        s.E[0] = E;
        if (!s.vsharp.empty()) s.vsharp[0] = w * h;
      }
      out.levels_profile = linear_shear_profile(h, w, c.n_theta);
      break;
    }
    case SK::Polynomial: {
      if (general) {
        const CascadeData cd = init_cascade_from_shear(
            polynomial_profile(h, c.shear_coeffs, kCascadeLevels), h, c.scales);
        s.E = cd.E;
        if (!s.vsharp.empty()) s.vsharp = cd.vsharp;
        if (!s.F.empty()) s.F = cd.F;
      }
      out.levels_profile = polynomial_profile(h, c.shear_coeffs, c.n_theta);
      break;
    }
    case SK::File: {
      LevelProfile p = profile_from_file(c.shear_file, g);
      if (general) {
        const CascadeData cd = init_cascade_from_shear(p, h, c.scales);
        s.E = cd.E;
        if (!s.vsharp.empty()) s.vsharp = cd.vsharp;
        if (!s.F.empty()) s.F = cd.F;
      }
      out.levels_profile = std::move(p);
      break;
    }
  }
  out.unconstrained_cascade = cascade_from_file;
  s.check_layout();
  return out;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

namespace {

std::string time_tag(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

std::string fields_csv(const ModelState& s) {
  const Grid& g = s.grid;
  const int dim = g.dim();
  std::vector<std::string> head{"x"};
  if (dim == 2) head.push_back("y");
  head.push_back("zeta");
  std::vector<const Field*> cols{&s.zeta};
  for (const std::string& n : axis_names("vbar", dim)) head.push_back(n);
  for (const Field& f : s.vbar) cols.push_back(&f);
  if (!s.vsharp.empty()) {
    for (const std::string& n : axis_names("vsharp", dim)) head.push_back(n);
    for (const Field& f : s.vsharp) cols.push_back(&f);
  }
  if (!s.E.empty()) {
    for (const std::string& n : e_names(dim)) head.push_back(n);
    for (const Field& f : s.E) cols.push_back(&f);
  }
  if (!s.F.empty()) {
    for (const std::string& n : f_names(dim)) head.push_back(n);
    for (const Field& f : s.F) cols.push_back(&f);
  }
  std::string out;
  for (std::size_t k = 0; k < head.size(); ++k) out += (k ? "," : "") + head[k];
  out += "\n";
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      out += format_number(g.x(i));
      if (dim == 2) out += "," + format_number(g.y(j));
      for (const Field* f : cols) out += "," + format_number((*f)(i, j));
      out += "\n";
    }
  return out;
}

std::string levels_csv(const ReconstructedVelocity& rv, const Grid& g) {
  const int dim = g.dim();
  std::string out = dim == 1 ? "x,theta,Vx,w\n" : "x,y,theta,Vx,Vy,w\n";
  for (std::size_t k = 0; k < rv.theta.size(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        out += format_number(g.x(i));
        if (dim == 2) out += "," + format_number(g.y(j));
        out += "," + format_number(rv.theta[k]);
        for (const Field& f : rv.V[k]) out += "," + format_number(f(i, j));
        out += "," + format_number(rv.w[k](i, j)) + "\n";
      }
  return out;
}

std::string trace_csv(const ConservationTrace& tr) {
  std::string out = "t,mass,energy_total,e_p,e_k,e_rot,mass_drift,energy_drift\n";
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    const ConservationSample& s = tr.samples[k];
    out += format_number(s.t) + "," + format_number(s.mass) + "," +
           format_number(s.energy_total) + "," + format_number(s.e_p) + "," +
           format_number(s.e_k) + "," + format_number(s.e_rot) + "," +
           format_number(tr.mass_drift[k]) + "," + format_number(tr.energy_drift[k]) + "\n";
  }
  return out;
}

struct ManifoldRow {
  double t, rel_E, rel_vsharp, abs_F;
};

ManifoldRow manifold_deviation(const ModelState& s, const Bathymetry& bathy,
                               const ScaleParams& sc, double omega) {
  const Field h = derive_depth(s, bathy, sc);
  ManifoldRow r{s.t, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double e = omega * omega * h[k] * h[k] * h[k] / 12.0;
    const double vs = omega * h[k];
    r.rel_E = std::max(r.rel_E, std::abs(s.E[0][k] - e) / std::abs(e));
    if (!s.vsharp.empty()) r.rel_vsharp = std::max(r.rel_vsharp, std::abs(s.vsharp[0][k] - vs) / std::abs(vs));
  }
  for (const Field& f : s.F) r.abs_F = std::max(r.abs_F, f.max_abs());
  return r;
}

template <class E>
[[noreturn]] void rethrow_with_context(const E& e, const std::string& ctx) {
  throw E(ctx + e.what());
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  validate_config(cfg);
  const Bathymetry bathy = make_bathymetry(cfg);
  InitialData init = make_initial_data(cfg, bathy);
  const ScaleParams& sc = cfg.scales;
  const StepSettings st = cfg.step_settings();
  st.validate();
  const RhsFunction rhs = with_filter(make_rhs(bathy, sc), cfg.filter_delta);
  auto log = [&](const std::string& msg) {
    if (!opts.quiet) std::cerr << msg << "\n";
  };
  for (const std::string& w : sc.regime_warnings()) log("warning: " + w);
  if (cfg.tier == Tier::GnMedium1d && std::abs(sc.epsilon - std::sqrt(sc.mu)) > 1e-12)
    log("warning: gn_medium_1d is meant for epsilon = sqrt(mu)");

  const bool linear_manifold = cfg.shear_kind == ScenarioConfig::ShearKind::Linear &&
                               (cfg.tier == Tier::GnGeneral1d || cfg.tier == Tier::GnMedium1d);
  const bool keep_snapshots = cfg.reconstruction;

  RunResult res;
  ModelState s = init.state;
  SnapshotSeries snaps;
  if (keep_snapshots) snaps.push(s);
  const ModelState initial = s;
  res.trace = conservation_monitor({}, make_sample(s, bathy, sc));
  std::vector<ManifoldRow> manifold;
  if (linear_manifold) manifold.push_back(manifold_deviation(s, bathy, sc, *cfg.shear_omega));

  const double t_tol = 1e-12 * std::max(1.0, std::abs(st.t_end));
  long step = 0;
  while (s.t < st.t_end - t_tol) {
    if (step >= st.max_steps) throw Error("step budget exhausted at t = " + format_number(s.t));
    const std::string ctx = "step " + std::to_string(step + 1) + " at t = " + format_number(s.t) + ": ";
    try {
      const double dt = stable_dt(s, bathy, sc, st);
      const double t_next = s.t + dt;
      s = rk4_step(s, bathy, sc, dt, rhs);
      s.t = std::abs(st.t_end - t_next) <= t_tol ? st.t_end : t_next;
    } catch (const PositivityError& e) {
      rethrow_with_context(e, ctx);
    } catch (const NonConvergence& e) {
      rethrow_with_context(e, ctx);
    } catch (const GridMismatch& e) {
      rethrow_with_context(e, ctx);
    }
    ++step;
    const bool last = s.t >= st.t_end - t_tol;
    if (step % cfg.sample_every == 0 || last)
      res.trace = conservation_monitor(std::move(res.trace), make_sample(s, bathy, sc));
    if (linear_manifold && (step % cfg.sample_every == 0 || last))
      manifold.push_back(manifold_deviation(s, bathy, sc, *cfg.shear_omega));
    if (keep_snapshots) snaps.push(s);
  }
  res.steps = step;
  res.final_state = s;
  log("completed " + std::to_string(step) + " steps to t = " + format_number(s.t));

  if (!opts.write_files) return res;
  fs::create_directories(opts.output_dir);
  auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path p = opts.output_dir / name;
    write_file_atomic(p, content);
    res.files.push_back(p);
  };
  emit("trace.csv", trace_csv(res.trace));
  if (cfg.write_fields) {
    emit("fields_" + time_tag(initial.t) + ".csv", fields_csv(initial));
    if (step > 0) emit("fields_" + time_tag(s.t) + ".csv", fields_csv(s));
  }
  if (linear_manifold) {
    std::string out = "t,max_rel_E,max_rel_vsharp,max_abs_F\n";
    for (const ManifoldRow& r : manifold)
      out += format_number(r.t) + "," + format_number(r.rel_E) + "," +
             format_number(r.rel_vsharp) + "," + format_number(r.abs_F) + "\n";
    emit("manifold_deviation.csv", out);
  }

  if (cfg.reconstruction) {
    ShearLevels lv;
    const Grid g = cfg.grid();
    if (init.levels_profile) {
      LevelProfile qp;
      const Field h0 = derive_depth(initial, bathy, sc);
      const LevelProfile* qptr = nullptr;
      if (cfg.shear_kind == ScenarioConfig::ShearKind::Linear) {
        for (std::size_t k = 0; k < init.levels_profile->size(); ++k) {
          VectorField q = zero_vector(g);
          q[0] = *cfg.shear_omega * h0;
          qp.push_back(std::move(q));
        }
        qptr = &qp;
      } else if (cfg.shear_kind == ScenarioConfig::ShearKind::Polynomial) {
        qp = polynomial_q(h0, cfg.shear_coeffs, cfg.n_theta);
        qptr = &qp;
      }
      lv = make_shear_levels(*init.levels_profile, cfg.order, qptr);
    } else {
      lv = zero_shear_levels(g, cfg.n_theta, cfg.order);
    }
    lv.t = initial.t;
    emit("levels_" + time_tag(initial.t) + ".csv",
         levels_csv(reconstruct_velocity(lv, initial, bathy, sc, cfg.order), g));
    if (step > 0) {
      const double dt_levels = (s.t - initial.t) / static_cast<double>(step);
      lv = evolve_shear_levels(std::move(lv), snaps, bathy, sc, s.t, dt_levels);
      emit("levels_" + time_tag(s.t) + ".csv",
           levels_csv(reconstruct_velocity(lv, s, bathy, sc, cfg.order), g));
      if (cfg.tier == Tier::GnGeneral2d) {
        const VorticitySplit v0 = vertical_vorticity_split(initial, lv, bathy, sc);
        const Field omega0 =
            evolve_omega_bar0(v0.omega0, snaps, bathy, sc, initial.t, s.t, dt_levels);
        const VorticitySplit v1 = vertical_vorticity_split(s, lv, bathy, sc);
        std::string out = "x,y,omega0,omega1,omega\n";
        for (int j = 0; j < g.ny(); ++j)
          for (int i = 0; i < g.nx(); ++i)
            out += format_number(g.x(i)) + "," + format_number(g.y(j)) + "," +
                   format_number(omega0(i, j)) + "," + format_number(v1.omega1(i, j)) + "," +
                   format_number(omega0(i, j) + std::sqrt(sc.mu) * v1.omega1(i, j)) + "\n";
        emit("vorticity_" + time_tag(s.t) + ".csv", out);
      }
    }
  }

  std::ostringstream meta;
  meta << "version = " << kVersion << "\n";
  meta << "steps = " << step << "\n";
  meta << "t_final = " << format_number(s.t) << "\n";
  meta << "energy_units = "
       << (sc.physical ? "dimensional (J per unit width in 1D, J in 2D; mass in m^d+1)"
                       : "dimensionless (e_p = zeta^2/2, e_k = h|V|^2/2 + dispersive part, "
                         "e_rot = mu * closed form)")
       << "\n";
  meta << "cascade_initial_data = " << (init.unconstrained_cascade ? "unconstrained" : "constrained")
       << "\n";
  meta << "filter_delta = " << format_number(cfg.filter_delta) << "\n";
  meta << "max_mass_drift = " << format_number(res.trace.max_mass_drift()) << "\n";
  meta << "max_energy_drift = " << format_number(res.trace.max_energy_drift()) << "\n";
  for (const std::string& w : sc.regime_warnings()) meta << "warning = " << w << "\n";
  meta << "\n# config\n" << serialize_config(cfg);
  emit("meta.txt", meta.str());
  return res;
}

// ---------------------------------------------------------------------------
// Convergence study
// ---------------------------------------------------------------------------

std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& cfg,
                                              const std::vector<int>& grids,
                                              const std::vector<double>& dts,
                                              const fs::path& output_dir) {
  if (grids.size() < 3) throw DegenerateStudy("a convergence study needs at least 3 grids");
  for (std::size_t k = 1; k < grids.size(); ++k) {
    if (grids[k] == grids[k - 1]) throw DegenerateStudy("resolution listed twice");
    if (grids[k] != 2 * grids[k - 1])
      throw DegenerateStudy("grids must be nested: each resolution twice the previous");
  }
  if (!dts.empty() && dts.size() != grids.size())
    throw ValidationError("dts", "one step per grid is required");

  std::vector<ConvergenceRow> rows;
  std::vector<ModelState> finals;
  bool failed = false;
  std::string failure;
  for (std::size_t k = 0; k < grids.size(); ++k) {
    ScenarioConfig c = cfg;
    c.nx = grids[k];
    if (c.dim == 2) {
      if ((static_cast<long>(cfg.ny) * grids[k]) % cfg.nx != 0)
        throw ValidationError("grid.ny", "cannot be scaled with nx for this study");
      c.ny = static_cast<int>(static_cast<long>(cfg.ny) * grids[k] / cfg.nx);
    }
    c.reconstruction = false;
    if (!dts.empty()) c.fixed_dt = dts[k];
    ConvergenceRow row;
    row.n = grids[k];
    row.dx = c.lx / c.nx;
    row.dt = dts.empty() ? 0.0 : dts[k];
    try {
      RunOptions o;
      o.quiet = true;
      o.write_files = false;
      RunResult r = run_scenario(c, o);
      row.energy_drift = r.trace.energy_drift.back();
      finals.push_back(std::move(r.final_state));
    } catch (const std::exception& e) {
      row.status = std::string("failed: ") + e.what();
      failed = true;
      failure = e.what();
      rows.push_back(row);
      break;
    }
    rows.push_back(row);
  }
  const double nan = std::nan("");
  for (ConvergenceRow& r : rows) r.zeta_diff = r.zeta_order = r.energy_order = nan;
  for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
    const Field& a = finals[k].zeta;
    const Field& b = finals[k + 1].zeta;
    double m = 0.0;
    for (int j = 0; j < a.grid().ny(); ++j)
      for (int i = 0; i < a.grid().nx(); ++i)
        m = std::max(m, std::abs(a(i, j) - b(2 * i, a.grid().dim() == 2 ? 2 * j : 0)));
    rows[k].zeta_diff = m;
  }
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    if (std::isfinite(rows[k].zeta_diff) && std::isfinite(rows[k + 1].zeta_diff))
      rows[k].zeta_order = std::log2(rows[k].zeta_diff / rows[k + 1].zeta_diff);
    if (rows[k + 1].status == "ok")
      rows[k].energy_order = std::log2(rows[k].energy_drift / rows[k + 1].energy_drift);
  }

  std::string out = "n,dx,dt,zeta_diff,zeta_order,energy_drift,energy_order,status\n";
  for (const ConvergenceRow& r : rows)
    out += std::to_string(r.n) + "," + format_number(r.dx) + "," + format_number(r.dt) + "," +
           format_number(r.zeta_diff) + "," + format_number(r.zeta_order) + "," +
           format_number(r.energy_drift) + "," + format_number(r.energy_order) + "," +
           (failed && r.status == "ok" ? std::string("ok (partial table)") : r.status) + "\n";
  fs::create_directories(output_dir);
  write_file_atomic(output_dir / "convergence.csv", out);
  if (failed) throw Error("convergence study incomplete: " + failure);
  return rows;
}

// ---------------------------------------------------------------------------
// Built-in checks
// ---------------------------------------------------------------------------

int run_builtin_checks(std::ostream& out) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, double value) {
    out << (ok ? "PASS " : "FAIL ") << name << " (" << format_number(value) << ")\n";
    if (!ok) ++failures;
  };
  const double L = 20.0;
  const Grid g = Grid::line(128, L);
  ScaleParams sc;
  sc.epsilon = 0.2;
  sc.mu = 0.04;
  sc.beta = 0.1;
  const Bathymetry bathy{sample(g, [&](double x, double) { return std::cos(2 * M_PI * x / L); })};

  // rest state is a fixed point of every tier
  {
    double worst = 0.0;
    for (Tier t : {Tier::SaintVenant, Tier::GnIrrotational, Tier::GnConstVort1d, Tier::GnGeneral1d,
                   Tier::GnMedium1d}) {
      ScaleParams s0 = sc;
      s0.beta = 0.0;
      ModelState s = ModelState::zeros(t, g, 0.0);
      const Tendency td = compute_rhs(s, Bathymetry::flat(g), s0);
      worst = std::max({worst, td.d_zeta.max_abs(), max_abs(td.d_vbar)});
    }
    report("rest state is a fixed point", worst <= 1e-13, worst);
  }

  ModelState s = ModelState::zeros(Tier::GnIrrotational, g);
  s.zeta = sample(g, [&](double x, double) { return 0.5 * std::exp(-(x - 10) * (x - 10)); });
  s.vbar[0] = sample(g, [&](double x, double) { return 0.2 * std::sin(2 * M_PI * x / L); });

  // dispersive round trip
  {
    const Field h = derive_depth(s, bathy, sc);
    const VectorField rhs{sample(g, [&](double x, double) { return std::sin(3 * x) + 0.1; })};
    const VectorField v = invert_dispersive(h, bathy.b, rhs, sc);
    const double r = dispersive_residual(h, bathy.b, v, rhs, sc) / max_abs(rhs);
    report("dispersive solve round trip", r <= 1e-10, r);
  }

  // zero-shear general tier equals irrotational tier
  {
    ModelState gsx = ModelState::zeros(Tier::GnGeneral1d, g);
    gsx.zeta = s.zeta;
    gsx.vbar = s.vbar;
    const Tendency a = compute_rhs(s, bathy, sc);
    const Tendency b = compute_rhs(gsx, bathy, sc);
    const double d = std::max((a.d_zeta - b.d_zeta).max_abs(), max_abs(sub(a.d_vbar, b.d_vbar)));
    report("zero-shear manifold reduces to irrotational GN", d <= 1e-12, d);
  }

  // mass conservation over a few steps
  {
    StepSettings st;
    st.t_end = 0.2;
    const double m0 = integrate(s.zeta);
    const ModelState e = integrate(s, bathy, sc, st, make_rhs(bathy, sc));
    const double d = std::abs(integrate(e.zeta) - m0) / std::abs(m0);
    report("mass conservation", d <= 1e-12, d);
  }

  // constant vorticity flux identity at two resolutions
  {
    auto residual = [&](int n) {
      const Grid gg = Grid::line(n, L);
      const Field h = sample(gg, [&](double x, double) { return 1.0 + 0.2 * std::cos(2 * M_PI * x / L); });
      const VectorField vs{sample(gg, [&](double x, double) { return 1.0 + 0.3 * std::sin(4 * M_PI * x / L); })};
      const VectorField v{sample(gg, [&](double x, double) { return 0.5 * std::sin(2 * M_PI * x / L); })};
      const Field r = h * apply_C(h, vs, v, sc)[0] * v[0] - ddx(flux_C(h, vs, v)[0]);
      return r.max_abs();
    };
    const double order = std::log2(residual(128) / residual(256));
    report("C flux identity converges at second order", order >= 1.9, order);
  }
  return failures;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

int cli_main(int argc, char** argv) {
  CLI::App app{"Green-Naghdi solver with vorticity"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string output_dir = ".";
  bool quiet = false;
  app.add_option("--output-dir", output_dir, "Directory for output files");
  app.add_flag("--quiet", quiet, "Suppress progress messages");

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Run a scenario");
  run->add_option("config", run_config, "Scenario config file")->required();
  run->fallthrough();

  std::string conv_config, grids_arg, dts_arg;
  CLI::App* conv = app.add_subcommand("converge", "Convergence study over nested grids");
  conv->add_option("config", conv_config, "Scenario config file")->required();
  conv->add_option("--grids", grids_arg, "Comma-separated resolutions, e.g. 128,256,512")
      ->required();
  conv->add_option("--dts", dts_arg, "Comma-separated fixed time steps, one per grid");
  conv->fallthrough();

  CLI::App* check = app.add_subcommand("check", "Run the built-in invariant suite");
  check->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      const ScenarioConfig cfg = load_config(run_config);
      RunOptions o;
      o.output_dir = output_dir;
      o.quiet = quiet;
      const RunResult r = run_scenario(cfg, o);
      if (!quiet)
        std::cout << "wrote " << r.files.size() << " files to " << output_dir << "\n";
      return 0;
    }
    if (*conv) {
      const ScenarioConfig cfg = load_config(conv_config);
      std::vector<int> grids;
      for (const std::string& s : split(grids_arg, ',')) grids.push_back(parse_int(s, 0, "--grids"));
      std::vector<double> dts;
      if (!dts_arg.empty())
        for (const std::string& s : split(dts_arg, ',')) dts.push_back(parse_double(s, 0, "--dts"));
      const std::vector<ConvergenceRow> rows = convergence_study(cfg, grids, dts, output_dir);
      if (!quiet)
        for (const ConvergenceRow& r : rows)
          std::cout << "n = " << r.n << "  zeta_diff = " << format_number(r.zeta_diff)
                    << "  order = " << format_number(r.zeta_order) << "\n";
      return 0;
    }
    if (*check) {
      std::ostringstream os;
      const int failures = run_builtin_checks(os);
      if (!quiet || failures) std::cout << os.str();
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace gnvort
