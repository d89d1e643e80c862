#pragma once

// Scenario configuration (INI text), run orchestration, CSV output and the
// convergence-study driver behind the `gnvort` executable.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gnvort/diagnostics.hpp"
#include "gnvort/reconstruct.hpp"
#include "gnvort/timestep.hpp"

namespace gnvort {

struct ScenarioConfig {
  Tier tier = Tier::SaintVenant;

  int dim = 1;
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;

  ScaleParams scales;

  enum class BathyKind { Flat, Sinusoidal, File };
  BathyKind bathy_kind = BathyKind::Flat;
  double bathy_amplitude = 0.0;
  double bathy_wavenumber = 1.0;  // periods across the x extent
  std::string bathy_file;

  enum class InitialKind { Rest, GaussianHump, File };
  InitialKind initial_kind = InitialKind::Rest;
  double init_amplitude = 0.0;
  double init_x0 = 0.0;
  double init_y0 = 0.0;
  double init_sigma = 1.0;
  std::string initial_file;

  enum class ShearKind { None, Linear, Polynomial, File };
  ShearKind shear_kind = ShearKind::None;
  std::optional<double> shear_omega;
  std::vector<double> shear_coeffs;  // V*_theta = h * sum_k c_k theta^k, then starred
  std::string shear_file;

  double t_end = 1.0;
  double cfl = 0.4;
  std::optional<double> fixed_dt;
  double filter_delta = 0.0;

  int sample_every = 1;  // steps between trace rows
  bool write_fields = true;
  bool reconstruction = false;
  int n_theta = 9;
  ReconstructionOrder order = ReconstructionOrder::First;

  bool operator==(const ScenarioConfig&) const = default;

  Grid grid() const;
  StepSettings step_settings() const;
};

/// Parses the INI text. Relative file references are resolved against
/// `base_dir` when checking that they exist. Throws ParseError for syntax,
/// unknown sections/keys and malformed values, ValidationError otherwise.
ScenarioConfig parse_config(std::string_view text,
                            const std::filesystem::path& base_dir = std::filesystem::path("."));

/// Reads and parses a config file; file references become absolute.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Normalized text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

/// Cross-field checks (tier/shear compatibility, ranges).
void validate_config(const ScenarioConfig& cfg);

Bathymetry make_bathymetry(const ScenarioConfig& cfg);

struct InitialData {
  ModelState state;
  /// Shear profile on the reconstruction levels (starred), if any.
  std::optional<LevelProfile> levels_profile;
  /// True when the cascade fields were given directly rather than derived
  /// from a shear profile or closed forms.
  bool unconstrained_cascade = false;
};

InitialData make_initial_data(const ScenarioConfig& cfg, const Bathymetry& bathy);

struct RunOptions {
  std::filesystem::path output_dir = ".";
  bool quiet = false;
  bool write_files = true;
};

struct RunResult {
  ModelState final_state;
  ConservationTrace trace;
  long steps = 0;
  std::vector<std::filesystem::path> files;
};

/// Main solve to t_end with conservation sampling, optional decoupled
/// level-line reconstruction, then output files.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

struct ConvergenceRow {
  int n = 0;
  double dx = 0.0;
  double dt = 0.0;  // 0 when the CFL controller chose the step
  double zeta_diff = 0.0;      // max |zeta_n - zeta_2n| on shared points
  double zeta_order = 0.0;     // NaN where undefined
  double energy_drift = 0.0;
  double energy_order = 0.0;
  std::string status = "ok";
};

/// Runs the scenario at every x-resolution in `grids` (nested, each twice
/// the previous) and writes `convergence.csv` into `output_dir`. `dts`, if
/// non-empty, gives a fixed step per grid. Throws DegenerateStudy for fewer
/// than three grids, repeats or non-nested grids.
std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& cfg,
                                              const std::vector<int>& grids,
                                              const std::vector<double>& dts,
                                              const std::filesystem::path& output_dir);

/// Built-in invariant suite; prints one PASS/FAIL line per check and returns
/// the number of failures.
int run_builtin_checks(std::ostream& out);

/// Entry point of the `gnvort` executable.
int cli_main(int argc, char** argv);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Number formatting used by every output file (17 significant digits).
std::string format_number(double v);

}  // namespace gnvort
