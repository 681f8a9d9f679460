#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "diraclab/derivative.hpp"
#include "diraclab/grid.hpp"
#include "diraclab/lax.hpp"
#include "diraclab/operators.hpp"
#include "diraclab/potentials.hpp"
#include "diraclab/spectral.hpp"

namespace diraclab {

enum class ExperimentKind {
  gauge_check,
  factorization_check,
  jsymmetry_check,
  positivity_check,
  spectrum,
  shooting,
  evolve,
  isospectral,
  zero_curvature,
  lax_check,
};

struct ExperimentInfo {
  ExperimentKind kind;
  const char* name;
  const char* description;
};

/// Fixed catalogue, in listing order.
const std::vector<ExperimentInfo>& experiment_catalog();
const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// One line per experiment: "<name>  <description>".
void print_experiment_list(std::ostream& out);

struct EvolutionParams {
  double dt = 1e-3;
  int steps = 1000;
  int snapshot_every = 250;
  Reduction flow = Reduction::focusing;
};

struct SpectralParams {
  SearchBox search_box{};
  double region_min_im = 0.1;
  int top_k = -1;
  int grid_density = 40;
  Expression expression = Expression::M;
  /// shooting: also compare the roots with the dense spectrum (periodic grid).
  bool dense_crosscheck = false;
};

/// How the space-time field of the zero-curvature and lax-check experiments
/// is produced from the configured potential.
struct SpaceTimeParams {
  enum class Source { exact, evolved };
  Source source = Source::exact;
  int slices = 5;
  double dt = 1e-3;
  Reduction reduction = Reduction::focusing;
  /// Extra phase rate added to the exact solution (negative controls).
  double phase_speed_error = 0.0;
  std::vector<Complex> probes{kZeroCurvatureProbes.begin(), kZeroCurvatureProbes.end()};
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::factorization_check;
  int m = 1;
  Grid grid{0.0, 1.0, 4, true};
  PotentialSpec potential;
  /// Potential document read from disk instead of `potential`.
  std::filesystem::path potential_file;
  DerivativeBackend backend{};
  EvolutionParams evolution{};
  SpectralParams spectral{};
  SpaceTimeParams space_time{};
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  bool expect_fail = false;
  /// Effective tolerances (defaults overridden by the config).
  std::map<std::string, double> tolerances;
};

/// Default tolerance table; the keys are the only accepted override names.
const std::map<std::string, double>& default_tolerances();

/// Validates a parsed config document. Throws DomainError on missing or
/// unknown keys and on out-of-range values. Relative paths resolve against
/// `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct CheckRow {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExperimentOutcome {
  std::vector<CheckRow> checks;
  nlohmann::json scalars = nlohmann::json::object();

  bool all_checks_pass() const;
  /// All checks pass, or, for `expect: fail`, at least one check fails.
  bool meets_expectation(bool expect_fail) const;
};

/// Runs the experiment and writes summary.json, residuals.csv and the
/// experiment-specific artifacts into config.output_dir.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

/// Exit codes of `run`.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitComputation = 3;

/// Loads, validates and runs a config file; messages go to `err`.
int run_config_file(const std::filesystem::path& path, std::ostream& err);

/// Smooth C^{2m}-valued field: a random combination of low Fourier modes
/// times a window cos^32(pi (x - c) / L) centred on the interval, so the
/// field and its derivatives nearly vanish at the ends of the grid.
SpinorField windowed_test_field(const Grid& grid, int m, std::uint64_t seed, int max_mode = 3);

}  // namespace diraclab
