#pragma once

// Run configuration (YAML), initial data, and run-directory artifacts.
//
// A run directory holds
//   config.yaml          exact snapshot of the resolved configuration
//   seed_manifest.json   master seed and per-path seeds
//   summary.json         ensemble summary
//   paths/path_NNNN.csv  monitor series per path (when output.per_path_csv is set)
//   sweep_r.csv          stopping fractions per cut-off radius (sweep-r)
//   replay/              re-runs of single paths

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qns/ensemble.hpp"

namespace qns::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kOutputRootEnv = "QNS_OUTPUT_ROOT";

enum ExitCode : int {
  kOk = 0,
  kRuntimeError = 1,
  kUsageError = 2,
  kConfigError = 3,
  kBlowupDominated = 4,
  kVerifyFailed = 5,
};

struct InitialConditionSpec {
  enum class Kind { constant, harmonic_perturbation, file };

  Kind kind = Kind::harmonic_perturbation;
  double rho0 = 1.0;
  double epsilon = 0.1;              // density perturbation amplitude
  std::vector<int> modes{1};
  double velocity_amplitude = 0.0;
  double random_amplitude = 0.0;     // per-path relative jitter of both amplitudes
  std::filesystem::path file;        // CSV with columns rho,u on the collocation points

  /// Guaranteed lower bound C^{-1} on the initial density of any path.
  double density_lower_bound() const;
  /// Guaranteed upper bound C on the initial density of any path.
  double density_upper_bound() const;
};

std::string to_string(InitialConditionSpec::Kind kind);

struct OutputSpec {
  std::optional<std::filesystem::path> directory;
  std::string run_name;
  int stride = 10;
  bool per_path_csv = true;
};

struct RunConfig {
  int n_collocation = 128;
  int m_modes = 42;
  bool dealias = true;
  ModelParams model;
  InitialConditionSpec initial;
  NoiseModel noise;
  StepConfig integration;
  EnsembleConfig ensemble;
  double beta = 1.0;
  OutputSpec output;
};

/// Parses and validates a configuration; every violation is collected into one
/// ConfigError. Relative file paths resolve against base_dir.
RunConfig parse_config(const std::string& yaml_text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
/// YAML text that parse_config maps back to an identical RunConfig.
std::string emit_config(const RunConfig& cfg);

TorusGrid make_grid(const RunConfig& cfg);
InitialFactory make_initial_factory(const RunConfig& cfg, const TorusGrid& grid);

/// Directory of a run: output.directory if set, otherwise
/// $QNS_OUTPUT_ROOT/<run_name> (or ./runs/<run_name>).
std::filesystem::path resolve_run_directory(const RunConfig& cfg);

// CSV (RFC 4180: CRLF line ends, quoting of fields with separators or quotes).
std::string csv_field(const std::string& value);
std::string format_double(double value);
const std::vector<std::string>& monitor_csv_header();
void write_monitor_csv(std::ostream& out, const std::vector<MonitorRecord>& records);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// JSON documents, each carrying "schema_version".
std::string summary_json(const EnsembleSummary& summary, const RunConfig& cfg);
std::string seed_manifest_json(const RunConfig& cfg);
std::string sweep_json(const std::vector<SweepRow>& rows);

struct SeedManifest {
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> path_seeds;
};
SeedManifest read_seed_manifest(const std::filesystem::path& path);

std::string path_csv_name(std::uint64_t index);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qns::io
