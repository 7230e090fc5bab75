#pragma once

// Monte Carlo ensembles of independent paths. Path i is driven by the seed lineage
// path_seed(master_seed, i); per-path results are merged in path-index order so the
// summary does not depend on completion order or thread count.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qns/integrator.hpp"

namespace qns {

struct EnsembleConfig {
  int n_paths = 16;
  std::uint64_t master_seed = 0;
  std::vector<int> moment_orders{1, 2};
  std::vector<double> r_sweep;  // cut-off radii for the stopping-time study
  int output_stride = 1;
  bool keep_records = false;    // retain full monitor series per path

  void validate() const;
};

/// Initial state of a path given its seed (random initial data share the lineage).
using InitialFactory = std::function<State(std::uint64_t path_seed)>;

struct PathSummary {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  StoppingEvent event;
  std::int64_t steps = 0;
  double initial_min_rho = 0.0;
  double min_rho = 0.0;
  double max_inv_rho_beta = 0.0;
  double max_mass_drift = 0.0;        // max_t |M(t) - M(0)| / M(0)
  std::map<std::string, double> sup;  // sup over recorded times of each functional
  std::vector<MonitorRecord> records;

  friend bool operator==(const PathSummary&, const PathSummary&) = default;
};

/// Functionals whose time-sup is tracked per path.
const std::vector<std::string>& tracked_functionals();

struct MomentEstimate {
  std::string functional;
  int order = 1;
  double value = 0.0;
  std::optional<double> stderr_;  // jackknife; absent for fewer than two paths
  int paths = 0;

  friend bool operator==(const MomentEstimate&, const MomentEstimate&) = default;
};

struct SweepRow {
  double radius = 0.0;
  double stopping_fraction = 0.0;
  std::optional<double> mean_stopping_time;  // among stopped paths
  int paths = 0;
  std::vector<double> stopping_times;        // per path, t_end when not stopped

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct EnsembleSummary {
  int n_paths = 0;
  int completed = 0;
  int tau_hits = 0;
  int blowups = 0;
  double blowup_fraction = 0.0;
  double stopping_fraction = 0.0;
  bool degenerate = false;  // every path blew up
  std::vector<MomentEstimate> moments;
  double vacuum_min_rho = 0.0;
  double vacuum_max_inv_rho_beta = 0.0;
  double worst_min_rho_ratio = 0.0;  // min over paths of min_rho / initial min_rho
  bool global_regime = false;
  double max_mass_drift = 0.0;
  std::vector<SweepRow> sweep;

  friend bool operator==(const EnsembleSummary&, const EnsembleSummary&) = default;
};

struct EnsembleResult {
  EnsembleSummary summary;
  std::vector<PathSummary> paths;  // ordered by path index
};

/// One path of the ensemble.
PathSummary run_path(std::uint64_t index, const EnsembleConfig& cfg, const InitialFactory& initial,
                     const StepConfig& step, const ModelParams& params, const NoiseModel& noise,
                     const TorusGrid& grid, const MonitorSpec& monitors = {});

/// Paths in parallel (OpenMP).
EnsembleResult run_ensemble(const EnsembleConfig& cfg, const InitialFactory& initial,
                            const StepConfig& step, const ModelParams& params,
                            const NoiseModel& noise, const TorusGrid& grid,
                            const MonitorSpec& monitors = {});

/// Same computation on one thread; reference for tests and benchmarks.
EnsembleResult run_ensemble_serial(const EnsembleConfig& cfg, const InitialFactory& initial,
                                   const StepConfig& step, const ModelParams& params,
                                   const NoiseModel& noise, const TorusGrid& grid,
                                   const MonitorSpec& monitors = {});

/// Builds the summary from per-path results given in any order.
EnsembleSummary merge(std::vector<PathSummary> paths, const EnsembleConfig& cfg,
                      const ModelParams& params);

/// Sample mean of (sup_t functional)^p over paths with jackknife standard error.
MomentEstimate estimate_moments(std::span<const PathSummary> paths, const std::string& functional,
                                int order);

/// Replays every path once per radius in cfg.r_sweep with stopping at tau_R.
std::vector<SweepRow> sweep_r(const EnsembleConfig& cfg, const InitialFactory& initial,
                              const StepConfig& step, const ModelParams& params,
                              const NoiseModel& noise, const TorusGrid& grid);

}  // namespace qns
