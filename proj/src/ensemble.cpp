#include "qns/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "qns/errors.hpp"

namespace qns {
namespace {

double functional_value(const MonitorRecord& r, const std::string& name) {
  if (name == "energy") return r.energy;
  if (name == "bd_entropy") return r.bd_entropy;
  if (name == "dissipation_integral") return r.dissipation_integral;
  if (name == "inv_rho_beta_norm") return r.inv_rho_beta_norm;
  if (name == "budget") return r.budget;
  throw UsageError("unknown functional '" + name + "'");
}

template <class Body>
void for_each_path(int n, bool parallel, Body&& body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(qns_ensemble_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

EnsembleResult run(const EnsembleConfig& cfg, const InitialFactory& initial,
                   const StepConfig& step, const ModelParams& params, const NoiseModel& noise,
                   const TorusGrid& grid, const MonitorSpec& monitors, bool parallel) {
  cfg.validate();
  std::vector<PathSummary> paths(cfg.n_paths);
  for_each_path(cfg.n_paths, parallel, [&](int i) {
    paths[i] = run_path(static_cast<std::uint64_t>(i), cfg, initial, step, params, noise, grid,
                        monitors);
  });
  EnsembleResult result;
  result.summary = merge(paths, cfg, params);
  result.paths = std::move(paths);
  return result;
}

}  // namespace

const std::vector<std::string>& tracked_functionals() {
  static const std::vector<std::string> names{"energy", "bd_entropy", "dissipation_integral",
                                              "inv_rho_beta_norm", "budget"};
  return names;
}

void EnsembleConfig::validate() const {
  std::string errors;
  if (n_paths < 1) errors += "n_paths must be >= 1; ";
  if (output_stride < 1) errors += "output_stride must be >= 1; ";
  for (int p : moment_orders)
    if (p < 1 || p > 4) errors += "moment orders must lie in {1,2,3,4}; ";
  for (double r : r_sweep)
    if (!(r > 0.0)) errors += "r_sweep radii must be > 0; ";
  if (!errors.empty()) throw ConfigError("invalid ensemble configuration: " + errors);
}

PathSummary run_path(std::uint64_t index, const EnsembleConfig& cfg, const InitialFactory& initial,
                     const StepConfig& step, const ModelParams& params, const NoiseModel& noise,
                     const TorusGrid& grid, const MonitorSpec& monitors) {
  PathSummary s;
  s.index = index;
  s.seed = path_seed(cfg.master_seed, index);
  MonitorSpec spec = monitors;
  spec.stride = cfg.output_stride;
  PathResult r = simulate_path(initial(s.seed), step, params, noise, s.seed, grid, spec);
  s.event = r.event;
  s.steps = r.steps_taken;
  const auto vac = vacuum_statistics(r.records, params);
  s.initial_min_rho = vac.initial_min_rho;
  s.min_rho = vac.min_rho;
  s.max_inv_rho_beta = vac.max_inv_rho_beta;
  const double m0 = r.records.front().mass;
  for (const auto& rec : r.records)
    s.max_mass_drift = std::max(s.max_mass_drift, std::abs(rec.mass - m0) / m0);
  for (const auto& name : tracked_functionals()) {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& rec : r.records) v = std::max(v, functional_value(rec, name));
    s.sup[name] = v;
  }
  if (cfg.keep_records) s.records = std::move(r.records);
  return s;
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg, const InitialFactory& initial,
                            const StepConfig& step, const ModelParams& params,
                            const NoiseModel& noise, const TorusGrid& grid,
                            const MonitorSpec& monitors) {
  return run(cfg, initial, step, params, noise, grid, monitors, true);
}

EnsembleResult run_ensemble_serial(const EnsembleConfig& cfg, const InitialFactory& initial,
                                   const StepConfig& step, const ModelParams& params,
                                   const NoiseModel& noise, const TorusGrid& grid,
                                   const MonitorSpec& monitors) {
  return run(cfg, initial, step, params, noise, grid, monitors, false);
}

MomentEstimate estimate_moments(std::span<const PathSummary> paths, const std::string& functional,
                                int order) {
  if (paths.empty()) throw UsageError("moment estimate needs at least one path");
  if (order < 1) throw UsageError("moment order must be >= 1");
  std::vector<const PathSummary*> sorted;
  for (const auto& p : paths) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const PathSummary* a, const PathSummary* b) { return a->index < b->index; });

  std::vector<double> x;
  for (const auto* p : sorted) {
    const auto it = p->sup.find(functional);
    if (it == p->sup.end()) throw UsageError("functional '" + functional + "' not tracked");
    x.push_back(std::pow(it->second, order));
  }
  // Shifted by the first sample so that identical samples give an exact mean and zero spread.
  const auto n = static_cast<double>(x.size());
  double shift = 0.0;
  for (double v : x) shift += v - x.front();

  MomentEstimate e;
  e.functional = functional;
  e.order = order;
  e.value = x.front() + shift / n;
  e.paths = static_cast<int>(x.size());
  if (x.size() >= 2) {
    // Jackknife: leave-one-out means deviate from the full mean by (mean - x_i)/(n-1).
    double ss = 0.0;
    for (double v : x) {
      const double d = (e.value - v) / (n - 1.0);
      ss += d * d;
    }
    e.stderr_ = std::sqrt((n - 1.0) / n * ss);
  }
  return e;
}

EnsembleSummary merge(std::vector<PathSummary> paths, const EnsembleConfig& cfg,
                      const ModelParams& params) {
  if (paths.empty()) throw UsageError("cannot merge an empty ensemble");
  std::sort(paths.begin(), paths.end(),
            [](const PathSummary& a, const PathSummary& b) { return a.index < b.index; });
  EnsembleSummary s;
  s.n_paths = static_cast<int>(paths.size());
  s.vacuum_min_rho = std::numeric_limits<double>::infinity();
  s.worst_min_rho_ratio = std::numeric_limits<double>::infinity();
  for (const auto& p : paths) {
    switch (p.event.kind) {
      case StoppingEvent::Kind::completed: ++s.completed; break;
      case StoppingEvent::Kind::tau_R_hit: ++s.tau_hits; break;
      case StoppingEvent::Kind::numerical_blowup: ++s.blowups; break;
    }
    s.vacuum_min_rho = std::min(s.vacuum_min_rho, p.min_rho);
    s.vacuum_max_inv_rho_beta = std::max(s.vacuum_max_inv_rho_beta, p.max_inv_rho_beta);
    s.worst_min_rho_ratio = std::min(s.worst_min_rho_ratio, p.min_rho / p.initial_min_rho);
    s.max_mass_drift = std::max(s.max_mass_drift, p.max_mass_drift);
  }
  s.blowup_fraction = static_cast<double>(s.blowups) / s.n_paths;
  s.stopping_fraction = static_cast<double>(s.tau_hits) / s.n_paths;
  s.degenerate = s.blowups == s.n_paths;
  s.global_regime = params.global_regularity_regime();
  for (const auto& name : tracked_functionals())
    for (int p : cfg.moment_orders) s.moments.push_back(estimate_moments(paths, name, p));
  return s;
}

std::vector<SweepRow> sweep_r(const EnsembleConfig& cfg, const InitialFactory& initial,
                              const StepConfig& step, const ModelParams& params,
                              const NoiseModel& noise, const TorusGrid& grid) {
  cfg.validate();
  if (cfg.r_sweep.empty()) throw ConfigError("r_sweep is empty");
  StepConfig stepping = step;
  stepping.stop_at_tau = true;
  MonitorSpec monitors;
  monitors.stride = std::numeric_limits<int>::max();
  monitors.track_budget = false;

  std::vector<SweepRow> rows;
  for (double radius : cfg.r_sweep) {
    ModelParams p = params;
    p.cutoff_radius = radius;
    std::vector<StoppingEvent> events(cfg.n_paths);
    for_each_path(cfg.n_paths, true, [&](int i) {
      const std::uint64_t seed = path_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
      events[i] = simulate_path(initial(seed), stepping, p, noise, seed, grid, monitors).event;
    });
    SweepRow row;
    row.radius = radius;
    row.paths = cfg.n_paths;
    int stopped = 0;
    double total_time = 0.0;
    for (const auto& e : events) {
      if (e.kind == StoppingEvent::Kind::completed) {
        row.stopping_times.push_back(e.time);
        continue;
      }
      ++stopped;
      total_time += e.time;
      row.stopping_times.push_back(e.time);
    }
    row.stopping_fraction = static_cast<double>(stopped) / cfg.n_paths;
    if (stopped > 0) row.mean_stopping_time = total_time / stopped;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qns
