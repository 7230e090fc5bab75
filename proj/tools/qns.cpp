// qns: command-line driver for the stochastic quantum Navier-Stokes simulator.
//
//   qns simulate CONFIG        run the ensemble described by CONFIG
//   qns verify [SUITE]         identity / inequality / noise / convergence checks
//   qns sweep-r CONFIG         stopping fraction for every radius in ensemble.r_sweep
//   qns replay RUN_DIR -p I    re-run path I of a finished run from its seed manifest

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qns/errors.hpp"
#include "qns/io.hpp"
#include "qns/verify.hpp"

namespace fs = std::filesystem;
using namespace qns;

namespace {

io::RunConfig load(const std::string& path, const std::string& output_dir) {
  io::RunConfig cfg = io::load_config(path);
  if (!output_dir.empty()) cfg.output.directory = output_dir;
  return cfg;
}

void prepare_run_directory(const fs::path& dir, const io::RunConfig& cfg) {
  fs::create_directories(dir);
  io::write_text(dir / "config.yaml", io::emit_config(cfg));
  io::write_text(dir / "seed_manifest.json", io::seed_manifest_json(cfg));
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int cmd_simulate(const std::string& config_path, const std::string& output_dir) {
  io::RunConfig cfg = load(config_path, output_dir);
  const TorusGrid grid = io::make_grid(cfg);
  const fs::path dir = io::resolve_run_directory(cfg);
  prepare_run_directory(dir, cfg);

  EnsembleConfig ens = cfg.ensemble;
  ens.keep_records = cfg.output.per_path_csv;
  MonitorSpec monitors;
  monitors.beta = cfg.beta;
  const auto result = run_ensemble(ens, io::make_initial_factory(cfg, grid), cfg.integration,
                                   cfg.model, cfg.noise, grid, monitors);
  if (cfg.output.per_path_csv) {
    for (const auto& p : result.paths) {
      std::ostringstream csv;
      io::write_monitor_csv(csv, p.records);
      io::write_text(dir / "paths" / io::path_csv_name(p.index), csv.str());
    }
  }
  io::write_text(dir / "summary.json", io::summary_json(result.summary, cfg));

  const auto& s = result.summary;
  std::cout << "run directory: " << dir.string() << "\n"
            << "paths: " << s.n_paths << " completed=" << s.completed << " tau_R=" << s.tau_hits
            << " blowup=" << s.blowups << "\n"
            << "max relative mass drift: " << s.max_mass_drift << "\n"
            << "min rho over ensemble: " << s.vacuum_min_rho
            << " (worst ratio to initial " << s.worst_min_rho_ratio << ")\n";
  return s.blowup_fraction > 0.5 ? io::kBlowupDominated : io::kOk;
}

int cmd_verify(const std::string& suite, const std::string& json_path) {
  const auto results = verify::run_suite(suite);
  std::cout << verify::format_table(results);
  if (!json_path.empty()) io::write_text(json_path, verify::to_json(results));
  const bool ok = verify::all_passed(results);
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
  return ok ? io::kOk : io::kVerifyFailed;
}

int cmd_sweep_r(const std::string& config_path, const std::string& output_dir) {
  io::RunConfig cfg = load(config_path, output_dir);
  if (cfg.ensemble.r_sweep.empty())
    throw ConfigError("invalid configuration (1 problem):\n  - ensemble.r_sweep: required by sweep-r");
  const TorusGrid grid = io::make_grid(cfg);
  const fs::path dir = io::resolve_run_directory(cfg);
  prepare_run_directory(dir, cfg);

  const auto rows = sweep_r(cfg.ensemble, io::make_initial_factory(cfg, grid), cfg.integration,
                            cfg.model, cfg.noise, grid);
  std::ostringstream csv;
  io::write_sweep_csv(csv, rows);
  io::write_text(dir / "sweep_r.csv", csv.str());
  io::write_text(dir / "sweep_r.json", io::sweep_json(rows));
  std::cout << "run directory: " << dir.string() << "\n" << csv.str();
  return io::kOk;
}

int cmd_replay(const std::string& run_dir, std::uint64_t index) {
  const fs::path dir(run_dir);
  io::RunConfig cfg = io::load_config(dir / "config.yaml");
  const auto manifest = io::read_seed_manifest(dir / "seed_manifest.json");
  if (index >= manifest.path_seeds.size())
    throw UsageError("path index " + std::to_string(index) + " not in manifest");
  if (manifest.master_seed != cfg.ensemble.master_seed ||
      manifest.path_seeds[index] != path_seed(manifest.master_seed, index))
    throw ConfigError("seed manifest does not match config.yaml");

  const TorusGrid grid = io::make_grid(cfg);
  EnsembleConfig ens = cfg.ensemble;
  ens.keep_records = true;
  MonitorSpec monitors;
  monitors.beta = cfg.beta;
  const auto path = run_path(index, ens, io::make_initial_factory(cfg, grid), cfg.integration,
                             cfg.model, cfg.noise, grid, monitors);
  std::ostringstream csv;
  io::write_monitor_csv(csv, path.records);
  const fs::path out = dir / "replay" / io::path_csv_name(index);
  io::write_text(out, csv.str());
  std::cout << "replayed path " << index << " (seed " << path.seed << ", "
            << to_string(path.event.kind) << " at t=" << path.event.time << ") -> "
            << out.string() << "\n";

  const fs::path original = dir / "paths" / io::path_csv_name(index);
  if (fs::exists(original)) {
    const bool same = read_file(original) == csv.str();
    std::cout << (same ? "identical to " : "DIFFERS from ") << original.string() << "\n";
    return same ? io::kOk : io::kRuntimeError;
  }
  return io::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic quantum Navier-Stokes simulator on the 1-D torus"};
  app.require_subcommand(1);
  std::string config, output_dir, suite = "all", json_path, run_dir;
  std::uint64_t index = 0;

  auto* sim = app.add_subcommand("simulate", "Run a single path or an ensemble");
  sim->add_option("config", config, "YAML run configuration")->required();
  sim->add_option("-o,--output", output_dir, "Run directory (overrides output.directory)");

  auto* ver = app.add_subcommand("verify", "Run verification suites");
  ver->add_option("suite", suite, "identities | inequality-916 | noise | convergence | all");
  ver->add_option("--json", json_path, "Also write the report as JSON");

  auto* sweep = app.add_subcommand("sweep-r", "Stopping fraction versus cut-off radius");
  sweep->add_option("config", config, "YAML run configuration with ensemble.r_sweep")->required();
  sweep->add_option("-o,--output", output_dir, "Run directory (overrides output.directory)");

  auto* rep = app.add_subcommand("replay", "Re-run one path of a finished run");
  rep->add_option("run_dir", run_dir, "Run directory holding config.yaml and seed_manifest.json")
      ->required();
  rep->add_option("-p,--path", index, "Path index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? io::kOk : io::kUsageError;
  }

  try {
    if (*sim) return cmd_simulate(config, output_dir);
    if (*ver) return cmd_verify(suite, json_path);
    if (*sweep) return cmd_sweep_r(config, output_dir);
    if (*rep) return cmd_replay(run_dir, index);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return io::kConfigError;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return io::kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io::kRuntimeError;
  }
  return io::kUsageError;
}
