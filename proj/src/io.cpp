#include "qns/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include <json.hpp>

#include "qns/errors.hpp"

namespace qns::io {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Collects every problem found while reading a config instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  YAML::Node section(const YAML::Node& root, const std::string& name,
                     const std::set<std::string>& allowed) {
    const YAML::Node node = root[name];
    if (!node) return YAML::Node(YAML::NodeType::Map);
    if (!node.IsMap()) {
      error(name, "must be a mapping", node);
      return YAML::Node(YAML::NodeType::Map);
    }
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) error(name + "." + key, "unknown key", kv.first);
    }
    return node;
  }

  template <class T>
  void read(const YAML::Node& node, const std::string& where, const std::string& key, T& out) {
    const YAML::Node v = node[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      error(where + "." + key, std::string("expected ") + type_name<T>(), v);
    }
  }

  void error(const std::string& field, const std::string& message, const YAML::Node& at) {
    std::string loc;
    if (at && at.Mark().line >= 0) loc = " (line " + std::to_string(at.Mark().line + 1) + ")";
    errors_.push_back(field + ": " + message + loc);
  }

 private:
  template <class T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else return "a list";
  }

  std::vector<std::string>& errors_;
};

template <class F>
void collect(std::vector<std::string>& errors, F&& check) {
  try {
    check();
  } catch (const std::invalid_argument& e) {
    errors.emplace_back(e.what());
  }
}

InitialConditionSpec::Kind initial_kind(const std::string& s) {
  if (s == "constant") return InitialConditionSpec::Kind::constant;
  if (s == "harmonic_perturbation") return InitialConditionSpec::Kind::harmonic_perturbation;
  if (s == "file") return InitialConditionSpec::Kind::file;
  throw ConfigError("model.initial.kind: unknown kind '" + s + "'");
}

struct FileProfile {
  std::vector<double> rho, u;
};

FileProfile read_profile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("model.initial.file: cannot open " + path.string());
  FileProfile p;
  std::string line;
  std::getline(in, line);
  if (line.rfind("rho,u", 0) != 0)
    throw ConfigError("model.initial.file: header must be 'rho,u'");
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string a, b;
    std::getline(row, a, ',');
    std::getline(row, b);
    try {
      p.rho.push_back(std::stod(a));
      p.u.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ConfigError("model.initial.file: malformed row '" + line + "'");
    }
  }
  return p;
}

std::string seed_string(std::uint64_t s) { return std::to_string(s); }

}  // namespace

double InitialConditionSpec::density_lower_bound() const {
  if (kind == Kind::file) {
    const auto p = read_profile(file);
    return p.rho.empty() ? 0.0 : *std::min_element(p.rho.begin(), p.rho.end());
  }
  if (kind == Kind::constant) return rho0;
  return rho0 - epsilon * (1.0 + random_amplitude);
}

double InitialConditionSpec::density_upper_bound() const {
  if (kind == Kind::file) {
    const auto p = read_profile(file);
    return p.rho.empty() ? 0.0 : *std::max_element(p.rho.begin(), p.rho.end());
  }
  if (kind == Kind::constant) return rho0;
  return rho0 + epsilon * (1.0 + random_amplitude);
}

std::string to_string(InitialConditionSpec::Kind kind) {
  switch (kind) {
    case InitialConditionSpec::Kind::constant: return "constant";
    case InitialConditionSpec::Kind::harmonic_perturbation: return "harmonic_perturbation";
    case InitialConditionSpec::Kind::file: return "file";
  }
  return "constant";
}

RunConfig parse_config(const std::string& yaml_text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("config is not valid YAML: " + std::string(e.what()));
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping of sections");

  std::vector<std::string> errors;
  Reader r(errors);
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    static const std::set<std::string> sections{"grid", "model", "noise", "integration",
                                                "ensemble", "output"};
    if (!sections.contains(key)) r.error(key, "unknown section", kv.first);
  }

  RunConfig cfg;
  const auto grid = r.section(root, "grid", {"n_collocation", "m_modes", "dealias"});
  r.read(grid, "grid", "n_collocation", cfg.n_collocation);
  r.read(grid, "grid", "m_modes", cfg.m_modes);
  r.read(grid, "grid", "dealias", cfg.dealias);

  const auto model = r.section(root, "model", {"gamma", "alpha", "cutoff_radius", "monitor_order",
                                               "enable_cutoff", "capillarity", "initial"});
  r.read(model, "model", "gamma", cfg.model.gamma);
  r.read(model, "model", "alpha", cfg.model.alpha);
  r.read(model, "model", "cutoff_radius", cfg.model.cutoff_radius);
  r.read(model, "model", "monitor_order", cfg.model.monitor_order);
  r.read(model, "model", "enable_cutoff", cfg.model.enable_cutoff);
  r.read(model, "model", "capillarity", cfg.model.capillarity);

  const auto initial =
      r.section(model, "initial", {"kind", "rho0", "epsilon", "modes", "velocity_amplitude",
                                   "random_amplitude", "file"});
  std::string kind = to_string(cfg.initial.kind);
  r.read(initial, "model.initial", "kind", kind);
  collect(errors, [&] { cfg.initial.kind = initial_kind(kind); });
  r.read(initial, "model.initial", "rho0", cfg.initial.rho0);
  r.read(initial, "model.initial", "epsilon", cfg.initial.epsilon);
  r.read(initial, "model.initial", "modes", cfg.initial.modes);
  r.read(initial, "model.initial", "velocity_amplitude", cfg.initial.velocity_amplitude);
  r.read(initial, "model.initial", "random_amplitude", cfg.initial.random_amplitude);
  std::string file;
  r.read(initial, "model.initial", "file", file);
  if (!file.empty()) cfg.initial.file = fs::path(file).is_absolute() ? fs::path(file) : base_dir / file;

  const auto noise =
      r.section(root, "noise", {"k_modes", "base_amplitude", "amplitude_decay", "shape"});
  r.read(noise, "noise", "k_modes", cfg.noise.k_modes);
  r.read(noise, "noise", "base_amplitude", cfg.noise.base_amplitude);
  r.read(noise, "noise", "amplitude_decay", cfg.noise.amplitude_decay);
  std::string shape = to_string(cfg.noise.shape);
  r.read(noise, "noise", "shape", shape);
  collect(errors, [&] { cfg.noise.shape = noise_shape_from_string(shape); });

  const auto integ = r.section(root, "integration",
                               {"dt", "t_end", "scheme", "implicit_visc_floor", "blowup_clamp",
                                "brownian_refinement", "stop_at_tau"});
  r.read(integ, "integration", "dt", cfg.integration.dt);
  r.read(integ, "integration", "t_end", cfg.integration.t_end);
  std::string scheme = to_string(cfg.integration.scheme);
  r.read(integ, "integration", "scheme", scheme);
  collect(errors, [&] { cfg.integration.scheme = scheme_from_string(scheme); });
  if (const auto floor = integ["implicit_visc_floor"]) {
    if (floor.IsScalar() && floor.Scalar() == "adaptive") {
      cfg.integration.implicit_visc_floor.reset();
    } else {
      double v = 0.0;
      r.read(integ, "integration", "implicit_visc_floor", v);
      cfg.integration.implicit_visc_floor = v;
    }
  }
  r.read(integ, "integration", "blowup_clamp", cfg.integration.blowup_clamp);
  r.read(integ, "integration", "brownian_refinement", cfg.integration.brownian_refinement);
  r.read(integ, "integration", "stop_at_tau", cfg.integration.stop_at_tau);

  const auto ens = r.section(root, "ensemble",
                             {"n_paths", "master_seed", "moment_orders", "r_sweep", "beta"});
  r.read(ens, "ensemble", "n_paths", cfg.ensemble.n_paths);
  r.read(ens, "ensemble", "master_seed", cfg.ensemble.master_seed);
  r.read(ens, "ensemble", "moment_orders", cfg.ensemble.moment_orders);
  r.read(ens, "ensemble", "r_sweep", cfg.ensemble.r_sweep);
  r.read(ens, "ensemble", "beta", cfg.beta);

  const auto out = r.section(root, "output", {"directory", "run_name", "stride", "per_path_csv"});
  std::string dir;
  r.read(out, "output", "directory", dir);
  if (!dir.empty()) cfg.output.directory = dir;
  r.read(out, "output", "run_name", cfg.output.run_name);
  r.read(out, "output", "stride", cfg.output.stride);
  r.read(out, "output", "per_path_csv", cfg.output.per_path_csv);
  cfg.ensemble.output_stride = cfg.output.stride;

  // Constraints owned by the individual modules.
  collect(errors, [&] { TorusGrid(cfg.n_collocation, cfg.m_modes, cfg.dealias); });
  collect(errors, [&] { cfg.model.validate(); });
  collect(errors, [&] { cfg.noise.validate(); });
  collect(errors, [&] { cfg.integration.validate(); });
  collect(errors, [&] { cfg.ensemble.validate(); });
  if (!(cfg.beta > 0.0)) errors.emplace_back("ensemble.beta: must be > 0");

  const auto& ic = cfg.initial;
  if (ic.kind != InitialConditionSpec::Kind::file) {
    if (!(ic.rho0 > 0.0)) errors.emplace_back("model.initial.rho0: must be > 0");
    if (!(ic.epsilon >= 0.0)) errors.emplace_back("model.initial.epsilon: must be >= 0");
    if (!(ic.random_amplitude >= 0.0))
      errors.emplace_back("model.initial.random_amplitude: must be >= 0");
    if (ic.kind == InitialConditionSpec::Kind::harmonic_perturbation &&
        !(ic.epsilon * (1.0 + ic.random_amplitude) < ic.rho0))
      errors.emplace_back(
          "model.initial.epsilon: epsilon * (1 + random_amplitude) must be < rho0");
    if (ic.modes.empty()) errors.emplace_back("model.initial.modes: must not be empty");
    for (int k : ic.modes)
      if (k < 1 || k > cfg.m_modes)
        errors.emplace_back("model.initial.modes: mode " + std::to_string(k) +
                            " outside [1, m_modes]");
  } else {
    collect(errors, [&] {
      const auto p = read_profile(ic.file);
      if (static_cast<int>(p.rho.size()) != cfg.n_collocation)
        throw ConfigError("model.initial.file: expected " + std::to_string(cfg.n_collocation) +
                          " rows, found " + std::to_string(p.rho.size()));
      for (double v : p.rho)
        if (!(v > 0.0)) throw ConfigError("model.initial.file: density must be > 0");
    });
  }
  if (cfg.output.stride < 1) errors.emplace_back("output.stride: must be >= 1");

  if (!errors.empty()) {
    std::string msg = "invalid configuration (" + std::to_string(errors.size()) + " problem" +
                      (errors.size() == 1 ? "" : "s") + "):";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  RunConfig cfg = parse_config(text.str(), path.parent_path());
  if (cfg.output.run_name.empty()) cfg.output.run_name = path.stem().string();
  return cfg;
}

std::string emit_config(const RunConfig& cfg) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_collocation" << YAML::Value << cfg.n_collocation;
  e << YAML::Key << "m_modes" << YAML::Value << cfg.m_modes;
  e << YAML::Key << "dealias" << YAML::Value << cfg.dealias;
  e << YAML::EndMap;

  e << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "gamma" << YAML::Value << cfg.model.gamma;
  e << YAML::Key << "alpha" << YAML::Value << cfg.model.alpha;
  e << YAML::Key << "cutoff_radius" << YAML::Value << cfg.model.cutoff_radius;
  e << YAML::Key << "monitor_order" << YAML::Value << cfg.model.monitor_order;
  e << YAML::Key << "enable_cutoff" << YAML::Value << cfg.model.enable_cutoff;
  e << YAML::Key << "capillarity" << YAML::Value << cfg.model.capillarity;
  e << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << to_string(cfg.initial.kind);
  e << YAML::Key << "rho0" << YAML::Value << cfg.initial.rho0;
  e << YAML::Key << "epsilon" << YAML::Value << cfg.initial.epsilon;
  e << YAML::Key << "modes" << YAML::Value << YAML::Flow << cfg.initial.modes;
  e << YAML::Key << "velocity_amplitude" << YAML::Value << cfg.initial.velocity_amplitude;
  e << YAML::Key << "random_amplitude" << YAML::Value << cfg.initial.random_amplitude;
  if (!cfg.initial.file.empty())
    e << YAML::Key << "file" << YAML::Value << fs::absolute(cfg.initial.file).string();
  e << YAML::EndMap << YAML::EndMap;

  e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "k_modes" << YAML::Value << cfg.noise.k_modes;
  e << YAML::Key << "base_amplitude" << YAML::Value << cfg.noise.base_amplitude;
  e << YAML::Key << "amplitude_decay" << YAML::Value << cfg.noise.amplitude_decay;
  e << YAML::Key << "shape" << YAML::Value << to_string(cfg.noise.shape);
  e << YAML::EndMap;

  e << YAML::Key << "integration" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dt" << YAML::Value << cfg.integration.dt;
  e << YAML::Key << "t_end" << YAML::Value << cfg.integration.t_end;
  e << YAML::Key << "scheme" << YAML::Value << to_string(cfg.integration.scheme);
  e << YAML::Key << "implicit_visc_floor" << YAML::Value;
  if (cfg.integration.implicit_visc_floor)
    e << *cfg.integration.implicit_visc_floor;
  else
    e << "adaptive";
  e << YAML::Key << "blowup_clamp" << YAML::Value << cfg.integration.blowup_clamp;
  e << YAML::Key << "brownian_refinement" << YAML::Value << cfg.integration.brownian_refinement;
  e << YAML::Key << "stop_at_tau" << YAML::Value << cfg.integration.stop_at_tau;
  e << YAML::EndMap;

  e << YAML::Key << "ensemble" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_paths" << YAML::Value << cfg.ensemble.n_paths;
  e << YAML::Key << "master_seed" << YAML::Value << cfg.ensemble.master_seed;
  e << YAML::Key << "moment_orders" << YAML::Value << YAML::Flow << cfg.ensemble.moment_orders;
  e << YAML::Key << "r_sweep" << YAML::Value << YAML::Flow << cfg.ensemble.r_sweep;
  e << YAML::Key << "beta" << YAML::Value << cfg.beta;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  if (cfg.output.directory)
    e << YAML::Key << "directory" << YAML::Value << cfg.output.directory->string();
  e << YAML::Key << "run_name" << YAML::Value << cfg.output.run_name;
  e << YAML::Key << "stride" << YAML::Value << cfg.output.stride;
  e << YAML::Key << "per_path_csv" << YAML::Value << cfg.output.per_path_csv;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

TorusGrid make_grid(const RunConfig& cfg) {
  return TorusGrid(cfg.n_collocation, cfg.m_modes, cfg.dealias);
}

InitialFactory make_initial_factory(const RunConfig& cfg, const TorusGrid& grid) {
  const InitialConditionSpec ic = cfg.initial;
  if (ic.kind == InitialConditionSpec::Kind::file) {
    const auto p = read_profile(ic.file);
    std::vector<double> psi(p.rho.size());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = std::log(p.rho[i]);
    const State s = make_state(grid, psi, p.u);
    return [s](std::uint64_t) { return s; };
  }
  return [ic, grid](std::uint64_t seed) {
    double jitter = 1.0;
    if (ic.random_amplitude > 0.0) {
      std::mt19937_64 engine(seed ^ 0xD1B54A32D192ED03ULL);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      jitter += ic.random_amplitude * unit(engine);
    }
    if (ic.kind == InitialConditionSpec::Kind::constant) {
      const double u0 = jitter * ic.velocity_amplitude;
      return state_from_functions(grid, [&](double) { return ic.rho0; },
                                  [&](double) { return u0; });
    }
    const double eps = jitter * ic.epsilon / static_cast<double>(ic.modes.size());
    const double vel = jitter * ic.velocity_amplitude / static_cast<double>(ic.modes.size());
    const double two_pi = 2.0 * std::acos(-1.0);
    return state_from_functions(
        grid,
        [&](double x) {
          double r = ic.rho0;
          for (int k : ic.modes) r += eps * std::cos(two_pi * k * x);
          return r;
        },
        [&](double x) {
          double v = 0.0;
          for (int k : ic.modes) v += vel * std::sin(two_pi * k * x);
          return v;
        });
  };
}

fs::path resolve_run_directory(const RunConfig& cfg) {
  if (cfg.output.directory) return *cfg.output.directory;
  const char* root = std::getenv(kOutputRootEnv);
  const fs::path base = (root != nullptr && *root != '\0') ? fs::path(root) : fs::path("runs");
  return base / (cfg.output.run_name.empty() ? "run" : cfg.output.run_name);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

const std::vector<std::string>& monitor_csv_header() {
  static const std::vector<std::string> header{
      "time",        "mass",        "energy",         "energy_dissipation_rate",
      "dissipation_integral",       "bd_entropy",     "bd_term_1",
      "bd_term_2",   "bd_term_3",   "min_rho",        "inv_rho_beta_norm",
      "hs_norm_psi", "hs_norm_u",   "w2inf_psi",      "w2inf_u",
      "ito_correction",             "energy_martingale", "budget"};
  return header;
}

void write_monitor_csv(std::ostream& out, const std::vector<MonitorRecord>& records) {
  const auto& header = monitor_csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(header[i]);
  out << "\r\n";
  for (const auto& r : records) {
    const double row[] = {r.time,
                          r.mass,
                          r.energy,
                          r.energy_dissipation_rate,
                          r.dissipation_integral,
                          r.bd_entropy,
                          r.bd_terms[0],
                          r.bd_terms[1],
                          r.bd_terms[2],
                          r.min_rho,
                          r.inv_rho_beta_norm,
                          r.hs_norms[0],
                          r.hs_norms[1],
                          r.w2inf_norms[0],
                          r.w2inf_norms[1],
                          r.ito_correction,
                          r.energy_martingale,
                          r.budget};
    for (std::size_t i = 0; i < std::size(row); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\r\n";
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "R,stopping_fraction,mean_stopping_time,paths\r\n";
  for (const auto& r : rows) {
    out << format_double(r.radius) << ',' << format_double(r.stopping_fraction) << ','
        << (r.mean_stopping_time ? format_double(*r.mean_stopping_time) : "") << ',' << r.paths
        << "\r\n";
  }
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    json row{{"R", r.radius},
             {"stopping_fraction", r.stopping_fraction},
             {"paths", r.paths},
             {"stopping_times", r.stopping_times}};
    row["mean_stopping_time"] = r.mean_stopping_time ? json(*r.mean_stopping_time) : json(nullptr);
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string summary_json(const EnsembleSummary& s, const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["run_name"] = cfg.output.run_name;
  j["n_paths"] = s.n_paths;
  j["completed"] = s.completed;
  j["tau_hits"] = s.tau_hits;
  j["blowups"] = s.blowups;
  j["blowup_fraction"] = s.blowup_fraction;
  j["stopping_fraction"] = s.stopping_fraction;
  j["degenerate"] = s.degenerate;
  j["mass_drift"] = s.max_mass_drift;
  j["noise_tail_bound"] = cfg.noise.tail_bound();
  j["vacuum"] = {{"min_rho", s.vacuum_min_rho},
                 {"max_inv_rho_beta", s.vacuum_max_inv_rho_beta},
                 {"beta", cfg.beta},
                 {"worst_min_rho_ratio", s.worst_min_rho_ratio},
                 {"global_regime", s.global_regime},
                 {"initial_density_lower_bound", cfg.initial.density_lower_bound()}};
  j["moments"] = json::array();
  for (const auto& m : s.moments) {
    json e{{"functional", m.functional}, {"order", m.order}, {"value", m.value}, {"paths", m.paths}};
    e["stderr"] = m.stderr_ ? json(*m.stderr_) : json(nullptr);
    j["moments"].push_back(e);
  }
  if (!s.sweep.empty()) j["sweep_r"] = json::parse(sweep_json(s.sweep))["rows"];
  return j.dump(2) + "\n";
}

std::string seed_manifest_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["master_seed"] = seed_string(cfg.ensemble.master_seed);
  j["n_paths"] = cfg.ensemble.n_paths;
  j["config"] = "config.yaml";
  j["paths"] = json::array();
  for (int i = 0; i < cfg.ensemble.n_paths; ++i) {
    const auto seed = path_seed(cfg.ensemble.master_seed, static_cast<std::uint64_t>(i));
    j["paths"].push_back({{"index", i}, {"seed", seed_string(seed)}});
  }
  return j.dump(2) + "\n";
}

SeedManifest read_seed_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read seed manifest " + path.string());
  try {
    const json j = json::parse(in);
    if (j.at("schema_version").get<int>() != kSchemaVersion)
      throw ConfigError("unsupported seed manifest schema version");
    SeedManifest m;
    m.master_seed = std::stoull(j.at("master_seed").get<std::string>());
    for (const auto& p : j.at("paths")) m.path_seeds.push_back(std::stoull(p.at("seed").get<std::string>()));
    return m;
  } catch (const json::exception& e) {
    throw ConfigError("malformed seed manifest: " + std::string(e.what()));
  }
}

std::string path_csv_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "path_%04llu.csv", static_cast<unsigned long long>(index));
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace qns::io
