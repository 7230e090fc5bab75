#include "qns/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "qns/errors.hpp"
#include "qns/model_internal.hpp"

namespace qns {
namespace {

using Spectrum = std::vector<Complex>;

Spectrum coefficients(const RealField& f) { return {f.spectral().begin(), f.spectral().end()}; }

double min_exp(std::span<const double> psi, double factor) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : psi) m = std::min(m, std::exp(factor * v));
  return m;
}

struct StepTerms {
  double ito_correction = 0.0;
  double martingale = 0.0;
};

class Stepper {
 public:
  Stepper(const StepConfig& cfg, const ModelParams& params, const NoiseModel& noise,
          const TorusGrid& grid)
      : cfg_(cfg), params_(params), noise_(noise), grid_(grid) {}

  State advance(const State& s, std::span<const double> dW, StepTerms* diag = nullptr) const {
    State next = cfg_.scheme == Scheme::explicit_rk4_det ? rk4(s) : imex(s, dW, diag);
    next.time = s.time + cfg_.dt;
    check_state(next, cfg_.blowup_clamp);
    return next;
  }

 private:
  // Increments of the forcing and the Ito energy budget at the left point.
  RealField noise_terms(const State& s, std::span<const double> dW, double phi_u,
                        StepTerms* diag) const {
    if (noise_.is_zero()) return RealField::constant(grid_, 0.0);
    if (diag != nullptr && phi_u != 0.0) {
      const int n = grid_.n();
      const auto psi = s.psi.physical();
      const auto u = s.u.physical();
      double ito = 0.0, mart = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        const double rho = std::exp(psi[i]);
        double sq = 0.0, lin = 0.0;
        for (int k = 1; k <= noise_.k_modes; ++k) {
          const double f = noise_.spatial(k, x);
          sq += f * f;
          lin += f * dW[k - 1];
        }
        const double g = phi_u * noise_.state_factor(rho, u[i]);
        ito += rho * g * g * sq;
        mart += rho * u[i] * g * lin;
      }
      diag->ito_correction = 0.5 * cfg_.dt * ito / n;
      diag->martingale = mart / n;
    }
    return forcing_field(s, dW, phi_u, noise_, grid_);
  }

  internal::ExplicitRhs nonlinear(const State& s, double nu_bar) const {
    const auto d = internal::derivatives(s, grid_);
    return internal::explicit_rhs(s, params_, grid_, d, internal::norms_from(s, d), nu_bar);
  }

  State imex(const State& s, std::span<const double> dW, StepTerms* diag) const {
    const auto d = internal::derivatives(s, grid_);
    const Norms norms = internal::norms_from(s, d);
    const auto [phi_u, phi_psi] = cutoff_factors(norms, params_);
    const double nu_bar = cfg_.implicit_visc_floor.value_or(
        phi_psi * min_exp(s.psi.physical(), params_.alpha - 1.0));

    const auto ex0 = internal::explicit_rhs(s, params_, grid_, d, norms, nu_bar);
    const RealField xi = noise_terms(s, dW, phi_u, diag);

    Spectrum np = coefficients(ex0.psi);
    Spectrum nu = coefficients(ex0.u);
    State out = solve(s, np, nu, xi, nu_bar);
    if (cfg_.scheme == Scheme::imex_cn_heun) {
      const auto ex1 = nonlinear(out, nu_bar);
      for (std::size_t j = 0; j < np.size(); ++j) {
        np[j] = 0.5 * (np[j] + ex1.psi.spectral()[j]);
        nu[j] = 0.5 * (nu[j] + ex1.u.spectral()[j]);
      }
      out = solve(s, np, nu, xi, nu_bar);
    }
    return out;
  }

  // (I - dt/2 L) y1 = (I + dt/2 L) y0 + dt N + (0, xi) for every mode |j| <= m.
  State solve(const State& s, const Spectrum& np, const Spectrum& nu, const RealField& xi,
              double nu_bar) const {
    const auto p0 = s.psi.spectral();
    const auto u0 = s.u.spectral();
    const auto f = xi.spectral();
    const double h = 0.5 * cfg_.dt;
    const double c = 0.5 * params_.capillarity;
    const Complex I(0.0, 1.0);
    Spectrum p1(p0.size(), Complex{}), u1(u0.size(), Complex{});
    const int n = grid_.n();
    for (int j = 0; j <= grid_.m(); ++j) {
      const double k = TorusGrid::wavenumber(j);
      const double k_odd = 2 * j == n ? 0.0 : k;  // odd derivatives vanish at Nyquist
      const double k2 = k * k;
      const double k3 = k_odd * k2;
      const Complex rp = p0[j] - I * h * k_odd * u0[j] + cfg_.dt * np[j];
      const Complex ru = -I * h * c * k3 * p0[j] + (1.0 - h * nu_bar * k2) * u0[j] +
                         cfg_.dt * nu[j] + f[j];
      const double a22 = 1.0 + h * nu_bar * k2;
      const double det = a22 + h * h * c * k_odd * k3;
      p1[j] = (a22 * rp - I * h * k_odd * ru) / det;
      u1[j] = (-I * h * c * k3 * rp + ru) / det;
    }
    return {RealField::from_spectral(grid_, std::move(p1)),
            RealField::from_spectral(grid_, std::move(u1)), s.time};
  }

  State rk4(const State& s) const {
    const double dt = cfg_.dt;
    auto rhs = [&](const State& y) {
      const auto r = evaluate_rhs(y, params_, grid_);
      return std::pair{coefficients(r.dpsi_dt), coefficients(r.du_dt_deterministic)};
    };
    auto shifted = [&](const std::pair<Spectrum, Spectrum>& k, double w) {
      Spectrum p = coefficients(s.psi), u = coefficients(s.u);
      for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] += w * k.first[j];
        u[j] += w * k.second[j];
      }
      State y{RealField::from_spectral(grid_, std::move(p)),
              RealField::from_spectral(grid_, std::move(u)), s.time};
      check_state(y, cfg_.blowup_clamp);
      return y;
    };
    const auto k1 = rhs(s);
    const auto k2 = rhs(shifted(k1, 0.5 * dt));
    const auto k3 = rhs(shifted(k2, 0.5 * dt));
    const auto k4 = rhs(shifted(k3, dt));
    Spectrum p = coefficients(s.psi), u = coefficients(s.u);
    for (std::size_t j = 0; j < p.size(); ++j) {
      p[j] += dt / 6.0 * (k1.first[j] + 2.0 * k2.first[j] + 2.0 * k3.first[j] + k4.first[j]);
      u[j] += dt / 6.0 * (k1.second[j] + 2.0 * k2.second[j] + 2.0 * k3.second[j] + k4.second[j]);
    }
    return {RealField::from_spectral(grid_, std::move(p)),
            RealField::from_spectral(grid_, std::move(u)), s.time};
  }

  const StepConfig& cfg_;
  const ModelParams& params_;
  const NoiseModel& noise_;
  const TorusGrid& grid_;
};

void check_scheme_noise(const StepConfig& cfg, const NoiseModel& noise) {
  if (cfg.scheme == Scheme::explicit_rk4_det && !noise.is_zero())
    throw ConfigError("explicit_rk4_det is deterministic; set base_amplitude to 0");
}

std::vector<double> increments_for(const StepConfig& cfg, const NoiseModel& noise,
                                   std::uint64_t path_seed, std::int64_t step_index) {
  if (noise.is_zero()) return std::vector<double>(noise.k_modes, 0.0);
  return refined_increment(path_seed, step_index, cfg.dt, cfg.brownian_refinement, noise).dW;
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::imex_cn: return "imex_cn";
    case Scheme::imex_cn_heun: return "imex_cn_heun";
    case Scheme::explicit_rk4_det: return "explicit_rk4_det";
  }
  return "imex_cn";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "imex_cn") return Scheme::imex_cn;
  if (name == "imex_cn_heun") return Scheme::imex_cn_heun;
  if (name == "explicit_rk4_det") return Scheme::explicit_rk4_det;
  throw ConfigError("unknown scheme '" + name + "'");
}

std::string to_string(StoppingEvent::Kind kind) {
  switch (kind) {
    case StoppingEvent::Kind::tau_R_hit: return "tau_R_hit";
    case StoppingEvent::Kind::numerical_blowup: return "numerical_blowup";
    case StoppingEvent::Kind::completed: return "completed";
  }
  return "completed";
}

std::string to_string(StoppingEvent::Field field) {
  switch (field) {
    case StoppingEvent::Field::psi: return "psi";
    case StoppingEvent::Field::u: return "u";
    case StoppingEvent::Field::none: return "none";
  }
  return "none";
}

void StepConfig::validate() const {
  std::string errors;
  if (!(dt > 0.0)) errors += "dt must be > 0; ";
  if (!(t_end > 0.0)) errors += "t_end must be > 0; ";
  if (dt > t_end) errors += "dt must not exceed t_end; ";
  if (implicit_visc_floor && !(*implicit_visc_floor >= 0.0))
    errors += "implicit_visc_floor must be >= 0; ";
  if (!(blowup_clamp > 0.0)) errors += "blowup_clamp must be > 0; ";
  if (brownian_refinement < 1) errors += "brownian_refinement must be >= 1; ";
  if (!errors.empty()) throw ConfigError("invalid step configuration: " + errors);
}

std::int64_t StepConfig::steps() const { return std::llround(t_end / dt); }

State step(const State& state, const StepConfig& cfg, const ModelParams& params,
           const NoiseModel& noise, std::span<const double> dW, const TorusGrid& grid) {
  check_scheme_noise(cfg, noise);
  check_state(state, cfg.blowup_clamp);
  return Stepper(cfg, params, noise, grid).advance(state, dW);
}

State step(const State& state, const StepConfig& cfg, const ModelParams& params,
           const NoiseModel& noise, std::uint64_t path_seed, std::int64_t step_index,
           const TorusGrid& grid) {
  const auto dW = increments_for(cfg, noise, path_seed, step_index);
  return step(state, cfg, params, noise, dW, grid);
}

PathResult simulate_path(const State& initial, const StepConfig& cfg, const ModelParams& params,
                         const NoiseModel& noise, std::uint64_t path_seed,
                         const TorusGrid& grid, const MonitorSpec& monitors) {
  cfg.validate();
  params.validate();
  noise.validate();
  check_scheme_noise(cfg, noise);
  if (monitors.stride < 1) throw ConfigError("monitor stride must be >= 1");

  const Stepper stepper(cfg, params, noise, grid);
  const std::int64_t n_steps = cfg.steps();
  PathResult result;
  State s = initial;
  const double t0 = initial.time;
  double dissipation = 0.0, ito = 0.0, martingale = 0.0;

  auto record = [&](const State& st) {
    MonitorRecord r = monitor_record(st, params, grid, monitors.beta);
    r.dissipation_integral = dissipation;
    r.ito_correction = ito;
    r.energy_martingale = martingale;
    result.records.push_back(r);
  };

  for (std::int64_t i = 0;; ++i) {
    const Norms norms = w2inf_norms(s, grid);
    const bool last = i == n_steps;
    if (cfg.stop_at_tau &&
        (norms.psi >= params.cutoff_radius || norms.u >= params.cutoff_radius)) {
      result.event.kind = StoppingEvent::Kind::tau_R_hit;
      result.event.time = s.time;
      const bool psi_dominates = norms.psi >= norms.u;
      result.event.which = psi_dominates ? StoppingEvent::Field::psi : StoppingEvent::Field::u;
      result.event.triggering_norm = psi_dominates ? norms.psi : norms.u;
      record(s);
      break;
    }
    if (last) {
      result.event.kind = StoppingEvent::Kind::completed;
      result.event.time = s.time;
      result.event.triggering_norm = std::max(norms.psi, norms.u);
      record(s);
      break;
    }
    if (i % monitors.stride == 0) record(s);

    if (monitors.track_budget) dissipation += cfg.dt * energy_dissipation_rate(s, params, grid);
    StepTerms terms;
    try {
      const auto dW = increments_for(cfg, noise, path_seed, i);
      State next = stepper.advance(s, dW, monitors.track_budget ? &terms : nullptr);
      next.time = t0 + static_cast<double>(i + 1) * cfg.dt;
      s = std::move(next);
    } catch (const NumericalBlowup& e) {
      result.event.kind = StoppingEvent::Kind::numerical_blowup;
      result.event.time = t0 + static_cast<double>(i + 1) * cfg.dt;
      result.event.which = e.field() == "u" ? StoppingEvent::Field::u : StoppingEvent::Field::psi;
      result.event.triggering_norm = std::numeric_limits<double>::infinity();
      result.steps_taken = i + 1;
      result.final_state = s;
      return result;
    }
    ito += terms.ito_correction;
    martingale += terms.martingale;
    result.steps_taken = i + 1;
  }
  result.final_state = s;
  return result;
}

ConvergenceResult strong_convergence_study(const State& initial, const ModelParams& params,
                                           const NoiseModel& noise, const TorusGrid& grid,
                                           const ConvergenceStudy& study) {
  if (study.dt_levels.size() < 2) throw UsageError("need at least two dt levels");
  if (study.n_paths < 1) throw UsageError("n_paths must be >= 1");
  if (study.reference_factor < 1) throw UsageError("reference_factor must be >= 1");
  std::vector<double> levels = study.dt_levels;
  std::sort(levels.begin(), levels.end(), std::greater<>());
  const double dt_ref = levels.back() / study.reference_factor;
  std::vector<int> refinement;
  for (double dt : levels) {
    const double r = dt / dt_ref;
    const double steps = study.t_end / dt;
    if (std::abs(r - std::round(r)) > 1e-9 * r || std::abs(steps - std::round(steps)) > 1e-9 * steps)
      throw UsageError("dt levels must be dyadic and divide t_end");
    const auto ri = static_cast<int>(std::llround(r));
    if ((ri & (ri - 1)) != 0) throw UsageError("dt levels must be dyadic");
    refinement.push_back(ri);
  }

  // The reference increments are drawn once per path; coarser levels sum them, which
  // is exactly what refined_increment would produce.
  const auto ref_steps = static_cast<std::int64_t>(std::llround(study.t_end / dt_ref));
  std::vector<double> fine;
  auto draw = [&](std::uint64_t seed) {
    fine.assign(static_cast<std::size_t>(ref_steps) * noise.k_modes, 0.0);
    if (noise.is_zero()) return;
    for (std::int64_t i = 0; i < ref_steps; ++i) {
      const auto inc = sample_increment(seed, i, dt_ref, noise);
      std::copy(inc.dW.begin(), inc.dW.end(), fine.begin() + i * noise.k_modes);
    }
  };
  auto run = [&](double dt, int refine) {
    StepConfig cfg;
    cfg.dt = dt;
    cfg.t_end = study.t_end;
    cfg.scheme = study.scheme;
    cfg.stop_at_tau = false;
    const Stepper stepper(cfg, params, noise, grid);
    State s = initial;
    std::vector<double> dW(noise.k_modes);
    const std::int64_t n = cfg.steps();
    for (std::int64_t i = 0; i < n; ++i) {
      std::fill(dW.begin(), dW.end(), 0.0);
      for (int r = 0; r < refine; ++r) {
        const double* w = fine.data() + (i * refine + r) * noise.k_modes;
        for (int k = 0; k < noise.k_modes; ++k) dW[k] += w[k];
      }
      s = stepper.advance(s, dW);
    }
    return s;
  };

  ConvergenceResult result;
  result.dt = levels;
  result.errors.assign(levels.size(), 0.0);
  for (int p = 0; p < study.n_paths; ++p) {
    const std::uint64_t seed = path_seed(study.master_seed, static_cast<std::uint64_t>(p));
    try {
      draw(seed);
      const State ref = run(dt_ref, 1);
      std::vector<double> err(levels.size());
      for (std::size_t l = 0; l < levels.size(); ++l) {
        const State s = run(levels[l], refinement[l]);
        std::vector<Complex> diff(grid.spectral_size());
        for (int j = 0; j < grid.spectral_size(); ++j)
          diff[j] = s.u.spectral()[j] - ref.u.spectral()[j];
        err[l] = l2_norm(RealField::from_spectral(grid, std::move(diff)));
      }
      for (std::size_t l = 0; l < levels.size(); ++l) result.errors[l] += err[l];
      ++result.paths_used;
    } catch (const NumericalBlowup&) {
      ++result.paths_excluded;
    }
  }
  if (result.paths_excluded * 5 > study.n_paths)
    throw DiagnosticError("convergence study excluded " + std::to_string(result.paths_excluded) +
                          " of " + std::to_string(study.n_paths) + " paths");
  for (double& e : result.errors) e /= result.paths_used;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const double x = std::log(levels[l]);
    const double y = std::log(result.errors[l]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  result.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return result;
}

double strong_convergence_order(const State& initial, const ModelParams& params,
                                const NoiseModel& noise, const TorusGrid& grid,
                                const ConvergenceStudy& study) {
  return strong_convergence_study(initial, params, noise, grid, study).order;
}

}  // namespace qns
