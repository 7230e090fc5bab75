#pragma once

// Time stepping of the cut-off Galerkin system.
//
// The stiff linear couple
//
//   d psi_j = -i k u_j dt,   d u_j = -i (kappa/2) k^3 psi_j dt - nu_bar k^2 u_j dt
//
// is advanced mode by mode with a 2x2 Crank-Nicolson solve; every other
// deterministic term is explicit, and the noise enters with left-point (Ito)
// coefficients. nu_bar is a constant-coefficient share of the viscosity, by default
// phi_R(|psi|) min_x e^{(alpha-1)psi} refreshed at every step.
//
// Schemes:
//   imex_cn           explicit Euler on the nonlinear remainder (first order)
//   imex_cn_heun      Heun predictor-corrector on the nonlinear remainder, noise frozen
//                     at the left point (second order for zero noise)
//   explicit_rk4_det  classical RK4 on the full deterministic right-hand side

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qns/functionals.hpp"
#include "qns/model.hpp"
#include "qns/noise.hpp"

namespace qns {

enum class Scheme { imex_cn, imex_cn_heun, explicit_rk4_det };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

struct StepConfig {
  double dt = 1e-4;
  double t_end = 0.1;
  Scheme scheme = Scheme::imex_cn;
  std::optional<double> implicit_visc_floor;  // fixed nu_bar; default is the adaptive share
  double blowup_clamp = 50.0;                 // max |psi| before a blow-up is declared
  int brownian_refinement = 1;  // increments summed from this many substeps of dt/refinement
  bool stop_at_tau = true;      // stop when |psi| or |u| in W^{2,inf} reaches R

  void validate() const;
  /// Number of steps, t_end / dt rounded to the nearest integer.
  std::int64_t steps() const;
};

struct StoppingEvent {
  enum class Kind { tau_R_hit, numerical_blowup, completed };
  enum class Field { psi, u, none };

  Kind kind = Kind::completed;
  double time = 0.0;
  double triggering_norm = 0.0;
  Field which = Field::none;

  friend bool operator==(const StoppingEvent&, const StoppingEvent&) = default;
};

std::string to_string(StoppingEvent::Kind kind);
std::string to_string(StoppingEvent::Field field);

struct MonitorSpec {
  int stride = 1;            // record every stride-th step (plus the final state)
  double beta = 1.0;         // exponent in the 1/rho^beta monitor
  bool track_budget = true;  // accumulate dissipation and Ito budget terms
};

struct PathResult {
  State final_state;
  std::vector<MonitorRecord> records;
  StoppingEvent event;
  std::int64_t steps_taken = 0;
};

/// One step from `state` with the given Brownian increments (ignored for zero noise).
/// Throws NumericalBlowup when the result is non-finite or violates the clamp.
State step(const State& state, const StepConfig& cfg, const ModelParams& params,
           const NoiseModel& noise, std::span<const double> dW, const TorusGrid& grid);

/// One step using the increment of `step_index` on the path `path_seed`.
State step(const State& state, const StepConfig& cfg, const ModelParams& params,
           const NoiseModel& noise, std::uint64_t path_seed, std::int64_t step_index,
           const TorusGrid& grid);

/// Advances until t_end, tau_R or blow-up. Never throws for numerical failure; the
/// failure is reported in the stopping event.
PathResult simulate_path(const State& initial, const StepConfig& cfg, const ModelParams& params,
                         const NoiseModel& noise, std::uint64_t path_seed,
                         const TorusGrid& grid, const MonitorSpec& monitors = {});

struct ConvergenceStudy {
  std::vector<double> dt_levels;  // dyadic, each dividing t_end
  double t_end = 0.1;
  int n_paths = 16;
  std::uint64_t master_seed = 0;
  int reference_factor = 16;  // reference step = min(dt_levels) / reference_factor
  Scheme scheme = Scheme::imex_cn;
};

struct ConvergenceResult {
  double order = 0.0;            // least-squares slope of log error vs log dt
  std::vector<double> dt;
  std::vector<double> errors;    // mean over paths of |u_ref - u_dt|_{L2} at t_end
  int paths_used = 0;
  int paths_excluded = 0;
};

/// Pathwise convergence against the same scheme at the reference step, all levels
/// driven by one Brownian path per sample. Paths that blow up at any level are
/// excluded; more than 20% exclusions raise DiagnosticError.
ConvergenceResult strong_convergence_study(const State& initial, const ModelParams& params,
                                           const NoiseModel& noise, const TorusGrid& grid,
                                           const ConvergenceStudy& study);

double strong_convergence_order(const State& initial, const ModelParams& params,
                                const NoiseModel& noise, const TorusGrid& grid,
                                const ConvergenceStudy& study);

}  // namespace qns
