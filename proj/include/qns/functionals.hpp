#pragma once

// Scalar functionals of a state: mass, energy, BD entropy and its dissipation
// integrals, Sobolev norms, vacuum statistics, and the algebraic identities and
// inequalities the a priori estimates rely on.
//
// Integrands are evaluated on a 2x oversampled grid from the spectral interpolants
// of psi, u and their derivatives, using rho = e^psi and the chain rule
// d_x rho^a = a psi_x rho^a.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "qns/model.hpp"

namespace qns {

struct MonitorRecord {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double energy_dissipation_rate = 0.0;  // int mu(rho) |u_x|^2
  double dissipation_integral = 0.0;     // left-point sum of dt * energy_dissipation_rate
  double bd_entropy = 0.0;
  std::array<double, 3> bd_terms{};
  double min_rho = 0.0;
  double inv_rho_beta_norm = 0.0;  // max 1/rho^beta
  std::array<double, 2> hs_norms{};     // |psi|_{H^{s+1}}, |u|_{H^s}
  std::array<double, 2> w2inf_norms{};  // |psi|_{W2,inf}, |u|_{W2,inf}
  double ito_correction = 0.0;          // cumulative (1/2) sum_k int rho |phi F_k|^2 dt
  double energy_martingale = 0.0;       // cumulative sum_k int rho u phi F_k dW_k
  double budget = 0.0;

  friend bool operator==(const MonitorRecord&, const MonitorRecord&) = default;
};

double mass(const State& state, const TorusGrid& grid);

/// int [ rho u^2 / 2 + rho^gamma / (gamma - 1) + kappa |d_x sqrt(rho)|^2 ] dx.
double energy(const State& state, const ModelParams& params, const TorusGrid& grid);

/// int rho^alpha |u_x|^2 dx.
double energy_dissipation_rate(const State& state, const ModelParams& params,
                               const TorusGrid& grid);

/// V = u + rho^{alpha-2} rho_x at the collocation points.
RealField effective_velocity(const State& state, const ModelParams& params,
                             const TorusGrid& grid);

/// The energy with u replaced by the effective velocity V.
double bd_entropy(const State& state, const ModelParams& params, const TorusGrid& grid);

/// For alpha > 0:
///   4 gamma/(gamma+alpha-1)^2 int |d_x rho^{(gamma+alpha-1)/2}|^2,
///   4/alpha^2 int |d_xx rho^{alpha/2}|^2,
///   4(4-3 alpha)/(3 alpha^3) int rho^{-alpha} |d_x rho^{alpha/2}|^4.
/// For alpha = 0:
///   4 gamma/(gamma-1)^2 int |d_x rho^{(gamma-1)/2}|^2,  1/2 int (d_xx log rho)^2,  0.
/// The two quantum slots carry the capillarity factor kappa.
std::array<double, 3> bd_dissipation_terms(const State& state, const ModelParams& params,
                                           const TorusGrid& grid);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const;
  double relative_residual() const;  // residual / max(|lhs|, |rhs|), 0 when both vanish
};

/// int d_x(rho^gamma) Q dx with Q = rho^{alpha-2} rho_x, against
/// 4 gamma/(gamma+alpha-1)^2 int |d_x rho^{(gamma+alpha-1)/2}|^2.
IdentitySides bd_pressure_identity(const RealField& rho, const ModelParams& params,
                                   const TorusGrid& grid);
double bd_pressure_identity_residual(const RealField& rho, const ModelParams& params,
                                     const TorusGrid& grid);

/// I_direct = int d_x(rho^{alpha-1} rho_x) (d_xx sqrt(rho) / sqrt(rho)) dx against
/// I_closed = 4(4-3 alpha)/(3 alpha^3) int rho^{-alpha} |d_x rho^{alpha/2}|^4
///          + 4/alpha^2 int |d_xx rho^{alpha/2}|^2.
IdentitySides bd_quantum_identity(const RealField& rho, double alpha, const TorusGrid& grid);
double bd_quantum_identity_residual(const RealField& rho, double alpha, const TorusGrid& grid);

/// (9/16) int (f_xx)^2 - int |d_x f^{1/2}|^4.
double functional_inequality_margin(const RealField& f, const TorusGrid& grid);

struct CombinationCheck {
  double value = 0.0;     // 16(3-2 alpha)/(9 alpha^3) int rho^{-alpha} |d_x rho^{alpha/2}|^4
  bool in_range = false;  // alpha in (0, 3/2]
  bool passed = true;     // value >= -1e-10 whenever in_range
};
CombinationCheck nonneg_combination_check(const RealField& rho, double alpha,
                                          const TorusGrid& grid);

/// (sum_j (1 + k_j^2)^s |c_j|^2)^{1/2} over all signed modes.
double hs_norm(const RealField& field, double s);

/// Instantaneous functionals of a state. The cumulative fields (dissipation_integral,
/// ito_correction, energy_martingale) are left at zero.
MonitorRecord monitor_record(const State& state, const ModelParams& params,
                             const TorusGrid& grid, double beta = 1.0);

struct VacuumSummary {
  std::size_t records = 0;
  double min_rho = 0.0;            // min over records of min_rho
  double max_inv_rho_beta = 0.0;   // max over records of inv_rho_beta_norm
  double initial_min_rho = 0.0;
  bool global_regime = false;      // alpha in [0, 1/2]
};
VacuumSummary vacuum_statistics(std::span<const MonitorRecord> records, const ModelParams& params);

}  // namespace qns
