#pragma once

// Cut-off Galerkin system in log-density variables psi = log(rho):
//
//   d psi + phi_R(|u|)   [u psi_x] dt + u_x dt = 0
//   d u   = (kappa/2) psi_xxx dt - phi_R(|u|) [u u_x] dt - phi_R(|psi|) [gamma e^{(gamma-1)psi} psi_x] dt
//         + phi_R(|psi|) [e^{(alpha-1)psi} u_xx + alpha e^{(alpha-1)psi} psi_x u_x
//                         + (kappa/2) psi_x psi_xx] dt + phi_R(|u|) F(rho,u) dW
//
// with |.| the W^{2,inf} norm. kappa is the coefficient of the Bohm term
// kappa rho d_x(d_xx sqrt(rho) / sqrt(rho)) of the momentum equation in conservative
// form; kappa = 1 is the quantum Navier-Stokes system, kappa = 2 gives the quantum
// pair psi_xxx + psi_x psi_xx with unit weight.

#include <array>
#include <limits>

#include "qns/spectral.hpp"

namespace qns {

struct ModelParams {
  double gamma = 1.5;           // p(rho) = rho^gamma
  double alpha = 0.5;           // mu(rho) = rho^alpha
  double cutoff_radius = 1.0e6; // R in phi_R
  int monitor_order = 4;        // s; H^{s+1} x H^s monitoring
  bool enable_cutoff = true;
  double capillarity = 1.0;     // kappa

  void validate() const;
  /// alpha in [0, 1/2]: the regime with global-in-time a priori bounds.
  bool global_regularity_regime() const noexcept { return alpha >= 0.0 && alpha <= 0.5; }
};

struct State {
  RealField psi;
  RealField u;
  double time = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

/// Builds a state from collocation values, projecting both fields onto H_m.
State make_state(const TorusGrid& grid, std::vector<double> psi, std::vector<double> u,
                 double time = 0.0);
/// State with density rho(x) and velocity u(x) given as functions on [0,1).
State state_from_functions(const TorusGrid& grid, const std::function<double(double)>& rho,
                           const std::function<double(double)>& u, double time = 0.0);

struct RhsPair {
  RealField dpsi_dt;
  RealField du_dt_deterministic;
  double cutoff_u = 1.0;
  double cutoff_psi = 1.0;
};

/// The six terms of the deterministic velocity right-hand side, each with its sign
/// and cut-off factor applied and projected onto H_m.
struct MomentumTerms {
  RealField advection;             // -phi_u u u_x
  RealField pressure;              // -phi_psi gamma e^{(gamma-1)psi} psi_x
  RealField viscosity;             // phi_psi e^{(alpha-1)psi} u_xx
  RealField viscosity_gradient;    // phi_psi alpha e^{(alpha-1)psi} psi_x u_x
  RealField dispersion;            // (kappa/2) psi_xxx
  RealField quantum_nonlinearity;  // phi_psi (kappa/2) psi_x psi_xx
};

/// Smooth cut-off: 1 on [0,R], 0 on [R+1,inf), quintic C^2 bridge in between.
double cutoff_phi(double y, double radius);

/// max_{j=0,1,2} max_i |d^j f(x_i)| over the collocation points.
double w2inf_norm(const RealField& field, const TorusGrid& grid);

struct Norms {
  double psi = 0.0;
  double u = 0.0;
};
Norms w2inf_norms(const State& state, const TorusGrid& grid);

/// Cut-off factors (phi_R(|u|), phi_R(|psi|)) for the given norms; both 1 when the
/// cut-off is disabled.
std::pair<double, double> cutoff_factors(const Norms& norms, const ModelParams& params);

RealField rhs_psi(const State& state, const ModelParams& params, const TorusGrid& grid);
RealField rhs_u_deterministic(const State& state, const ModelParams& params,
                              const TorusGrid& grid);
MomentumTerms momentum_terms(const State& state, const ModelParams& params,
                             const TorusGrid& grid);
RhsPair evaluate_rhs(const State& state, const ModelParams& params, const TorusGrid& grid);

/// Throws NumericalBlowup if the state is non-finite or max|psi| exceeds psi_clamp.
void check_state(const State& state,
                 double psi_clamp = std::numeric_limits<double>::infinity());

/// L-infinity residual of 2 rho d_x(d_xx sqrt(rho)/sqrt(rho)) = d_x(rho d_xx log rho),
/// both sides evaluated pseudo-spectrally on a 2x oversampled grid.
double quantum_identity_residual(const RealField& rho, const TorusGrid& grid);

}  // namespace qns
