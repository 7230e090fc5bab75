#pragma once

// Slow, independent references for tests: direct DFTs and convolutions, finite
// differences, dense trapezoid quadrature, a fine-step RK4 + Euler-Maruyama
// trajectory, and the exact propagator of the linearized system. Nothing here
// goes through the FFT-based primary code paths.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qns/model.hpp"
#include "qns/noise.hpp"

namespace qns::oracle {

struct OracleReport {
  std::string quantity;
  double primary = 0.0;
  double oracle = 0.0;
  double abs_discrepancy = 0.0;
  double rel_discrepancy = 0.0;
  std::map<std::string, std::string> resolution;

  std::string to_json() const;
};

OracleReport make_report(std::string quantity, double primary, double oracle,
                         std::map<std::string, std::string> resolution = {});

/// O(n^2) forward transform, normalized like transform_forward (half spectrum).
std::vector<Complex> naive_dft(std::span<const double> samples);

/// Evaluates the trigonometric polynomial of `field` (or its derivative) at x.
double evaluate(const RealField& field, double x, int derivative_order = 0);

/// Dealiased product by direct O(m^2) convolution of the coefficients.
RealField direct_product(const RealField& a, const RealField& b, const TorusGrid& grid);

/// Sixth-order central finite differences on periodic samples (order 1 or 2).
std::vector<double> fd_derivative(std::span<const double> samples, int order);

/// Periodic trapezoid rule with `points` nodes on [0,1).
double trapezoid(const std::function<double(double)>& f, int points);

struct PointValues {
  double x, psi, psi_x, psi_xx, u, u_x;
};

/// Trapezoid quadrature on grid.n() * oversample nodes of an integrand built from
/// the directly evaluated trigonometric interpolants of psi, u and their derivatives.
double dense_quadrature(const std::function<double(const PointValues&)>& integrand,
                        const State& state, const TorusGrid& grid, int oversample);

/// Right-hand side (d psi/dt, d u/dt) of the deterministic cut-off Galerkin system,
/// assembled with direct transforms and convolutions. Half-spectrum layout.
std::pair<std::vector<Complex>, std::vector<Complex>> galerkin_rhs(const State& state,
                                                                   const ModelParams& params,
                                                                   const TorusGrid& grid);

/// Largest RK4 step the oracle accepts for this grid and state.
double rk4_step_bound(const State& state, const ModelParams& params, const TorusGrid& grid);

/// RK4 for the drift plus Euler-Maruyama for the noise at dt_fine. Step i uses
/// sample_increment(path_seed, i, dt_fine), so coarser integrators driven by
/// refined_increment see the same Brownian path. Throws UsageError if dt_fine
/// exceeds rk4_step_bound.
State reference_trajectory(const State& initial, const ModelParams& params,
                           const NoiseModel& noise, const TorusGrid& grid, double t_end,
                           double dt_fine, std::uint64_t path_seed);

/// Exact solution at time t of the system linearized about rho = 1, u = 0:
///   psi_t = -u_x,   u_t = (kappa/2) psi_xxx - gamma psi_x + u_xx,
/// via the closed-form 2x2 matrix exponential of every mode.
State linearized_exact(const State& initial, const ModelParams& params, const TorusGrid& grid,
                       double t);

}  // namespace qns::oracle
