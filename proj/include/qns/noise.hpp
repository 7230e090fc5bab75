#pragma once

// Truncated cylindrical Wiener forcing of the velocity equation,
//
//   phi_R(|u|) sum_{k=1..K} F_k(x, rho, u) dW_k,
//
// with W_k independent scalar Brownian motions. Default coefficient family:
//
//   F_k(x, rho, u) = a_k sin(2 pi k x) tanh(u) rho / (1 + rho),   a_k = a0 k^{-d},
//
// which vanishes at (rho, u) = (0, 0), is bounded with bounded derivatives and obeys
// sum_k |F_k| <= (sum_k a_k)(1 + |u|). The additive variant drops the state dependence:
// F_k(x) = a_k sin(2 pi k x).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qns/model.hpp"

namespace qns {

enum class NoiseShape { trig_density_weighted, off };  // off: additive noise

std::string to_string(NoiseShape shape);
NoiseShape noise_shape_from_string(const std::string& name);

struct NoiseModel {
  int k_modes = 16;
  double amplitude_decay = 2.0;  // d
  double base_amplitude = 0.0;   // a0
  NoiseShape shape = NoiseShape::trig_density_weighted;

  void validate() const;
  bool is_zero() const noexcept { return base_amplitude == 0.0; }

  double amplitude(int k) const;      // a_k
  double amplitude_sum() const;       // sum_{k<=K} a_k
  /// Upper bound on the discarded tail a0 sum_{k>K} k^{-d} <= a0 K^{1-d}/(d-1).
  double tail_bound() const;
  /// Constant bounding every partial derivative of F_k of order <= 3 in (x, rho, u).
  double derivative_bound(int k) const;

  double coefficient(int k, double x, double rho, double u) const;
  /// The family is separable: F_k(x, rho, u) = spatial(k, x) * state_factor(rho, u).
  double spatial(int k, double x) const;
  double state_factor(double rho, double u) const;
};

struct WienerIncrement {
  std::vector<double> dW;
  std::int64_t step_index = 0;
  std::uint64_t seed_lineage = 0;
  double dt = 0.0;
};

/// Per-path seed derived from (master seed, path index).
std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t path_index);

/// Gaussian increments N(0, dt) for step `step_index`, a pure function of its inputs.
WienerIncrement sample_increment(std::uint64_t path_seed, std::int64_t step_index, double dt,
                                 const NoiseModel& model);

/// Increment over coarse step `coarse_index` of length dt obtained by summing the
/// `refinement` underlying increments of length dt/refinement. Levels with different
/// refinement therefore see the same Brownian path.
WienerIncrement refined_increment(std::uint64_t path_seed, std::int64_t coarse_index, double dt,
                                  int refinement, const NoiseModel& model);

/// phi_R(|u|_{W2,inf}) * Pi_m sum_k F_k(x, rho, u) dW_k.
RealField forcing_field(const State& state, const WienerIncrement& increment,
                        const NoiseModel& model, const ModelParams& params,
                        const TorusGrid& grid);

/// Same with the velocity cut-off factor supplied by the caller.
RealField forcing_field(const State& state, std::span<const double> dW, double cutoff_u,
                        const NoiseModel& model, const TorusGrid& grid);

/// Outcome of checking the coefficient hypotheses on a sampled (x, rho, u) lattice.
struct NoiseHypothesisReport {
  std::size_t lattice_points = 0;
  bool vanishes_at_rest = true;        // F_k(x,0,0) = 0 (not applicable to additive noise)
  bool amplitude_bounded = true;       // |F_k| <= a_k
  bool derivatives_bounded = true;     // |d^l F_k| <= derivative_bound(k), 1 <= l <= 3
  bool linear_growth = true;           // sum_k |F_k| <= c (1 + |u|), c = sum a_k
  bool momentum_growth = true;         // sum_k |rho F_k| <= c (rho + rho |u|)
  double worst_derivative_ratio = 0.0; // max |d^l F_k| / derivative_bound(k)
  double worst_growth_ratio = 0.0;     // max sum_k |F_k| / (c (1 + |u|))
  bool passed() const noexcept {
    return vanishes_at_rest && amplitude_bounded && derivatives_bounded && linear_growth &&
           momentum_growth;
  }
};

/// Dense sampling check: x in [0,1), rho in [0, rho_max], u in [-u_max, u_max];
/// derivatives by central finite differences (all mixed partials of order 1..3).
NoiseHypothesisReport verify_noise_hypotheses(const NoiseModel& model, int points_x = 25,
                                              int points_rho = 20, int points_u = 20,
                                              double rho_max = 10.0, double u_max = 5.0);

}  // namespace qns
