#include "qns/noise.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "qns/errors.hpp"

namespace qns {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Central difference weights for derivative orders 0..3 on offsets -2..2.
constexpr std::array<std::array<double, 5>, 4> kStencil{{
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {0.0, -0.5, 0.0, 0.5, 0.0},
    {0.0, 1.0, -2.0, 1.0, 0.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
}};

}  // namespace

std::string to_string(NoiseShape shape) {
  return shape == NoiseShape::off ? "off" : "trig_density_weighted";
}

NoiseShape noise_shape_from_string(const std::string& name) {
  if (name == "trig_density_weighted") return NoiseShape::trig_density_weighted;
  if (name == "additive" || name == "off") return NoiseShape::off;
  throw ConfigError("unknown noise shape '" + name + "'");
}

void NoiseModel::validate() const {
  std::string errors;
  if (k_modes < 1) errors += "k_modes must be >= 1; ";
  if (!(amplitude_decay > 1.0)) errors += "amplitude_decay must be > 1; ";
  if (!(base_amplitude >= 0.0)) errors += "base_amplitude must be >= 0; ";
  if (!errors.empty()) throw ConfigError("invalid noise model: " + errors);
}

double NoiseModel::amplitude(int k) const {
  return base_amplitude * std::pow(static_cast<double>(k), -amplitude_decay);
}

double NoiseModel::amplitude_sum() const {
  double s = 0.0;
  for (int k = 1; k <= k_modes; ++k) s += amplitude(k);
  return s;
}

double NoiseModel::tail_bound() const {
  return base_amplitude * std::pow(static_cast<double>(k_modes), 1.0 - amplitude_decay) /
         (amplitude_decay - 1.0);
}

double NoiseModel::derivative_bound(int k) const {
  // |tanh^{(c)}| <= 2 and |d^b/drho^b rho/(1+rho)| <= 6 for c, b <= 3.
  const double scale = 1.0 + 2.0 * std::numbers::pi * k;
  const double state_factor = shape == NoiseShape::off ? 1.0 : 12.0;
  return state_factor * amplitude(k) * scale * scale * scale;
}

double NoiseModel::spatial(int k, double x) const {
  return amplitude(k) * std::sin(2.0 * std::numbers::pi * k * x);
}

double NoiseModel::state_factor(double rho, double u) const {
  if (shape == NoiseShape::off) return 1.0;
  return std::tanh(u) * rho / (1.0 + rho);
}

double NoiseModel::coefficient(int k, double x, double rho, double u) const {
  return spatial(k, x) * state_factor(rho, u);
}

std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t path_index) {
  return splitmix64(master_seed ^ splitmix64(path_index + 0x632BE59BD9B4E019ULL));
}

WienerIncrement sample_increment(std::uint64_t path_seed, std::int64_t step_index, double dt,
                                 const NoiseModel& model) {
  if (!(dt > 0.0)) throw UsageError("increment length must be positive");
  std::mt19937_64 engine(splitmix64(path_seed ^ splitmix64(static_cast<std::uint64_t>(step_index))));
  std::normal_distribution<double> normal(0.0, 1.0);
  WienerIncrement inc;
  inc.dW.resize(model.k_modes);
  const double sd = std::sqrt(dt);
  for (auto& w : inc.dW) w = sd * normal(engine);
  inc.step_index = step_index;
  inc.seed_lineage = path_seed;
  inc.dt = dt;
  return inc;
}

WienerIncrement refined_increment(std::uint64_t path_seed, std::int64_t coarse_index, double dt,
                                  int refinement, const NoiseModel& model) {
  if (refinement < 1) throw UsageError("refinement must be >= 1");
  if (refinement == 1) return sample_increment(path_seed, coarse_index, dt, model);
  WienerIncrement inc;
  inc.dW.assign(model.k_modes, 0.0);
  const double fine_dt = dt / refinement;
  for (int r = 0; r < refinement; ++r) {
    const auto fine = sample_increment(path_seed, coarse_index * refinement + r, fine_dt, model);
    for (int k = 0; k < model.k_modes; ++k) inc.dW[k] += fine.dW[k];
  }
  inc.step_index = coarse_index;
  inc.seed_lineage = path_seed;
  inc.dt = dt;
  return inc;
}

RealField forcing_field(const State& state, std::span<const double> dW, double cutoff_u,
                        const NoiseModel& model, const TorusGrid& grid) {
  if (static_cast<int>(dW.size()) != model.k_modes)
    throw UsageError("increment size does not match the noise truncation");
  const int n = grid.n();
  std::vector<double> f(n, 0.0);
  if (cutoff_u != 0.0 && !model.is_zero()) {
    const auto psi = state.psi.physical();
    const auto u = state.u.physical();
    std::vector<double> a(model.k_modes);
    for (int k = 1; k <= model.k_modes; ++k) a[k - 1] = model.amplitude(k) * dW[k - 1];
    for (int i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) / n;
      double acc = 0.0;
      for (int k = 1; k <= model.k_modes; ++k)
        acc += a[k - 1] * std::sin(2.0 * std::numbers::pi * k * x);
      f[i] = cutoff_u * acc * model.state_factor(std::exp(psi[i]), u[i]);
    }
  }
  return project(RealField::from_physical(grid, std::move(f)), grid);
}

RealField forcing_field(const State& state, const WienerIncrement& increment,
                        const NoiseModel& model, const ModelParams& params,
                        const TorusGrid& grid) {
  const double phi_u = cutoff_factors(w2inf_norms(state, grid), params).first;
  return forcing_field(state, increment.dW, phi_u, model, grid);
}

NoiseHypothesisReport verify_noise_hypotheses(const NoiseModel& model, int points_x,
                                              int points_rho, int points_u, double rho_max,
                                              double u_max) {
  model.validate();
  NoiseHypothesisReport report;
  const double c = model.amplitude_sum();
  const bool additive = model.shape == NoiseShape::off;

  // Multi-indices (a, b, e) of total order 1..3 in (x, rho, u).
  std::vector<std::array<int, 3>> orders;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int e = 0; a + b + e <= 3; ++e)
        if (a + b + e > 0) orders.push_back({a, b, e});

  for (int k = 1; k <= model.k_modes; ++k) {
    for (int ix = 0; ix < points_x; ++ix) {
      const double x = static_cast<double>(ix) / points_x;
      if (!additive && model.coefficient(k, x, 0.0, 0.0) != 0.0) report.vanishes_at_rest = false;
    }
  }

  const double hx = 1e-3 / (2.0 * std::numbers::pi * model.k_modes);
  const double hs = 1e-3;
  const double slack = 1.0 + 1e-6;
  for (int ix = 0; ix < points_x; ++ix) {
    const double x = static_cast<double>(ix) / points_x;
    for (int ir = 0; ir < points_rho; ++ir) {
      const double rho = rho_max * ir / (points_rho - 1);
      for (int iu = 0; iu < points_u; ++iu) {
        const double u = -u_max + 2.0 * u_max * iu / (points_u - 1);
        ++report.lattice_points;
        double sum_f = 0.0;
        for (int k = 1; k <= model.k_modes; ++k) {
          const double f = model.coefficient(k, x, rho, u);
          sum_f += std::abs(f);
          if (std::abs(f) > model.amplitude(k) * slack) report.amplitude_bounded = false;
          const double bound = model.derivative_bound(k);
          for (const auto& o : orders) {
            double d = 0.0;
            for (int p = 0; p < 5; ++p) {
              const double wx = kStencil[o[0]][p];
              if (wx == 0.0) continue;
              for (int q = 0; q < 5; ++q) {
                const double wr = kStencil[o[1]][q];
                if (wr == 0.0) continue;
                for (int s = 0; s < 5; ++s) {
                  const double wu = kStencil[o[2]][s];
                  if (wu == 0.0) continue;
                  d += wx * wr * wu *
                       model.coefficient(k, x + (p - 2) * hx, rho + (q - 2) * hs, u + (s - 2) * hs);
                }
              }
            }
            d /= std::pow(hx, o[0]) * std::pow(hs, o[1] + o[2]);
            const double ratio = bound > 0.0 ? std::abs(d) / bound : 0.0;
            report.worst_derivative_ratio = std::max(report.worst_derivative_ratio, ratio);
            if (ratio > slack) report.derivatives_bounded = false;
          }
        }
        const double growth = c > 0.0 ? sum_f / (c * (1.0 + std::abs(u))) : 0.0;
        report.worst_growth_ratio = std::max(report.worst_growth_ratio, growth);
        if (growth > slack) report.linear_growth = false;
        if (rho * sum_f > c * (rho + rho * std::abs(u)) * slack) report.momentum_growth = false;
      }
    }
  }
  return report;
}

}  // namespace qns
