#include "qns/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "qns/errors.hpp"

namespace qns {
namespace {

constexpr double kChop = 1e-15;

struct Fine {
  std::vector<double> psi, psi_x, psi_xx, u, u_x;
  int size() const { return static_cast<int>(psi.size()); }
};

Fine oversample(const State& s, const TorusGrid& grid) {
  const int nf = 2 * grid.n();
  return {interpolate(s.psi, nf), interpolate(derivative(s.psi, 1, grid), nf),
          interpolate(derivative(s.psi, 2, grid), nf), interpolate(s.u, nf),
          interpolate(derivative(s.u, 1, grid), nf)};
}

template <class F>
double integrate(int size, F&& integrand) {
  double acc = 0.0;
  for (int i = 0; i < size; ++i) acc += integrand(i);
  return acc / size;
}

std::vector<double> positive_samples(const RealField& rho, const TorusGrid& grid) {
  auto r = interpolate(rho, 2 * grid.n());
  if (std::any_of(r.begin(), r.end(), [](double v) { return !(v > 0.0); }))
    throw DomainError("density must be strictly positive");
  return r;
}

std::vector<double> power(std::span<const double> r, double a) {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = std::pow(r[i], a);
  return out;
}

double kinetic_free_energy(const Fine& f, const ModelParams& p, std::span<const double> vel) {
  return integrate(f.size(), [&](int i) {
    const double rho = std::exp(f.psi[i]);
    return 0.5 * rho * vel[i] * vel[i] + std::exp(p.gamma * f.psi[i]) / (p.gamma - 1.0) +
           p.capillarity * 0.25 * rho * f.psi_x[i] * f.psi_x[i];
  });
}

}  // namespace

double IdentitySides::residual() const { return std::abs(lhs - rhs); }

double IdentitySides::relative_residual() const {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0.0 ? residual() / scale : 0.0;
}

double mass(const State& state, const TorusGrid& grid) {
  const auto psi = interpolate(state.psi, 2 * grid.n());
  return integrate(static_cast<int>(psi.size()), [&](int i) { return std::exp(psi[i]); });
}

double energy(const State& state, const ModelParams& params, const TorusGrid& grid) {
  const Fine f = oversample(state, grid);
  return kinetic_free_energy(f, params, f.u);
}

double energy_dissipation_rate(const State& state, const ModelParams& params,
                               const TorusGrid& grid) {
  const Fine f = oversample(state, grid);
  return integrate(f.size(),
                   [&](int i) { return std::exp(params.alpha * f.psi[i]) * f.u_x[i] * f.u_x[i]; });
}

RealField effective_velocity(const State& state, const ModelParams& params,
                             const TorusGrid& grid) {
  const auto psi = state.psi.physical();
  const auto u = state.u.physical();
  const auto psi_x = derivative(state.psi, 1, grid);
  std::vector<double> v(grid.n());
  for (int i = 0; i < grid.n(); ++i)
    v[i] = u[i] + std::exp((params.alpha - 1.0) * psi[i]) * psi_x.physical()[i];
  return RealField::from_physical(grid, std::move(v));
}

double bd_entropy(const State& state, const ModelParams& params, const TorusGrid& grid) {
  const Fine f = oversample(state, grid);
  std::vector<double> v(f.size());
  for (int i = 0; i < f.size(); ++i)
    v[i] = f.u[i] + std::exp((params.alpha - 1.0) * f.psi[i]) * f.psi_x[i];
  return kinetic_free_energy(f, params, v);
}

std::array<double, 3> bd_dissipation_terms(const State& state, const ModelParams& params,
                                           const TorusGrid& grid) {
  const Fine f = oversample(state, grid);
  const double g = params.gamma;
  const double a = params.alpha;
  const double kappa = params.capillarity;
  std::array<double, 3> t{};
  if (a == 0.0) {
    const double e = 0.5 * (g - 1.0);
    t[0] = 4.0 * g / ((g - 1.0) * (g - 1.0)) * integrate(f.size(), [&](int i) {
             const double d = e * f.psi_x[i] * std::exp(e * f.psi[i]);
             return d * d;
           });
    t[1] = kappa * 0.5 * integrate(f.size(), [&](int i) { return f.psi_xx[i] * f.psi_xx[i]; });
    return t;
  }
  const double e = 0.5 * (g + a - 1.0);
  const double b = 0.5 * a;
  t[0] = 4.0 * g / ((g + a - 1.0) * (g + a - 1.0)) * integrate(f.size(), [&](int i) {
           const double d = e * f.psi_x[i] * std::exp(e * f.psi[i]);
           return d * d;
         });
  t[1] = kappa * 4.0 / (a * a) * integrate(f.size(), [&](int i) {
           const double d =
               std::exp(b * f.psi[i]) * (b * f.psi_xx[i] + b * b * f.psi_x[i] * f.psi_x[i]);
           return d * d;
         });
  t[2] = kappa * 4.0 * (4.0 - 3.0 * a) / (3.0 * a * a * a) * integrate(f.size(), [&](int i) {
           const double d = b * f.psi_x[i] * std::exp(b * f.psi[i]);
           return std::exp(-a * f.psi[i]) * d * d * d * d;
         });
  return t;
}

IdentitySides bd_pressure_identity(const RealField& rho, const ModelParams& params,
                                   const TorusGrid& grid) {
  const double g = params.gamma;
  const double a = params.alpha;
  if (std::abs(g + a - 1.0) < 1e-14)
    throw DomainError("degenerate exponent: gamma + alpha = 1");
  const auto r = positive_samples(rho, grid);
  const int nf = static_cast<int>(r.size());

  const auto p_x = differentiate_samples(power(r, g), 1, kChop);
  const auto r_x = differentiate_samples(r, 1, kChop);
  const auto w_x = differentiate_samples(power(r, 0.5 * (g + a - 1.0)), 1, kChop);

  IdentitySides s;
  s.lhs = integrate(nf, [&](int i) { return p_x[i] * std::pow(r[i], a - 2.0) * r_x[i]; });
  s.rhs = 4.0 * g / ((g + a - 1.0) * (g + a - 1.0)) *
          integrate(nf, [&](int i) { return w_x[i] * w_x[i]; });
  return s;
}

double bd_pressure_identity_residual(const RealField& rho, const ModelParams& params,
                                     const TorusGrid& grid) {
  return bd_pressure_identity(rho, params, grid).residual();
}

IdentitySides bd_quantum_identity(const RealField& rho, double alpha, const TorusGrid& grid) {
  if (!(alpha > 0.0)) throw DomainError("BD quantum identity requires alpha > 0");
  const auto r = positive_samples(rho, grid);
  const int nf = static_cast<int>(r.size());

  const auto r_x = differentiate_samples(r, 1, kChop);
  std::vector<double> flux(nf);
  for (int i = 0; i < nf; ++i) flux[i] = std::pow(r[i], alpha - 1.0) * r_x[i];
  const auto flux_x = differentiate_samples(flux, 1, kChop);
  const auto sq = power(r, 0.5);
  const auto sq_xx = differentiate_samples(sq, 2, kChop);

  const auto w = power(r, 0.5 * alpha);
  const auto w_x = differentiate_samples(w, 1, kChop);
  const auto w_xx = differentiate_samples(w, 2, kChop);

  IdentitySides s;
  s.lhs = integrate(nf, [&](int i) { return flux_x[i] * sq_xx[i] / sq[i]; });
  const double quartic = integrate(nf, [&](int i) {
    const double d2 = w_x[i] * w_x[i];
    return std::pow(r[i], -alpha) * d2 * d2;
  });
  const double curvature = integrate(nf, [&](int i) { return w_xx[i] * w_xx[i]; });
  s.rhs = 4.0 * (4.0 - 3.0 * alpha) / (3.0 * alpha * alpha * alpha) * quartic +
          4.0 / (alpha * alpha) * curvature;
  return s;
}

double bd_quantum_identity_residual(const RealField& rho, double alpha, const TorusGrid& grid) {
  return bd_quantum_identity(rho, alpha, grid).residual();
}

double functional_inequality_margin(const RealField& f, const TorusGrid& grid) {
  const int nf = 2 * grid.n();
  const auto v = interpolate(f, nf);
  if (std::any_of(v.begin(), v.end(), [](double x) { return !(x > 0.0); }))
    throw DomainError("functional inequality requires a strictly positive field");
  const auto f_x = interpolate(derivative(f, 1, grid), nf);
  const auto f_xx = interpolate(derivative(f, 2, grid), nf);
  const double curvature = integrate(nf, [&](int i) { return f_xx[i] * f_xx[i]; });
  const double quartic = integrate(nf, [&](int i) {
    const double q = f_x[i] * f_x[i] / v[i];
    return q * q / 16.0;
  });
  return 9.0 / 16.0 * curvature - quartic;
}

CombinationCheck nonneg_combination_check(const RealField& rho, double alpha,
                                          const TorusGrid& grid) {
  CombinationCheck c;
  c.in_range = alpha > 0.0 && alpha <= 1.5;
  if (alpha == 0.0) return c;
  const auto r = positive_samples(rho, grid);
  const int nf = static_cast<int>(r.size());
  const auto w_x = differentiate_samples(power(r, 0.5 * alpha), 1, kChop);
  const double quartic = integrate(nf, [&](int i) {
    const double d2 = w_x[i] * w_x[i];
    return std::pow(r[i], -alpha) * d2 * d2;
  });
  c.value = 16.0 * (3.0 - 2.0 * alpha) / (9.0 * alpha * alpha * alpha) * quartic;
  c.passed = !c.in_range || c.value >= -1e-10;
  return c;
}

double hs_norm(const RealField& field, double s) {
  const auto c = field.spectral();
  const int n = field.size();
  double acc = 0.0;
  for (int j = 0; j <= n / 2 && j < static_cast<int>(c.size()); ++j) {
    const double k = TorusGrid::wavenumber(j);
    const double multiplicity = (j == 0 || 2 * j == n) ? 1.0 : 2.0;
    acc += multiplicity * std::pow(1.0 + k * k, s) * std::norm(c[j]);
  }
  return std::sqrt(acc);
}

MonitorRecord monitor_record(const State& state, const ModelParams& params,
                             const TorusGrid& grid, double beta) {
  MonitorRecord r;
  r.time = state.time;
  r.mass = mass(state, grid);
  r.energy = energy(state, params, grid);
  r.energy_dissipation_rate = energy_dissipation_rate(state, params, grid);
  r.bd_entropy = bd_entropy(state, params, grid);
  r.bd_terms = bd_dissipation_terms(state, params, grid);
  const auto psi = state.psi.physical();
  const double psi_min = *std::min_element(psi.begin(), psi.end());
  r.min_rho = std::exp(psi_min);
  r.inv_rho_beta_norm = std::exp(-beta * psi_min);
  const double s = params.monitor_order;
  r.hs_norms = {hs_norm(state.psi, s + 1.0), hs_norm(state.u, s)};
  const Norms w = w2inf_norms(state, grid);
  r.w2inf_norms = {w.psi, w.u};
  r.budget = (1.0 + w.psi + w.u) * (r.hs_norms[0] * r.hs_norms[0] + r.hs_norms[1] * r.hs_norms[1]);
  return r;
}

VacuumSummary vacuum_statistics(std::span<const MonitorRecord> records,
                                const ModelParams& params) {
  if (records.empty()) throw UsageError("vacuum statistics need at least one record");
  VacuumSummary v;
  v.records = records.size();
  v.initial_min_rho = records.front().min_rho;
  v.min_rho = records.front().min_rho;
  v.max_inv_rho_beta = records.front().inv_rho_beta_norm;
  for (const auto& r : records) {
    v.min_rho = std::min(v.min_rho, r.min_rho);
    v.max_inv_rho_beta = std::max(v.max_inv_rho_beta, r.inv_rho_beta_norm);
  }
  v.global_regime = params.global_regularity_regime();
  return v;
}

}  // namespace qns
