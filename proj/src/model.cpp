#include "qns/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qns/errors.hpp"
#include "qns/model_internal.hpp"

namespace qns {
namespace {

constexpr double kChop = 1e-15;

std::vector<double> pointwise_exp(std::span<const double> psi, double factor) {
  std::vector<double> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = std::exp(factor * psi[i]);
  return out;
}

// Padded-grid samples of the fields entering the nonlinear products, so that each
// product costs one forward transform.
struct ProductWorkspace {
  const TorusGrid& grid;
  int np;

  explicit ProductWorkspace(const TorusGrid& g) : grid(g), np(g.padded_size()) {}

  std::vector<double> pad(const RealField& f) const { return interpolate(f, np); }

  RealField product(std::span<const double> a, std::span<const double> b, double scale) const {
    std::vector<double> p(np);
    for (int i = 0; i < np; ++i) p[i] = scale * a[i] * b[i];
    return restrict_samples(p, grid, grid.dealias_limit());
  }
};

RealField scaled(const RealField& f, double s, const TorusGrid& grid) {
  std::vector<Complex> c(f.spectral().begin(), f.spectral().end());
  for (auto& v : c) v *= s;
  return RealField::from_spectral(grid, std::move(c));
}

RealField sum(std::initializer_list<const RealField*> terms, const TorusGrid& grid) {
  std::vector<Complex> c(grid.spectral_size(), Complex{});
  for (const RealField* t : terms) {
    const auto s = t->spectral();
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += s[j];
  }
  return RealField::from_spectral(grid, std::move(c));
}

}  // namespace

void ModelParams::validate() const {
  std::string errors;
  if (!(gamma > 1.0)) errors += "gamma must be > 1; ";
  if (!(alpha >= 0.0)) errors += "alpha must be >= 0; ";
  if (!(cutoff_radius > 0.0)) errors += "cutoff_radius must be > 0; ";
  if (monitor_order < 4) errors += "monitor_order must be >= 4; ";
  if (!(capillarity > 0.0)) errors += "capillarity must be > 0; ";
  if (!errors.empty()) throw ConfigError("invalid model parameters: " + errors);
}

State make_state(const TorusGrid& grid, std::vector<double> psi, std::vector<double> u,
                 double time) {
  return State{project(RealField::from_physical(grid, std::move(psi)), grid),
               project(RealField::from_physical(grid, std::move(u)), grid), time};
}

State state_from_functions(const TorusGrid& grid, const std::function<double(double)>& rho,
                           const std::function<double(double)>& u, double time) {
  std::vector<double> psi(grid.n()), vel(grid.n());
  for (int i = 0; i < grid.n(); ++i) {
    const double x = static_cast<double>(i) / grid.n();
    const double r = rho(x);
    if (!(r > 0.0)) throw DomainError("initial density must be strictly positive");
    psi[i] = std::log(r);
    vel[i] = u(x);
  }
  return make_state(grid, std::move(psi), std::move(vel), time);
}

double cutoff_phi(double y, double radius) {
  if (y < 0.0) throw UsageError("cut-off argument must be non-negative");
  if (!(radius > 0.0)) throw UsageError("cut-off radius must be positive");
  if (y <= radius) return 1.0;
  if (y >= radius + 1.0) return 0.0;
  const double s = y - radius;
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double w2inf_norm(const RealField& field, const TorusGrid& grid) {
  return std::max({max_abs(field.physical()), max_abs(derivative(field, 1, grid).physical()),
                   max_abs(derivative(field, 2, grid).physical())});
}

Norms w2inf_norms(const State& state, const TorusGrid& grid) {
  return {w2inf_norm(state.psi, grid), w2inf_norm(state.u, grid)};
}

std::pair<double, double> cutoff_factors(const Norms& norms, const ModelParams& params) {
  if (!params.enable_cutoff) return {1.0, 1.0};
  return {cutoff_phi(norms.u, params.cutoff_radius), cutoff_phi(norms.psi, params.cutoff_radius)};
}

void check_state(const State& state, double psi_clamp) {
  if (!state.psi.all_finite()) throw NumericalBlowup("non-finite log-density", state.time, "psi");
  if (!state.u.all_finite()) throw NumericalBlowup("non-finite velocity", state.time, "u");
  if (max_abs(state.psi.physical()) > psi_clamp)
    throw NumericalBlowup("|psi| exceeded clamp " + std::to_string(psi_clamp), state.time, "psi");
}

namespace internal {

Derivatives derivatives(const State& state, const TorusGrid& grid) {
  Derivatives d;
  d.psi_x = derivative(state.psi, 1, grid);
  d.psi_xx = derivative(state.psi, 2, grid);
  d.psi_xxx = derivative(state.psi, 3, grid);
  d.u_x = derivative(state.u, 1, grid);
  d.u_xx = derivative(state.u, 2, grid);
  return d;
}

Norms norms_from(const State& state, const Derivatives& d) {
  return {std::max({max_abs(state.psi.physical()), max_abs(d.psi_x.physical()),
                    max_abs(d.psi_xx.physical())}),
          std::max({max_abs(state.u.physical()), max_abs(d.u_x.physical()),
                    max_abs(d.u_xx.physical())})};
}

ExplicitRhs explicit_rhs(const State& state, const ModelParams& params, const TorusGrid& grid,
                         const Derivatives& d, const Norms& norms, double nu_bar) {
  check_state(state);
  const auto [phi_u, phi_psi] = cutoff_factors(norms, params);
  const ProductWorkspace ws(grid);
  const double half_kappa = 0.5 * params.capillarity;

  const RealField visc_coeff = project(
      RealField::from_physical(grid, pointwise_exp(state.psi.physical(), params.alpha - 1.0)),
      grid);
  const RealField pres_coeff = project(
      RealField::from_physical(grid, pointwise_exp(state.psi.physical(), params.gamma - 1.0)),
      grid);

  const auto u = ws.pad(state.u);
  const auto psi_x = ws.pad(d.psi_x);
  const auto psi_xx = ws.pad(d.psi_xx);
  const auto u_x = ws.pad(d.u_x);
  const auto u_xx = ws.pad(d.u_xx);
  const auto E = ws.pad(visc_coeff);
  const auto P = ws.pad(pres_coeff);

  std::vector<double> visc_excess(E.size());
  for (std::size_t i = 0; i < E.size(); ++i) visc_excess[i] = phi_psi * E[i] - nu_bar;

  ExplicitRhs out;
  out.cutoff_u = phi_u;
  out.cutoff_psi = phi_psi;
  out.psi = ws.product(u, psi_x, -phi_u);

  const RealField advection = ws.product(u, u_x, -phi_u);
  const RealField pressure = ws.product(P, psi_x, -phi_psi * params.gamma);
  const RealField viscosity = ws.product(visc_excess, u_xx, 1.0);
  const auto grad_pair = ws.pad(ws.product(psi_x, u_x, 1.0));
  const RealField viscosity_gradient = ws.product(E, grad_pair, phi_psi * params.alpha);
  const RealField quantum = ws.product(psi_x, psi_xx, phi_psi * half_kappa);
  out.u = sum({&advection, &pressure, &viscosity, &viscosity_gradient, &quantum}, grid);
  return out;
}

}  // namespace internal

MomentumTerms momentum_terms(const State& state, const ModelParams& params,
                             const TorusGrid& grid) {
  check_state(state);
  const auto d = internal::derivatives(state, grid);
  const auto [phi_u, phi_psi] = cutoff_factors(internal::norms_from(state, d), params);
  const ProductWorkspace ws(grid);
  const double half_kappa = 0.5 * params.capillarity;

  const RealField visc_coeff = project(
      RealField::from_physical(grid, pointwise_exp(state.psi.physical(), params.alpha - 1.0)),
      grid);
  const RealField pres_coeff = project(
      RealField::from_physical(grid, pointwise_exp(state.psi.physical(), params.gamma - 1.0)),
      grid);
  const auto u = ws.pad(state.u);
  const auto psi_x = ws.pad(d.psi_x);
  const auto psi_xx = ws.pad(d.psi_xx);
  const auto u_x = ws.pad(d.u_x);
  const auto u_xx = ws.pad(d.u_xx);
  const auto E = ws.pad(visc_coeff);
  const auto P = ws.pad(pres_coeff);

  MomentumTerms t;
  t.advection = ws.product(u, u_x, -phi_u);
  t.pressure = ws.product(P, psi_x, -phi_psi * params.gamma);
  t.viscosity = ws.product(E, u_xx, phi_psi);
  t.viscosity_gradient =
      ws.product(E, ws.pad(ws.product(psi_x, u_x, 1.0)), phi_psi * params.alpha);
  t.dispersion = scaled(d.psi_xxx, half_kappa, grid);
  t.quantum_nonlinearity = ws.product(psi_x, psi_xx, phi_psi * half_kappa);
  return t;
}

RealField rhs_psi(const State& state, const ModelParams& params, const TorusGrid& grid) {
  check_state(state);
  const auto d = internal::derivatives(state, grid);
  const auto [phi_u, phi_psi] = cutoff_factors(internal::norms_from(state, d), params);
  (void)phi_psi;
  const ProductWorkspace ws(grid);
  const RealField transport = ws.product(ws.pad(state.u), ws.pad(d.psi_x), -phi_u);
  const RealField divergence = scaled(d.u_x, -1.0, grid);
  return sum({&transport, &divergence}, grid);
}

RealField rhs_u_deterministic(const State& state, const ModelParams& params,
                              const TorusGrid& grid) {
  const auto t = momentum_terms(state, params, grid);
  return sum({&t.advection, &t.pressure, &t.viscosity, &t.viscosity_gradient, &t.dispersion,
              &t.quantum_nonlinearity},
             grid);
}

RhsPair evaluate_rhs(const State& state, const ModelParams& params, const TorusGrid& grid) {
  const auto d = internal::derivatives(state, grid);
  const auto [phi_u, phi_psi] = cutoff_factors(internal::norms_from(state, d), params);
  return {rhs_psi(state, params, grid), rhs_u_deterministic(state, params, grid), phi_u, phi_psi};
}

double quantum_identity_residual(const RealField& rho, const TorusGrid& grid) {
  const int nf = 2 * grid.n();
  const auto r = interpolate(rho, nf);
  if (std::any_of(r.begin(), r.end(), [](double v) { return !(v > 0.0); }))
    throw DomainError("quantum identity requires a strictly positive density");

  std::vector<double> sq(nf), log_r(nf);
  for (int i = 0; i < nf; ++i) {
    sq[i] = std::sqrt(r[i]);
    log_r[i] = std::log(r[i]);
  }
  const auto sq_xx = differentiate_samples(sq, 2, kChop);
  std::vector<double> bohm(nf);
  for (int i = 0; i < nf; ++i) bohm[i] = sq_xx[i] / sq[i];
  const auto bohm_x = differentiate_samples(bohm, 1, kChop);

  const auto log_xx = differentiate_samples(log_r, 2, kChop);
  std::vector<double> flux(nf);
  for (int i = 0; i < nf; ++i) flux[i] = r[i] * log_xx[i];
  const auto flux_x = differentiate_samples(flux, 1, kChop);

  double res = 0.0;
  for (int i = 0; i < nf; ++i) res = std::max(res, std::abs(2.0 * r[i] * bohm_x[i] - flux_x[i]));
  return res;
}

}  // namespace qns
