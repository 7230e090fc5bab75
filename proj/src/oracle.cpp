#include "qns/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "qns/errors.hpp"

namespace qns::oracle {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Coefficients of the signed modes -m..m, stored at index j + m.
struct Modes {
  int m = 0;
  std::vector<Complex> c;

  explicit Modes(int m_) : m(m_), c(2 * m_ + 1) {}
  Complex& operator[](int j) { return c[j + m]; }
  Complex operator[](int j) const { return c[j + m]; }
};

Modes modes_of(const RealField& f, int m) {
  Modes out(m);
  const auto s = f.spectral();
  for (int j = 0; j <= m; ++j) {
    out[j] = s[j];
    out[-j] = std::conj(s[j]);
  }
  return out;
}

Modes derive(const Modes& a, int order) {
  Modes out(a.m);
  for (int j = -a.m; j <= a.m; ++j) out[j] = a[j] * std::pow(Complex(0.0, kTwoPi * j), order);
  return out;
}

Modes scale(const Modes& a, double s) {
  Modes out(a.m);
  for (int j = -a.m; j <= a.m; ++j) out[j] = s * a[j];
  return out;
}

void add_to(Modes& acc, const Modes& a) {
  for (int j = -std::min(acc.m, a.m); j <= std::min(acc.m, a.m); ++j) acc[j] += a[j];
}

std::vector<double> samples_of(const Modes& a, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / n;
    double v = a[0].real();
    for (int j = 1; j <= a.m; ++j) v += 2.0 * (a[j] * std::polar(1.0, kTwoPi * j * x)).real();
    out[i] = v;
  }
  return out;
}

Modes truncated_dft(std::span<const double> samples, int m) {
  const int n = static_cast<int>(samples.size());
  Modes out(m);
  for (int j = 0; j <= m; ++j) {
    Complex acc{};
    for (int i = 0; i < n; ++i) acc += samples[i] * std::polar(1.0, -kTwoPi * j * i / n);
    out[j] = acc / static_cast<double>(n);
    out[-j] = std::conj(out[j]);
  }
  return out;
}

Modes convolve(const Modes& a, const Modes& b, int limit) {
  Modes out(limit);
  for (int j = -limit; j <= limit; ++j) {
    Complex acc{};
    for (int p = -a.m; p <= a.m; ++p) {
      const int q = j - p;
      if (q >= -b.m && q <= b.m) acc += a[p] * b[q];
    }
    out[j] = acc;
  }
  return out;
}

std::vector<Complex> half_spectrum(const Modes& a, int n) {
  std::vector<Complex> out(n / 2 + 1, Complex{});
  for (int j = 0; j <= a.m; ++j) out[j] = a[j];
  return out;
}

double smooth_cutoff(double y, double radius) {
  if (y <= radius) return 1.0;
  if (y >= radius + 1.0) return 0.0;
  const double s = y - radius;
  // 1 - (10 s^3 - 15 s^4 + 6 s^5)
  return 1.0 - 10.0 * std::pow(s, 3) + 15.0 * std::pow(s, 4) - 6.0 * std::pow(s, 5);
}

double w2inf(const Modes& a, int n) {
  double r = 0.0;
  for (int d = 0; d <= 2; ++d)
    for (double v : samples_of(derive(a, d), n)) r = std::max(r, std::abs(v));
  return r;
}

void require_interior_modes(const TorusGrid& grid) {
  if (2 * grid.m() >= grid.n())
    throw UsageError("oracle requires m_modes < n_collocation / 2");
}

struct Rhs {
  Modes psi, u;
};

Rhs rhs_modes(const Modes& psi, const Modes& u, const ModelParams& p, const TorusGrid& grid) {
  const int n = grid.n();
  const int m = grid.m();
  const int limit = grid.dealias_limit();
  const double c = 0.5 * p.capillarity;

  double phi_u = 1.0, phi_psi = 1.0;
  if (p.enable_cutoff) {
    phi_u = smooth_cutoff(w2inf(u, n), p.cutoff_radius);
    phi_psi = smooth_cutoff(w2inf(psi, n), p.cutoff_radius);
  }

  const Modes psi_x = derive(psi, 1), psi_xx = derive(psi, 2), psi_xxx = derive(psi, 3);
  const Modes u_x = derive(u, 1), u_xx = derive(u, 2);
  const auto psi_pts = samples_of(psi, n);
  std::vector<double> e_pts(n), p_pts(n);
  for (int i = 0; i < n; ++i) {
    e_pts[i] = std::exp((p.alpha - 1.0) * psi_pts[i]);
    p_pts[i] = std::exp((p.gamma - 1.0) * psi_pts[i]);
  }
  const Modes E = truncated_dft(e_pts, m);
  const Modes P = truncated_dft(p_pts, m);

  Rhs r{Modes(m), Modes(m)};
  add_to(r.psi, scale(convolve(u, psi_x, limit), -phi_u));
  add_to(r.psi, scale(u_x, -1.0));

  add_to(r.u, scale(psi_xxx, c));
  add_to(r.u, scale(convolve(u, u_x, limit), -phi_u));
  add_to(r.u, scale(convolve(P, psi_x, limit), -phi_psi * p.gamma));
  add_to(r.u, scale(convolve(E, u_xx, limit), phi_psi));
  add_to(r.u, scale(convolve(E, convolve(psi_x, u_x, limit), limit), phi_psi * p.alpha));
  add_to(r.u, scale(convolve(psi_x, psi_xx, limit), phi_psi * c));
  return r;
}

Modes axpy(const Modes& y, double a, const Modes& x) {
  Modes out = y;
  for (int j = -y.m; j <= y.m; ++j) out[j] += a * x[j];
  return out;
}

}  // namespace

std::string OracleReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["quantity"] = quantity;
  j["primary"] = primary;
  j["oracle"] = oracle;
  j["abs_discrepancy"] = abs_discrepancy;
  j["rel_discrepancy"] = rel_discrepancy;
  j["resolution"] = resolution;
  return j.dump(2);
}

OracleReport make_report(std::string quantity, double primary, double oracle,
                         std::map<std::string, std::string> resolution) {
  OracleReport r;
  r.quantity = std::move(quantity);
  r.primary = primary;
  r.oracle = oracle;
  r.abs_discrepancy = std::abs(primary - oracle);
  const double scale = std::max(std::abs(primary), std::abs(oracle));
  r.rel_discrepancy = scale > 0.0 ? r.abs_discrepancy / scale : 0.0;
  r.resolution = std::move(resolution);
  return r;
}

std::vector<Complex> naive_dft(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  const Modes m = truncated_dft(samples, n / 2);
  return half_spectrum(m, n);
}

double evaluate(const RealField& field, double x, int derivative_order) {
  const auto c = field.spectral();
  const int n = field.size();
  double v = derivative_order == 0 ? c[0].real() : 0.0;
  for (int j = 1; j <= n / 2; ++j) {
    const Complex ik(0.0, kTwoPi * j);
    const Complex term = c[j] * std::pow(ik, derivative_order) * std::polar(1.0, kTwoPi * j * x);
    if (2 * j == n) {
      if (derivative_order % 2 == 0) v += term.real();
    } else {
      v += 2.0 * term.real();
    }
  }
  return v;
}

RealField direct_product(const RealField& a, const RealField& b, const TorusGrid& grid) {
  require_interior_modes(grid);
  const Modes p = convolve(modes_of(a, grid.m()), modes_of(b, grid.m()), grid.dealias_limit());
  return RealField::from_spectral(grid, half_spectrum(p, grid.n()));
}

std::vector<double> fd_derivative(std::span<const double> samples, int order) {
  static constexpr double d1[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
  static constexpr double d2[7] = {1.0 / 90,  -3.0 / 20, 3.0 / 2,  -49.0 / 18,
                                   3.0 / 2,   -3.0 / 20, 1.0 / 90};
  if (order != 1 && order != 2) throw UsageError("fd_derivative supports orders 1 and 2");
  const int n = static_cast<int>(samples.size());
  const double* w = order == 1 ? d1 : d2;
  const double h = 1.0 / n;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int s = -3; s <= 3; ++s) acc += w[s + 3] * samples[((i + s) % n + n) % n];
    out[i] = acc / std::pow(h, order);
  }
  return out;
}

double trapezoid(const std::function<double(double)>& f, int points) {
  double acc = 0.0;
  for (int i = 0; i < points; ++i) acc += f(static_cast<double>(i) / points);
  return acc / points;
}

double dense_quadrature(const std::function<double(const PointValues&)>& integrand,
                        const State& state, const TorusGrid& grid, int oversample) {
  if (oversample < 4) throw UsageError("dense quadrature needs oversample >= 4");
  return trapezoid(
      [&](double x) {
        const PointValues v{x,
                            evaluate(state.psi, x, 0),
                            evaluate(state.psi, x, 1),
                            evaluate(state.psi, x, 2),
                            evaluate(state.u, x, 0),
                            evaluate(state.u, x, 1)};
        return integrand(v);
      },
      grid.n() * oversample);
}

std::pair<std::vector<Complex>, std::vector<Complex>> galerkin_rhs(const State& state,
                                                                   const ModelParams& params,
                                                                   const TorusGrid& grid) {
  require_interior_modes(grid);
  const Rhs r = rhs_modes(modes_of(state.psi, grid.m()), modes_of(state.u, grid.m()), params, grid);
  return {half_spectrum(r.psi, grid.n()), half_spectrum(r.u, grid.n())};
}

double rk4_step_bound(const State& state, const ModelParams& params, const TorusGrid& grid) {
  const int n = grid.n();
  const double k = kTwoPi * grid.m();
  const auto psi = samples_of(modes_of(state.psi, grid.m()), n);
  const auto u = samples_of(modes_of(state.u, grid.m()), n);
  double e_max = 0.0, p_max = 0.0, u_max = 0.0;
  for (int i = 0; i < n; ++i) {
    e_max = std::max(e_max, std::exp((params.alpha - 1.0) * psi[i]));
    p_max = std::max(p_max, std::exp((params.gamma - 1.0) * psi[i]));
    u_max = std::max(u_max, std::abs(u[i]));
  }
  // Spectral radius bound of the frozen-coefficient linearization; RK4 is stable
  // for |lambda dt| <= 2.5 along both axes.
  const double lambda = std::sqrt(0.5 * params.capillarity) * k * k + e_max * k * k +
                        (u_max + params.gamma * p_max) * k;
  return 2.5 / lambda;
}

State reference_trajectory(const State& initial, const ModelParams& params,
                           const NoiseModel& noise, const TorusGrid& grid, double t_end,
                           double dt_fine, std::uint64_t path_seed) {
  require_interior_modes(grid);
  if (!(dt_fine > 0.0) || !(t_end > 0.0)) throw UsageError("t_end and dt_fine must be positive");
  const double bound = rk4_step_bound(initial, params, grid);
  if (dt_fine > bound)
    throw UsageError("dt_fine " + std::to_string(dt_fine) + " exceeds the RK4 stability bound " +
                     std::to_string(bound));
  const auto steps = std::llround(t_end / dt_fine);
  const int n = grid.n();
  const int m = grid.m();
  Modes psi = modes_of(initial.psi, m), u = modes_of(initial.u, m);

  for (long long s = 0; s < steps; ++s) {
    Modes forcing(m);
    if (!noise.is_zero()) {
      const auto inc = sample_increment(path_seed, s, dt_fine, noise);
      const double phi_u =
          params.enable_cutoff ? smooth_cutoff(w2inf(u, n), params.cutoff_radius) : 1.0;
      const auto psi_pts = samples_of(psi, n);
      const auto u_pts = samples_of(u, n);
      std::vector<double> f(n, 0.0);
      for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        for (int k = 1; k <= noise.k_modes; ++k)
          f[i] += phi_u * noise.coefficient(k, x, std::exp(psi_pts[i]), u_pts[i]) * inc.dW[k - 1];
      }
      forcing = truncated_dft(f, m);
    }
    const Rhs k1 = rhs_modes(psi, u, params, grid);
    const Rhs k2 = rhs_modes(axpy(psi, 0.5 * dt_fine, k1.psi), axpy(u, 0.5 * dt_fine, k1.u), params, grid);
    const Rhs k3 = rhs_modes(axpy(psi, 0.5 * dt_fine, k2.psi), axpy(u, 0.5 * dt_fine, k2.u), params, grid);
    const Rhs k4 = rhs_modes(axpy(psi, dt_fine, k3.psi), axpy(u, dt_fine, k3.u), params, grid);
    for (int j = -m; j <= m; ++j) {
      psi[j] += dt_fine / 6.0 * (k1.psi[j] + 2.0 * k2.psi[j] + 2.0 * k3.psi[j] + k4.psi[j]);
      u[j] += dt_fine / 6.0 * (k1.u[j] + 2.0 * k2.u[j] + 2.0 * k3.u[j] + k4.u[j]) + forcing[j];
    }
    for (const auto& v : u.c)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericalBlowup("oracle trajectory diverged", (s + 1) * dt_fine, "u");
  }
  return {RealField::from_spectral(grid, half_spectrum(psi, n)),
          RealField::from_spectral(grid, half_spectrum(u, n)), initial.time + steps * dt_fine};
}

State linearized_exact(const State& initial, const ModelParams& params, const TorusGrid& grid,
                       double t) {
  const int n = grid.n();
  const double c = 0.5 * params.capillarity;
  const Complex I(0.0, 1.0);
  const auto p0 = initial.psi.spectral();
  const auto u0 = initial.u.spectral();
  std::vector<Complex> p1(p0.size(), Complex{}), u1(u0.size(), Complex{});
  for (int j = 0; j <= grid.m() && 2 * j < n; ++j) {
    const double k = kTwoPi * j;
    // M = t [[0, -ik], [-i(c k^3 + gamma k), -k^2]]
    const Complex a = 0.0, b = -I * k * t, cc = -I * (c * k * k * k + params.gamma * k) * t;
    const Complex d = -k * k * t;
    const Complex half_tr = 0.5 * (a + d);
    const Complex s = std::sqrt(half_tr * half_tr - (a * d - b * cc));
    const Complex ep = std::exp(half_tr + s), em = std::exp(half_tr - s);
    const Complex ch = 0.5 * (ep + em);
    const Complex sh = std::abs(s) < 1e-8 ? std::exp(half_tr) * (1.0 + s * s / 6.0)
                                          : (ep - em) / (2.0 * s);
    p1[j] = ch * p0[j] + sh * ((a - half_tr) * p0[j] + b * u0[j]);
    u1[j] = ch * u0[j] + sh * (cc * p0[j] + (d - half_tr) * u0[j]);
  }
  return {RealField::from_spectral(grid, std::move(p1)), RealField::from_spectral(grid, std::move(u1)),
          initial.time + t};
}

}  // namespace qns::oracle
