#include <doctest.h>

#include "qns/errors.hpp"
#include "qns/model.hpp"
#include "qns/oracle.hpp"
#include "test_util.hpp"

using namespace qns;
using qns::test::kTwoPi;

namespace {

ModelParams no_cutoff() {
  ModelParams p;
  p.cutoff_radius = 1e12;
  return p;
}

// Samples g on an 8x finer grid and band-limits the result to |j| <= limit of `grid`.
RealField band_limited(const TorusGrid& grid, int limit, const std::function<double(double)>& g) {
  const int fine = 8 * grid.n();
  std::vector<double> v(fine);
  for (int i = 0; i < fine; ++i) v[i] = g(static_cast<double>(i) / fine);
  return restrict_samples(v, grid, limit);
}

State smooth_state(const TorusGrid& grid) {
  return state_from_functions(
      grid, [](double x) { return std::exp(0.1 * std::cos(kTwoPi * x) + 0.05 * std::sin(2 * kTwoPi * x)); },
      [](double x) { return 0.3 * std::sin(kTwoPi * x) + 0.1 * std::cos(3 * kTwoPi * x); });
}

}  // namespace

TEST_CASE("cut-off function") {
  const double R = 3.0;
  CHECK(cutoff_phi(0.5 * R, R) == 1.0);
  CHECK(cutoff_phi(R, R) == 1.0);
  CHECK(cutoff_phi(R + 1.0, R) == 0.0);
  CHECK(cutoff_phi(R + 5.0, R) == 0.0);
  const double mid = cutoff_phi(R + 0.5, R);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  double prev = 1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = cutoff_phi(R + i / 100.0, R);
    CHECK(v <= prev);
    prev = v;
  }
  // Flat joins: the difference quotients at both ends are O(h^2).
  const double h = 1e-4;
  CHECK(std::abs((cutoff_phi(R + h, R) - 1.0) / h) < 1e-6);
  CHECK(std::abs(cutoff_phi(R + 1.0 - h, R) / h) < 1e-6);
  CHECK_THROWS_AS(cutoff_phi(-1.0, R), UsageError);
}

TEST_CASE("model parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.global_regularity_regime());
  p.alpha = 0.6;
  CHECK_FALSE(p.global_regularity_regime());
  p.gamma = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.monitor_order = 3;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.cutoff_radius = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.alpha = -0.1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("W^{2,inf} norm") {
  const TorusGrid grid(64, 21);
  CHECK(w2inf_norm(RealField::constant(grid, -2.5), grid) == doctest::Approx(2.5));
  const auto s = RealField::sample(grid, [](double x) { return std::sin(kTwoPi * x); });
  CHECK(w2inf_norm(s, grid) == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-12));

  // Brute-force evaluation on an 8x finer grid bounds the collocation maximum from above
  // and agrees with the norm of the same field carried on that finer grid.
  const auto f = test::random_bandlimited(grid, 5, 31);
  double brute = 0.0;
  for (int i = 0; i < 8 * grid.n(); ++i)
    for (int d = 0; d <= 2; ++d)
      brute = std::max(brute, std::abs(oracle::evaluate(f, i / (8.0 * grid.n()), d)));
  CHECK(w2inf_norm(f, grid) <= brute);
  CHECK(w2inf_norm(f, grid) >= 0.95 * brute);
  const TorusGrid fine_grid(512, 21);
  const auto f_fine = RealField::from_physical(fine_grid, interpolate(f, 512));
  CHECK(w2inf_norm(f_fine, fine_grid) == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("psi right-hand side") {
  const TorusGrid grid(64, 21);
  const auto params = no_cutoff();
  const auto still = state_from_functions(grid, [](double x) { return 1.0 + 0.3 * std::cos(kTwoPi * x); },
                                          [](double) { return 0.0; });
  CHECK(max_abs(rhs_psi(still, params, grid).physical()) < 1e-13);

  const auto flat = state_from_functions(grid, [](double) { return 2.0; },
                                         [](double x) { return std::sin(kTwoPi * x); });
  const auto r = rhs_psi(flat, params, grid);
  for (int i = 0; i < grid.n(); ++i)
    CHECK(r.physical()[i] == doctest::Approx(-kTwoPi * std::cos(kTwoPi * i / 64.0)).epsilon(1e-12));

  const auto s = state_from_functions(grid, [](double x) { return std::exp(0.1 * std::cos(kTwoPi * x)); },
                                      [](double x) { return std::sin(kTwoPi * x); });
  const auto expected = band_limited(grid, grid.dealias_limit(), [](double x) {
    const double u = std::sin(kTwoPi * x), u_x = kTwoPi * std::cos(kTwoPi * x);
    const double psi_x = -0.1 * kTwoPi * std::sin(kTwoPi * x);
    return -u * psi_x - u_x;
  });
  CHECK(test::max_diff(rhs_psi(s, params, grid).physical(), expected.physical()) < 1e-10);
}

TEST_CASE("velocity right-hand side") {
  const TorusGrid grid(64, 21);
  auto params = no_cutoff();

  const auto eq = state_from_functions(grid, [](double) { return 1.7; }, [](double) { return 0.0; });
  CHECK(max_abs(rhs_u_deterministic(eq, params, grid).physical()) == 0.0);
  const auto drift = state_from_functions(grid, [](double) { return 0.4; }, [](double) { return 1.3; });
  CHECK(max_abs(rhs_u_deterministic(drift, params, grid).physical()) < 1e-14);
  CHECK(max_abs(rhs_psi(drift, params, grid).physical()) < 1e-14);

  params.alpha = 1.0;
  const auto unit = state_from_functions(grid, [](double) { return 1.0; },
                                         [](double x) { return std::sin(kTwoPi * x); });
  const auto t = momentum_terms(unit, params, grid);
  for (int i = 0; i < grid.n(); ++i) {
    const double x = i / 64.0;
    CHECK(t.viscosity.physical()[i] == doctest::Approx(-kTwoPi * kTwoPi * std::sin(kTwoPi * x)).epsilon(1e-12));
    CHECK(t.advection.physical()[i] ==
          doctest::Approx(-std::numbers::pi * std::sin(2 * kTwoPi * x)).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("momentum terms match pointwise evaluation") {
  const TorusGrid grid(128, 42);
  ModelParams params = no_cutoff();
  params.gamma = 1.5;
  params.alpha = 0.5;
  const State s = smooth_state(grid);
  const auto t = momentum_terms(s, params, grid);

  struct Point {
    double psi, psi_x, psi_xx, psi_xxx, u, u_x, u_xx;
  };
  auto at = [&](double x) {
    return Point{oracle::evaluate(s.psi, x), oracle::evaluate(s.psi, x, 1), oracle::evaluate(s.psi, x, 2),
                 oracle::evaluate(s.psi, x, 3), oracle::evaluate(s.u, x), oracle::evaluate(s.u, x, 1),
                 oracle::evaluate(s.u, x, 2)};
  };
  const double g = params.gamma, a = params.alpha, half_kappa = 0.5 * params.capillarity;
  const int lim = grid.dealias_limit();
  const std::vector<std::pair<const RealField*, std::function<double(double)>>> cases{
      {&t.advection, [&](double x) { auto p = at(x); return -p.u * p.u_x; }},
      {&t.pressure, [&](double x) { auto p = at(x); return -g * std::exp((g - 1) * p.psi) * p.psi_x; }},
      {&t.viscosity, [&](double x) { auto p = at(x); return std::exp((a - 1) * p.psi) * p.u_xx; }},
      {&t.viscosity_gradient,
       [&](double x) { auto p = at(x); return a * std::exp((a - 1) * p.psi) * p.psi_x * p.u_x; }},
      {&t.dispersion, [&](double x) { return half_kappa * at(x).psi_xxx; }},
      {&t.quantum_nonlinearity, [&](double x) { auto p = at(x); return half_kappa * p.psi_x * p.psi_xx; }},
  };
  for (const auto& [term, fn] : cases) {
    const auto expected = band_limited(grid, lim, fn);
    CHECK(test::max_diff(term->physical(), expected.physical()) < 1e-9);
  }

  // Sum against the independent Galerkin assembly of the oracle.
  const auto [dpsi, du] = oracle::galerkin_rhs(s, params, grid);
  const auto psi_rhs = rhs_psi(s, params, grid);
  const auto u_rhs = rhs_u_deterministic(s, params, grid);
  double worst = 0.0;
  for (int j = 0; j < grid.spectral_size(); ++j)
    worst = std::max({worst, std::abs(psi_rhs.spectral()[j] - dpsi[j]), std::abs(u_rhs.spectral()[j] - du[j])});
  CHECK(worst < 1e-9);
}

TEST_CASE("cut-off factors") {
  const TorusGrid grid(64, 21);
  const State s = smooth_state(grid);
  const Norms n = w2inf_norms(s, grid);
  ModelParams p;
  p.cutoff_radius = std::max(n.psi, n.u);
  auto [phi_u, phi_psi] = cutoff_factors(n, p);
  CHECK(phi_u == 1.0);
  CHECK(phi_psi == 1.0);

  // Inactive cut-off: R and 2R give bit-identical right-hand sides.
  ModelParams p2 = p;
  p2.cutoff_radius = 2.0 * p.cutoff_radius;
  CHECK(rhs_psi(s, p, grid) == rhs_psi(s, p2, grid));
  CHECK(rhs_u_deterministic(s, p, grid) == rhs_u_deterministic(s, p2, grid));

  p.cutoff_radius = 0.5 * std::min(n.psi, n.u) - 1.0;
  if (p.cutoff_radius > 0) {
    std::tie(phi_u, phi_psi) = cutoff_factors(n, p);
    CHECK(phi_u == 0.0);
    CHECK(phi_psi == 0.0);
  }
  p.enable_cutoff = false;
  std::tie(phi_u, phi_psi) = cutoff_factors(n, p);
  CHECK(phi_u == 1.0);
  CHECK(phi_psi == 1.0);
}

TEST_CASE("state checks") {
  const TorusGrid grid(32, 10);
  std::vector<double> psi(32, 0.0), u(32, 0.0);
  psi[3] = std::nan("");
  const State bad{RealField::from_physical(grid, psi), RealField::from_physical(grid, u), 0.25};
  CHECK_THROWS_AS(check_state(bad), NumericalBlowup);
  CHECK_THROWS_AS(rhs_psi(bad, ModelParams{}, grid), NumericalBlowup);
  try {
    check_state(bad);
  } catch (const NumericalBlowup& e) {
    CHECK(e.time() == 0.25);
  }

  const auto big = state_from_functions(grid, [](double) { return std::exp(60.0); }, [](double) { return 0.0; });
  CHECK_NOTHROW(check_state(big));
  CHECK_THROWS_AS(check_state(big, 50.0), NumericalBlowup);

  const auto s = state_from_functions(grid, [](double x) { return 2.0 + std::cos(kTwoPi * x); },
                                      [](double x) { return std::sin(kTwoPi * x); });
  for (int j = 11; j <= 16; ++j) {
    CHECK(s.psi.mode(j) == Complex(0.0, 0.0));
    CHECK(s.u.mode(j) == Complex(0.0, 0.0));
  }
}

TEST_CASE("quantum identity") {
  const TorusGrid grid(256, 85);
  CHECK(quantum_identity_residual(RealField::constant(grid, 1.0), grid) < 1e-12);
  const auto r1 = RealField::sample(grid, [](double x) { return 2.0 + std::cos(kTwoPi * x); });
  CHECK(quantum_identity_residual(r1, grid) < 1e-7);
  const auto r2 = RealField::sample(grid, [](double x) { return std::exp(0.3 * std::sin(2 * kTwoPi * x)); });
  CHECK(quantum_identity_residual(r2, grid) < 1e-7);

  const auto neg = RealField::sample(grid, [](double x) { return std::cos(kTwoPi * x); });
  CHECK_THROWS_AS(quantum_identity_residual(neg, grid), DomainError);
}
