#include <doctest.h>

#include "qns/errors.hpp"
#include "qns/noise.hpp"
#include "test_util.hpp"

using namespace qns;
using qns::test::kTwoPi;

TEST_CASE("noise model parameters") {
  NoiseModel m;
  m.base_amplitude = 0.5;
  CHECK(m.amplitude(1) == 0.5);
  CHECK(m.amplitude(4) == doctest::Approx(0.5 / 16));
  double sum = 0.0;
  for (int k = 1; k <= 16; ++k) sum += m.amplitude(k);
  CHECK(m.amplitude_sum() == doctest::Approx(sum));
  // Tail a0 sum_{k>16} k^-2 lies below a0/16.
  double tail = 0.0;
  for (int k = 17; k < 200000; ++k) tail += 0.5 / (double(k) * k);
  CHECK(tail <= m.tail_bound());
  CHECK(m.tail_bound() == doctest::Approx(0.5 / 16));

  NoiseModel bad = m;
  bad.amplitude_decay = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = m;
  bad.k_modes = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = m;
  bad.base_amplitude = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  CHECK(noise_shape_from_string("trig_density_weighted") == NoiseShape::trig_density_weighted);
  CHECK(noise_shape_from_string("off") == NoiseShape::off);
  CHECK(noise_shape_from_string("additive") == NoiseShape::off);
  CHECK_THROWS_AS(noise_shape_from_string("white"), ConfigError);
}

TEST_CASE("increments are replayable") {
  NoiseModel m;
  const auto a = sample_increment(99, 7, 1e-3, m);
  const auto b = sample_increment(99, 7, 1e-3, m);
  CHECK(a.dW == b.dW);
  CHECK(a.dW.size() == 16);
  CHECK(sample_increment(99, 8, 1e-3, m).dW != a.dW);
  CHECK(sample_increment(100, 7, 1e-3, m).dW != a.dW);
  CHECK(path_seed(5, 0) != path_seed(5, 1));
  CHECK(path_seed(5, 3) == path_seed(5, 3));

  // Summing refined increments gives the coarse increment of the same path.
  const auto coarse = refined_increment(99, 3, 4e-3, 4, m);
  std::vector<double> manual(16, 0.0);
  for (int i = 0; i < 4; ++i) {
    const auto fine = sample_increment(99, 12 + i, 1e-3, m);
    for (int k = 0; k < 16; ++k) manual[k] += fine.dW[k];
  }
  for (int k = 0; k < 16; ++k) CHECK(coarse.dW[k] == doctest::Approx(manual[k]).epsilon(1e-15));
  CHECK(refined_increment(99, 7, 1e-3, 1, m).dW == a.dW);
}

TEST_CASE("increment statistics") {
  NoiseModel m;
  const double dt = 2e-3;
  const int N = 100000;
  double s1 = 0, s11 = 0, s2 = 0, s12 = 0;
  for (int i = 0; i < N; ++i) {
    const auto inc = sample_increment(424242, i, dt, m);
    s1 += inc.dW[0];
    s2 += inc.dW[1];
    s11 += inc.dW[0] * inc.dW[0];
    s12 += inc.dW[0] * inc.dW[1];
  }
  const double mean1 = s1 / N, mean2 = s2 / N;
  const double var = s11 / N - mean1 * mean1;
  const double cov = s12 / N - mean1 * mean2;
  CHECK(std::abs(var - dt) < 0.03 * dt);
  CHECK(std::abs(cov) < 4.0 / std::sqrt(double(N)) * dt);
}

TEST_CASE("forcing field") {
  const TorusGrid grid(64, 21);
  ModelParams params;
  NoiseModel m;
  m.base_amplitude = 0.7;
  const auto s = state_from_functions(grid, [](double x) { return 1.0 + 0.3 * std::cos(kTwoPi * x); },
                                      [](double x) { return 0.4 * std::sin(kTwoPi * x); });

  WienerIncrement zero{std::vector<double>(16, 0.0), 0, 0, 1e-3};
  CHECK(max_abs(forcing_field(s, zero, m, params, grid).physical()) == 0.0);

  const auto rest = state_from_functions(grid, [](double x) { return 1.0 + 0.3 * std::cos(kTwoPi * x); },
                                         [](double) { return 0.0; });
  const auto inc = sample_increment(5, 0, 1e-3, m);
  CHECK(max_abs(forcing_field(rest, inc, m, params, grid).physical()) == 0.0);

  // Single active mode k = 3 at rho = 1, u = 1.
  const auto unit = state_from_functions(grid, [](double) { return 1.0; }, [](double) { return 1.0; });
  WienerIncrement third{std::vector<double>(16, 0.0), 0, 0, 1.0};
  third.dW[2] = 1.0;
  const auto f = forcing_field(unit, third, m, params, grid);
  for (int i = 0; i < grid.n(); ++i) {
    const double x = i / 64.0;
    CHECK(std::abs(f.physical()[i] - m.amplitude(3) * std::sin(3 * kTwoPi * x) * std::tanh(1.0) * 0.5) < 1e-12);
  }

  // Linear in the increment.
  WienerIncrement doubled = inc;
  for (double& w : doubled.dW) w *= 2.0;
  const auto f1 = forcing_field(s, inc, m, params, grid);
  const auto f2 = forcing_field(s, doubled, m, params, grid);
  for (int i = 0; i < grid.n(); ++i) CHECK(f2.physical()[i] == doctest::Approx(2.0 * f1.physical()[i]));

  // Saturated cut-off switches the forcing off.
  params.cutoff_radius = 0.5 * w2inf_norm(s.u, grid) - 1.0;
  REQUIRE(params.cutoff_radius > 0.0);
  CHECK(max_abs(forcing_field(s, inc, m, params, grid).physical()) == 0.0);

  // Additive noise ignores the state.
  NoiseModel add = m;
  add.shape = NoiseShape::off;
  const auto fa = forcing_field(rest, third, add, ModelParams{}, grid);
  for (int i = 0; i < grid.n(); ++i)
    CHECK(std::abs(fa.physical()[i] - m.amplitude(3) * std::sin(3 * kTwoPi * i / 64.0)) < 1e-12);
}

TEST_CASE("forcing has zero mean over increments") {
  const TorusGrid grid(32, 10);
  NoiseModel m;
  m.base_amplitude = 1.0;
  const auto s = state_from_functions(grid, [](double x) { return 1.0 + 0.3 * std::cos(kTwoPi * x); },
                                      [](double x) { return 0.8 * std::sin(kTwoPi * x); });
  const int N = 10000;
  const double dt = 1e-2;
  std::vector<double> mean(grid.n(), 0.0), sq(grid.n(), 0.0);
  for (int i = 0; i < N; ++i) {
    const auto f = forcing_field(s, sample_increment(77, i, dt, m), m, ModelParams{}, grid);
    for (int j = 0; j < grid.n(); ++j) {
      mean[j] += f.physical()[j] / N;
      sq[j] += f.physical()[j] * f.physical()[j] / N;
    }
  }
  double mean_norm = 0.0, sigma = 0.0;
  for (int j = 0; j < grid.n(); ++j) {
    mean_norm += mean[j] * mean[j] / grid.n();
    sigma += (sq[j] - mean[j] * mean[j]) / grid.n();
  }
  CHECK(std::sqrt(mean_norm) < 4.0 * std::sqrt(sigma) / std::sqrt(double(N)));
}

TEST_CASE("growth bound on random states") {
  const TorusGrid grid(64, 21);
  NoiseModel m;
  m.base_amplitude = 0.9;
  const double c = m.amplitude_sum();
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = test::random_bandlimited(grid, 5, 600 + trial, 0.8);
    const auto u = test::random_bandlimited(grid, 5, 700 + trial, 2.0);
    double rho_max = 0.0, u_max = 0.0, worst = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
      const double rho = std::exp(psi.physical()[i]), v = u.physical()[i];
      rho_max = std::max(rho_max, rho);
      u_max = std::max(u_max, std::abs(v));
      double g = 0.0;
      for (int k = 1; k <= m.k_modes; ++k) g += std::abs(rho * m.coefficient(k, i / 64.0, rho, v));
      worst = std::max(worst, g);
    }
    CHECK(worst <= c * (rho_max + rho_max * u_max));
  }
}

TEST_CASE("coefficient hypotheses on a lattice") {
  NoiseModel m;
  m.base_amplitude = 1.0;
  const auto r = verify_noise_hypotheses(m);
  CHECK(r.lattice_points >= 10000);
  CHECK(r.passed());
  CHECK(r.worst_derivative_ratio <= 1.0);

  m.shape = NoiseShape::off;
  const auto a = verify_noise_hypotheses(m);
  CHECK(a.passed());
}
