#include <doctest.h>

#include "qns/errors.hpp"
#include "qns/oracle.hpp"
#include "qns/spectral.hpp"
#include "test_util.hpp"

using namespace qns;
using qns::test::kTwoPi;

TEST_CASE("grid geometry") {
  const TorusGrid grid(96, 32);
  CHECK(grid.spectral_size() == 49);
  CHECK(grid.dealias_limit() == 21);
  CHECK(grid.dealias_mask(21));
  CHECK_FALSE(grid.dealias_mask(22));
  CHECK_FALSE(grid.dealias_mask(-22));
  CHECK(grid.padded_size() >= 2 * 32 + 21 + 1);

  const auto modes = grid.mode_indices();
  const auto k = grid.wavenumbers();
  REQUIRE(modes.size() == 96);
  CHECK(modes[0] == 0);
  CHECK(modes[47] == 47);
  CHECK(modes[48] == -48);
  CHECK(modes[95] == -1);
  for (std::size_t i = 0; i < modes.size(); ++i) CHECK(k[i] == doctest::Approx(kTwoPi * modes[i]));

  const TorusGrid plain(96, 32, false);
  CHECK(plain.dealias_limit() == 32);

  CHECK_THROWS_AS(TorusGrid(15, 4), ConfigError);
  CHECK_THROWS_AS(TorusGrid(64, 33), ConfigError);
  CHECK_THROWS_AS(TorusGrid(64, 0), ConfigError);
}

TEST_CASE("forward transform examples") {
  const TorusGrid grid(16, 8);
  const auto one = RealField::constant(grid, 1.0);
  CHECK(one.mode(0).real() == doctest::Approx(1.0));
  for (int j = 1; j <= 8; ++j) CHECK(std::abs(one.mode(j)) < 1e-15);

  const auto s = RealField::sample(grid, [](double x) { return std::sin(kTwoPi * x); });
  CHECK(s.mode(1).imag() == doctest::Approx(-0.5));
  CHECK(s.mode(-1).imag() == doctest::Approx(0.5));
  for (int j = 2; j <= 8; ++j) CHECK(std::abs(s.mode(j)) < 1e-15);
  CHECK(std::abs(s.mode(0)) < 1e-15);

  const std::vector<double> wrong(10, 0.0);
  CHECK_THROWS_AS(transform_forward(wrong, grid), ConfigError);
}

TEST_CASE("round trip and Parseval on grid sizes 16..1024") {
  for (int n = 16; n <= 1024; n *= 2) {
    const TorusGrid grid(n, n / 2);
    const auto f = test::random_bandlimited(grid, std::min(n / 4, 10), 100 + n, 1.0, 0.3);
    const auto back = transform_inverse(transform_forward(f.physical(), grid), grid);
    CHECK(test::max_diff(back, f.physical()) < 1e-12 * max_abs(f.physical()));

    double quad = 0.0;
    for (double v : f.physical()) quad += v * v;
    quad = std::sqrt(quad / n);
    CHECK(l2_norm(f) == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("forward transform matches the direct DFT") {
  const TorusGrid grid(64, 32);
  const auto f = test::random_bandlimited(grid, 31, 7);
  const auto fast = transform_forward(f.physical(), grid);
  const auto slow = oracle::naive_dft(f.physical());
  REQUIRE(fast.size() == slow.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < fast.size(); ++j) worst = std::max(worst, std::abs(fast[j] - slow[j]));
  CHECK(worst < 1e-13);
}

TEST_CASE("projection") {
  const TorusGrid grid(64, 10);
  const auto in_hm = test::random_bandlimited(grid, 10, 3);
  const auto p = project(in_hm, grid);
  CHECK(test::max_diff(p.physical(), in_hm.physical()) < 1e-13);

  const auto high = RealField::sample(grid, [](double x) { return std::sin(kTwoPi * 11 * x); });
  CHECK(max_abs(project(high, grid).physical()) < 1e-14);

  const auto rough = test::random_bandlimited(grid, 30, 5);
  const auto pr = project(rough, grid);
  CHECK(l2_norm(pr) <= l2_norm(rough));
  for (int j = 11; j <= 32; ++j) CHECK(pr.mode(j) == Complex(0.0, 0.0));
  CHECK(project(pr, grid) == pr);

  // f - Pf is orthogonal to H_m.
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = test::random_bandlimited(grid, 10, 50 + trial);
    double inner = 0.0;
    for (int i = 0; i < grid.n(); ++i)
      inner += (rough.physical()[i] - pr.physical()[i]) * g.physical()[i];
    CHECK(std::abs(inner / grid.n()) < 1e-14);
  }
}

TEST_CASE("derivatives") {
  const TorusGrid grid(64, 21);
  const auto s = RealField::sample(grid, [](double x) { return std::sin(kTwoPi * x); });
  const auto ds = derivative(s, 1, grid);
  const auto expected = RealField::sample(grid, [](double x) { return kTwoPi * std::cos(kTwoPi * x); });
  CHECK(test::max_diff(ds.physical(), expected.physical()) < 1e-12);

  // Round-off in the unresolved modes is amplified by k^3; a small grid keeps it near 1e-12.
  const TorusGrid small(16, 5);
  const auto c = RealField::sample(small, [](double x) { return std::cos(kTwoPi * x); });
  const auto d3 = derivative(c, 3, small);
  const auto e3 = RealField::sample(small, [](double x) { return std::pow(kTwoPi, 3) * std::sin(kTwoPi * x); });
  CHECK(test::max_diff(d3.physical(), e3.physical()) < 1e-12 * std::pow(kTwoPi, 3));

  const auto f = project(test::random_bandlimited(grid, 12, 9), grid);
  const auto twice = derivative(derivative(f, 1, grid), 1, grid);
  const auto once = derivative(f, 2, grid);
  for (int j = 0; j < grid.spectral_size(); ++j) {
    CHECK(twice.spectral()[j].real() == doctest::Approx(once.spectral()[j].real()).epsilon(1e-14));
    CHECK(twice.spectral()[j].imag() == doctest::Approx(once.spectral()[j].imag()).epsilon(1e-14));
  }

  CHECK_THROWS_AS(derivative(f, 0, grid), UsageError);
  CHECK_THROWS_AS(derivative(f, 5, grid), UsageError);
}

TEST_CASE("derivative agrees with sixth-order finite differences") {
  // Error of the FD stencil scales as h^6: doubling n shrinks it by about 64.
  std::vector<double> errors;
  for (int n : {128, 256}) {
    const TorusGrid grid(n, n / 2 - 1);
    const auto f = test::random_bandlimited(grid, 6, 11);
    for (int order : {1, 2}) {
      const auto spectral = derivative(f, order, grid);
      const auto fd = oracle::fd_derivative(f.physical(), order);
      if (order == 1) errors.push_back(test::max_diff(spectral.physical(), fd));
    }
  }
  CHECK(errors[0] < 1e-4);
  CHECK(errors[0] / errors[1] > 40.0);
}

TEST_CASE("dealiased products") {
  const TorusGrid grid(64, 21);
  const auto s = RealField::sample(grid, [](double x) { return std::sin(kTwoPi * x); });
  const auto sq = dealias_product(s, s, grid);
  const auto expected = RealField::sample(grid, [](double x) { return 0.5 - 0.5 * std::cos(2 * kTwoPi * x); });
  CHECK(test::max_diff(sq.physical(), expected.physical()) < 1e-14);
  for (int j = 3; j <= 32; ++j) CHECK(std::abs(sq.mode(j)) < 1e-16);

  const auto b = test::random_bandlimited(grid, 14, 12);
  const auto two = RealField::constant(grid, 2.0);
  const auto scaled = dealias_product(two, b, grid);
  for (int i = 0; i < grid.n(); ++i) CHECK(scaled.physical()[i] == doctest::Approx(2.0 * b.physical()[i]));

  // Full-band inputs in H_m: the product must match the direct convolution on the mask.
  const auto a = project(test::random_bandlimited(grid, 30, 13), grid);
  const auto c = project(test::random_bandlimited(grid, 30, 14), grid);
  const auto fast = dealias_product(a, c, grid);
  const auto slow = oracle::direct_product(a, c, grid);
  double worst = 0.0;
  for (int j = 0; j <= 32; ++j) worst = std::max(worst, std::abs(fast.mode(j) - slow.mode(j)));
  CHECK(worst < 1e-14);
  for (int j = grid.dealias_limit() + 1; j <= 32; ++j) CHECK(fast.mode(j) == Complex(0.0, 0.0));
}

TEST_CASE("interpolation reproduces the trigonometric polynomial") {
  const TorusGrid grid(32, 10);
  const auto f = test::random_bandlimited(grid, 10, 21);
  const auto fine = interpolate(f, 256);
  double worst = 0.0;
  for (int i = 0; i < 256; ++i) worst = std::max(worst, std::abs(fine[i] - oracle::evaluate(f, i / 256.0)));
  CHECK(worst < 1e-13);
}
