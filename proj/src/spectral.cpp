#include "qns/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "qns/errors.hpp"

namespace qns {
namespace {

// FFTW planning is not thread-safe, execution of an existing plan on new arrays is.
class FftPlan {
 public:
  explicit FftPlan(int n) : n_(n) {
    std::vector<double> real(n);
    std::vector<Complex> spec(n / 2 + 1);
    auto* r = real.data();
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_1d(n, r, c, flags);
    inverse_ = fftw_plan_dft_c2r_1d(n, c, r, flags);
  }
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::vector<Complex> forward(std::span<const double> in) const {
    std::vector<double> scratch(in.begin(), in.end());
    std::vector<Complex> out(n_ / 2 + 1);
    fftw_execute_dft_r2c(forward_, scratch.data(), reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / n_;
    for (auto& c : out) c *= scale;
    return out;
  }

  // c2r overwrites its input, so the coefficients are taken by value.
  std::vector<double> inverse(std::vector<Complex> in) const {
    std::vector<double> out(n_);
    fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    return out;
  }

 private:
  int n_;
  fftw_plan forward_{};
  fftw_plan inverse_{};
};

const FftPlan& plan_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<FftPlan>> plans;
  std::lock_guard lock(mutex);
  auto& slot = plans[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

bool is_smooth_size(int n) {
  for (int p : {2, 3, 5})
    while (n % p == 0) n /= p;
  return n == 1;
}

int next_smooth_even(int n) {
  if (n % 2) ++n;
  while (!is_smooth_size(n)) n += 2;
  return n;
}

Complex ik_power(double k, int order) {
  Complex f{1.0, 0.0};
  for (int o = 0; o < order; ++o) f *= Complex{0.0, k};
  return f;
}

// Resamples half-spectrum coefficients onto a grid of different size, truncating
// or zero-padding. The Nyquist coefficient of the source is split between +-n/2
// when padding so that the interpolant stays real.
std::vector<Complex> resize_spectrum(std::span<const Complex> in, int n_in, int n_out) {
  std::vector<Complex> out(n_out / 2 + 1, Complex{});
  const int keep = std::min(n_in, n_out) / 2;
  for (int j = 0; j <= keep; ++j) out[j] = in[j];
  if (n_out > n_in) out[n_in / 2] *= 0.5;
  if (n_out < n_in) out[n_out / 2] = Complex{out[n_out / 2].real(), 0.0};
  return out;
}

}  // namespace

TorusGrid::TorusGrid(int n_collocation, int m_modes, bool dealias)
    : n_(n_collocation), m_(m_modes), dealias_(dealias) {
  if (n_ < 4 || n_ % 2 != 0)
    throw ConfigError("n_collocation must be even and >= 4, got " + std::to_string(n_));
  if (m_ < 1 || 2 * m_ > n_)
    throw ConfigError("m_modes must satisfy 1 <= m_modes <= n_collocation/2, got m=" +
                      std::to_string(m_) + ", n=" + std::to_string(n_));
  if (3 * n_ < 4 * m_)
    throw ConfigError("n_collocation must be >= 4*m_modes/3");
  dealias_limit_ = dealias_ ? (2 * m_) / 3 : m_;
  // Products of two members of H_m have modes up to 2m; aliases of those land outside
  // |j| <= dealias_limit when the grid has more than 2m + dealias_limit points.
  padded_ = std::max(n_, next_smooth_even(2 * m_ + dealias_limit_ + 1));
}

double TorusGrid::wavenumber(int j) noexcept { return 2.0 * std::numbers::pi * j; }

bool TorusGrid::dealias_mask(int j) const noexcept { return std::abs(j) <= dealias_limit_; }

std::vector<int> TorusGrid::mode_indices() const {
  std::vector<int> idx(n_);
  for (int i = 0; i < n_; ++i) idx[i] = i < n_ / 2 ? i : i - n_;
  return idx;
}

std::vector<double> TorusGrid::wavenumbers() const {
  std::vector<double> k;
  k.reserve(n_);
  for (int j : mode_indices()) k.push_back(wavenumber(j));
  return k;
}

std::vector<double> TorusGrid::points() const {
  std::vector<double> x(n_);
  for (int i = 0; i < n_; ++i) x[i] = static_cast<double>(i) / n_;
  return x;
}

RealField RealField::from_physical(const TorusGrid& grid, std::vector<double> values) {
  RealField f;
  f.spectral_ = transform_forward(values, grid);
  f.physical_ = std::move(values);
  return f;
}

RealField RealField::from_spectral(const TorusGrid& grid, std::vector<Complex> coefficients) {
  if (static_cast<int>(coefficients.size()) != grid.spectral_size())
    throw ConfigError("spectral length " + std::to_string(coefficients.size()) +
                      " does not match grid (" + std::to_string(grid.spectral_size()) + ")");
  // Mean and Nyquist coefficients of a real field are real.
  coefficients.front().imag(0.0);
  coefficients.back().imag(0.0);
  RealField f;
  f.physical_ = transform_inverse(coefficients, grid);
  f.spectral_ = std::move(coefficients);
  return f;
}

RealField RealField::constant(const TorusGrid& grid, double value) {
  std::vector<Complex> c(grid.spectral_size(), Complex{});
  c[0] = value;
  return from_spectral(grid, std::move(c));
}

RealField RealField::sample(const TorusGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.n());
  for (int i = 0; i < grid.n(); ++i) v[i] = f(static_cast<double>(i) / grid.n());
  return from_physical(grid, std::move(v));
}

Complex RealField::mode(int j) const {
  const int half = static_cast<int>(spectral_.size()) - 1;
  if (std::abs(j) > half) throw UsageError("mode index out of range");
  return j >= 0 ? spectral_[j] : std::conj(spectral_[-j]);
}

bool RealField::all_finite() const noexcept {
  return std::all_of(physical_.begin(), physical_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<Complex> transform_forward(std::span<const double> physical, const TorusGrid& grid) {
  if (static_cast<int>(physical.size()) != grid.n())
    throw ConfigError("field has " + std::to_string(physical.size()) +
                      " samples but the grid has " + std::to_string(grid.n()));
  return plan_for(grid.n()).forward(physical);
}

std::vector<double> transform_inverse(std::span<const Complex> spectral, const TorusGrid& grid) {
  if (static_cast<int>(spectral.size()) != grid.spectral_size())
    throw ConfigError("spectral length does not match grid");
  return plan_for(grid.n()).inverse({spectral.begin(), spectral.end()});
}

RealField project(const RealField& field, const TorusGrid& grid) {
  std::vector<Complex> c(field.spectral().begin(), field.spectral().end());
  if (static_cast<int>(c.size()) != grid.spectral_size())
    throw ConfigError("field does not live on this grid");
  for (int j = grid.m() + 1; j < static_cast<int>(c.size()); ++j) c[j] = Complex{};
  return RealField::from_spectral(grid, std::move(c));
}

RealField derivative(const RealField& field, int order, const TorusGrid& grid) {
  if (order < 1 || order > 4)
    throw UsageError("derivative order must be in 1..4, got " + std::to_string(order));
  std::vector<Complex> c(field.spectral().begin(), field.spectral().end());
  if (static_cast<int>(c.size()) != grid.spectral_size())
    throw ConfigError("field does not live on this grid");
  const int nyquist = grid.n() / 2;
  for (int j = 0; j < static_cast<int>(c.size()); ++j) {
    if (j == nyquist && order % 2 == 1) {
      c[j] = Complex{};
      continue;
    }
    c[j] *= ik_power(TorusGrid::wavenumber(j), order);
  }
  return RealField::from_spectral(grid, std::move(c));
}

std::vector<double> interpolate(const RealField& field, int target_size) {
  const int n = field.size();
  if (target_size < n || target_size % 2 != 0)
    throw UsageError("interpolation target must be even and >= the field size");
  if (target_size == n) return {field.physical().begin(), field.physical().end()};
  return plan_for(target_size).inverse(resize_spectrum(field.spectral(), n, target_size));
}

RealField restrict_samples(std::span<const double> samples, const TorusGrid& grid, int limit) {
  const int n_fine = static_cast<int>(samples.size());
  if (n_fine < grid.n() || n_fine % 2 != 0)
    throw UsageError("samples must live on an even grid at least as fine as the target");
  const auto fine = plan_for(n_fine).forward(samples);
  std::vector<Complex> c(grid.spectral_size(), Complex{});
  const int keep = std::min(limit, grid.n() / 2);
  for (int j = 0; j <= keep; ++j) c[j] = fine[j];
  return RealField::from_spectral(grid, std::move(c));
}

std::vector<double> differentiate_samples(std::span<const double> samples, int order,
                                          double chop_tolerance) {
  const int n = static_cast<int>(samples.size());
  if (n < 4 || n % 2 != 0) throw UsageError("sample count must be even and >= 4");
  if (order < 0) throw UsageError("derivative order must be non-negative");
  const auto& plan = plan_for(n);
  auto c = plan.forward(samples);
  if (chop_tolerance > 0.0) {
    double peak = 0.0;
    for (const auto& v : c) peak = std::max(peak, std::abs(v));
    int last = 0;
    for (int j = 0; j < static_cast<int>(c.size()); ++j)
      if (std::abs(c[j]) > chop_tolerance * peak) last = j;
    for (int j = last + 1; j < static_cast<int>(c.size()); ++j) c[j] = Complex{};
  }
  for (int j = 0; j < static_cast<int>(c.size()); ++j) {
    if (j == n / 2 && order % 2 == 1) {
      c[j] = Complex{};
      continue;
    }
    c[j] *= ik_power(TorusGrid::wavenumber(j), order);
  }
  return plan.inverse(std::move(c));
}

RealField dealias_product(const RealField& a, const RealField& b, const TorusGrid& grid) {
  const int np = grid.padded_size();
  auto pa = interpolate(a, np);
  const auto pb = interpolate(b, np);
  for (int i = 0; i < np; ++i) pa[i] *= pb[i];
  return restrict_samples(pa, grid, grid.dealias_limit());
}

double l2_norm(const RealField& field) {
  const auto c = field.spectral();
  const int n = field.size();
  double s = std::norm(c[0]);
  for (int j = 1; j < static_cast<int>(c.size()); ++j)
    s += (j == n / 2 ? 1.0 : 2.0) * std::norm(c[j]);
  return std::sqrt(s);
}

double torus_mean(std::span<const double> samples) {
  double s = 0.0;
  for (double v : samples) s += v;
  return samples.empty() ? 0.0 : s / static_cast<double>(samples.size());
}

double max_abs(std::span<const double> samples) {
  double m = 0.0;
  for (double v : samples) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace qns
