#pragma once

// Fourier pseudo-spectral machinery on the unit torus [0,1).
//
// Conventions: a field is sampled at x_i = i/n, i = 0..n-1. Spectral coefficients
// are stored for the non-negative modes j = 0..n/2 (real-to-complex layout) and
// normalized so that mode 0 carries the field mean:
//
//   c_j = (1/n) sum_i f(x_i) exp(-2 pi i j x_i),   f(x) = sum_j c_j exp(2 pi i j x).
//
// Negative modes follow from conjugate symmetry c_{-j} = conj(c_j).

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qns {

using Complex = std::complex<double>;

/// Equispaced discretization of the unit torus together with the Galerkin cutoff.
///
/// The Galerkin space H_m holds trigonometric polynomials with |j| <= m_modes.
/// Quadratic products are evaluated on a padded grid large enough to be exact for
/// inputs in H_m and then restricted to the dealiasing mask |j| <= floor(2m/3)
/// (or |j| <= m when dealiasing is disabled).
class TorusGrid {
 public:
  TorusGrid(int n_collocation, int m_modes, bool dealias = true);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  bool dealias() const noexcept { return dealias_; }
  int spectral_size() const noexcept { return n_ / 2 + 1; }
  int dealias_limit() const noexcept { return dealias_limit_; }
  int padded_size() const noexcept { return padded_; }
  double dx() const noexcept { return 1.0 / n_; }

  /// 2 pi j for a signed mode index.
  static double wavenumber(int j) noexcept;
  bool dealias_mask(int j) const noexcept;

  /// Mode indices in the standard FFT ordering 0, 1, ..., n/2-1, -n/2, ..., -1.
  std::vector<int> mode_indices() const;
  /// Wavenumbers 2 pi j in the same ordering as mode_indices().
  std::vector<double> wavenumbers() const;
  std::vector<double> points() const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int n_;
  int m_;
  bool dealias_;
  int dealias_limit_;
  int padded_;
};

/// A real periodic field held simultaneously as collocation values and as
/// half-spectrum coefficients. Instances are immutable once built.
class RealField {
 public:
  RealField() = default;

  static RealField from_physical(const TorusGrid& grid, std::vector<double> values);
  static RealField from_spectral(const TorusGrid& grid, std::vector<Complex> coefficients);
  static RealField constant(const TorusGrid& grid, double value);
  static RealField sample(const TorusGrid& grid, const std::function<double(double)>& f);

  std::span<const double> physical() const noexcept { return physical_; }
  std::span<const Complex> spectral() const noexcept { return spectral_; }
  int size() const noexcept { return static_cast<int>(physical_.size()); }
  bool empty() const noexcept { return physical_.empty(); }

  /// Coefficient of a signed mode index (|j| <= n/2).
  Complex mode(int j) const;
  double mean() const { return spectral_.empty() ? 0.0 : spectral_[0].real(); }
  bool all_finite() const noexcept;

  friend bool operator==(const RealField&, const RealField&) = default;

 private:
  std::vector<double> physical_;
  std::vector<Complex> spectral_;
};

std::vector<Complex> transform_forward(std::span<const double> physical, const TorusGrid& grid);
std::vector<double> transform_inverse(std::span<const Complex> spectral, const TorusGrid& grid);

/// L2-orthogonal projection onto H_m.
RealField project(const RealField& field, const TorusGrid& grid);

/// Spectral derivative of order 1..4: multiplication by (i k)^order.
RealField derivative(const RealField& field, int order, const TorusGrid& grid);

/// Product of two fields of H_m, free of aliasing, restricted to the dealiasing mask.
RealField dealias_product(const RealField& a, const RealField& b, const TorusGrid& grid);

/// Spectral interpolation of a field onto an equispaced grid of `target_size`
/// points (target_size even, >= field size).
std::vector<double> interpolate(const RealField& field, int target_size);

/// Band-limits samples on any even-sized equispaced grid to the modes |j| <= limit of
/// `grid` and returns the resulting field on `grid`.
RealField restrict_samples(std::span<const double> samples, const TorusGrid& grid, int limit);

/// Derivative of periodic samples on an equispaced grid of any even size.
///
/// When chop_tolerance > 0 the coefficient tail beyond the last mode with
/// |c_j| > chop_tolerance * max|c| is discarded first, which keeps round-off in
/// unresolved modes from being amplified by high-order differentiation.
std::vector<double> differentiate_samples(std::span<const double> samples, int order,
                                          double chop_tolerance = 0.0);

/// Spectral L2 norm (Parseval) of a field on the unit torus.
double l2_norm(const RealField& field);
/// Periodic trapezoid rule on the unit torus: the sample mean.
double torus_mean(std::span<const double> samples);
double max_abs(std::span<const double> samples);

}  // namespace qns
