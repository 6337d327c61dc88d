#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace eur {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;
using RVec = std::vector<double>;

/// Uniform periodic sampling of [x_min, x_max) with n points.
///
/// Sample k sits at x_min + k*dx with dx = (x_max - x_min)/n. The conjugate
/// lattice used by the Fourier transforms has spacing 2*pi*hbar/(n*dx) and is
/// laid out in ascending order from -n/2 to n/2 - 1.
class GridSpec {
 public:
  GridSpec(std::size_t n_points, double x_min, double x_max);

  /// Grid of n points centred on the origin with the given spacing.
  static GridSpec centered(std::size_t n_points, double length);

  std::size_t size() const noexcept { return n_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double length() const noexcept { return x_max_ - x_min_; }
  double dx() const noexcept { return (x_max_ - x_min_) / static_cast<double>(n_); }
  double x(std::size_t k) const noexcept { return x_min_ + static_cast<double>(k) * dx(); }
  RVec points() const;

  /// Spacing of the conjugate lattice for action unit hbar.
  double conjugate_spacing(double hbar) const noexcept;
  /// The conjugate lattice, ascending, as a grid of its own.
  GridSpec conjugate(double hbar) const;
  /// Angular wavenumbers in FFT storage order (0, 1, ..., n/2-1, -n/2, ..., -1) * 2pi/L.
  RVec wavenumbers() const;

  /// Same box with twice as many points.
  GridSpec refined() const { return GridSpec(2 * n_, x_min_, x_max_); }

  bool operator==(const GridSpec& other) const = default;

 private:
  std::size_t n_;
  double x_min_;
  double x_max_;
};

/// Product of two axis grids. Samples are stored row-major: index i1*n2 + i2.
struct Grid2D {
  GridSpec axis1;
  GridSpec axis2;

  std::size_t size() const noexcept { return axis1.size() * axis2.size(); }
  std::size_t index(std::size_t i1, std::size_t i2) const noexcept { return i1 * axis2.size() + i2; }
  double cell() const noexcept { return axis1.dx() * axis2.dx(); }
  bool operator==(const Grid2D& other) const = default;
};

}  // namespace eur
