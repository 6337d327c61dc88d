#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the FFT layer: transforms are direct sums and derivatives are closed
// forms or finite differences.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "eur/grid.hpp"

namespace oracle {

using eur::Complex;
using eur::CVec;
using eur::GridSpec;
using eur::RVec;

inline constexpr double pi = std::numbers::pi;

/// Normalized Gaussian (2 pi s^2)^{-1/4} exp(-(x-x0)^2/(4 s^2) + i k x); position variance s^2.
inline Complex gaussian(double x, double x0, double s, double k = 0.0) {
  const double u = x - x0;
  return std::pow(2.0 * pi * s * s, -0.25) * std::polar(std::exp(-u * u / (4.0 * s * s)), k * x);
}

inline CVec gaussian(const GridSpec& grid, double x0, double s, double k = 0.0) {
  CVec out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = gaussian(grid.x(i), x0, s, k);
  return out;
}

/// Direct quadrature of (2 pi hbar)^{-1/2} sum psi_j exp(-i p x_j / hbar) dx.
inline Complex momentum_amplitude(const CVec& psi, const GridSpec& grid, double p, double hbar = 1.0) {
  Complex s(0.0);
  for (std::size_t j = 0; j < psi.size(); ++j) s += psi[j] * std::polar(1.0, -p * grid.x(j) / hbar);
  return s * grid.dx() / std::sqrt(2.0 * pi * hbar);
}

/// Sum f_k w over samples.
inline double integrate(const RVec& f, double w) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * w;
}

/// Mean and variance of a sampled density on a line grid.
inline std::pair<double, double> line_moments(const RVec& p, const GridSpec& grid) {
  double m0 = 0, m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    m0 += p[i];
    m1 += p[i] * grid.x(i);
    m2 += p[i] * grid.x(i) * grid.x(i);
  }
  m1 /= m0;
  m2 /= m0;
  return {m1, m2 - m1 * m1};
}

/// Fourth-order central difference (interior points only; edges left at 0).
template <class T>
std::vector<T> finite_difference(const std::vector<T>& f, double h) {
  std::vector<T> d(f.size(), T(0));
  for (std::size_t i = 2; i + 2 < f.size(); ++i)
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  return d;
}

inline double max_abs_diff(const RVec& a, const RVec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
