#pragma once

#include <cstddef>
#include <span>

#include "eur/grid.hpp"

namespace eur::fft {

// Thin wrappers over FFTW. Forward is sum_k f_k exp(-2 pi i jk/n), backward
// is the unnormalized inverse. Plans are created per call under a lock; the
// transforms themselves carry no shared state.

void forward(std::span<Complex> data);
void backward(std::span<Complex> data);

/// In-place transforms of `count` contiguous rows of length `n`.
void forward_rows(std::span<Complex> data, std::size_t n, std::size_t count);
void backward_rows(std::span<Complex> data, std::size_t n, std::size_t count);

/// In-place transforms along the strided axis of a row-major rows x cols block.
void forward_columns(std::span<Complex> data, std::size_t rows, std::size_t cols);
void backward_columns(std::span<Complex> data, std::size_t rows, std::size_t cols);

/// Storage index j (0..n-1) to signed frequency index in [-n/2, n/2).
inline long signed_index(std::size_t j, std::size_t n) {
  const auto sj = static_cast<long>(j);
  const auto sn = static_cast<long>(n);
  return sj < sn / 2 ? sj : sj - sn;
}

/// Spectral derivative of periodic samples on `grid`; the Nyquist mode is dropped.
CVec derivative(std::span<const Complex> values, const GridSpec& grid);
RVec derivative(std::span<const double> values, const GridSpec& grid);

/// Spectral derivative for samples of period `period` taken at n equispaced points.
RVec periodic_derivative(std::span<const double> values, double period);

/// Spectral partial derivative of row-major samples on a 2D grid (axis 0 or 1).
CVec partial(std::span<const Complex> values, const Grid2D& grid, int axis);
RVec partial(std::span<const double> values, const Grid2D& grid, int axis);

/// Band-limited shift f(x + shift) of periodic samples on `grid`.
CVec shift(std::span<const Complex> values, const GridSpec& grid, double shift);

}  // namespace eur::fft
