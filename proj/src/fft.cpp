#include "eur/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "eur/error.hpp"

namespace eur::fft {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// howmany transforms of length n, element stride `stride`, transform distance `dist`.
void run(std::span<Complex> data, std::size_t n, std::size_t howmany, std::size_t stride,
         std::size_t dist, int sign) {
  if (data.empty()) return;
  const int len = static_cast<int>(n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), as_fftw(data.data()), nullptr,
                              static_cast<int>(stride), static_cast<int>(dist), as_fftw(data.data()),
                              nullptr, static_cast<int>(stride), static_cast<int>(dist), sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  require(plan != nullptr, ErrorKind::InvalidArgument, "FFTW could not create a plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

void forward(std::span<Complex> data) { run(data, data.size(), 1, 1, data.size(), FFTW_FORWARD); }
void backward(std::span<Complex> data) { run(data, data.size(), 1, 1, data.size(), FFTW_BACKWARD); }

void forward_rows(std::span<Complex> data, std::size_t n, std::size_t count) {
  run(data, n, count, 1, n, FFTW_FORWARD);
}
void backward_rows(std::span<Complex> data, std::size_t n, std::size_t count) {
  run(data, n, count, 1, n, FFTW_BACKWARD);
}
void forward_columns(std::span<Complex> data, std::size_t rows, std::size_t cols) {
  run(data, rows, cols, cols, 1, FFTW_FORWARD);
}
void backward_columns(std::span<Complex> data, std::size_t rows, std::size_t cols) {
  run(data, rows, cols, cols, 1, FFTW_BACKWARD);
}

CVec derivative(std::span<const Complex> values, const GridSpec& grid) {
  require(values.size() == grid.size(), ErrorKind::InvalidArgument, "sample count does not match grid");
  const std::size_t n = values.size();
  CVec work(values.begin(), values.end());
  forward(work);
  const RVec k = grid.wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) work[j] *= Complex(0.0, k[j] * inv_n);
  work[n / 2] = 0.0;
  backward(work);
  return work;
}

RVec derivative(std::span<const double> values, const GridSpec& grid) {
  CVec c(values.begin(), values.end());
  const CVec d = derivative(c, grid);
  RVec out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].real();
  return out;
}

RVec periodic_derivative(std::span<const double> values, double period) {
  const std::size_t n = values.size();
  require(n >= 2 && n % 2 == 0, ErrorKind::InvalidArgument, "periodic derivative needs an even sample count");
  CVec work(values.begin(), values.end());
  forward(work);
  const double dk = 2.0 * std::numbers::pi / period;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j)
    work[j] *= Complex(0.0, dk * static_cast<double>(signed_index(j, n)) * inv_n);
  work[n / 2] = 0.0;
  backward(work);
  RVec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = work[i].real();
  return out;
}

CVec partial(std::span<const Complex> values, const Grid2D& grid, int axis) {
  require(values.size() == grid.size(), ErrorKind::InvalidArgument, "sample count does not match 2D grid");
  require(axis == 0 || axis == 1, ErrorKind::InvalidArgument, "axis must be 0 or 1");
  const std::size_t n1 = grid.axis1.size();
  const std::size_t n2 = grid.axis2.size();
  CVec work(values.begin(), values.end());
  if (axis == 0) {
    forward_columns(work, n1, n2);
    const RVec k = grid.axis1.wavenumbers();
    const double inv = 1.0 / static_cast<double>(n1);
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      const Complex factor = i1 == n1 / 2 ? Complex(0.0) : Complex(0.0, k[i1] * inv);
      for (std::size_t i2 = 0; i2 < n2; ++i2) work[i1 * n2 + i2] *= factor;
    }
    backward_columns(work, n1, n2);
  } else {
    forward_rows(work, n2, n1);
    const RVec k = grid.axis2.wavenumbers();
    const double inv = 1.0 / static_cast<double>(n2);
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const Complex factor = i2 == n2 / 2 ? Complex(0.0) : Complex(0.0, k[i2] * inv);
        work[i1 * n2 + i2] *= factor;
      }
    }
    backward_rows(work, n2, n1);
  }
  return work;
}

RVec partial(std::span<const double> values, const Grid2D& grid, int axis) {
  CVec c(values.begin(), values.end());
  const CVec d = partial(c, grid, axis);
  RVec out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].real();
  return out;
}

CVec shift(std::span<const Complex> values, const GridSpec& grid, double shift_by) {
  require(values.size() == grid.size(), ErrorKind::InvalidArgument, "sample count does not match grid");
  const std::size_t n = values.size();
  CVec work(values.begin(), values.end());
  forward(work);
  const RVec k = grid.wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) work[j] *= std::polar(inv_n, k[j] * shift_by);
  work[n / 2] = 0.0;
  backward(work);
  return work;
}

}  // namespace eur::fft
