#include "eur/wigner.hpp"

#include <cmath>
#include <numbers>

#include "eur/error.hpp"
#include "eur/fft.hpp"

namespace eur {
namespace {

// Fills row k of the xi-coherence table from an accessor rho(i, j) on the grid
// and its half-cell shifted counterpart, then transforms all rows at once.
template <class Rho, class RhoShifted>
WignerGrid transform(const GridSpec& grid, double hbar, Rho rho, RhoShifted rho_s) {
  require(hbar > 0.0, ErrorKind::InvalidArgument, "hbar must be positive");
  require(grid.size() % 2 == 0, ErrorKind::InvalidArgument, "Wigner grid needs an even number of points");
  const auto n = static_cast<long>(grid.size());
  const std::size_t un = grid.size();
  CVec table(un * un, Complex(0.0));
  for (long k = 0; k < n; ++k) {
    Complex* row = &table[static_cast<std::size_t>(k) * un];
    // xi spans the full [-L, L); on the n-point momentum lattice the kernel
    // has period n in m, so both halves fold onto the same bins.
    for (long m = -n; m < n; ++m) {
      long i, j;
      Complex a;
      if (m % 2 == 0) {
        i = k + m / 2;
        j = k - m / 2;
        if (i < 0 || i >= n || j < 0 || j >= n) continue;
        a = rho(i, j);
      } else {
        const long r = (m - 1) / 2;
        i = k + r;
        j = k - r - 1;
        if (i < 0 || i >= n || j < 0 || j >= n) continue;
        a = rho_s(i, j);
      }
      // (-1)^m moves the ascending momentum lattice onto FFT order.
      row[static_cast<std::size_t>((m + 2 * n) % n)] += (m % 2 == 0) ? a : -a;
    }
  }
  fft::forward_rows(table, un, un);
  WignerGrid w{grid, grid.conjugate(hbar), Eigen::MatrixXd(n, n), 0.0};
  const double scale = grid.dx() / (2.0 * std::numbers::pi * hbar);
  for (std::size_t k = 0; k < un; ++k) {
    for (std::size_t j = 0; j < un; ++j) {
      const Complex v = table[k * un + j] * scale;
      w.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v.real();
      w.max_imaginary = std::max(w.max_imaginary, std::abs(v.imag()));
    }
  }
  return w;
}

void check_box(double ratio) {
  require(ratio <= kBoxEdgeRatio, ErrorKind::BoxTooSmall,
          "state density at the box edge is " + std::to_string(ratio) + " of its peak");
}

}  // namespace

RVec WignerGrid::position_marginal() const {
  RVec out(static_cast<std::size_t>(values.rows()));
  for (Eigen::Index k = 0; k < values.rows(); ++k) out[static_cast<std::size_t>(k)] = values.row(k).sum() * p_grid.dx();
  return out;
}

RVec WignerGrid::momentum_marginal() const {
  RVec out(static_cast<std::size_t>(values.cols()));
  for (Eigen::Index j = 0; j < values.cols(); ++j) out[static_cast<std::size_t>(j)] = values.col(j).sum() * x_grid.dx();
  return out;
}

double WignerGrid::total() const { return values.sum() * x_grid.dx() * p_grid.dx(); }

WignerGrid wigner_transform(const GridPureState& state_in, double hbar) {
  const auto state = normalize(state_in);
  check_box(box_edge_ratio(state));
  const CVec& psi = state.amplitudes();
  const CVec half = fft::shift(psi, state.grid(), 0.5 * state.grid().dx());
  return transform(
      state.grid(), hbar, [&](long i, long j) { return psi[static_cast<std::size_t>(i)] * std::conj(psi[static_cast<std::size_t>(j)]); },
      [&](long i, long j) { return half[static_cast<std::size_t>(i)] * std::conj(half[static_cast<std::size_t>(j)]); });
}

WignerGrid wigner_transform(const GridMixedState& state_in, double hbar) {
  const auto state = normalize(state_in);
  check_box(box_edge_ratio(state));
  const auto& grid = state.grid();
  const Eigen::MatrixXcd& rho = state.matrix();
  const auto n = rho.rows();
  // rho_s(i, j) = rho(x_i + dx/2, x_j + dx/2): shift columns along the first
  // index, then rows along the second.
  Eigen::MatrixXcd shifted(n, n);
  const double h = 0.5 * grid.dx();
  CVec buf(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = rho(i, j);
    const CVec s = fft::shift(buf, grid, h);
    for (Eigen::Index i = 0; i < n; ++i) shifted(i, j) = s[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) buf[static_cast<std::size_t>(j)] = shifted(i, j);
    const CVec s = fft::shift(buf, grid, h);
    for (Eigen::Index j = 0; j < n; ++j) shifted(i, j) = s[static_cast<std::size_t>(j)];
  }
  return transform(
      grid, hbar, [&](long i, long j) { return rho(i, j); }, [&](long i, long j) { return shifted(i, j); });
}

ClassicalComponent wigner_average_momentum(const WignerGrid& w) {
  const auto n = w.values.rows();
  RVec density(static_cast<std::size_t>(n));
  RVec numerator(static_cast<std::size_t>(n));
  const RVec p = w.p_grid.points();
  const Eigen::Map<const Eigen::VectorXd> pv(p.data(), static_cast<Eigen::Index>(p.size()));
  for (Eigen::Index k = 0; k < n; ++k) {
    density[static_cast<std::size_t>(k)] = w.values.row(k).sum() * w.p_grid.dx();
    numerator[static_cast<std::size_t>(k)] = w.values.row(k).dot(pv) * w.p_grid.dx();
  }
  // Negative marginal values are quadrature noise at nodes; they are masked.
  for (auto& v : density) v = std::max(v, 0.0);
  return make_classical_component("P_av", "position", w.x_grid.points(), std::move(density), std::move(numerator),
                                  w.x_grid.dx());
}

ClassicalComponent position_classical_in_momentum(const WignerGrid& w) {
  const auto n = w.values.cols();
  RVec density(static_cast<std::size_t>(n));
  RVec numerator(static_cast<std::size_t>(n));
  const RVec x = w.x_grid.points();
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  for (Eigen::Index j = 0; j < n; ++j) {
    density[static_cast<std::size_t>(j)] = w.values.col(j).sum() * w.x_grid.dx();
    numerator[static_cast<std::size_t>(j)] = w.values.col(j).dot(xv) * w.x_grid.dx();
  }
  for (auto& v : density) v = std::max(v, 0.0);
  return make_classical_component("X", "momentum", w.p_grid.points(), std::move(density), std::move(numerator),
                                  w.p_grid.dx());
}

ClassicalComponent position_classical_in_momentum(const GridPureState& state, double hbar) {
  return position_classical_in_momentum(wigner_transform(state, hbar));
}

ClassicalComponent position_classical_in_momentum(const GridMixedState& state, double hbar) {
  return position_classical_in_momentum(wigner_transform(state, hbar));
}

}  // namespace eur
