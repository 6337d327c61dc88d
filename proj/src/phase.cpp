#include "eur/phase.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "eur/error.hpp"
#include "eur/fft.hpp"

namespace eur {
namespace {

// Fold diagonal sums c_D = sum_{a-b=D} A_ab into a length-m array indexed by D mod m,
// each weighted by `factor(D)`, then evaluate sum_D c_D exp(s i D phi_k) by one DFT.
template <class Factor>
CVec evaluate(const Eigen::MatrixXcd& a, std::size_t m, PhaseConvention convention, Factor factor) {
  require(m >= 1, ErrorKind::InvalidArgument, "phase grid needs at least one point");
  require(a.rows() == a.cols(), ErrorKind::InvalidArgument, "operator matrix must be square");
  const auto d = static_cast<long>(a.rows());
  const auto sm = static_cast<long>(m);
  CVec w(m, Complex(0.0));
  for (long delta = -(d - 1); delta <= d - 1; ++delta) {
    Complex c(0.0);
    for (long b = std::max(0L, -delta); b < d && b + delta < d; ++b) c += a(b + delta, b);
    w[static_cast<std::size_t>(((delta % sm) + sm) % sm)] += factor(delta) * c;
  }
  if (convention == PhaseConvention::Rotator)
    fft::backward(w);
  else
    fft::forward(w);
  const double inv = 0.5 / std::numbers::pi;
  for (auto& z : w) z *= inv;
  return w;
}

}  // namespace

CVec phase_quadratic_form(const Eigen::MatrixXcd& a, int, std::size_t m, PhaseConvention convention) {
  // The level offset cancels in l_a - l_b.
  return evaluate(a, m, convention, [](long) { return Complex(1.0); });
}

CVec phase_quadratic_form_derivative(const Eigen::MatrixXcd& a, int, std::size_t m, PhaseConvention convention) {
  const double s = static_cast<double>(static_cast<int>(convention));
  return evaluate(a, m, convention, [s](long delta) { return Complex(0.0, s * static_cast<double>(delta)); });
}

CVec phase_amplitude(std::span<const Complex> coefficients, int first_level, std::size_t m,
                     PhaseConvention convention) {
  require(m >= 1, ErrorKind::InvalidArgument, "phase grid needs at least one point");
  const auto sm = static_cast<long>(m);
  CVec w(m, Complex(0.0));
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const long l = first_level + static_cast<long>(i);
    w[static_cast<std::size_t>(((l % sm) + sm) % sm)] += coefficients[i];
  }
  if (convention == PhaseConvention::Rotator)
    fft::backward(w);
  else
    fft::forward(w);
  const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (auto& z : w) z *= inv;
  return w;
}

std::size_t default_phase_points(std::size_t dimension) {
  return std::max<std::size_t>(256, std::bit_ceil(8 * std::max<std::size_t>(dimension, 1)));
}

namespace {
ProbabilityDensity density_from(const Eigen::MatrixXcd& rho, int first, std::size_t m, PhaseConvention c) {
  const CVec q = phase_quadratic_form(rho, first, m, c);
  RVec p(m);
  for (std::size_t k = 0; k < m; ++k) p[k] = std::max(0.0, q[k].real());
  return ProbabilityDensity::circle(std::move(p));
}
}  // namespace

ProbabilityDensity phase_density(const PeriodicState& state, std::size_t m) {
  return density_from(state.levels().matrix(), state.j_min(), m, PhaseConvention::Rotator);
}

ProbabilityDensity phase_density(const FockState& state, std::size_t m, bool extended) {
  const auto& lv = state.levels();
  if (extended) return density_from(lv.matrix(), lv.first_level(), m, PhaseConvention::Photon);
  const auto neg = static_cast<Eigen::Index>(state.negative_levels());
  const auto phys = static_cast<Eigen::Index>(lv.dimension()) - neg;
  require(phys > 0, ErrorKind::InvalidArgument, "state has no physical number levels");
  return density_from(lv.matrix().bottomRightCorner(phys, phys), 0, m, PhaseConvention::Photon);
}

Eigen::MatrixXcd left_multiply_levels(const LevelState& state, double scale) {
  Eigen::MatrixXcd out = state.matrix();
  for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) *= scale * state.level(static_cast<std::size_t>(i));
  return out;
}

}  // namespace eur
