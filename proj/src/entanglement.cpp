#include "eur/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eur/error.hpp"
#include "eur/fft.hpp"
#include "eur/fisher.hpp"

namespace eur {

Grid2D epr_grid(const EprParams& params, std::size_t n) {
  require(params.sigma > 0.0 && params.tau > 0.0, ErrorKind::InvalidArgument, "sigma and tau must be positive");
  // The centre-of-mass envelope exp(-s^2/2tau^2) must fall below 1e-13 at
  // s = 2h - |a|, where the ridge x1 - x2 = a meets the box edge.
  const double half = 0.5 * (7.75 * params.tau + std::abs(params.a)) + 8.0 * params.sigma;
  const GridSpec axis(n, -half, half);
  return Grid2D{axis, axis};
}

bool epr_regime(const EprParams& params) { return params.sigma < 1.0 && 1.0 < params.tau; }

void check_epr_grid(const EprParams& params, const Grid2D& grid) {
  const double span = grid.axis1.length() + grid.axis2.length();
  require(span >= 8.0 * params.tau, ErrorKind::GridResolution,
          "grid spans " + std::to_string(span) + " along x1 + x2, needs " + std::to_string(8.0 * params.tau));
  const double dx = std::max(grid.axis1.dx(), grid.axis2.dx());
  require(8.0 * params.sigma / dx >= 8.0, ErrorKind::GridResolution,
          "spacing " + std::to_string(dx) + " does not resolve sigma = " + std::to_string(params.sigma));
}

Grid2DState build_epr(const EprParams& params, const Grid2D& grid, double hbar) {
  check_epr_grid(params, grid);
  CVec psi(grid.size());
  const double s2 = 4.0 * params.sigma * params.sigma;
  const double t2 = 4.0 * params.tau * params.tau;
  for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
    const double x1 = grid.axis1.x(i);
    for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
      const double x2 = grid.axis2.x(j);
      const double r = x1 - x2 - params.a;
      const double s = x1 + x2;
      psi[grid.index(i, j)] = std::exp(-r * r / s2 - s * s / t2) * std::polar(1.0, params.p0 * s / (2.0 * hbar));
    }
  }
  return normalize(Grid2DState(grid, std::move(psi)));
}

double epr_collapsed_momentum(const EprParams& params, double p) {
  const double s2 = params.sigma * params.sigma;
  const double t2 = params.tau * params.tau;
  return (s2 * p + t2 * (params.p0 - p)) / (s2 + t2);
}

namespace {

Eigen::Vector2d plane_mean(const ProbabilityDensity& d) {
  const auto& g = d.plane_grid();
  const RVec& p = d.values();
  Eigen::Vector2d m = Eigen::Vector2d::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < g.axis1.size(); ++i)
    for (std::size_t j = 0; j < g.axis2.size(); ++j) {
      const double q = p[g.index(i, j)];
      m += q * Eigen::Vector2d(g.axis1.x(i), g.axis2.x(j));
      total += q;
    }
  return m / total;
}

}  // namespace

TwoParticleMoments two_particle_moments(const Grid2DState& state_in, double hbar) {
  const auto state = normalize(state_in);
  const auto px = position_density(state);
  const auto momentum = to_momentum(state, hbar);
  const auto pp = ProbabilityDensity::plane(momentum.grid(), momentum.density());
  TwoParticleMoments m;
  m.mean_x = plane_mean(px);
  m.mean_p = plane_mean(pp);
  m.cov_x = covariance(px);
  m.cov_p = covariance(pp);
  return m;
}

MomentumComponents2D nonclassical_components_2d(const Grid2DState& state_in, double hbar) {
  const auto state = normalize(state_in);
  const auto& g = state.grid();
  const CVec& psi = state.amplitudes();
  const std::size_t n = psi.size();
  const double cell = g.cell();
  const CVec d1 = fft::partial(std::span<const Complex>(psi), g, 0);
  const CVec d2 = fft::partial(std::span<const Complex>(psi), g, 1);
  const RVec p = state.density();

  MomentumComponents2D out(g);
  out.retained = density_mask(p, cell, &out.masked_mass);
  out.p_cl1.assign(n, 0.0);
  out.p_cl2.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (!out.retained[k]) continue;
    out.p_cl1[k] = hbar * (std::conj(psi[k]) * d1[k]).imag() / p[k];
    out.p_cl2[k] = hbar * (std::conj(psi[k]) * d2[k]).imag() / p[k];
  }

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d nc = Eigen::Matrix2d::Zero();
  const Complex mi(0.0, -hbar);
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Vector2d v(out.p_cl1[k], out.p_cl2[k]);
    mean += p[k] * v;
    second += p[k] * v * v.transpose();
    const Complex f1 = mi * d1[k] - out.p_cl1[k] * psi[k];
    const Complex f2 = mi * d2[k] - out.p_cl2[k] * psi[k];
    nc(0, 0) += std::norm(f1);
    nc(1, 1) += std::norm(f2);
    nc(0, 1) += (std::conj(f1) * f2).real();
  }
  nc(1, 0) = nc(0, 1);
  mean *= cell;
  out.cov_p_cl = second * cell - mean * mean.transpose();
  out.cov_p_nc = nc * cell;

  const auto momentum = to_momentum(state, hbar);
  out.cov_p = covariance(ProbabilityDensity::plane(momentum.grid(), momentum.density()));
  out.additivity_residual = (out.cov_p - out.cov_p_cl - out.cov_p_nc).cwiseAbs().maxCoeff();

  // d_k P_cl^j = hbar [Im(psi_k^* psi_j + psi^* psi_jk) / p - Im(psi^* psi_j) p_k / p^2]
  const CVec d12 = fft::partial(std::span<const Complex>(d1), g, 1);
  const CVec d21 = fft::partial(std::span<const Complex>(d2), g, 0);
  const double p_max = *std::max_element(p.begin(), p.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (p[k] < 1e-6 * p_max) continue;
    const double pk1 = 2.0 * (std::conj(psi[k]) * d1[k]).real();
    const double pk2 = 2.0 * (std::conj(psi[k]) * d2[k]).real();
    const double a = hbar * ((std::conj(d2[k]) * d1[k] + std::conj(psi[k]) * d12[k]).imag() / p[k] -
                             (std::conj(psi[k]) * d1[k]).imag() * pk2 / (p[k] * p[k]));
    const double b = hbar * ((std::conj(d1[k]) * d2[k] + std::conj(psi[k]) * d21[k]).imag() / p[k] -
                             (std::conj(psi[k]) * d2[k]).imag() * pk1 / (p[k] * p[k]));
    worst = std::max(worst, std::abs(a - b));
  }
  out.mixed_partial_residual = worst;
  return out;
}

double correlation_coefficient(const Eigen::Matrix2d& c) {
  const double denom = std::sqrt(c(0, 0) * c(1, 1));
  require(denom > 0.0, ErrorKind::InvalidArgument, "correlation of a degenerate covariance matrix");
  return c(0, 1) / denom;
}

CorrelationReport correlation_relation(const Grid2DState& state_in, double hbar) {
  const auto state = normalize(state_in);
  const auto px = position_density(state);
  const auto comps = nonclassical_components_2d(state, hbar);
  CorrelationReport r;
  r.position.r_pearson = correlation_coefficient(covariance(px));
  r.position.r_fisher = correlation_coefficient(fisher_covariance(px));
  r.r_momentum = correlation_coefficient(comps.cov_p);
  r.r_nonclassical = correlation_coefficient(comps.cov_p_nc);
  r.residual = std::abs(r.r_nonclassical + r.position.r_fisher);
  r.gaussian_residual = std::abs(r.position.r_pearson + r.r_momentum);
  return r;
}

namespace {

Collapse finish_collapse(const GridSpec& axis, CVec phi, double hbar) {
  GridPureState collapsed = normalize(GridPureState(axis, std::move(phi)));
  DecompositionOptions opts;
  opts.constants.hbar = hbar;
  auto comp = classical_estimate(collapsed, Basis::Position, Observable::P, opts);
  return Collapse{std::move(collapsed), std::move(comp)};
}

void check_marginal(double value, double peak, const std::string& what) {
  require(peak > 0.0 && value >= 1e-12 * peak, ErrorKind::VanishingDensity,
          what + " marginal is " + std::to_string(value / peak) + " of its peak");
}

}  // namespace

Collapse collapse_position(const Grid2DState& state_in, double x, double hbar) {
  const auto state = normalize(state_in);
  const auto& g = state.grid();
  const std::size_t n1 = g.axis1.size(), n2 = g.axis2.size();
  require(x >= g.axis2.x_min() && x <= g.axis2.x_max(), ErrorKind::VanishingDensity,
          "x2 = " + std::to_string(x) + " lies outside the box");
  CVec rows = state.amplitudes();
  double peak = 0.0;
  for (std::size_t j = 0; j < n2; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n1; ++i) col += std::norm(rows[g.index(i, j)]);
    peak = std::max(peak, col);
  }
  fft::forward_rows(rows, n2, n1);
  CVec basis(n2);
  const double u = 2.0 * std::numbers::pi * (x - g.axis2.x_min()) / g.axis2.length();
  for (std::size_t k = 0; k < n2; ++k)
    basis[k] = std::polar(1.0 / static_cast<double>(n2), u * static_cast<double>(fft::signed_index(k, n2)));
  CVec phi(n1, Complex(0.0));
  double value = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t k = 0; k < n2; ++k) phi[i] += rows[g.index(i, k)] * basis[k];
    value += std::norm(phi[i]);
  }
  check_marginal(value, peak, "position");
  return finish_collapse(g.axis1, std::move(phi), hbar);
}

Collapse collapse_momentum(const Grid2DState& state_in, double p, double hbar) {
  const auto state = normalize(state_in);
  const auto& g = state.grid();
  const std::size_t n1 = g.axis1.size(), n2 = g.axis2.size();
  const CVec& psi = state.amplitudes();
  // Peak of the P2 marginal on the lattice: |FFT[(-1)^j psi(x1, .)]|^2 summed over x1.
  CVec rows = psi;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 1; j < n2; j += 2) rows[g.index(i, j)] = -rows[g.index(i, j)];
  fft::forward_rows(rows, n2, n1);
  RVec marginal(n2, 0.0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n2; ++k) marginal[k] += std::norm(rows[g.index(i, k)]);
  const double peak = *std::max_element(marginal.begin(), marginal.end());

  CVec kernel(n2);
  for (std::size_t j = 0; j < n2; ++j) kernel[j] = std::polar(1.0, -p * (g.axis2.x(j) - g.axis2.x_min()) / hbar);
  CVec phi(n1, Complex(0.0));
  double value = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) phi[i] += psi[g.index(i, j)] * kernel[j];
    value += std::norm(phi[i]);
  }
  check_marginal(value, peak, "momentum");
  return finish_collapse(g.axis1, std::move(phi), hbar);
}

}  // namespace eur
