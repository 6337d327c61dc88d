#pragma once

#include <Eigen/Dense>

#include "eur/decomposition.hpp"
#include "eur/state.hpp"

namespace eur {

/// psi(x1, x2) = K exp(-(x1 - x2 - a)^2 / 4 sigma^2) exp(-(x1 + x2)^2 / 4 tau^2) exp(i p0 (x1 + x2) / 2 hbar).
struct EprParams {
  double a = 1.0;
  double sigma = 0.1;
  double tau = 10.0;
  double p0 = 2.0;
};

/// Square box wide enough for the centre-of-mass envelope with n points per axis.
Grid2D epr_grid(const EprParams& params, std::size_t n = 2048);
/// Throws GridResolution unless the grid spans 8 tau along x1 + x2 and puts
/// at least 8 samples across the 8 sigma relative-coordinate profile.
void check_epr_grid(const EprParams& params, const Grid2D& grid);
/// True when sigma < 1 < tau, the regime the state is meant for.
bool epr_regime(const EprParams& params);
/// Normalized numerically; K is never used in closed form.
Grid2DState build_epr(const EprParams& params, const Grid2D& grid, double hbar = 1.0);
/// [sigma^2 p + tau^2 (p0 - p)] / (sigma^2 + tau^2).
double epr_collapsed_momentum(const EprParams& params, double p);

struct TwoParticleMoments {
  Eigen::Vector2d mean_x = Eigen::Vector2d::Zero();
  Eigen::Vector2d mean_p = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov_x = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d cov_p = Eigen::Matrix2d::Zero();

  double relative_mean() const { return mean_x(0) - mean_x(1); }
  double relative_variance() const { return cov_x(0, 0) + cov_x(1, 1) - 2.0 * cov_x(0, 1); }
  double total_momentum_mean() const { return mean_p(0) + mean_p(1); }
  double total_momentum_variance() const { return cov_p(0, 0) + cov_p(1, 1) + 2.0 * cov_p(0, 1); }
};

TwoParticleMoments two_particle_moments(const Grid2DState& state, double hbar = 1.0);

/// P_cl^j = hbar d_j arg psi on the 2D grid and the covariance split
/// Cov(P) = Cov(P_cl) + Cov(P_nc). Cov(P_nc) is evaluated directly from
/// (P^j - P_cl^j) psi, so the additivity residual is a genuine check.
struct MomentumComponents2D {
  explicit MomentumComponents2D(Grid2D g) : grid(std::move(g)) {}

  Grid2D grid;
  RVec p_cl1;
  RVec p_cl2;
  std::vector<char> retained;
  double masked_mass = 0.0;
  Eigen::Matrix2d cov_p = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d cov_p_cl = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d cov_p_nc = Eigen::Matrix2d::Zero();
  double additivity_residual = 0.0;
  /// max |d_2 P_cl^1 - d_1 P_cl^2| over points above 1e-6 of the peak density.
  double mixed_partial_residual = 0.0;
};

MomentumComponents2D nonclassical_components_2d(const Grid2DState& state, double hbar = 1.0);

/// C12 / sqrt(C11 C22).
double correlation_coefficient(const Eigen::Matrix2d& c);

struct CorrelationPair {
  double r_pearson = 0.0;
  double r_fisher = 0.0;
};

struct CorrelationReport {
  CorrelationPair position;      ///< r_P(X), r_F(X)
  double r_momentum = 0.0;       ///< r_P(P)
  double r_nonclassical = 0.0;   ///< r_P(P_nc)
  double residual = 0.0;         ///< |r_P(P_nc) + r_F(X)|
  double gaussian_residual = 0.0;///< |r_P(X) + r_P(P)|
};

CorrelationReport correlation_relation(const Grid2DState& state, double hbar = 1.0);

struct Collapse {
  GridPureState state;
  ClassicalComponent momentum;  ///< P_cl of particle 1 after the measurement
};

/// Particle-1 state after X2 = x: psi(x1, x) renormalized, with trigonometric
/// interpolation along x2. Throws VanishingDensity in the far tail.
Collapse collapse_position(const Grid2DState& state, double x, double hbar = 1.0);
/// Particle-1 state after P2 = p from the partial transform over x2 at p.
Collapse collapse_momentum(const Grid2DState& state, double p, double hbar = 1.0);

}  // namespace eur
