#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "eur/grid.hpp"
#include "eur/state.hpp"

namespace eur {

enum class Divergence { Finite, ZeroByDiscontinuity, InfiniteByUniformity };

std::string divergence_name(Divergence flag);

/// Fisher length of a translation family. `length` is empty exactly when the
/// flag is InfiniteByUniformity; for ZeroByDiscontinuity it holds the value
/// on the finest grid examined.
struct FisherMetrics {
  std::optional<double> length;
  double information = 0.0;
  Divergence flag = Divergence::Finite;
  double masked_mass = 0.0;
  /// length(dx/2) / length(dx) when a refinement study was run.
  std::optional<double> refinement_ratio;
  /// False when the density is not band-limited on its grid (a jump or kink);
  /// the information is then taken from 4 integral (sqrt p)'^2, which needs no division.
  bool resolved = true;

  bool finite() const noexcept { return flag == Divergence::Finite; }
};

/// Refinement ratio below which a Fisher length is taken to vanish in the continuum.
inline constexpr double kDiscontinuityRatio = 0.8;
/// Information below which a periodic density counts as uniform.
inline constexpr double kUniformInformation = 1e-20;

/// Relative size of the top quarter of the spectrum above which a sampled
/// density is treated as unresolved.
inline constexpr double kSpectralTail = 1e-8;

/// Largest Fourier coefficient in the top quarter of the band relative to the mean.
double spectral_tail(const RVec& samples);

/// delta X = [integral p (ln p)'^2]^{-1/2} with a spectral derivative.
FisherMetrics fisher_length(const ProbabilityDensity& density);

/// Fisher length restricted to the support of the density, treating the
/// support as an interval with its own edges (hard-wall problems). Uses
/// fourth-order finite differences of ln p.
FisherMetrics fisher_length_on_support(const ProbabilityDensity& density);

/// Recomputes fisher_length at grid and grid.refined(); flags
/// ZeroByDiscontinuity when the ratio falls below kDiscontinuityRatio.
using DensityFactory = std::function<ProbabilityDensity(const GridSpec&)>;
FisherMetrics fisher_refinement_study(const DensityFactory& factory, const GridSpec& grid);

/// Fisher length of a density on the circle; uniform densities are flagged infinite.
FisherMetrics fisher_length_periodic(const ProbabilityDensity& density);

/// (delta X)^{-2} = (4/hbar^2) integral Im<x|P rho|x>^2 / <x|rho|x>.
FisherMetrics fisher_length_mixed(const GridMixedState& state);

/// Var_theta Phi = integral over [theta - pi, theta + pi) of (phi - theta)^2 p(phi).
double phase_variance(const ProbabilityDensity& density, double theta);
/// Trigonometric interpolation of a circle density at an arbitrary angle.
double circle_density_at(const ProbabilityDensity& density, double angle);
/// arg of integral p(phi) exp(i phi).
double circular_mean(const ProbabilityDensity& density);

/// Both sides of Delta_theta Phi >= |1 - 2 pi p(theta + pi)| delta Phi.
struct PhaseCramerRao {
  double spread = 0.0;                 ///< Delta_theta Phi
  double factor = 0.0;                 ///< |1 - 2 pi p(theta + pi)|
  FisherMetrics fisher;                ///< delta Phi
  std::optional<double> bound;         ///< factor * delta Phi when finite
  double slack() const { return bound ? spread - *bound : spread; }
};
PhaseCramerRao modified_cramer_rao(const ProbabilityDensity& density, double theta);

/// -integral p ln p under the support's measure.
double entropy(const ProbabilityDensity& density);
/// 1 / sum p_j^2 for a discrete distribution.
double collision_length(const ProbabilityDensity& density);

/// Inverse Fisher information matrix of a line (1x1) or plane (2x2) density.
Eigen::MatrixXd fisher_information_matrix(const ProbabilityDensity& density);
Eigen::MatrixXd fisher_covariance(const ProbabilityDensity& density);
/// Ordinary covariance matrix of a line or plane density.
Eigen::MatrixXd covariance(const ProbabilityDensity& density);

struct DiffusionRun {
  double gamma = 0.0;
  double drift = 0.0;
  double dt = 0.0;
  int steps = 0;
  RVec times;      ///< k dt, k = 0..steps
  RVec entropy;    ///< S at each time
  RVec rates;      ///< measured dS/dt at each time
  RVec predicted;  ///< gamma / (delta X)^2 at each time
};

/// Evolves p_t = gamma p'' + drift p' by exact Fourier multiplication and
/// compares the entropy production with gamma / (delta X)^2. Throws
/// UnstableStep if the entropy decreases while gamma > 0.
DiffusionRun diffusion_entropy_rate(const ProbabilityDensity& density, double gamma, double drift, double dt,
                                    int steps);

}  // namespace eur
