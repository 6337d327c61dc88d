#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <variant>

#include "eur/constants.hpp"
#include "eur/grid.hpp"

namespace eur {

// ---------------------------------------------------------------------------
// Continuous-variable states on uniform grids
// ---------------------------------------------------------------------------

/// Pure state sampled on a grid: psi_k = psi(x_k), normalized so sum |psi_k|^2 dx = 1.
class GridPureState {
 public:
  GridPureState(GridSpec grid, CVec amplitudes);

  const GridSpec& grid() const noexcept { return grid_; }
  const CVec& amplitudes() const noexcept { return amplitudes_; }
  double norm() const;
  RVec density() const;

 private:
  GridSpec grid_;
  CVec amplitudes_;
};

/// Mixed state with kernel samples rho(x_i, x_j). Trace is sum_i rho_ii dx.
class GridMixedState {
 public:
  GridMixedState(GridSpec grid, Eigen::MatrixXcd matrix);

  static GridMixedState from_pure(const GridPureState& state);
  /// Convex combination sum_i w_i |psi_i><psi_i|; weights are renormalized to sum to one.
  static GridMixedState mixture(std::span<const double> weights, std::span<const GridPureState> states);

  const GridSpec& grid() const noexcept { return grid_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  double trace() const;
  double purity() const;
  RVec density() const;
  /// Eigenvalues of the density operator (kernel times dx), ascending.
  Eigen::VectorXd eigenvalues() const;

 private:
  GridSpec grid_;
  Eigen::MatrixXcd matrix_;
};

/// Pure state on a 2D grid (two particles in one dimension, or one in two).
class Grid2DState {
 public:
  Grid2DState(Grid2D grid, CVec amplitudes);

  const Grid2D& grid() const noexcept { return grid_; }
  const CVec& amplitudes() const noexcept { return amplitudes_; }
  double norm() const;
  RVec density() const;

 private:
  Grid2D grid_;
  CVec amplitudes_;
};

// ---------------------------------------------------------------------------
// Discrete-level states (rotator, photon number, finite Hilbert space)
// ---------------------------------------------------------------------------

/// Density matrix over consecutive integer levels first_level .. first_level+d-1,
/// with the amplitude vector retained when the state was built as pure.
class LevelState {
 public:
  static LevelState pure(int first_level, CVec amplitudes);
  static LevelState mixed(int first_level, Eigen::MatrixXcd matrix);

  int first_level() const noexcept { return first_level_; }
  int last_level() const noexcept { return first_level_ + static_cast<int>(dimension()) - 1; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  int level(std::size_t index) const noexcept { return first_level_ + static_cast<int>(index); }

  bool is_pure() const noexcept { return amplitudes_.has_value(); }
  const CVec& amplitudes() const;
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  double trace() const;
  double purity() const;
  /// sum_l l^k rho_ll
  double level_moment(int k) const;
  /// Same state embedded in a larger level range (zero padded).
  LevelState padded(int first_level, int last_level) const;

 private:
  LevelState(int first_level, Eigen::MatrixXcd matrix, std::optional<CVec> amplitudes);
  int first_level_;
  Eigen::MatrixXcd matrix_;
  std::optional<CVec> amplitudes_;
};

/// Rigid rotator: amplitudes psi_j of angular momentum hbar*j.
/// Phase wavefunction f(phi) = (2 pi)^{-1/2} sum_j psi_j exp(i j phi).
class PeriodicState {
 public:
  explicit PeriodicState(LevelState levels) : levels_(std::move(levels)) {}
  static PeriodicState pure(int j_min, CVec amplitudes) {
    return PeriodicState(LevelState::pure(j_min, std::move(amplitudes)));
  }
  static PeriodicState mixed(int j_min, Eigen::MatrixXcd matrix) {
    return PeriodicState(LevelState::mixed(j_min, std::move(matrix)));
  }
  const LevelState& levels() const noexcept { return levels_; }
  int j_min() const noexcept { return levels_.first_level(); }
  int j_max() const noexcept { return levels_.last_level(); }

 private:
  LevelState levels_;
};

/// Photon-number state. Physical states live on n >= 0; an extended state may
/// carry negative-number levels, which the phase machinery projects away.
class FockState {
 public:
  explicit FockState(LevelState levels) : levels_(std::move(levels)) {}
  static FockState pure(CVec amplitudes) { return FockState(LevelState::pure(0, std::move(amplitudes))); }
  static FockState mixed(Eigen::MatrixXcd matrix) { return FockState(LevelState::mixed(0, std::move(matrix))); }
  static FockState number(int n, int cutoff);
  /// Amplitudes sqrt(Poisson(mean)) for n = 0..cutoff, renormalized after truncation.
  static FockState poissonian(double mean, int cutoff);
  static FockState extended(int negative_levels, CVec amplitudes) {
    return FockState(LevelState::pure(-negative_levels, std::move(amplitudes)));
  }

  const LevelState& levels() const noexcept { return levels_; }
  int cutoff() const noexcept { return levels_.last_level(); }
  int negative_levels() const noexcept { return levels_.first_level() < 0 ? -levels_.first_level() : 0; }
  bool is_physical() const;
  /// Same state with the number cutoff raised to `cutoff` (zero padded).
  FockState with_cutoff(int cutoff) const;

 private:
  LevelState levels_;
};

/// State on a d-dimensional Hilbert space.
class FiniteState {
 public:
  explicit FiniteState(LevelState levels);
  static FiniteState pure(CVec amplitudes) { return FiniteState(LevelState::pure(0, std::move(amplitudes))); }
  static FiniteState mixed(Eigen::MatrixXcd matrix) { return FiniteState(LevelState::mixed(0, std::move(matrix))); }
  static FiniteState maximally_mixed(std::size_t d);

  const LevelState& levels() const noexcept { return levels_; }
  std::size_t dimension() const noexcept { return levels_.dimension(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return levels_.matrix(); }

 private:
  LevelState levels_;
};

using AnyState = std::variant<GridPureState, GridMixedState, PeriodicState, FockState, FiniteState>;

// ---------------------------------------------------------------------------
// Probability densities
// ---------------------------------------------------------------------------

enum class Support { Line, Circle, Discrete, Plane };

/// Nonnegative samples over a line grid, a uniform circle grid on [0, 2pi),
/// a set of discrete labels, or a 2D grid. Normalization is with respect to
/// the support's measure (dx, 2pi/M, 1, dx1*dx2).
class ProbabilityDensity {
 public:
  static ProbabilityDensity line(GridSpec grid, RVec values);
  static ProbabilityDensity circle(RVec values);
  static ProbabilityDensity discrete(RVec values);
  static ProbabilityDensity plane(Grid2D grid, RVec values);

  Support support() const noexcept { return support_; }
  const RVec& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double weight() const noexcept { return weight_; }
  double total() const;
  const GridSpec& line_grid() const;
  const Grid2D& plane_grid() const;
  /// Circle sample angle phi_k = 2 pi k / M.
  double angle(std::size_t k) const;
  ProbabilityDensity normalized() const;

 private:
  ProbabilityDensity(Support support, RVec values, double weight, std::optional<GridSpec> line,
                     std::optional<Grid2D> plane);
  Support support_;
  RVec values_;
  double weight_;
  std::optional<GridSpec> line_;
  std::optional<Grid2D> plane_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

enum class Observable { X, P, J, N };

/// Unit-norm copy; throws ZeroNorm when the norm is negligible.
GridPureState normalize(const GridPureState& state);
GridMixedState normalize(const GridMixedState& state);
Grid2DState normalize(const Grid2DState& state);
PeriodicState normalize(const PeriodicState& state);
FockState normalize(const FockState& state);
FiniteState normalize(const FiniteState& state);

/// psi~(p) = (2 pi hbar)^{-1/2} integral psi(x) exp(-i p x / hbar) dx, sampled on
/// grid.conjugate(hbar). With this sign P acts as -i hbar d/dx.
GridPureState to_momentum(const GridPureState& state, double hbar = 1.0);
/// Inverse of to_momentum back onto `position_grid`.
GridPureState from_momentum(const GridPureState& momentum_state, const GridSpec& position_grid, double hbar = 1.0);
/// <p_a|rho|p_b> on the conjugate lattice.
Eigen::MatrixXcd momentum_matrix(const GridMixedState& state, double hbar = 1.0);
/// U K U^dagger for an arbitrary (not necessarily Hermitian) kernel K(x_i, x_j) on `grid`.
Eigen::MatrixXcd momentum_kernel(const Eigen::MatrixXcd& kernel, const GridSpec& grid, double hbar = 1.0);
/// Momentum-space amplitudes of a 2D state on the product of conjugate lattices.
Grid2DState to_momentum(const Grid2DState& state, double hbar = 1.0);

/// Spectral d/dx of periodic samples.
CVec spectral_derivative(std::span<const Complex> values, const GridSpec& grid);

ProbabilityDensity position_density(const GridPureState& state);
ProbabilityDensity position_density(const GridMixedState& state);
ProbabilityDensity momentum_density(const GridPureState& state, double hbar = 1.0);
ProbabilityDensity momentum_density(const GridMixedState& state, double hbar = 1.0);
ProbabilityDensity position_density(const Grid2DState& state);

/// <X^k>, <P^k>, <J^k> or <N^k> for k = 1 or 2. Throws UnsupportedObservable
/// when the observable does not belong to the state's family.
double moment(const AnyState& state, Observable observable, int k, const Constants& constants = {});
double moment(const GridPureState& state, Observable observable, int k, const Constants& constants = {});
double moment(const GridMixedState& state, Observable observable, int k, const Constants& constants = {});
double moment(const PeriodicState& state, Observable observable, int k, const Constants& constants = {});
double moment(const FockState& state, Observable observable, int k, const Constants& constants = {});
double variance(const AnyState& state, Observable observable, const Constants& constants = {});

/// One Strang split-step: half potential kick, full kinetic drift, half kick.
/// `potential` holds V at the grid points (or at the rotator's phase grid
/// phi_k = 2 pi k / d for a d-level rotator).
GridPureState evolve_step(const GridPureState& state, std::span<const double> potential, double dt,
                          const Constants& constants = {});
PeriodicState evolve_step(const PeriodicState& state, std::span<const double> potential, double dt,
                          const Constants& constants = {});

/// Largest edge density divided by the peak density; the box is adequate
/// when this is below 1e-12.
double box_edge_ratio(const GridPureState& state);
double box_edge_ratio(const GridMixedState& state);
inline constexpr double kBoxEdgeRatio = 1e-12;

/// Uniform angles 2 pi k / M.
RVec phase_points(std::size_t m);

}  // namespace eur
