#pragma once

#include <Eigen/Dense>

#include "eur/decomposition.hpp"
#include "eur/grid.hpp"
#include "eur/state.hpp"

namespace eur {

/// W(x_k, p_j) on the position grid and its conjugate lattice.
/// Row k is position x_k, column j is momentum p_j.
struct WignerGrid {
  GridSpec x_grid;
  GridSpec p_grid;
  Eigen::MatrixXd values;
  /// Largest imaginary part discarded when taking the real transform.
  double max_imaginary = 0.0;

  /// integral W dp at each x_k.
  RVec position_marginal() const;
  /// integral W dx at each p_j.
  RVec momentum_marginal() const;
  double total() const;
};

/// W(x, p) = (2 pi hbar)^{-1} integral dxi exp(-i p xi / hbar) rho(x + xi/2, x - xi/2).
/// Odd xi-lattice points use the band-limited half-cell shift of rho; samples
/// that fall outside the box are taken as zero. Throws BoxTooSmall when the
/// state does not decay at the box edges.
WignerGrid wigner_transform(const GridPureState& state, double hbar = 1.0);
WignerGrid wigner_transform(const GridMixedState& state, double hbar = 1.0);

/// P_av(x) = integral p W dp / integral W dp, masked where the position marginal vanishes.
ClassicalComponent wigner_average_momentum(const WignerGrid& w);

/// X_cl(p) = integral x W dx / integral W dx.
ClassicalComponent position_classical_in_momentum(const WignerGrid& w);
ClassicalComponent position_classical_in_momentum(const GridPureState& state, double hbar = 1.0);
ClassicalComponent position_classical_in_momentum(const GridMixedState& state, double hbar = 1.0);

}  // namespace eur
