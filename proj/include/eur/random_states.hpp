#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <random>
#include <vector>

#include "eur/grid.hpp"
#include "eur/state.hpp"

namespace eur {

/// One term c * exp(-(x - x0)^2 / (4 w^2) + i k x) of a smooth superposition.
struct GaussianTerm {
  Complex coefficient{1.0, 0.0};
  double center = 0.0;
  double width = 1.0;
  double wavenumber = 0.0;
};

/// Analytic description of a smooth state, so the same state can be sampled
/// on any grid (refinement studies, box changes).
struct SmoothStateSpec {
  std::vector<GaussianTerm> terms;

  /// Normalized samples on `grid`.
  GridPureState sample(const GridSpec& grid) const;
};

/// Box used by the random smooth suite: 1024 points over [-30, 30).
GridSpec suite_grid(std::size_t n_points = 1024);

/// 2 to 4 Gaussians with centres in [-5, 5], widths in [0.5, 1.5], wavenumbers
/// in [-3, 3] and random complex coefficients.
SmoothStateSpec random_smooth_spec(std::mt19937_64& rng);

/// Equal-weight mixture of two Gaussians (width in [0.5, 1]) at +-d with d in
/// [1.5, 3] widths, each carrying a random wavenumber in [-1, 1].
GridMixedState random_two_gaussian_mixture(const GridSpec& grid, std::mt19937_64& rng);

/// Haar-random pure amplitudes of dimension d.
CVec random_pure_amplitudes(std::size_t d, std::mt19937_64& rng);
/// Random density matrix G G^dagger / tr from a complex Ginibre matrix.
Eigen::MatrixXcd random_density_matrix(std::size_t d, std::mt19937_64& rng);
/// Hermitian matrix with independent standard normal entries (GUE-like).
Eigen::MatrixXcd random_hermitian(std::size_t d, std::mt19937_64& rng);

}  // namespace eur
