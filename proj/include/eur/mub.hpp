#pragma once

#include <Eigen/Dense>

#include <vector>

#include "eur/state.hpp"

namespace eur {

/// d + 1 orthonormal bases (columns) in prime dimension d with all
/// cross-basis overlaps |<e_i^a|e_j^b>|^2 = 1/d.
struct MubSet {
  std::size_t dimension = 0;
  std::vector<Eigen::MatrixXcd> bases;
};

struct ComplementarityReport {
  double orthonormality_error = 0.0;  ///< max |B^dag B - I| over all bases
  double overlap_deviation = 0.0;     ///< max ||<e_i^a|e_j^b>|^2 - 1/d| over a != b
  bool complementary = false;
};

inline constexpr double kComplementarityTolerance = 1e-10;

bool is_prime(std::size_t n);

/// d = 2: eigenbases of Z, X, Y. Odd primes: the computational basis plus
/// the quadratic-phase bases omega^{b k^2 + a k} / sqrt(d). Every column has
/// a real positive first entry. Throws NotPrime.
MubSet mub_construct(std::size_t d);

ComplementarityReport complementarity_check(const std::vector<Eigen::MatrixXcd>& bases);

/// Validates a user-supplied basis set; throws NotComplementary.
MubSet make_mub_set(std::vector<Eigen::MatrixXcd> bases);

/// Outcome probabilities <e_i|rho|e_i> of a measurement in `basis`.
ProbabilityDensity measurement_distribution(const FiniteState& state, const Eigen::MatrixXcd& basis);

}  // namespace eur
