#pragma once

namespace eur {

/// Physical constants in the user's unit system. Defaults are natural units.
struct Constants {
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;
  double moment_of_inertia = 1.0;

  void validate() const;
};

/// Density samples below this fraction of the peak are masked out of any
/// quadrature that divides by the density.
inline constexpr double kDensityMaskFraction = 1e-12;

/// Fraction of probability that may fall on masked labels before a
/// classical estimate is refused.
inline constexpr double kMaxMaskedMass = 0.2;

/// Tolerance used when checking that an input state is normalized.
inline constexpr double kNormTolerance = 1e-8;

}  // namespace eur
