#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eur/constants.hpp"
#include "eur/fisher.hpp"
#include "eur/state.hpp"

namespace eur {

/// One-dimensional potential together with the constants (mass, hbar, omega)
/// it is evaluated with.
struct EnergyModel {
  enum class Kind { Coulomb, Harmonic, Gravity, Sampled };

  Kind kind = Kind::Harmonic;
  Constants constants{};
  double z = 1.0;  ///< Coulomb nuclear charge number
  double q = 1.0;  ///< Coulomb elementary charge
  double g = 1.0;  ///< gravitational acceleration
  std::optional<GridSpec> grid;  ///< sampling grid of a Sampled potential
  RVec samples;

  /// V(x) = -Z q^2 / |x|.
  static EnergyModel coulomb(double z, double q, const Constants& constants = {});
  /// V(x) = m omega^2 x^2 / 2 with omega and m taken from the constants.
  static EnergyModel harmonic(const Constants& constants = {});
  /// V(x) = m g x above a hard floor at x = 0.
  static EnergyModel gravity(double g, const Constants& constants = {});
  static EnergyModel sampled(GridSpec grid, RVec values, const Constants& constants = {});

  std::string name() const;
  /// V at an arbitrary point; Sampled potentials are interpolated linearly and
  /// are +inf outside their grid.
  double potential(double x) const;
  /// V at the points of `grid`. A Sampled potential must be on the same grid.
  RVec potential_on(const GridSpec& grid) const;
};

/// <V> over a line density. Samples with zero probability are skipped, so a
/// density vanishing below the gravity floor has a finite mean.
double potential_mean(const ProbabilityDensity& density, const EnergyModel& model);

/// E = hbar^2/(8 m dX^2) + <P_cl^2>/(2m) + <V>, compared with <H> computed
/// from the momentum density.
struct EnergySplit {
  double fisher_term = 0.0;
  double classical_term = 0.0;
  double potential_term = 0.0;
  double total = 0.0;
  double kinetic = 0.0;      ///< <P^2>/(2m) from the momentum density
  double hamiltonian = 0.0;  ///< kinetic + potential_term
  double residual = 0.0;     ///< |total - hamiltonian| / max(1, |hamiltonian|)
  FisherMetrics fisher;
  std::vector<std::string> flags;
};

EnergySplit energy_identity(const GridPureState& state, const EnergyModel& model);

enum class BoundKind { Fisher, Entropic, CoulombClosedForm };

std::string bound_kind_name(BoundKind kind);

struct BoundReport {
  BoundKind kind = BoundKind::Fisher;
  std::string model;
  double value = 0.0;
  std::map<std::string, double> minimizer;
  std::map<std::string, double> terms;
  std::optional<double> comparison;
  std::string comparison_label;
  std::vector<std::string> flags;

  /// value <= comparison (within `tolerance`), or true when nothing to compare.
  bool consistent(double tolerance = 1e-8) const;
};

nlohmann::ordered_json to_json(const BoundReport& report);

/// hbar^2/(8 m dX^2) + <V>. The comparison is the Rayleigh quotient of the
/// real wavefunction sqrt p, so the two agree for resolved densities.
BoundReport fisher_bound(const ProbabilityDensity& density, const EnergyModel& model);

/// pi e hbar^2 exp(-2 S)/(4m) + <V>.
BoundReport entropic_bound(const ProbabilityDensity& density, const EnergyModel& model);

/// Scalar minimization over a positive parameter: geometric bracket expansion
/// from `guess`, then Brent's golden-section/parabolic search.
struct ScalarMinimum {
  double argument = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

ScalarMinimum minimize_positive(const std::function<double(double)>& f, double guess);

/// E >= hbar^2 u^2/(2m) - Z q^2 u minimized numerically over u = <|x|^-1>;
/// compared with -Z^2 q^4 m/(2 hbar^2).
BoundReport coulomb_groundstate_bound(double z, double q, const Constants& constants = {});

/// One-parameter family of densities described by closed-form functionals.
struct DensityFamily {
  std::string name;
  std::string parameter;
  double guess = 1.0;
  std::function<double(double)> entropy;
  std::function<double(double)> fisher_length;
  std::function<double(double)> potential_mean;
};

/// Gaussians of width sigma centred at the origin, with <V> for a harmonic model.
DensityFamily gaussian_family(const EnergyModel& model);
/// lambda^-1 exp(-x/lambda) on x >= 0, with <V> for a gravity model.
DensityFamily exponential_family(const EnergyModel& model);
/// Family natural to the model: Gaussian for Harmonic, exponential for Gravity.
DensityFamily default_family(const EnergyModel& model);

/// Minimizes the Fisher or entropic bound over a family.
BoundReport family_bound(BoundKind kind, const DensityFamily& family, const EnergyModel& model);

/// Ground-state estimate for a harmonic or gravity model along its default
/// family, with the exact ground-state energy attached as the comparison.
BoundReport groundstate_bound(BoundKind kind, const EnergyModel& model);

/// Exact ground-state energy where it is known in closed form (harmonic,
/// gravity via the first Airy zero, Coulomb).
std::optional<double> exact_groundstate(const EnergyModel& model);

/// First zero a0 > 0 of Ai(-x), from integrating y'' = x y and bisecting.
double airy_first_zero();

/// <|x|^-1> by trapezoid sums that skip the cell at the origin, Richardson
/// extrapolated from spacings dx and 2 dx. +inf when p(0) does not vanish.
struct InverseDistance {
  double value = 0.0;
  double fine = 0.0;
  double coarse = 0.0;
  bool finite = true;
};

InverseDistance inverse_distance_mean(const ProbabilityDensity& density);

/// (dX)^-2 >= 4 <|x|^-1>^2 evaluated on a density.
struct InverseDistanceCheck {
  double inverse_fisher_squared = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool holds = false;
};

InverseDistanceCheck inverse_distance_check(const ProbabilityDensity& density);

/// hbar^2/(8 m dX^2) on `grid` and successive refinements.
RVec fisher_kinetic_refinement(const DensityFactory& factory, const GridSpec& grid, int levels,
                               const Constants& constants = {});

}  // namespace eur
