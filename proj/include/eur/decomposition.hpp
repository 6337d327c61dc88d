#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "eur/constants.hpp"
#include "eur/state.hpp"

namespace eur {

enum class Basis { Position, Momentum, Phase, ExtendedPhase };

std::string basis_name(Basis basis);
std::string observable_name(Observable observable);

/// Best estimate B_cl(a) of an observable given the outcome a of a measurement
/// in `basis`, with the statistics it induces.
struct ClassicalComponent {
  std::string observable;
  std::string basis;
  RVec labels;               ///< x_k, p_k, phi_k or eigenvalues of A
  RVec values;               ///< B_cl(a); zero on masked labels
  RVec probability;          ///< p(a), normalized under `weight`
  double weight = 1.0;       ///< quadrature measure per label
  std::vector<char> retained;
  double masked_mass = 0.0;  ///< probability on masked labels
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

struct DecompositionSummary {
  double var_total = 0.0;
  double var_classical = 0.0;
  double var_nonclassical = 0.0;
  double additivity_residual = 0.0;
  double min_error = 0.0;
  double masked_mass = 0.0;
};

/// Generalized measurement: outcome values with positive effects summing to the identity.
struct PomObservable {
  RVec outcomes;
  std::vector<Eigen::MatrixXcd> effects;
};

/// Nonclassical photon-number POM on the extended space [-K, K] together with
/// the cutoff study that accompanies it.
struct ExtendedNumberResult {
  PomObservable pom;
  int cutoff = 0;
  double mean = 0.0;             ///< first moment of the POM on the state
  double variance = 0.0;         ///< Var N_nc from the POM moments
  double variance_doubled = 0.0; ///< same quantity at cutoff 2K
  double completeness_error = 0.0;
  double max_cl_mismatch = 0.0;  ///< max |N*_cl(phi_k) - N_cl(phi_k)| on retained points
};

struct DecompositionOptions {
  Constants constants{};
  /// Phase samples; 0 picks default_phase_points(dimension).
  std::size_t phase_points = 0;
};

/// Builds a component from an (unnormalized) density over labels and the
/// numerator Re<a|B rho|a> sampled on the same labels: normalizes both,
/// masks, and fills the moments.
ClassicalComponent make_classical_component(std::string observable, std::string basis, RVec labels, RVec density,
                                            RVec numerator, double weight);

/// <x|P rho|x> for grid states (complex; real part is p(x) P_cl(x)).
CVec position_pr_diagonal(const GridPureState& state, double hbar);
CVec position_pr_diagonal(const GridMixedState& state, double hbar);
/// <p|X rho|p> on the conjugate lattice.
CVec momentum_xr_diagonal(const GridPureState& state, double hbar);
CVec momentum_xr_diagonal(const GridMixedState& state, double hbar);

/// Retention mask for a sampled density: labels below 1e-12 of the peak are
/// dropped. Throws VanishingDensity if more than 20% of the mass is dropped.
std::vector<char> density_mask(const RVec& density, double weight, double* masked_mass = nullptr);

ClassicalComponent classical_estimate(const GridPureState& state, Basis basis, Observable observable,
                                      const DecompositionOptions& options = {});
ClassicalComponent classical_estimate(const GridMixedState& state, Basis basis, Observable observable,
                                      const DecompositionOptions& options = {});
ClassicalComponent classical_estimate(const PeriodicState& state, Basis basis, Observable observable,
                                      const DecompositionOptions& options = {});
ClassicalComponent classical_estimate(const FockState& state, Basis basis, Observable observable,
                                      const DecompositionOptions& options = {});
/// General finite-dimensional form: basis = eigenvectors of Hermitian `a`, observable `b`.
ClassicalComponent classical_estimate(const FiniteState& state, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Average error <(B - B~(A))^2> of a candidate estimate sampled on the same labels
/// as classical_estimate would produce.
double estimate_error(const GridPureState& state, Basis basis, Observable observable, const RVec& candidate,
                      const DecompositionOptions& options = {});
double estimate_error(const GridMixedState& state, Basis basis, Observable observable, const RVec& candidate,
                      const DecompositionOptions& options = {});
double estimate_error(const PeriodicState& state, Basis basis, Observable observable, const RVec& candidate,
                      const DecompositionOptions& options = {});
double estimate_error(const FockState& state, Basis basis, Observable observable, const RVec& candidate,
                      const DecompositionOptions& options = {});
double estimate_error(const FiniteState& state, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                      const RVec& candidate);

DecompositionSummary decomposition_summary(const GridPureState& state, Basis basis, Observable observable,
                                           const DecompositionOptions& options = {});
DecompositionSummary decomposition_summary(const GridMixedState& state, Basis basis, Observable observable,
                                           const DecompositionOptions& options = {});
DecompositionSummary decomposition_summary(const PeriodicState& state, Basis basis, Observable observable,
                                           const DecompositionOptions& options = {});
DecompositionSummary decomposition_summary(const FockState& state, Basis basis, Observable observable,
                                           const DecompositionOptions& options = {});
DecompositionSummary decomposition_summary(const FiniteState& state, const Eigen::MatrixXcd& a,
                                           const Eigen::MatrixXcd& b);

/// N_nc as a POM: N*_nc = N* - N*_cl on levels [-K, K], eigendecomposed and
/// mapped back to n >= 0. Throws CutoffTooSmall when Var N_nc moves by more than
/// 1e-4 (relative) between K and 2K.
ExtendedNumberResult extended_number_nonclassical(const FockState& state, int cutoff);

/// (E_cl, E_nc) with E_cl = hbar omega <N_cl> and E_cl + E_nc = hbar omega <N + 1/2>.
std::pair<double, double> energy_split(const FockState& state, const Constants& constants = {},
                                       std::size_t phase_points = 0);

/// max |dp/dt + d(p v_cl)/dq| with dp/dt from a symmetric pair of evolve_step calls.
double continuity_residual(const GridPureState& state, std::span<const double> potential, double dt,
                           const Constants& constants = {});
double continuity_residual(const PeriodicState& state, std::span<const double> potential, double dt,
                           const Constants& constants = {});

}  // namespace eur
