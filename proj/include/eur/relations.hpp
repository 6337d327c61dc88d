#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "eur/constants.hpp"
#include "eur/mub.hpp"
#include "eur/state.hpp"

namespace eur {

enum class Verdict { Equality, InequalitySatisfied, FlaggedInfinite, Violated };

std::string verdict_name(Verdict verdict);

/// One auxiliary comparison attached to a report: a link of an inequality
/// chain, an implied Heisenberg-type bound, or a consistency check.
struct LinkCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool equality = false;  ///< equality within tolerance, otherwise lhs >= rhs - tolerance
  double residual = 0.0;  ///< |lhs - rhs| / scale for equalities, lhs - rhs for inequalities
  double tolerance = 0.0;
  bool passed = false;
};

struct RelationReport {
  std::string relation;
  std::string state_id;
  std::map<std::string, double> left;
  std::map<std::string, double> right;
  double lhs = 0.0;  ///< product side; +inf when a factor is flagged infinite
  double rhs = 0.0;  ///< the relation constant
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Violated;
  std::vector<LinkCheck> checks;
  std::vector<std::string> flags;
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();

  /// Verdict is not Violated and every attached check passed.
  bool passed() const;
};

nlohmann::ordered_json to_json(const RelationReport& report);
nlohmann::ordered_json to_json(const LinkCheck& check);

struct Tolerances {
  double grid = 1e-6;    ///< relative, grid relations
  double finite = 1e-10; ///< finite-dimensional relations
  double fock = 1e-4;    ///< photon-number relations
};

struct RelationOptions {
  Constants constants{};
  Tolerances tolerances{};
  /// Phase samples for circle densities; 0 picks default_phase_points(dimension).
  std::size_t phase_points = 0;
  std::string state_id;
};

/// delta X * Delta P_nc = hbar/2 for pure states; for mixed states the chain
/// hbar^2/4 dX^2 + <P_cl^2> = integral |<x|P rho|x>|^2/<x|rho|x> <= <P^2> and
/// dX * Delta P_nc >= hbar/2. Both attach Delta X * Delta P >= hbar/2.
RelationReport verify_position_momentum(const GridPureState& state, const RelationOptions& options = {});
RelationReport verify_position_momentum(const GridMixedState& state, const RelationOptions& options = {});

/// Builds the same physical state on any grid.
using PureStateFactory = std::function<GridPureState(const GridSpec&)>;

/// Evaluates the state on `grid`; when its position density is not
/// band-limited there, repeats the evaluation over `refinements` halvings of
/// dx and reports flagged-infinite if delta X shrinks while Delta P grows.
RelationReport verify_position_momentum(const PureStateFactory& factory, const GridSpec& grid,
                                        const RelationOptions& options = {}, int refinements = 3);

/// Roles of X and P exchanged: delta P * Delta X_nc = hbar/2.
RelationReport verify_conjugate(const GridPureState& state, const RelationOptions& options = {});
RelationReport verify_conjugate(const GridMixedState& state, const RelationOptions& options = {});
/// Refinement in momentum doubles the box at fixed dx, halving dp.
RelationReport verify_conjugate(const PureStateFactory& factory, const GridSpec& grid,
                                const RelationOptions& options = {}, int refinements = 3);

/// delta Phi * Delta J_nc = hbar/2 on the circle, with the corollary
/// Delta_theta Phi * Delta J >= |1 - 2 pi p(theta + pi)| hbar/2 at the circular mean.
RelationReport verify_phase_angular(const PeriodicState& state, const RelationOptions& options = {});

/// Builds a rotator state truncated to levels [-j, j].
using PeriodicStateFactory = std::function<PeriodicState(int)>;
/// Follows delta Phi and Delta J as the level cutoff doubles `refinements` times.
RelationReport verify_phase_angular(const PeriodicStateFactory& factory, int j_max,
                                    const RelationOptions& options = {}, int refinements = 3);

/// delta Phi * Delta N_nc = 1/2 with the canonical phase POM and
/// Delta N_nc^2 = Var N - Var N_cl.
RelationReport verify_phase_number(const FockState& state, const RelationOptions& options = {});

/// (delta_B A) * Delta B^A_nc >= hbar/2, equality for pure states.
RelationReport verify_general(const FiniteState& state, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                              const RelationOptions& options = {});

/// FCov(X) Cov(P_nc) = (hbar/2)^2 I, the volume equality and
/// Cov(X) Cov(P) >= (hbar/2)^2 I for a 2D pure state.
RelationReport verify_multidim(const Grid2DState& state, const RelationOptions& options = {});

/// sum_i 1/L_i = 1 + tr rho^2 over a complete set of complementary bases.
RelationReport verify_ivanovic(const FiniteState& state, const MubSet& bases, const RelationOptions& options = {});

namespace detail {
LinkCheck equality_check(std::string name, double lhs, double rhs, double tolerance);
LinkCheck inequality_check(std::string name, double lhs, double rhs, double tolerance);
void settle_equality(RelationReport& report, double tolerance);
void settle_inequality(RelationReport& report, double tolerance);
}  // namespace detail

}  // namespace eur
