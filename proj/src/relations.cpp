#include "eur/relations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eur/decomposition.hpp"
#include "eur/entanglement.hpp"
#include "eur/error.hpp"
#include "eur/fisher.hpp"
#include "eur/phase.hpp"

namespace eur {

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Equality: return "equality";
    case Verdict::InequalitySatisfied: return "inequality-satisfied";
    case Verdict::FlaggedInfinite: return "flagged-infinite";
    case Verdict::Violated: return "violated";
  }
  return "unknown";
}

bool RelationReport::passed() const {
  return verdict != Verdict::Violated &&
         std::all_of(checks.begin(), checks.end(), [](const LinkCheck& c) { return c.passed; });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

nlohmann::ordered_json numbers(const std::map<std::string, double>& values) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values) out[k] = number(v);
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const LinkCheck& check) {
  return {{"name", check.name},
          {"lhs", number(check.lhs)},
          {"rhs", number(check.rhs)},
          {"kind", check.equality ? "equality" : "inequality"},
          {"residual", number(check.residual)},
          {"tolerance", check.tolerance},
          {"passed", check.passed}};
}

nlohmann::ordered_json to_json(const RelationReport& report) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) checks.push_back(to_json(c));
  return {{"relation", report.relation},
          {"state_id", report.state_id},
          {"left", numbers(report.left)},
          {"right", numbers(report.right)},
          {"lhs", number(report.lhs)},
          {"rhs", number(report.rhs)},
          {"residual", number(report.residual)},
          {"tolerance", report.tolerance},
          {"verdict", verdict_name(report.verdict)},
          {"passed", report.passed()},
          {"checks", checks},
          {"flags", report.flags},
          {"provenance", report.provenance}};
}

namespace detail {

LinkCheck equality_check(std::string name, double lhs, double rhs, double tolerance) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  const double r = std::abs(lhs - rhs) / scale;
  return LinkCheck{std::move(name), lhs, rhs, true, r, tolerance, r <= tolerance};
}

LinkCheck inequality_check(std::string name, double lhs, double rhs, double tolerance) {
  const double scale = std::max(std::abs(rhs), 1e-300);
  const double slack = lhs - rhs;
  return LinkCheck{std::move(name), lhs, rhs, false, slack, tolerance, slack >= -tolerance * scale};
}

void settle_equality(RelationReport& report, double tolerance) {
  report.tolerance = tolerance;
  report.residual = std::abs(report.lhs - report.rhs) / std::abs(report.rhs);
  report.verdict = report.residual <= tolerance ? Verdict::Equality : Verdict::Violated;
}

void settle_inequality(RelationReport& report, double tolerance) {
  report.tolerance = tolerance;
  report.residual = (report.lhs - report.rhs) / std::abs(report.rhs);
  report.verdict = report.residual >= -tolerance ? Verdict::InequalitySatisfied : Verdict::Violated;
}

}  // namespace detail

using detail::equality_check;
using detail::inequality_check;

namespace {

DecompositionOptions decomposition_options(const RelationOptions& o) {
  DecompositionOptions d;
  d.constants = o.constants;
  d.phase_points = o.phase_points;
  return d;
}

RelationReport start(std::string relation, const RelationOptions& o) {
  RelationReport r;
  r.relation = std::move(relation);
  r.state_id = o.state_id;
  return r;
}

nlohmann::ordered_json grid_block(const GridSpec& g) {
  return {{"n_points", g.size()}, {"x_min", g.x_min()}, {"x_max", g.x_max()}, {"dx", g.dx()}};
}

double variance_of(const ProbabilityDensity& d) { return covariance(d)(0, 0); }

// The grid relation between a Fisher length on one axis and the nonclassical
// spread of the conjugate observable, shared by X-P and P-X.
struct GridSides {
  FisherMetrics fisher;
  double spread_nc = 0.0;   // sqrt(Var B - Var B_cl)
  double spread_b = 0.0;    // Delta B
  double spread_a = 0.0;    // Delta A
  double masked_mass = 0.0;
  double additivity = 0.0;
};

void fill_grid_report(RelationReport& r, const GridSides& s, const char* fisher_name, const char* nc_name,
                      const char* a_name, const char* b_name, bool pure, const RelationOptions& o) {
  const double half = 0.5 * o.constants.hbar;
  r.left[fisher_name] = s.fisher.length.value_or(kInf);
  r.left[nc_name] = s.spread_nc;
  r.right["hbar/2"] = half;
  r.rhs = half;
  r.lhs = s.fisher.length ? *s.fisher.length * s.spread_nc : kInf;
  r.provenance["masked_mass"] = s.masked_mass;
  r.provenance["fisher_masked_mass"] = s.fisher.masked_mass;
  r.provenance["additivity_residual"] = s.additivity;
  r.provenance["fisher_resolved"] = s.fisher.resolved;
  if (!s.fisher.resolved) r.flags.push_back("density-not-band-limited: run a refinement study");
  if (pure)
    detail::settle_equality(r, o.tolerances.grid);
  else
    detail::settle_inequality(r, o.tolerances.grid);
  const double tol = o.tolerances.grid;
  r.checks.push_back(inequality_check(std::string("heisenberg: Delta ") + a_name + " * Delta " + b_name + " >= hbar/2",
                                      s.spread_a * s.spread_b, half, tol));
  if (s.fisher.length)
    r.checks.push_back(inequality_check(std::string("cramer-rao: Delta ") + a_name + " >= " + fisher_name, s.spread_a,
                                        *s.fisher.length, tol));
  r.checks.push_back(
      inequality_check(std::string("Delta ") + b_name + " >= " + nc_name, s.spread_b, s.spread_nc, tol));
}

template <class State>
GridSides sides_xp(const State& state, const RelationOptions& o) {
  GridSides s;
  const auto px = position_density(state);
  s.fisher = fisher_length(px);
  const auto sum = decomposition_summary(state, Basis::Position, Observable::P, decomposition_options(o));
  s.spread_nc = std::sqrt(std::max(0.0, sum.var_total - sum.var_classical));
  s.spread_b = std::sqrt(sum.var_total);
  s.spread_a = std::sqrt(variance_of(px));
  s.masked_mass = sum.masked_mass;
  s.additivity = sum.additivity_residual;
  return s;
}

template <class State>
GridSides sides_px(const State& state, const RelationOptions& o) {
  GridSides s;
  const auto pp = momentum_density(state, o.constants.hbar);
  s.fisher = fisher_length(pp);
  const auto sum = decomposition_summary(state, Basis::Momentum, Observable::X, decomposition_options(o));
  s.spread_nc = std::sqrt(std::max(0.0, sum.var_total - sum.var_classical));
  s.spread_b = std::sqrt(sum.var_total);
  s.spread_a = std::sqrt(variance_of(pp));
  s.masked_mass = sum.masked_mass;
  s.additivity = sum.additivity_residual;
  return s;
}

// hbar^2/4 dX^2 + <B_cl^2> = integral |<a|B rho|a>|^2 / p(a) <= <B^2>.
void mixed_chain(RelationReport& r, const CVec& br, const RVec& density, double weight, double fisher_length,
                 double cl_second, double b_second, const RelationOptions& o) {
  const double hbar = o.constants.hbar;
  double total = 0.0;
  for (double v : density) total += v * weight;
  double masked = 0.0;
  const auto keep = density_mask(density, weight, &masked);
  double integral = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k)
    if (keep[k]) integral += std::norm(br[k]) / (density[k] / total) * weight;
  const double lhs = hbar * hbar / (4.0 * fisher_length * fisher_length) + cl_second;
  r.checks.push_back(equality_check("chain: hbar^2/4 fisher^2 + <B_cl^2> = integral |<a|B rho|a>|^2/p", lhs, integral,
                                    o.tolerances.grid));
  r.checks.push_back(inequality_check("chain: <B^2> >= integral |<a|B rho|a>|^2/p", b_second, integral, o.tolerances.grid));
  r.right["chain_integral"] = integral;
  r.left["chain_fisher_side"] = lhs;
  r.provenance["chain_slack"] = b_second - integral;
}

// Refinement bookkeeping shared by the X-P and P-X studies.
struct Trace {
  std::vector<double> fisher;
  std::vector<double> spread;
};

bool monotone_growth(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1] * (1.0 + 1e-3))) return false;
  return v.size() > 1;
}

RelationReport settle_refinement(RelationReport r, const Trace& t, const char* fisher_name, const char* spread_name,
                                 const std::vector<nlohmann::ordered_json>& grids) {
  const double ratio = t.fisher.back() / t.fisher[t.fisher.size() - 2];
  const bool vanishing = ratio < kDiscontinuityRatio;
  const bool divergent = monotone_growth(t.spread);
  r.provenance["refinement_grids"] = grids;
  r.provenance[std::string(fisher_name) + "_trace"] = t.fisher;
  r.provenance[std::string(spread_name) + "_trace"] = t.spread;
  r.provenance["fisher_refinement_ratio"] = ratio;
  r.left[fisher_name] = t.fisher.back();
  r.left[spread_name] = t.spread.back();
  r.lhs = kInf;
  r.residual = kInf;
  if (vanishing) r.flags.push_back(std::string(fisher_name) + ": zero-by-discontinuity");
  if (divergent) r.flags.push_back(std::string(spread_name) + ": divergent under refinement");
  // A vanishing Fisher length must be paired with a diverging partner.
  r.verdict = vanishing && divergent ? Verdict::FlaggedInfinite : Verdict::Violated;
  if (!vanishing && !divergent) r.flags.push_back("unresolved density without a refinement trend");
  return r;
}

// A smooth state whose density only needed a finer grid or a wider box.
RelationReport resolved_after(RelationReport r, int level, const GridSpec& base) {
  r.provenance["base_grid"] = grid_block(base);
  r.provenance["resolved_after_refinements"] = level;
  return r;
}

}  // namespace

// --- position / momentum ------------------------------------------------------

RelationReport verify_position_momentum(const GridPureState& state_in, const RelationOptions& o) {
  const auto state = normalize(state_in);
  auto r = start("xp", o);
  r.provenance["grid"] = grid_block(state.grid());
  r.provenance["pure"] = true;
  fill_grid_report(r, sides_xp(state, o), "delta_X", "Delta_P_nc", "X", "P", true, o);
  return r;
}

RelationReport verify_position_momentum(const GridMixedState& state_in, const RelationOptions& o) {
  const auto state = normalize(state_in);
  auto r = start("xp", o);
  r.provenance["grid"] = grid_block(state.grid());
  r.provenance["pure"] = false;
  r.provenance["purity"] = state.purity();
  const auto s = sides_xp(state, o);
  fill_grid_report(r, s, "delta_X", "Delta_P_nc", "X", "P", false, o);
  if (s.fisher.length) {
    const auto comp = classical_estimate(state, Basis::Position, Observable::P, decomposition_options(o));
    mixed_chain(r, position_pr_diagonal(state, o.constants.hbar), state.density(), state.grid().dx(),
                *s.fisher.length, comp.second_moment, moment(state, Observable::P, 2, o.constants), o);
  }
  return r;
}

RelationReport verify_position_momentum(const PureStateFactory& factory, const GridSpec& grid,
                                        const RelationOptions& o, int refinements) {
  auto base = verify_position_momentum(factory(grid), o);
  if (base.provenance.value("fisher_resolved", true) || refinements < 1) return base;
  Trace t;
  std::vector<nlohmann::ordered_json> grids;
  GridSpec g = grid;
  for (int level = 0; level <= refinements; ++level, g = g.refined()) {
    const auto s = normalize(factory(g));
    if (level > 0)
      if (auto r = verify_position_momentum(s, o); r.provenance.value("fisher_resolved", false))
        return resolved_after(std::move(r), level, grid);
    t.fisher.push_back(*fisher_length(position_density(s)).length);
    t.spread.push_back(std::sqrt(std::max(0.0, variance(s, Observable::P, o.constants))));
    grids.push_back(grid_block(g));
  }
  auto r = settle_refinement(base, t, "delta_X", "Delta_P", grids);
  if (r.verdict == Verdict::FlaggedInfinite)
    r.flags.push_back("conclusion: Delta P is infinite in the continuum");
  return r;
}

RelationReport verify_conjugate(const GridPureState& state_in, const RelationOptions& o) {
  const auto state = normalize(state_in);
  auto r = start("px", o);
  r.provenance["grid"] = grid_block(state.grid());
  r.provenance["pure"] = true;
  fill_grid_report(r, sides_px(state, o), "delta_P", "Delta_X_nc", "P", "X", true, o);
  return r;
}

RelationReport verify_conjugate(const GridMixedState& state_in, const RelationOptions& o) {
  const auto state = normalize(state_in);
  auto r = start("px", o);
  r.provenance["grid"] = grid_block(state.grid());
  r.provenance["pure"] = false;
  r.provenance["purity"] = state.purity();
  const auto s = sides_px(state, o);
  fill_grid_report(r, s, "delta_P", "Delta_X_nc", "P", "X", false, o);
  if (s.fisher.length) {
    const double hbar = o.constants.hbar;
    const auto comp = classical_estimate(state, Basis::Momentum, Observable::X, decomposition_options(o));
    const Eigen::MatrixXcd pm = momentum_matrix(state, hbar);
    RVec density(static_cast<std::size_t>(pm.rows()));
    for (Eigen::Index k = 0; k < pm.rows(); ++k) density[static_cast<std::size_t>(k)] = pm(k, k).real();
    mixed_chain(r, momentum_xr_diagonal(state, hbar), density, state.grid().conjugate_spacing(hbar),
                *s.fisher.length, comp.second_moment, moment(state, Observable::X, 2, o.constants), o);
  }
  return r;
}

RelationReport verify_conjugate(const PureStateFactory& factory, const GridSpec& grid, const RelationOptions& o,
                                int refinements) {
  auto base = verify_conjugate(factory(grid), o);
  if (base.provenance.value("fisher_resolved", true) || refinements < 1) return base;
  Trace t;
  std::vector<nlohmann::ordered_json> grids;
  GridSpec g = grid;
  for (int level = 0; level <= refinements; ++level) {
    const auto s = normalize(factory(g));
    if (level > 0)
      if (auto r = verify_conjugate(s, o); r.provenance.value("fisher_resolved", false))
        return resolved_after(std::move(r), level, grid);
    t.fisher.push_back(*fisher_length(momentum_density(s, o.constants.hbar)).length);
    t.spread.push_back(std::sqrt(std::max(0.0, variance(s, Observable::X, o.constants))));
    grids.push_back(grid_block(g));
    g = GridSpec(2 * g.size(), 2.0 * g.x_min(), 2.0 * g.x_max());
  }
  auto r = settle_refinement(base, t, "delta_P", "Delta_X", grids);
  if (r.verdict == Verdict::FlaggedInfinite)
    r.flags.push_back("conclusion: Delta X is infinite in the continuum");
  return r;
}

// --- phase relations ----------------------------------------------------------

namespace {

struct PhaseSides {
  FisherMetrics fisher;
  double spread_nc = 0.0;
  double spread_b = 0.0;
  double var_classical = 0.0;
  double masked_mass = 0.0;
  PhaseCramerRao corollary;
  bool has_corollary = false;
  double theta = 0.0;
  std::size_t points = 0;
  double min_density_ratio = 0.0;
};

template <class State>
PhaseSides phase_sides(const State& state, Observable b, std::size_t dimension, const RelationOptions& o) {
  PhaseSides s;
  s.points = o.phase_points ? o.phase_points : default_phase_points(dimension);
  const auto density = phase_density(state, s.points);
  s.fisher = fisher_length_periodic(density);
  auto opts = decomposition_options(o);
  opts.phase_points = s.points;
  const auto sum = decomposition_summary(state, Basis::Phase, b, opts);
  s.spread_nc = std::sqrt(std::max(0.0, sum.var_total - sum.var_classical));
  s.spread_b = std::sqrt(std::max(0.0, sum.var_total));
  s.var_classical = sum.var_classical;
  s.masked_mass = sum.masked_mass;
  const auto& v = density.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  s.min_density_ratio = *hi > 0.0 ? *lo / *hi : 0.0;
  if (s.fisher.finite()) {
    s.theta = circular_mean(density);
    s.corollary = modified_cramer_rao(density, s.theta);
    s.has_corollary = true;
  }
  return s;
}

// Shared by the rotator and photon-number reports. `unit` is hbar for J and 1 for N.
void fill_phase_report(RelationReport& r, const PhaseSides& s, const char* nc_name, const char* b_name, double unit,
                       bool pure, double tolerance) {
  const double half = 0.5 * unit;
  r.rhs = half;
  r.right[unit == 1.0 ? "1/2" : "hbar/2"] = half;
  r.left["delta_Phi"] = s.fisher.length.value_or(kInf);
  r.left[nc_name] = s.spread_nc;
  r.provenance["phase_points"] = s.points;
  r.provenance["masked_mass"] = s.masked_mass;
  r.provenance["min_density_ratio"] = s.min_density_ratio;
  r.provenance["var_classical"] = s.var_classical;
  if (s.min_density_ratio < 1e-12 && s.fisher.finite())
    r.flags.push_back("phase density has isolated zeros; see the phase-point refinement ratio");
  if (!s.fisher.finite()) {
    r.lhs = kInf;
    r.residual = kInf;
    r.tolerance = tolerance;
    r.flags.push_back("delta_Phi: infinite-by-uniformity");
    // An infinite Fisher length pairs with a vanishing partner for pure states.
    const bool paired = !pure || s.spread_nc <= std::sqrt(tolerance) * std::max(unit, s.spread_b);
    r.verdict = paired ? Verdict::FlaggedInfinite : Verdict::Violated;
    if (pure) r.flags.push_back(std::string(nc_name) + " = 0: complementarity limit");
    return;
  }
  r.lhs = *s.fisher.length * s.spread_nc;
  if (pure)
    detail::settle_equality(r, tolerance);
  else
    detail::settle_inequality(r, tolerance);
  if (s.has_corollary) {
    r.provenance["corollary_theta"] = s.theta;
    r.checks.push_back(inequality_check(std::string("corollary: Delta_theta Phi * Delta ") + b_name +
                                            " >= |1 - 2 pi p(theta + pi)| " + (unit == 1.0 ? "/2" : "hbar/2"),
                                        s.corollary.spread * s.spread_b, s.corollary.factor * half, tolerance));
  }
}

}  // namespace

RelationReport verify_phase_angular(const PeriodicState& state_in, const RelationOptions& o) {
  const auto state = normalize(state_in);
  auto r = start("phase-angular", o);
  r.provenance["j_min"] = state.j_min();
  r.provenance["j_max"] = state.j_max();
  r.provenance["pure"] = state.levels().is_pure();
  const auto s = phase_sides(state, Observable::J, state.levels().dimension(), o);
  fill_phase_report(r, s, "Delta_J_nc", "J", o.constants.hbar, state.levels().is_pure(), o.tolerances.grid);
  return r;
}

RelationReport verify_phase_angular(const PeriodicStateFactory& factory, int j_max, const RelationOptions& o,
                                    int refinements) {
  require(j_max >= 1 && refinements >= 1, ErrorKind::InvalidArgument, "refinement study needs j_max >= 1");
  auto r = start("phase-angular", o);
  Trace t;
  std::vector<nlohmann::ordered_json> levels;
  for (int level = 0, j = j_max; level <= refinements; ++level, j *= 2) {
    const auto s = normalize(factory(j));
    const auto sides = phase_sides(s, Observable::J, s.levels().dimension(), o);
    t.fisher.push_back(sides.fisher.length.value_or(kInf));
    t.spread.push_back(sides.spread_b);
    levels.push_back({{"j_max", j}, {"phase_points", sides.points}});
  }
  const bool shrinking = t.fisher.back() < t.fisher.front();
  r.rhs = 0.5 * o.constants.hbar;
  r.right["hbar/2"] = r.rhs;
  r = settle_refinement(r, t, "delta_Phi", "Delta_J", levels);
  if (!shrinking) r.verdict = Verdict::Violated;
  if (r.verdict == Verdict::FlaggedInfinite)
    r.flags.push_back("conclusion: Delta J is infinite for the limiting phase density");
  return r;
}

RelationReport verify_phase_number(const FockState& state_in, const RelationOptions& o) {
  const auto state = normalize(state_in);
  require(state.is_physical(), ErrorKind::InvalidArgument, "phase-number relation needs a physical Fock state");
  auto r = start("phase-number", o);
  r.provenance["cutoff"] = state.cutoff();
  r.provenance["pure"] = state.levels().is_pure();
  const auto s = phase_sides(state, Observable::N, state.levels().dimension(), o);
  fill_phase_report(r, s, "Delta_N_nc", "N", 1.0, state.levels().is_pure(), o.tolerances.fock);

  // Cutoff doubling: the padded state must reproduce both factors.
  const auto doubled = state.with_cutoff(2 * state.cutoff() + 1);
  auto o2 = o;
  o2.phase_points = 0;
  const auto s2 = phase_sides(doubled, Observable::N, doubled.levels().dimension(), o2);
  r.provenance["cutoff_doubled"] = doubled.cutoff();
  if (s.fisher.finite() && s2.fisher.finite()) {
    r.checks.push_back(equality_check("cutoff doubling: delta_Phi * Delta_N_nc", *s2.fisher.length * s2.spread_nc,
                                      *s.fisher.length * s.spread_nc, o.tolerances.fock));
    // Refinement of the phase grid alone, reported for densities with zeros.
    const auto dense = phase_density(state, 2 * s.points);
    const auto f2 = fisher_length_periodic(dense);
    if (f2.length) r.provenance["phase_point_refinement_ratio"] = *f2.length / *s.fisher.length;
  }
  return r;
}

// --- general finite-dimensional pair -------------------------------------------

RelationReport verify_general(const FiniteState& state_in, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                              const RelationOptions& o) {
  const auto state = normalize(state_in);
  const double hbar = o.constants.hbar;
  const double tol = o.tolerances.finite;
  auto r = start("general", o);
  const bool pure = state.levels().is_pure() || std::abs(state.levels().purity() - 1.0) < 1e-12;
  r.provenance["dimension"] = state.dimension();
  r.provenance["pure"] = pure;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  const Eigen::MatrixXcd& rho = state.matrix();
  const Eigen::MatrixXcd comm = Complex(0.0, 1.0 / hbar) * (b * rho - rho * b);
  const Eigen::MatrixXcd rho_a = v.adjoint() * rho * v;
  const Eigen::MatrixXcd comm_a = v.adjoint() * comm * v;
  const auto d = rho.rows();
  double p_max = 0.0, c_max = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    p_max = std::max(p_max, rho_a(k, k).real());
    c_max = std::max(c_max, std::abs(comm_a(k, k).real()));
  }
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff() / hbar);
  double info = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double p = rho_a(k, k).real();
    const double c = comm_a(k, k).real();
    if (p <= 1e-12 * p_max) {
      require(std::abs(c) <= 1e-12 * scale, ErrorKind::VanishingDensity,
              "commutator weight on a zero-probability eigenlabel");
      continue;
    }
    info += c * c / p;
  }

  const auto sum = decomposition_summary(state, a, b);
  const double spread_nc = std::sqrt(std::max(0.0, sum.var_total - sum.var_classical));
  const double spread_b = std::sqrt(std::max(0.0, sum.var_total));
  r.left["Delta_B_nc"] = spread_nc;
  r.right["hbar/2"] = 0.5 * hbar;
  r.rhs = 0.5 * hbar;
  r.provenance["masked_mass"] = sum.masked_mass;
  r.provenance["max_commutator_diagonal"] = c_max;
  r.checks.push_back(inequality_check("Delta B >= Delta_B_nc", spread_b, spread_nc, tol));

  const bool commuting = c_max <= 1e-12 * scale;
  if (commuting) {
    r.left["delta_B_A"] = kInf;
    r.lhs = kInf;
    r.residual = kInf;
    r.tolerance = tol;
    r.flags.push_back("delta_B A: infinite (diagonal of [B, rho] vanishes in the A basis)");
    const bool paired = !pure || spread_nc <= std::sqrt(tol) * std::max(1.0, spread_b);
    r.verdict = paired ? Verdict::FlaggedInfinite : Verdict::Violated;
    return r;
  }
  const double delta = 1.0 / std::sqrt(info);
  r.left["delta_B_A"] = delta;
  r.lhs = delta * spread_nc;
  if (pure)
    detail::settle_equality(r, tol);
  else
    detail::settle_inequality(r, tol);
  return r;
}

// --- two dimensions --------------------------------------------------------------

RelationReport verify_multidim(const Grid2DState& state_in, const RelationOptions& o) {
  const auto state = normalize(state_in);
  const double hbar = o.constants.hbar;
  const double q = 0.25 * hbar * hbar;
  const double tol = o.tolerances.grid;
  auto r = start("multidim", o);
  r.provenance["grid"] = {{"axis1", grid_block(state.grid().axis1)}, {"axis2", grid_block(state.grid().axis2)}};

  const auto px = position_density(state);
  const Eigen::Matrix2d fcov = fisher_covariance(px);
  const Eigen::Matrix2d cov_x = covariance(px);
  const auto comps = nonclassical_components_2d(state, hbar);
  const Eigen::Matrix2d product = fcov * comps.cov_p_nc;
  r.provenance["masked_mass"] = comps.masked_mass;
  r.provenance["additivity_residual"] = comps.additivity_residual;
  r.provenance["mixed_partial_residual"] = comps.mixed_partial_residual;
  r.provenance["fcov_cov_p_nc"] = {{product(0, 0), product(0, 1)}, {product(1, 0), product(1, 1)}};
  r.left["FCov_11"] = fcov(0, 0);
  r.left["FCov_12"] = fcov(0, 1);
  r.left["FCov_22"] = fcov(1, 1);
  r.left["CovPnc_11"] = comps.cov_p_nc(0, 0);
  r.left["CovPnc_12"] = comps.cov_p_nc(0, 1);
  r.left["CovPnc_22"] = comps.cov_p_nc(1, 1);
  r.right["(hbar/2)^2"] = q;

  r.lhs = (product - q * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() + q;
  r.rhs = q;
  detail::settle_equality(r, tol);

  const double volume = std::sqrt(fcov.determinant()) * std::sqrt(comps.cov_p_nc.determinant());
  r.checks.push_back(equality_check("volume: dV_X * DV_P_nc = (hbar/2)^2", volume, q, tol));
  // Cov(X) Cov(P) >= (hbar/2)^2 I through the similar symmetric matrix C_P^{1/2} C_X C_P^{1/2}.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> sp(comps.cov_p);
  const Eigen::Matrix2d root = sp.operatorSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> sym(root * cov_x * root);
  r.checks.push_back(inequality_check("heisenberg matrix: min eig of Cov(X) Cov(P) >= (hbar/2)^2",
                                      sym.eigenvalues().minCoeff(), q, tol));
  const double scale = std::max(1.0, comps.cov_p.cwiseAbs().maxCoeff());
  r.checks.push_back(LinkCheck{"additivity: Cov(P) = Cov(P_cl) + Cov(P_nc)", comps.additivity_residual, 0.0, true,
                               comps.additivity_residual / scale, tol, comps.additivity_residual / scale <= tol});
  return r;
}

// --- collision lengths --------------------------------------------------------------

RelationReport verify_ivanovic(const FiniteState& state_in, const MubSet& bases, const RelationOptions& o) {
  const auto state = normalize(state_in);
  const auto check = complementarity_check(bases.bases);
  require(check.complementary, ErrorKind::NotComplementary,
          "overlap deviation " + std::to_string(check.overlap_deviation));
  require(bases.dimension == state.dimension(), ErrorKind::InvalidArgument, "basis set and state dimensions differ");
  auto r = start("ivanovic", o);
  double sum = 0.0;
  std::vector<double> lengths;
  for (const auto& b : bases.bases) {
    const double l = collision_length(measurement_distribution(state, b));
    lengths.push_back(l);
    sum += 1.0 / l;
  }
  const double purity = state.levels().purity();
  r.left["sum_inverse_collision_lengths"] = sum;
  r.right["1 + tr rho^2"] = 1.0 + purity;
  r.lhs = sum;
  r.rhs = 1.0 + purity;
  r.provenance["collision_lengths"] = lengths;
  r.provenance["dimension"] = state.dimension();
  r.provenance["overlap_deviation"] = check.overlap_deviation;
  detail::settle_equality(r, o.tolerances.finite);
  r.checks.push_back(inequality_check("sum <= 2", 2.0, sum, o.tolerances.finite));
  return r;
}

}  // namespace eur
