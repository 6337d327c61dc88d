#include "eur/energy.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "eur/decomposition.hpp"
#include "eur/error.hpp"

namespace eur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kinetic_from_length(double length, const Constants& c) {
  return c.hbar * c.hbar / (8.0 * c.mass * length * length);
}

double entropic_kinetic(double entropy_value, const Constants& c) {
  return std::numbers::pi * std::numbers::e * c.hbar * c.hbar * std::exp(-2.0 * entropy_value) / (4.0 * c.mass);
}

const GridSpec& require_line(const ProbabilityDensity& density) {
  require(density.support() == Support::Line, ErrorKind::InvalidArgument, "energy bounds need a line density");
  return density.line_grid();
}

}  // namespace

EnergyModel EnergyModel::coulomb(double z, double q, const Constants& constants) {
  constants.validate();
  require(z > 0.0 && q > 0.0, ErrorKind::InvalidArgument, "Coulomb model needs Z > 0 and q > 0");
  EnergyModel m;
  m.kind = Kind::Coulomb;
  m.constants = constants;
  m.z = z;
  m.q = q;
  return m;
}

EnergyModel EnergyModel::harmonic(const Constants& constants) {
  constants.validate();
  EnergyModel m;
  m.kind = Kind::Harmonic;
  m.constants = constants;
  return m;
}

EnergyModel EnergyModel::gravity(double g, const Constants& constants) {
  constants.validate();
  require(g > 0.0, ErrorKind::InvalidArgument, "gravity model needs g > 0");
  EnergyModel m;
  m.kind = Kind::Gravity;
  m.constants = constants;
  m.g = g;
  return m;
}

EnergyModel EnergyModel::sampled(GridSpec grid, RVec values, const Constants& constants) {
  constants.validate();
  require(values.size() == grid.size(), ErrorKind::InvalidArgument, "sampled potential size must match its grid");
  for (double v : values) require(std::isfinite(v), ErrorKind::InvalidArgument, "sampled potential must be finite");
  EnergyModel m;
  m.kind = Kind::Sampled;
  m.constants = constants;
  m.grid = grid;
  m.samples = std::move(values);
  return m;
}

std::string EnergyModel::name() const {
  switch (kind) {
    case Kind::Coulomb: return "coulomb";
    case Kind::Harmonic: return "harmonic";
    case Kind::Gravity: return "bouncer";
    case Kind::Sampled: return "sampled";
  }
  return "unknown";
}

double EnergyModel::potential(double x) const {
  switch (kind) {
    case Kind::Coulomb: return x == 0.0 ? -kInf : -z * q * q / std::abs(x);
    case Kind::Harmonic: return 0.5 * constants.mass * constants.omega * constants.omega * x * x;
    case Kind::Gravity: return x < 0.0 ? kInf : constants.mass * g * x;
    case Kind::Sampled: {
      if (x < grid->x_min() || x >= grid->x_max()) return kInf;
      const double t = (x - grid->x_min()) / grid->dx();
      const auto k = static_cast<std::size_t>(t);
      if (k + 1 >= samples.size()) return samples.back();
      const double f = t - static_cast<double>(k);
      return (1.0 - f) * samples[k] + f * samples[k + 1];
    }
  }
  return 0.0;
}

RVec EnergyModel::potential_on(const GridSpec& on) const {
  if (kind == Kind::Sampled && *grid == on) return samples;
  RVec v(on.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = potential(on.x(k));
  return v;
}

double potential_mean(const ProbabilityDensity& density, const EnergyModel& model) {
  const GridSpec& grid = require_line(density);
  const RVec p = density.normalized().values();
  const RVec v = model.potential_on(grid);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] > 0.0) s += p[k] * v[k];
  return s * density.weight();
}

EnergySplit energy_identity(const GridPureState& state_in, const EnergyModel& model) {
  const GridPureState state = normalize(state_in);
  const Constants& c = model.constants;
  EnergySplit out;
  const ProbabilityDensity density = position_density(state);
  out.fisher = fisher_length(density);
  if (!out.fisher.finite()) out.flags.push_back(divergence_name(out.fisher.flag));
  if (!out.fisher.resolved) out.flags.push_back("unresolved_density");
  out.fisher_term = out.fisher.length ? kinetic_from_length(*out.fisher.length, c) : 0.0;

  DecompositionOptions options;
  options.constants = c;
  const ClassicalComponent pcl = classical_estimate(state, Basis::Position, Observable::P, options);
  out.classical_term = pcl.second_moment / (2.0 * c.mass);
  out.potential_term = potential_mean(density, model);
  out.total = out.fisher_term + out.classical_term + out.potential_term;

  out.kinetic = moment(state, Observable::P, 2, c) / (2.0 * c.mass);
  out.hamiltonian = out.kinetic + out.potential_term;
  out.residual = std::abs(out.total - out.hamiltonian) / std::max(1.0, std::abs(out.hamiltonian));
  return out;
}

std::string bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::Fisher: return "fisher";
    case BoundKind::Entropic: return "entropic";
    case BoundKind::CoulombClosedForm: return "coulomb-closed-form";
  }
  return "unknown";
}

bool BoundReport::consistent(double tolerance) const {
  if (!comparison) return true;
  return value <= *comparison + tolerance * std::max(1.0, std::abs(*comparison));
}

nlohmann::ordered_json to_json(const BoundReport& report) {
  nlohmann::ordered_json j;
  j["kind"] = bound_kind_name(report.kind);
  j["model"] = report.model;
  j["value"] = report.value;
  j["minimizer"] = report.minimizer;
  j["terms"] = report.terms;
  if (report.comparison) {
    j["comparison"] = *report.comparison;
    j["comparison_label"] = report.comparison_label;
  } else {
    j["comparison"] = nullptr;
  }
  j["consistent"] = report.consistent();
  j["flags"] = report.flags;
  return j;
}

BoundReport fisher_bound(const ProbabilityDensity& density, const EnergyModel& model) {
  const GridSpec& grid = require_line(density);
  const Constants& c = model.constants;
  BoundReport r;
  r.kind = BoundKind::Fisher;
  r.model = model.name();
  const bool hard_wall = model.kind == EnergyModel::Kind::Gravity;
  const FisherMetrics fm = hard_wall ? fisher_length_on_support(density) : fisher_length(density);
  if (!fm.finite()) r.flags.push_back(divergence_name(fm.flag));
  const double kinetic = fm.length ? kinetic_from_length(*fm.length, c) : 0.0;
  const double v = potential_mean(density, model);
  r.value = kinetic + v;
  r.terms["kinetic"] = kinetic;
  r.terms["potential"] = v;
  if (fm.length) r.terms["fisher_length"] = *fm.length;
  if (hard_wall) {
    r.flags.push_back("hard_wall");
    return r;
  }

  if (!fm.resolved) {
    r.flags.push_back("unresolved_density");
    return r;
  }
  const RVec p = density.normalized().values();
  CVec root(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) root[k] = std::sqrt(std::max(0.0, p[k]));
  RVec root_abs(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) root_abs[k] = root[k].real();
  if (spectral_tail(root_abs) > kSpectralTail) {
    r.flags.push_back("kinked_sqrt_density");
    return r;
  }
  const GridPureState real_state = normalize(GridPureState(grid, std::move(root)));
  const double quotient = moment(real_state, Observable::P, 2, c) / (2.0 * c.mass) + v;
  r.comparison = quotient;
  r.comparison_label = "rayleigh_quotient_sqrt_p";
  return r;
}

BoundReport entropic_bound(const ProbabilityDensity& density, const EnergyModel& model) {
  require_line(density);
  BoundReport r;
  r.kind = BoundKind::Entropic;
  r.model = model.name();
  const double s = entropy(density);
  const double kinetic = entropic_kinetic(s, model.constants);
  const double v = potential_mean(density, model);
  r.value = kinetic + v;
  r.terms["kinetic"] = kinetic;
  r.terms["potential"] = v;
  r.terms["entropy"] = s;
  const BoundReport fb = fisher_bound(density, model);
  r.flags = fb.flags;
  if (std::find(fb.flags.begin(), fb.flags.end(), "unresolved_density") == fb.flags.end() && fb.flags.empty()) {
    r.comparison = fb.value;
    r.comparison_label = "fisher_bound";
  }
  return r;
}

ScalarMinimum minimize_positive(const std::function<double(double)>& f, double guess) {
  require(guess > 0.0 && std::isfinite(guess), ErrorKind::InvalidArgument, "minimization needs a positive guess");
  ScalarMinimum out;
  auto eval = [&](double x) {
    ++out.evaluations;
    return f(x);
  };
  double a = 0.5 * guess, b = guess, c = 2.0 * guess;
  double fa = eval(a), fb = eval(b), fc = eval(c);
  for (int i = 0; i < 200 && fa < fb; ++i) {
    c = b, fc = fb;
    b = a, fb = fa;
    a *= 0.5, fa = eval(a);
  }
  for (int i = 0; i < 200 && fc < fb; ++i) {
    a = b, fa = fb;
    b = c, fb = fc;
    c *= 2.0, fc = eval(c);
  }
  require(fb <= fa && fb <= fc, ErrorKind::InvalidArgument, "no bracketed minimum for a positive parameter");
  std::uintmax_t iterations = 500;
  const auto [x, fx] = boost::math::tools::brent_find_minima(eval, a, c, std::numeric_limits<double>::digits / 2 + 4,
                                                             iterations);
  out.argument = x;
  out.value = fx;
  return out;
}

BoundReport coulomb_groundstate_bound(double z, double q, const Constants& constants) {
  const EnergyModel model = EnergyModel::coulomb(z, q, constants);
  const double h2 = constants.hbar * constants.hbar;
  const double m = constants.mass;
  const auto objective = [&](double u) { return h2 * u * u / (2.0 * m) - z * q * q * u; };
  const ScalarMinimum best = minimize_positive(objective, 1.0);
  BoundReport r;
  r.kind = BoundKind::CoulombClosedForm;
  r.model = model.name();
  r.value = best.value;
  r.minimizer["u"] = best.argument;
  r.terms["closed_form_minimizer"] = z * q * q * m / h2;
  r.terms["evaluations"] = best.evaluations;
  r.comparison = *exact_groundstate(model);
  r.comparison_label = "closed_form";
  return r;
}

DensityFamily gaussian_family(const EnergyModel& model) {
  require(model.kind == EnergyModel::Kind::Harmonic, ErrorKind::InvalidArgument,
          "the Gaussian family is paired with the harmonic model");
  const double k = 0.5 * model.constants.mass * model.constants.omega * model.constants.omega;
  DensityFamily f;
  f.name = "gaussian";
  f.parameter = "sigma";
  f.entropy = [](double s) { return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * s * s); };
  f.fisher_length = [](double s) { return s; };
  f.potential_mean = [k](double s) { return k * s * s; };
  return f;
}

DensityFamily exponential_family(const EnergyModel& model) {
  require(model.kind == EnergyModel::Kind::Gravity, ErrorKind::InvalidArgument,
          "the exponential family is paired with the gravity model");
  const double mg = model.constants.mass * model.g;
  DensityFamily f;
  f.name = "exponential";
  f.parameter = "lambda";
  f.entropy = [](double l) { return 1.0 + std::log(l); };
  f.fisher_length = [](double l) { return l; };
  f.potential_mean = [mg](double l) { return mg * l; };
  return f;
}

DensityFamily default_family(const EnergyModel& model) {
  switch (model.kind) {
    case EnergyModel::Kind::Harmonic: return gaussian_family(model);
    case EnergyModel::Kind::Gravity: return exponential_family(model);
    default: fail(ErrorKind::InvalidArgument, "no default density family for the " + model.name() + " model");
  }
}

BoundReport family_bound(BoundKind kind, const DensityFamily& family, const EnergyModel& model) {
  require(kind != BoundKind::CoulombClosedForm, ErrorKind::InvalidArgument,
          "family bounds are Fisher or entropic");
  const Constants& c = model.constants;
  const auto kinetic = [&](double t) {
    return kind == BoundKind::Fisher ? kinetic_from_length(family.fisher_length(t), c)
                                     : entropic_kinetic(family.entropy(t), c);
  };
  const ScalarMinimum best = minimize_positive([&](double t) { return kinetic(t) + family.potential_mean(t); },
                                               family.guess);
  BoundReport r;
  r.kind = kind;
  r.model = model.name();
  r.value = best.value;
  r.minimizer[family.parameter] = best.argument;
  r.terms["kinetic"] = kinetic(best.argument);
  r.terms["potential"] = family.potential_mean(best.argument);

  // Both kinetic routes have the form A / t^2 on these families.
  const double a = kinetic(1.0);
  if (model.kind == EnergyModel::Kind::Harmonic && family.name == "gaussian") {
    const double k = 0.5 * c.mass * c.omega * c.omega;
    r.terms["closed_form_minimizer"] = std::pow(a / k, 0.25);
  }
  if (model.kind == EnergyModel::Kind::Gravity && family.name == "exponential") {
    const double mg = c.mass * model.g;
    const double scale = std::cbrt(c.mass * model.g * model.g * c.hbar * c.hbar);
    r.terms["closed_form_minimizer"] = std::cbrt(2.0 * a / mg);
    r.terms["coefficient"] = r.value / scale;
  }
  if (const auto exact = exact_groundstate(model)) {
    r.comparison = *exact;
    r.comparison_label = "exact_groundstate";
    if (model.kind == EnergyModel::Kind::Gravity)
      r.terms["comparison_coefficient"] = *exact / std::cbrt(c.mass * model.g * model.g * c.hbar * c.hbar);
  }
  return r;
}

BoundReport groundstate_bound(BoundKind kind, const EnergyModel& model) {
  if (model.kind == EnergyModel::Kind::Coulomb) return coulomb_groundstate_bound(model.z, model.q, model.constants);
  return family_bound(kind, default_family(model), model);
}

std::optional<double> exact_groundstate(const EnergyModel& model) {
  const Constants& c = model.constants;
  switch (model.kind) {
    case EnergyModel::Kind::Harmonic: return 0.5 * c.hbar * c.omega;
    case EnergyModel::Kind::Gravity:
      return std::cbrt(0.5 * c.mass * model.g * model.g * c.hbar * c.hbar) * airy_first_zero();
    case EnergyModel::Kind::Coulomb: {
      const double q2 = model.q * model.q;
      return -model.z * model.z * q2 * q2 * c.mass / (2.0 * c.hbar * c.hbar);
    }
    case EnergyModel::Kind::Sampled: return std::nullopt;
  }
  return std::nullopt;
}

double airy_first_zero() {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const State start{1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0)),
                    -1.0 / (std::cbrt(3.0) * std::tgamma(1.0 / 3.0))};
  const auto rhs = [](const State& y, State& dy, double x) {
    dy[0] = y[1];
    dy[1] = x * y[0];
  };
  // Ai(-t), integrated from the exact values at the origin.
  const auto ai_minus = [&](double t) {
    State y = start;
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-14, 1e-14), rhs, y, 0.0, -t,
                            -1e-3);
    return y[0];
  };
  double lo = 2.0, hi = 3.0;
  require(ai_minus(lo) > 0.0 && ai_minus(hi) < 0.0, ErrorKind::InvalidArgument, "Airy zero bracket lost");
  for (int i = 0; i < 60 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ai_minus(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

InverseDistance inverse_distance_mean(const ProbabilityDensity& density) {
  const GridSpec& grid = require_line(density);
  require(grid.x_min() < 0.0 && grid.x_max() > 0.0, ErrorKind::InvalidArgument,
          "<|x|^-1> needs a grid straddling the origin");
  const RVec p = density.normalized().values();
  const double dx = grid.dx();
  const auto k0 = static_cast<std::size_t>(std::lround(-grid.x_min() / dx));
  const double peak = *std::max_element(p.begin(), p.end());
  InverseDistance out;
  if (k0 < p.size() && p[k0] > kDensityMaskFraction * peak) {
    out.finite = false;
    out.value = out.fine = out.coarse = kInf;
    return out;
  }
  double fine = 0.0, coarse = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k == k0) continue;
    const double term = p[k] / std::abs(grid.x(k));
    fine += term;
    if ((k + p.size() - k0) % 2 == 0) coarse += term;
  }
  out.fine = fine * dx;
  out.coarse = coarse * 2.0 * dx;
  out.value = (4.0 * out.fine - out.coarse) / 3.0;
  return out;
}

InverseDistanceCheck inverse_distance_check(const ProbabilityDensity& density) {
  const FisherMetrics fm = fisher_length(density);
  const InverseDistance u = inverse_distance_mean(density);
  InverseDistanceCheck out;
  out.inverse_fisher_squared = fm.length ? 1.0 / (*fm.length * *fm.length) : 0.0;
  if (fm.flag == Divergence::ZeroByDiscontinuity) out.inverse_fisher_squared = kInf;
  out.bound = u.finite ? 4.0 * u.value * u.value : kInf;
  out.slack = out.inverse_fisher_squared - out.bound;
  out.holds = u.finite && out.slack >= -1e-8 * std::max(1.0, out.bound);
  return out;
}

RVec fisher_kinetic_refinement(const DensityFactory& factory, const GridSpec& grid, int levels,
                               const Constants& constants) {
  require(levels >= 1, ErrorKind::InvalidArgument, "refinement needs at least one level");
  RVec out;
  GridSpec g = grid;
  for (int i = 0; i < levels; ++i, g = g.refined()) {
    const FisherMetrics fm = fisher_length(factory(g));
    out.push_back(fm.length ? kinetic_from_length(*fm.length, constants) : 0.0);
  }
  return out;
}

}  // namespace eur
