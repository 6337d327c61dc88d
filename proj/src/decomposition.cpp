#include "eur/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eur/error.hpp"
#include "eur/fft.hpp"
#include "eur/phase.hpp"

namespace eur {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ClassicalComponent assemble(Observable observable, Basis basis, RVec labels, RVec p, RVec numerator, double weight) {
  std::string name = observable_name(observable);
  if (basis == Basis::ExtendedPhase) name += "*";
  return make_classical_component(std::move(name), basis_name(basis), std::move(labels), std::move(p),
                                  std::move(numerator), weight);
}

[[noreturn]] void unsupported(const char* family, Basis basis, Observable observable) {
  fail(ErrorKind::UnsupportedObservable, std::string("no classical component of ") + observable_name(observable) +
                                             " in the " + basis_name(basis) + " basis for " + family + " states");
}

RVec real_part(const CVec& v) {
  RVec out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].real();
  return out;
}

void check_candidate(const ClassicalComponent& c, const RVec& candidate) {
  require(candidate.size() == c.labels.size(), ErrorKind::InvalidArgument,
          "candidate estimate has " + std::to_string(candidate.size()) + " values, expected " +
              std::to_string(c.labels.size()));
}

// <B^2> - 2 sum B~ p B_cl + sum B~^2 p, the expansion of <(B - B~)^2>.
double expanded_error(double second_moment, const ClassicalComponent& c, const RVec& candidate) {
  check_candidate(c, candidate);
  double cross = 0.0;
  double square = 0.0;
  for (std::size_t k = 0; k < candidate.size(); ++k) {
    cross += candidate[k] * c.values[k] * c.probability[k];
    square += candidate[k] * candidate[k] * c.probability[k];
  }
  return second_moment - 2.0 * cross * c.weight + square * c.weight;
}

std::size_t phase_count(const DecompositionOptions& options, std::size_t dimension) {
  return options.phase_points ? options.phase_points : default_phase_points(dimension);
}

Eigen::MatrixXcd physical_block(const FockState& state) {
  const auto& m = state.levels().matrix();
  const auto neg = static_cast<Eigen::Index>(state.negative_levels());
  return m.bottomRightCorner(m.rows() - neg, m.cols() - neg);
}

CVec physical_amplitudes(const FockState& state) {
  const auto& a = state.levels().amplitudes();
  return CVec(a.begin() + state.negative_levels(), a.end());
}

}  // namespace

std::string basis_name(Basis basis) {
  switch (basis) {
    case Basis::Position: return "position";
    case Basis::Momentum: return "momentum";
    case Basis::Phase: return "phase";
    case Basis::ExtendedPhase: return "extended-phase";
  }
  return "unknown";
}

std::string observable_name(Observable observable) {
  switch (observable) {
    case Observable::X: return "X";
    case Observable::P: return "P";
    case Observable::J: return "J";
    case Observable::N: return "N";
  }
  return "?";
}

std::vector<char> density_mask(const RVec& density, double weight, double* masked_mass) {
  require(!density.empty(), ErrorKind::InvalidArgument, "empty density");
  const double peak = *std::max_element(density.begin(), density.end());
  require(peak > 0.0, ErrorKind::VanishingDensity, "density vanishes everywhere");
  const double threshold = kDensityMaskFraction * peak;
  std::vector<char> keep(density.size());
  double total = 0.0;
  double dropped = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k) {
    keep[k] = density[k] >= threshold;
    total += density[k];
    if (!keep[k]) dropped += density[k];
  }
  const double fraction = dropped / total;
  require(fraction <= kMaxMaskedMass, ErrorKind::VanishingDensity,
          "masked labels carry " + std::to_string(100.0 * fraction) + "% of the probability");
  if (masked_mass) *masked_mass = fraction * total * weight;
  return keep;
}

ClassicalComponent make_classical_component(std::string observable, std::string basis, RVec labels, RVec p,
                                            RVec numerator, double weight) {
  require(p.size() == labels.size() && numerator.size() == labels.size(), ErrorKind::InvalidArgument,
          "labels, density and numerator differ in length");
  double total = 0.0;
  for (double v : p) total += v;
  total *= weight;
  require(total > 0.0, ErrorKind::ZeroNorm, "measured distribution has zero total probability");
  for (auto& v : p) v /= total;
  for (auto& v : numerator) v /= total;

  ClassicalComponent c;
  c.observable = std::move(observable);
  c.basis = std::move(basis);
  c.weight = weight;
  c.retained = density_mask(p, weight, &c.masked_mass);
  c.values.assign(p.size(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!c.retained[k]) continue;
    c.values[k] = numerator[k] / p[k];
    c.mean += numerator[k] * weight;
    c.second_moment += c.values[k] * numerator[k] * weight;
  }
  c.variance = std::max(0.0, c.second_moment - c.mean * c.mean);
  c.labels = std::move(labels);
  c.probability = std::move(p);
  return c;
}

// --- diagonals -----------------------------------------------------------

CVec position_pr_diagonal(const GridPureState& state, double hbar) {
  const auto& psi = state.amplitudes();
  const CVec d = spectral_derivative(psi, state.grid());
  CVec out(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) out[k] = Complex(0.0, -hbar) * d[k] * std::conj(psi[k]);
  return out;
}

CVec position_pr_diagonal(const GridMixedState& state, double hbar) {
  const auto& rho = state.matrix();
  const auto n = rho.rows();
  CVec out(static_cast<std::size_t>(n));
  CVec column(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = rho(i, j);
    const CVec d = fft::derivative(column, state.grid());
    out[static_cast<std::size_t>(j)] = Complex(0.0, -hbar) * d[static_cast<std::size_t>(j)];
  }
  return out;
}

CVec momentum_xr_diagonal(const GridPureState& state, double hbar) {
  const auto& grid = state.grid();
  const auto phi = to_momentum(state, hbar);
  CVec xpsi = state.amplitudes();
  for (std::size_t k = 0; k < xpsi.size(); ++k) xpsi[k] *= grid.x(k);
  const auto chi = to_momentum(GridPureState(grid, std::move(xpsi)), hbar);
  CVec out(phi.amplitudes().size());
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = chi.amplitudes()[a] * std::conj(phi.amplitudes()[a]);
  return out;
}

CVec momentum_xr_diagonal(const GridMixedState& state, double hbar) {
  Eigen::MatrixXcd xr = state.matrix();
  for (Eigen::Index i = 0; i < xr.rows(); ++i) xr.row(i) *= state.grid().x(static_cast<std::size_t>(i));
  const Eigen::MatrixXcd m = momentum_kernel(xr, state.grid(), hbar);
  CVec out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index a = 0; a < m.rows(); ++a) out[static_cast<std::size_t>(a)] = m(a, a);
  return out;
}

// --- classical_estimate ----------------------------------------------------

ClassicalComponent classical_estimate(const GridPureState& state, Basis basis, Observable observable,
                                      const DecompositionOptions& options) {
  const double hbar = options.constants.hbar;
  if (basis == Basis::Position && observable == Observable::P) {
    return assemble(observable, basis, state.grid().points(), state.density(),
                    real_part(position_pr_diagonal(state, hbar)), state.grid().dx());
  }
  if (basis == Basis::Momentum && observable == Observable::X) {
    const auto phi = to_momentum(state, hbar);
    return assemble(observable, basis, phi.grid().points(), phi.density(),
                    real_part(momentum_xr_diagonal(state, hbar)), phi.grid().dx());
  }
  unsupported("grid", basis, observable);
}

ClassicalComponent classical_estimate(const GridMixedState& state, Basis basis, Observable observable,
                                      const DecompositionOptions& options) {
  const double hbar = options.constants.hbar;
  if (basis == Basis::Position && observable == Observable::P) {
    return assemble(observable, basis, state.grid().points(), state.density(),
                    real_part(position_pr_diagonal(state, hbar)), state.grid().dx());
  }
  if (basis == Basis::Momentum && observable == Observable::X) {
    const auto density = momentum_density(state, hbar);
    return assemble(observable, basis, density.line_grid().points(), density.values(),
                    real_part(momentum_xr_diagonal(state, hbar)), density.weight());
  }
  unsupported("grid", basis, observable);
}

ClassicalComponent classical_estimate(const PeriodicState& state, Basis basis, Observable observable,
                                      const DecompositionOptions& options) {
  if (basis != Basis::Phase || observable != Observable::J) unsupported("periodic", basis, observable);
  const auto& lv = state.levels();
  const std::size_t m = phase_count(options, lv.dimension());
  const auto p = phase_quadratic_form(lv.matrix(), lv.first_level(), m, PhaseConvention::Rotator);
  const auto jr = phase_quadratic_form(left_multiply_levels(lv, options.constants.hbar), lv.first_level(), m,
                                       PhaseConvention::Rotator);
  return assemble(observable, basis, phase_points(m), real_part(p), real_part(jr), kTwoPi / static_cast<double>(m));
}

ClassicalComponent classical_estimate(const FockState& state, Basis basis, Observable observable,
                                      const DecompositionOptions& options) {
  if (observable != Observable::N || (basis != Basis::Phase && basis != Basis::ExtendedPhase))
    unsupported("fock", basis, observable);
  const auto& lv = state.levels();
  const std::size_t m = phase_count(options, lv.dimension());
  Eigen::MatrixXcd rho;
  int first = 0;
  if (basis == Basis::Phase) {
    rho = physical_block(state);
  } else {
    rho = lv.matrix();
    first = lv.first_level();
  }
  Eigen::MatrixXcd nrho = rho;
  for (Eigen::Index i = 0; i < nrho.rows(); ++i) nrho.row(i) *= static_cast<double>(first + i);
  const auto p = phase_quadratic_form(rho, first, m, PhaseConvention::Photon);
  const auto nr = phase_quadratic_form(nrho, first, m, PhaseConvention::Photon);
  return assemble(observable, basis, phase_points(m), real_part(p), real_part(nr), kTwoPi / static_cast<double>(m));
}

ClassicalComponent classical_estimate(const FiniteState& state, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const auto d = static_cast<Eigen::Index>(state.dimension());
  require(a.rows() == d && a.cols() == d && b.rows() == d && b.cols() == d, ErrorKind::InvalidArgument,
          "observables must match the state dimension");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  const Eigen::MatrixXcd& rho = state.matrix();
  const Eigen::MatrixXcd brho = b * rho;
  RVec labels(static_cast<std::size_t>(d));
  RVec p(static_cast<std::size_t>(d));
  RVec numerator(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    labels[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    p[static_cast<std::size_t>(k)] = v.col(k).dot(rho * v.col(k)).real();
    numerator[static_cast<std::size_t>(k)] = v.col(k).dot(brho * v.col(k)).real();
  }
  auto c = assemble(Observable::X, Basis::Position, std::move(labels), std::move(p), std::move(numerator), 1.0);
  c.observable = "B";
  c.basis = "eigenbasis";
  return c;
}

// --- estimate_error --------------------------------------------------------

double estimate_error(const GridPureState& state_in, Basis basis, Observable observable, const RVec& candidate,
                      const DecompositionOptions& options) {
  const auto state = normalize(state_in);
  const double hbar = options.constants.hbar;
  const auto& grid = state.grid();
  const auto& psi = state.amplitudes();
  require(candidate.size() == psi.size(), ErrorKind::InvalidArgument, "candidate estimate length mismatch");
  if (basis == Basis::Position && observable == Observable::P) {
    const CVec d = spectral_derivative(psi, grid);
    double s = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) s += std::norm(Complex(0.0, -hbar) * d[k] - candidate[k] * psi[k]);
    return s * grid.dx();
  }
  if (basis == Basis::Momentum && observable == Observable::X) {
    const auto phi = to_momentum(state, hbar);
    CVec xpsi = psi;
    for (std::size_t k = 0; k < xpsi.size(); ++k) xpsi[k] *= grid.x(k);
    const auto chi = to_momentum(GridPureState(grid, std::move(xpsi)), hbar);
    double s = 0.0;
    for (std::size_t a = 0; a < psi.size(); ++a)
      s += std::norm(chi.amplitudes()[a] - candidate[a] * phi.amplitudes()[a]);
    return s * phi.grid().dx();
  }
  unsupported("grid", basis, observable);
}

double estimate_error(const GridMixedState& state_in, Basis basis, Observable observable, const RVec& candidate,
                      const DecompositionOptions& options) {
  const auto state = normalize(state_in);
  const auto c = classical_estimate(state, basis, observable, options);
  return expanded_error(moment(state, observable, 2, options.constants), c, candidate);
}

double estimate_error(const PeriodicState& state_in, Basis basis, Observable observable, const RVec& candidate,
                      const DecompositionOptions& options) {
  if (basis != Basis::Phase || observable != Observable::J) unsupported("periodic", basis, observable);
  const auto state = normalize(state_in);
  const auto& lv = state.levels();
  const std::size_t m = phase_count(options, lv.dimension());
  require(candidate.size() == m, ErrorKind::InvalidArgument, "candidate estimate length mismatch");
  if (!lv.is_pure()) {
    const auto c = classical_estimate(state, basis, observable, options);
    return expanded_error(moment(state, observable, 2, options.constants), c, candidate);
  }
  const CVec& psi = lv.amplitudes();
  CVec jpsi = psi;
  for (std::size_t i = 0; i < jpsi.size(); ++i) jpsi[i] *= options.constants.hbar * lv.level(i);
  const CVec f = phase_amplitude(psi, lv.first_level(), m, PhaseConvention::Rotator);
  const CVec jf = phase_amplitude(jpsi, lv.first_level(), m, PhaseConvention::Rotator);
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) s += std::norm(jf[k] - candidate[k] * f[k]);
  return s * kTwoPi / static_cast<double>(m);
}

double estimate_error(const FockState& state_in, Basis basis, Observable observable, const RVec& candidate,
                      const DecompositionOptions& options) {
  if (observable != Observable::N || (basis != Basis::Phase && basis != Basis::ExtendedPhase))
    unsupported("fock", basis, observable);
  const auto state = normalize(state_in);
  const auto& lv = state.levels();
  const std::size_t m = phase_count(options, lv.dimension());
  require(candidate.size() == m, ErrorKind::InvalidArgument, "candidate estimate length mismatch");
  if (!lv.is_pure()) {
    const auto c = classical_estimate(state, basis, observable, options);
    return expanded_error(moment(state, observable, 2, options.constants), c, candidate);
  }
  CVec c;
  int first = 0;
  if (basis == Basis::Phase) {
    c = physical_amplitudes(state);
  } else {
    c = lv.amplitudes();
    first = lv.first_level();
  }
  CVec nc = c;
  for (std::size_t i = 0; i < nc.size(); ++i) nc[i] *= static_cast<double>(first + static_cast<int>(i));
  // <phi|N|psi> = i g'(phi) for g(phi) = <phi|psi>
  const CVec g = phase_amplitude(c, first, m, PhaseConvention::Photon);
  const CVec ng = phase_amplitude(nc, first, m, PhaseConvention::Photon);
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) s += std::norm(ng[k] - candidate[k] * g[k]);
  return s * kTwoPi / static_cast<double>(m);
}

double estimate_error(const FiniteState& state_in, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                      const RVec& candidate) {
  const auto state = normalize(state_in);
  const auto d = static_cast<Eigen::Index>(state.dimension());
  require(candidate.size() == static_cast<std::size_t>(d), ErrorKind::InvalidArgument,
          "candidate estimate length mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  if (!state.levels().is_pure()) {
    const auto c = classical_estimate(state, a, b);
    const double b2 = (state.matrix() * b * b).trace().real();
    return expanded_error(b2, c, candidate);
  }
  const auto& amp = state.levels().amplitudes();
  Eigen::Map<const Eigen::VectorXcd> psi(amp.data(), d);
  double s = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::VectorXcd r = b * psi - candidate[static_cast<std::size_t>(k)] * psi;
    s += std::norm(v.col(k).dot(r));
  }
  return s;
}

// --- summaries -------------------------------------------------------------

namespace {

template <class State>
DecompositionSummary summarize(const State& state, Basis basis, Observable observable,
                               const DecompositionOptions& options) {
  const auto c = classical_estimate(state, basis, observable, options);
  const double m1 = moment(state, observable, 1, options.constants);
  const double m2 = moment(state, observable, 2, options.constants);
  DecompositionSummary s;
  s.var_total = m2 - m1 * m1;
  s.var_classical = c.variance;
  s.var_nonclassical = estimate_error(state, basis, observable, c.values, options);
  s.additivity_residual = std::abs(s.var_total - s.var_classical - s.var_nonclassical);
  s.min_error = m2 - c.second_moment;
  s.masked_mass = c.masked_mass;
  return s;
}

}  // namespace

DecompositionSummary decomposition_summary(const GridPureState& state, Basis basis, Observable observable,
                                           const DecompositionOptions& options) {
  return summarize(normalize(state), basis, observable, options);
}

DecompositionSummary decomposition_summary(const GridMixedState& state, Basis basis, Observable observable,
                                           const DecompositionOptions& options) {
  return summarize(normalize(state), basis, observable, options);
}

DecompositionSummary decomposition_summary(const PeriodicState& state, Basis basis, Observable observable,
                                           const DecompositionOptions& options) {
  return summarize(normalize(state), basis, observable, options);
}

DecompositionSummary decomposition_summary(const FockState& state, Basis basis, Observable observable,
                                           const DecompositionOptions& options) {
  return summarize(normalize(state), basis, observable, options);
}

DecompositionSummary decomposition_summary(const FiniteState& state_in, const Eigen::MatrixXcd& a,
                                           const Eigen::MatrixXcd& b) {
  const auto state = normalize(state_in);
  const auto c = classical_estimate(state, a, b);
  const Eigen::MatrixXcd& rho = state.matrix();
  const double m1 = (rho * b).trace().real();
  const double m2 = (rho * b * b).trace().real();
  DecompositionSummary s;
  s.var_total = m2 - m1 * m1;
  s.var_classical = c.variance;
  s.var_nonclassical = estimate_error(state, a, b, c.values);
  s.additivity_residual = std::abs(s.var_total - s.var_classical - s.var_nonclassical);
  s.min_error = m2 - c.second_moment;
  s.masked_mass = c.masked_mass;
  return s;
}

// --- extended Fock space -----------------------------------------------------

namespace {

struct ExtendedPass {
  Eigen::MatrixXcd nnc;  // N*_nc on levels [-K, K]
  Eigen::MatrixXcd rho;  // state on levels [-K, K]
  RVec ncl;
  RVec ncl_physical;
  std::vector<char> retained;
};

ExtendedPass extended_pass(const FockState& state, int k) {
  const int m = 2 * k + 1;
  const auto sm = static_cast<std::size_t>(m);
  ExtendedPass out;
  out.rho = state.levels().padded(-k, k).matrix();
  Eigen::MatrixXcd nrho = out.rho;
  for (Eigen::Index i = 0; i < nrho.rows(); ++i) nrho.row(i) *= static_cast<double>(i - k);
  const CVec p = phase_quadratic_form(out.rho, -k, sm, PhaseConvention::Photon);
  const CVec nr = phase_quadratic_form(nrho, -k, sm, PhaseConvention::Photon);
  const auto phys = physical_block(state);
  Eigen::MatrixXcd nphys = phys;
  for (Eigen::Index i = 0; i < nphys.rows(); ++i) nphys.row(i) *= static_cast<double>(i);
  const CVec pp = phase_quadratic_form(phys, 0, sm, PhaseConvention::Photon);
  const CVec np = phase_quadratic_form(nphys, 0, sm, PhaseConvention::Photon);

  RVec pr(sm);
  for (std::size_t i = 0; i < sm; ++i) pr[i] = p[i].real();
  const double peak = *std::max_element(pr.begin(), pr.end());
  out.ncl.assign(sm, 0.0);
  out.ncl_physical.assign(sm, 0.0);
  out.retained.assign(sm, 0);
  for (std::size_t i = 0; i < sm; ++i) {
    if (pr[i] < kDensityMaskFraction * peak) continue;
    out.retained[i] = 1;
    out.ncl[i] = nr[i].real() / pr[i];
    out.ncl_physical[i] = np[i].real() / pp[i].real();
  }

  // Orthonormal extended phase kets e_k = M^{-1/2} sum_n exp(i n phi_k)|n>.
  Eigen::MatrixXcd u(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      u(i, j) = std::polar(1.0 / std::sqrt(static_cast<double>(m)), kTwoPi * (i - k) * j / static_cast<double>(m));
  Eigen::VectorXd w(m);
  for (int j = 0; j < m; ++j) w(j) = out.ncl[static_cast<std::size_t>(j)];
  out.nnc = -(u * w.asDiagonal() * u.adjoint());
  for (int i = 0; i < m; ++i) out.nnc(i, i) += static_cast<double>(i - k);
  return out;
}

double pass_variance(const ExtendedPass& pass) {
  const double m1 = (pass.rho * pass.nnc).trace().real();
  const double m2 = (pass.rho * pass.nnc * pass.nnc).trace().real();
  return m2 - m1 * m1;
}

}  // namespace

ExtendedNumberResult extended_number_nonclassical(const FockState& state_in, int cutoff) {
  require(state_in.is_physical(), ErrorKind::InvalidArgument, "extended construction needs a physical state");
  require(cutoff >= 1 && cutoff >= state_in.cutoff(), ErrorKind::InvalidArgument,
          "extended cutoff must cover the state's number levels");
  const auto state = normalize(state_in);
  const auto pass = extended_pass(state, cutoff);

  ExtendedNumberResult r;
  r.cutoff = cutoff;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(pass.nnc);
  const auto k = static_cast<Eigen::Index>(cutoff);
  const Eigen::MatrixXcd phys_rho = pass.rho.bottomRightCorner(k + 1, k + 1);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(k + 1, k + 1);
  double m1 = 0.0;
  double m2 = 0.0;
  for (Eigen::Index i = 0; i < pass.nnc.rows(); ++i) {
    const Eigen::VectorXcd v = solver.eigenvectors().col(i).tail(k + 1);
    Eigen::MatrixXcd effect = v * v.adjoint();
    const double lambda = solver.eigenvalues()(i);
    const double prob = (phys_rho * effect).trace().real();
    m1 += lambda * prob;
    m2 += lambda * lambda * prob;
    sum += effect;
    r.pom.outcomes.push_back(lambda);
    r.pom.effects.push_back(std::move(effect));
  }
  r.completeness_error = (sum - Eigen::MatrixXcd::Identity(k + 1, k + 1)).cwiseAbs().maxCoeff();
  r.mean = m1;
  r.variance = m2 - m1 * m1;
  for (std::size_t i = 0; i < pass.ncl.size(); ++i)
    if (pass.retained[i]) r.max_cl_mismatch = std::max(r.max_cl_mismatch, std::abs(pass.ncl[i] - pass.ncl_physical[i]));

  r.variance_doubled = pass_variance(extended_pass(state, 2 * cutoff));
  const double n2 = state.levels().level_moment(2);
  const double scale = std::max(std::abs(r.variance_doubled), 1e-12 * std::max(1.0, n2));
  require(std::abs(r.variance_doubled - r.variance) <= 1e-4 * scale, ErrorKind::CutoffTooSmall,
          "Var N_nc changes from " + std::to_string(r.variance) + " to " + std::to_string(r.variance_doubled) +
              " when the extended cutoff doubles from " + std::to_string(cutoff));
  return r;
}

std::pair<double, double> energy_split(const FockState& state_in, const Constants& constants,
                                       std::size_t phase_points) {
  require(state_in.is_physical(), ErrorKind::InvalidArgument, "energy split needs a physical state");
  const auto state = normalize(state_in);
  DecompositionOptions options{constants, phase_points};
  const auto c = classical_estimate(state, Basis::Phase, Observable::N, options);
  const double quantum = constants.hbar * constants.omega;
  const double e_cl = quantum * c.mean;
  const double energy = quantum * (state.levels().level_moment(1) + 0.5);
  return {e_cl, energy - e_cl};
}

// --- continuity ------------------------------------------------------------

double continuity_residual(const GridPureState& state_in, std::span<const double> potential, double dt,
                           const Constants& constants) {
  require(dt > 0, ErrorKind::InvalidArgument, "dt must be positive");
  const auto state = normalize(state_in);
  const auto forward = evolve_step(state, potential, dt, constants);
  const auto backward = evolve_step(state, potential, -dt, constants);
  const RVec pf = forward.density();
  const RVec pb = backward.density();
  const CVec pr = position_pr_diagonal(state, constants.hbar);
  RVec flux(pr.size());
  for (std::size_t k = 0; k < pr.size(); ++k) flux[k] = pr[k].real() / constants.mass;
  const RVec div = fft::derivative(std::span<const double>(flux), state.grid());
  double worst = 0.0;
  for (std::size_t k = 0; k < pr.size(); ++k) worst = std::max(worst, std::abs((pf[k] - pb[k]) / (2.0 * dt) + div[k]));
  return worst;
}

double continuity_residual(const PeriodicState& state_in, std::span<const double> potential, double dt,
                           const Constants& constants) {
  require(dt > 0, ErrorKind::InvalidArgument, "dt must be positive");
  const auto state = normalize(state_in);
  const auto forward = evolve_step(state, potential, dt, constants);
  const auto backward = evolve_step(state, potential, -dt, constants);
  const auto& lv = state.levels();
  const std::size_t m = default_phase_points(lv.dimension());
  const auto pf = phase_density(forward, m);
  const auto pb = phase_density(backward, m);
  const CVec dflux = phase_quadratic_form_derivative(left_multiply_levels(lv, constants.hbar / constants.moment_of_inertia),
                                                     lv.first_level(), m, PhaseConvention::Rotator);
  double worst = 0.0;
  for (std::size_t k = 0; k < m; ++k)
    worst = std::max(worst, std::abs((pf.values()[k] - pb.values()[k]) / (2.0 * dt) + dflux[k].real()));
  return worst;
}

}  // namespace eur
