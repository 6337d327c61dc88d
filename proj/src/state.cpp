#include "eur/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eur/error.hpp"
#include "eur/fft.hpp"

namespace eur {
namespace {

double sum_abs2(const CVec& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

void check_finite(const CVec& v, const char* what) {
  for (const auto& z : v)
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::InvalidArgument,
            std::string(what) + " contains non-finite values");
}

void check_hermitian(const Eigen::MatrixXcd& m, const char* what) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorKind::InvalidArgument, std::string(what) + " must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  require((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * scale, ErrorKind::InvalidArgument,
          std::string(what) + " must be Hermitian");
}

double require_norm(double norm2, double scale) {
  require(std::isfinite(norm2) && norm2 > 1e-28 * std::max(scale, 1e-300), ErrorKind::ZeroNorm,
          "state has vanishing norm");
  return norm2;
}

// Apply the position -> momentum transform to `howmany` vectors of length n
// laid out with the given element stride and vector distance.
void momentum_batch(Complex* data, std::size_t n, std::size_t howmany, bool contiguous, const GridSpec& grid,
                    double hbar) {
  const double dp = grid.conjugate_spacing(hbar);
  const double scale = grid.dx() / std::sqrt(2.0 * std::numbers::pi * hbar);
  CVec post(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double p = (static_cast<double>(a) - 0.5 * static_cast<double>(n)) * dp;
    post[a] = std::polar(scale, -p * grid.x_min() / hbar);
  }
  std::span<Complex> all(data, n * howmany);
  // element (vector v, index i) is at v*dist + i*stride
  const std::size_t stride = contiguous ? 1 : howmany;
  const std::size_t dist = contiguous ? n : 1;
  for (std::size_t v = 0; v < howmany; ++v)
    for (std::size_t i = 1; i < n; i += 2) data[v * dist + i * stride] = -data[v * dist + i * stride];
  if (contiguous)
    fft::forward_rows(all, n, howmany);
  else
    fft::forward_columns(all, n, howmany);
  for (std::size_t v = 0; v < howmany; ++v)
    for (std::size_t a = 0; a < n; ++a) data[v * dist + a * stride] *= post[a];
}

}  // namespace

// --- GridPureState -------------------------------------------------------

GridPureState::GridPureState(GridSpec grid, CVec amplitudes) : grid_(grid), amplitudes_(std::move(amplitudes)) {
  require(amplitudes_.size() == grid_.size(), ErrorKind::InvalidArgument,
          "amplitude count " + std::to_string(amplitudes_.size()) + " does not match grid size " +
              std::to_string(grid_.size()));
  check_finite(amplitudes_, "amplitudes");
}

double GridPureState::norm() const { return std::sqrt(sum_abs2(amplitudes_) * grid_.dx()); }

RVec GridPureState::density() const {
  RVec out(amplitudes_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(amplitudes_[k]);
  return out;
}

// --- GridMixedState ------------------------------------------------------

GridMixedState::GridMixedState(GridSpec grid, Eigen::MatrixXcd matrix) : grid_(grid), matrix_(std::move(matrix)) {
  require(static_cast<std::size_t>(matrix_.rows()) == grid_.size(), ErrorKind::InvalidArgument,
          "density matrix size does not match grid");
  check_hermitian(matrix_, "density matrix");
}

GridMixedState GridMixedState::from_pure(const GridPureState& state) {
  const auto& a = state.amplitudes();
  Eigen::Map<const Eigen::VectorXcd> v(a.data(), static_cast<Eigen::Index>(a.size()));
  Eigen::MatrixXcd m = v * v.adjoint();
  return GridMixedState(state.grid(), std::move(m));
}

GridMixedState GridMixedState::mixture(std::span<const double> weights, std::span<const GridPureState> states) {
  require(!states.empty() && weights.size() == states.size(), ErrorKind::InvalidArgument,
          "mixture needs one weight per state");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0 && std::isfinite(w), ErrorKind::InvalidArgument, "mixture weights must be nonnegative");
    total += w;
  }
  require(total > 0.0, ErrorKind::ZeroNorm, "mixture weights sum to zero");
  const auto n = static_cast<Eigen::Index>(states.front().grid().size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < states.size(); ++i) {
    require(states[i].grid() == states.front().grid(), ErrorKind::InvalidArgument, "mixture states must share a grid");
    const auto psi = normalize(states[i]);
    Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), n);
    m.noalias() += (weights[i] / total) * (v * v.adjoint());
  }
  return GridMixedState(states.front().grid(), std::move(m));
}

double GridMixedState::trace() const { return matrix_.diagonal().real().sum() * grid_.dx(); }

double GridMixedState::purity() const {
  const double dx = grid_.dx();
  return matrix_.cwiseAbs2().sum() * dx * dx;
}

RVec GridMixedState::density() const {
  RVec out(grid_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = matrix_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
  return out;
}

Eigen::VectorXd GridMixedState::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_ * grid_.dx(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// --- Grid2DState ---------------------------------------------------------

Grid2DState::Grid2DState(Grid2D grid, CVec amplitudes) : grid_(grid), amplitudes_(std::move(amplitudes)) {
  require(amplitudes_.size() == grid_.size(), ErrorKind::InvalidArgument, "amplitude count does not match 2D grid");
  check_finite(amplitudes_, "amplitudes");
}

double Grid2DState::norm() const { return std::sqrt(sum_abs2(amplitudes_) * grid_.cell()); }

RVec Grid2DState::density() const {
  RVec out(amplitudes_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(amplitudes_[k]);
  return out;
}

// --- LevelState ----------------------------------------------------------

LevelState::LevelState(int first_level, Eigen::MatrixXcd matrix, std::optional<CVec> amplitudes)
    : first_level_(first_level), matrix_(std::move(matrix)), amplitudes_(std::move(amplitudes)) {}

LevelState LevelState::pure(int first_level, CVec amplitudes) {
  require(!amplitudes.empty(), ErrorKind::InvalidArgument, "level state needs at least one amplitude");
  check_finite(amplitudes, "amplitudes");
  Eigen::Map<const Eigen::VectorXcd> v(amplitudes.data(), static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::MatrixXcd m = v * v.adjoint();
  return LevelState(first_level, std::move(m), std::move(amplitudes));
}

LevelState LevelState::mixed(int first_level, Eigen::MatrixXcd matrix) {
  check_hermitian(matrix, "density matrix");
  return LevelState(first_level, std::move(matrix), std::nullopt);
}

const CVec& LevelState::amplitudes() const {
  require(amplitudes_.has_value(), ErrorKind::InvalidArgument, "state is mixed; no amplitude vector");
  return *amplitudes_;
}

double LevelState::trace() const { return matrix_.diagonal().real().sum(); }
double LevelState::purity() const { return matrix_.cwiseAbs2().sum(); }

double LevelState::level_moment(int k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < dimension(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    s += std::pow(static_cast<double>(level(i)), k) * matrix_(ii, ii).real();
  }
  return s;
}

LevelState LevelState::padded(int new_first, int new_last) const {
  require(new_first <= first_level_ && new_last >= last_level(), ErrorKind::InvalidArgument,
          "padding must enclose the existing level range");
  const auto d = static_cast<Eigen::Index>(new_last - new_first + 1);
  const auto offset = static_cast<Eigen::Index>(first_level_ - new_first);
  const auto old_d = static_cast<Eigen::Index>(dimension());
  if (amplitudes_) {
    CVec a(static_cast<std::size_t>(d), Complex(0.0));
    std::copy(amplitudes_->begin(), amplitudes_->end(), a.begin() + offset);
    return pure(new_first, std::move(a));
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  m.block(offset, offset, old_d, old_d) = matrix_;
  return mixed(new_first, std::move(m));
}

// --- FockState / FiniteState ---------------------------------------------

FockState FockState::number(int n, int cutoff) {
  require(n >= 0 && cutoff >= n, ErrorKind::InvalidArgument, "number state needs 0 <= n <= cutoff");
  CVec a(static_cast<std::size_t>(cutoff) + 1, Complex(0.0));
  a[static_cast<std::size_t>(n)] = 1.0;
  return pure(std::move(a));
}

FockState FockState::poissonian(double mean, int cutoff) {
  require(mean >= 0.0 && cutoff >= 0, ErrorKind::InvalidArgument, "poissonian needs mean >= 0 and cutoff >= 0");
  CVec a(static_cast<std::size_t>(cutoff) + 1);
  for (int n = 0; n <= cutoff; ++n) {
    const double log_p = -mean + (n == 0 ? 0.0 : n * std::log(mean)) - std::lgamma(n + 1.0);
    a[static_cast<std::size_t>(n)] = std::exp(0.5 * log_p);
  }
  return normalize(pure(std::move(a)));
}

bool FockState::is_physical() const {
  const int neg = negative_levels();
  if (neg == 0) return true;
  const auto& m = levels_.matrix();
  const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  return m.topRows(neg).cwiseAbs().maxCoeff() <= 1e-14 * scale &&
         m.leftCols(neg).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

FockState FockState::with_cutoff(int new_cutoff) const {
  return FockState(levels_.padded(levels_.first_level(), std::max(new_cutoff, cutoff())));
}

FiniteState::FiniteState(LevelState levels) : levels_(std::move(levels)) {
  require(levels_.dimension() >= 2, ErrorKind::InvalidArgument, "finite state needs dimension >= 2");
  require(levels_.first_level() == 0, ErrorKind::InvalidArgument, "finite state levels start at 0");
}

FiniteState FiniteState::maximally_mixed(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return mixed(Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(d));
}

// --- ProbabilityDensity --------------------------------------------------

ProbabilityDensity::ProbabilityDensity(Support support, RVec values, double weight, std::optional<GridSpec> line,
                                       std::optional<Grid2D> plane)
    : support_(support), values_(std::move(values)), weight_(weight), line_(line), plane_(plane) {
  require(!values_.empty(), ErrorKind::InvalidArgument, "density needs samples");
  for (double v : values_)
    require(std::isfinite(v) && v >= -1e-12, ErrorKind::InvalidArgument, "density samples must be nonnegative");
  for (double& v : values_) v = std::max(v, 0.0);
}

ProbabilityDensity ProbabilityDensity::line(GridSpec grid, RVec values) {
  require(values.size() == grid.size(), ErrorKind::InvalidArgument, "density size does not match grid");
  const double w = grid.dx();
  return ProbabilityDensity(Support::Line, std::move(values), w, grid, std::nullopt);
}

ProbabilityDensity ProbabilityDensity::circle(RVec values) {
  const double w = 2.0 * std::numbers::pi / static_cast<double>(values.size());
  return ProbabilityDensity(Support::Circle, std::move(values), w, std::nullopt, std::nullopt);
}

ProbabilityDensity ProbabilityDensity::discrete(RVec values) {
  return ProbabilityDensity(Support::Discrete, std::move(values), 1.0, std::nullopt, std::nullopt);
}

ProbabilityDensity ProbabilityDensity::plane(Grid2D grid, RVec values) {
  require(values.size() == grid.size(), ErrorKind::InvalidArgument, "density size does not match 2D grid");
  const double w = grid.cell();
  return ProbabilityDensity(Support::Plane, std::move(values), w, std::nullopt, grid);
}

double ProbabilityDensity::total() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * weight_;
}

const GridSpec& ProbabilityDensity::line_grid() const {
  require(line_.has_value(), ErrorKind::InvalidArgument, "density is not supported on a line grid");
  return *line_;
}

const Grid2D& ProbabilityDensity::plane_grid() const {
  require(plane_.has_value(), ErrorKind::InvalidArgument, "density is not supported on a 2D grid");
  return *plane_;
}

double ProbabilityDensity::angle(std::size_t k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(values_.size());
}

ProbabilityDensity ProbabilityDensity::normalized() const {
  const double t = total();
  require(t > 0.0, ErrorKind::ZeroNorm, "density has zero total probability");
  ProbabilityDensity out = *this;
  for (double& v : out.values_) v /= t;
  return out;
}

// --- normalize -----------------------------------------------------------

GridPureState normalize(const GridPureState& state) {
  const double n2 = require_norm(sum_abs2(state.amplitudes()) * state.grid().dx(), state.grid().dx());
  CVec a = state.amplitudes();
  const double s = 1.0 / std::sqrt(n2);
  for (auto& z : a) z *= s;
  return GridPureState(state.grid(), std::move(a));
}

GridMixedState normalize(const GridMixedState& state) {
  const double t = state.trace();
  require_norm(std::abs(t), state.grid().dx());
  require(t > 0, ErrorKind::ZeroNorm, "density matrix has nonpositive trace");
  return GridMixedState(state.grid(), state.matrix() / t);
}

Grid2DState normalize(const Grid2DState& state) {
  const double n2 = require_norm(sum_abs2(state.amplitudes()) * state.grid().cell(), state.grid().cell());
  CVec a = state.amplitudes();
  const double s = 1.0 / std::sqrt(n2);
  for (auto& z : a) z *= s;
  return Grid2DState(state.grid(), std::move(a));
}

namespace {
LevelState normalize_levels(const LevelState& s) {
  if (s.is_pure()) {
    CVec a = s.amplitudes();
    const double n2 = require_norm(sum_abs2(a), 1.0);
    const double f = 1.0 / std::sqrt(n2);
    for (auto& z : a) z *= f;
    return LevelState::pure(s.first_level(), std::move(a));
  }
  const double t = s.trace();
  require_norm(std::abs(t), 1.0);
  require(t > 0, ErrorKind::ZeroNorm, "density matrix has nonpositive trace");
  return LevelState::mixed(s.first_level(), s.matrix() / t);
}
}  // namespace

PeriodicState normalize(const PeriodicState& state) { return PeriodicState(normalize_levels(state.levels())); }
FockState normalize(const FockState& state) { return FockState(normalize_levels(state.levels())); }
FiniteState normalize(const FiniteState& state) { return FiniteState(normalize_levels(state.levels())); }

// --- transforms ----------------------------------------------------------

GridPureState to_momentum(const GridPureState& state, double hbar) {
  require(hbar > 0, ErrorKind::InvalidArgument, "hbar must be positive");
  const auto& grid = state.grid();
  CVec data = state.amplitudes();
  momentum_batch(data.data(), grid.size(), 1, true, grid, hbar);
  return GridPureState(grid.conjugate(hbar), std::move(data));
}

GridPureState from_momentum(const GridPureState& momentum_state, const GridSpec& position_grid, double hbar) {
  require(momentum_state.grid().size() == position_grid.size(), ErrorKind::InvalidArgument,
          "momentum state and position grid differ in size");
  const std::size_t n = position_grid.size();
  const double dp = position_grid.conjugate_spacing(hbar);
  const double scale = dp / std::sqrt(2.0 * std::numbers::pi * hbar);
  CVec data = momentum_state.amplitudes();
  for (std::size_t a = 0; a < n; ++a) {
    const double p = (static_cast<double>(a) - 0.5 * static_cast<double>(n)) * dp;
    data[a] *= std::polar(scale, p * position_grid.x_min() / hbar);
  }
  fft::backward(data);
  for (std::size_t i = 1; i < n; i += 2) data[i] = -data[i];
  return GridPureState(position_grid, std::move(data));
}

Eigen::MatrixXcd momentum_matrix(const GridMixedState& state, double hbar) {
  return momentum_kernel(state.matrix(), state.grid(), hbar);
}

Eigen::MatrixXcd momentum_kernel(const Eigen::MatrixXcd& kernel, const GridSpec& grid, double hbar) {
  const std::size_t n = grid.size();
  require(static_cast<std::size_t>(kernel.rows()) == n && kernel.cols() == kernel.rows(), ErrorKind::InvalidArgument,
          "kernel size does not match grid");
  // U K U^dagger: transform columns, then conjugate-transform rows.
  Eigen::MatrixXcd m = kernel;
  momentum_batch(m.data(), n, n, true, grid, hbar);
  m = m.conjugate().eval();
  momentum_batch(m.data(), n, n, false, grid, hbar);
  m = m.conjugate().eval();
  return m;
}

Grid2DState to_momentum(const Grid2DState& state, double hbar) {
  const auto& g = state.grid();
  const std::size_t n1 = g.axis1.size();
  const std::size_t n2 = g.axis2.size();
  CVec data = state.amplitudes();
  // rows (fixed i1) are contiguous vectors along axis 2
  momentum_batch(data.data(), n2, n1, true, g.axis2, hbar);
  momentum_batch(data.data(), n1, n2, false, g.axis1, hbar);
  return Grid2DState(Grid2D{g.axis1.conjugate(hbar), g.axis2.conjugate(hbar)}, std::move(data));
}

CVec spectral_derivative(std::span<const Complex> values, const GridSpec& grid) {
  return fft::derivative(values, grid);
}

// --- densities -----------------------------------------------------------

ProbabilityDensity position_density(const GridPureState& state) {
  return ProbabilityDensity::line(state.grid(), state.density());
}

ProbabilityDensity position_density(const GridMixedState& state) {
  return ProbabilityDensity::line(state.grid(), state.density());
}

ProbabilityDensity momentum_density(const GridPureState& state, double hbar) {
  const auto m = to_momentum(state, hbar);
  return ProbabilityDensity::line(m.grid(), m.density());
}

ProbabilityDensity momentum_density(const GridMixedState& state, double hbar) {
  const Eigen::MatrixXcd m = momentum_matrix(state, hbar);
  RVec d(state.grid().size());
  for (std::size_t a = 0; a < d.size(); ++a) d[a] = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)).real();
  return ProbabilityDensity::line(state.grid().conjugate(hbar), std::move(d));
}

ProbabilityDensity position_density(const Grid2DState& state) {
  return ProbabilityDensity::plane(state.grid(), state.density());
}

// --- moments -------------------------------------------------------------

namespace {

void check_k(int k) { require(k == 1 || k == 2, ErrorKind::InvalidArgument, "moment order must be 1 or 2"); }

double line_moment(const ProbabilityDensity& d, int k) {
  const auto& g = d.line_grid();
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += std::pow(g.x(i), k) * d.values()[i];
  return s * d.weight();
}

[[noreturn]] void unsupported(const char* family, Observable o) {
  static constexpr const char* names[] = {"X", "P", "J", "N"};
  fail(ErrorKind::UnsupportedObservable,
       std::string("observable ") + names[static_cast<int>(o)] + " is not defined for " + family + " states");
}

}  // namespace

double moment(const GridPureState& state, Observable observable, int k, const Constants& constants) {
  check_k(k);
  switch (observable) {
    case Observable::X: return line_moment(position_density(state), k);
    case Observable::P: return line_moment(momentum_density(state, constants.hbar), k);
    default: unsupported("grid", observable);
  }
}

double moment(const GridMixedState& state, Observable observable, int k, const Constants& constants) {
  check_k(k);
  switch (observable) {
    case Observable::X: return line_moment(position_density(state), k);
    case Observable::P: return line_moment(momentum_density(state, constants.hbar), k);
    default: unsupported("grid", observable);
  }
}

double moment(const PeriodicState& state, Observable observable, int k, const Constants& constants) {
  check_k(k);
  if (observable != Observable::J) unsupported("periodic", observable);
  return std::pow(constants.hbar, k) * state.levels().level_moment(k);
}

double moment(const FockState& state, Observable observable, int k, const Constants&) {
  check_k(k);
  if (observable != Observable::N) unsupported("fock", observable);
  return state.levels().level_moment(k);
}

double moment(const AnyState& state, Observable observable, int k, const Constants& constants) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteState>) {
          unsupported("finite", observable);
        } else {
          return moment(s, observable, k, constants);
        }
      },
      state);
}

double variance(const AnyState& state, Observable observable, const Constants& constants) {
  const double m1 = moment(state, observable, 1, constants);
  return moment(state, observable, 2, constants) - m1 * m1;
}

// --- evolution -----------------------------------------------------------

GridPureState evolve_step(const GridPureState& state, std::span<const double> potential, double dt,
                          const Constants& constants) {
  const auto& grid = state.grid();
  require(potential.size() == grid.size(), ErrorKind::InvalidArgument, "potential must be sampled on the state grid");
  const double hbar = constants.hbar;
  CVec psi = state.amplitudes();
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -potential[i] * dt / (2.0 * hbar));
  fft::forward(psi);
  const RVec k = grid.wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j)
    psi[j] *= std::polar(inv_n, -hbar * k[j] * k[j] * dt / (2.0 * constants.mass));
  fft::backward(psi);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -potential[i] * dt / (2.0 * hbar));
  return GridPureState(grid, std::move(psi));
}

PeriodicState evolve_step(const PeriodicState& state, std::span<const double> potential, double dt,
                          const Constants& constants) {
  const auto& lv = state.levels();
  require(lv.is_pure(), ErrorKind::InvalidArgument, "rotator evolution is implemented for pure states");
  const std::size_t d = lv.dimension();
  require(potential.size() == d, ErrorKind::InvalidArgument,
          "rotator potential must be sampled at the d phase points 2 pi k / d");
  const double hbar = constants.hbar;
  const double inertia = constants.moment_of_inertia;
  const RVec phi = phase_points(d);
  CVec a = lv.amplitudes();

  auto to_phase = [&](CVec& v) {
    fft::backward(v);  // sum_a psi_a exp(+2 pi i a k / d)
    for (std::size_t k = 0; k < d; ++k) v[k] *= std::polar(1.0, static_cast<double>(lv.first_level()) * phi[k]);
  };
  auto to_levels = [&](CVec& v) {
    for (std::size_t k = 0; k < d; ++k)
      v[k] *= std::polar(1.0 / static_cast<double>(d), -static_cast<double>(lv.first_level()) * phi[k]);
    fft::forward(v);
  };
  auto kick = [&](CVec& f) {
    for (std::size_t k = 0; k < d; ++k) f[k] *= std::polar(1.0, -potential[k] * dt / (2.0 * hbar));
  };

  to_phase(a);
  kick(a);
  to_levels(a);
  for (std::size_t i = 0; i < d; ++i) {
    const double j = lv.level(i);
    a[i] *= std::polar(1.0, -hbar * j * j * dt / (2.0 * inertia));
  }
  to_phase(a);
  kick(a);
  to_levels(a);
  return PeriodicState::pure(lv.first_level(), std::move(a));
}

// --- misc ----------------------------------------------------------------

namespace {
double edge_ratio(const RVec& d) {
  const double peak = *std::max_element(d.begin(), d.end());
  if (peak <= 0) return 0.0;
  return std::max(d.front(), d.back()) / peak;
}
}  // namespace

double box_edge_ratio(const GridPureState& state) { return edge_ratio(state.density()); }
double box_edge_ratio(const GridMixedState& state) { return edge_ratio(state.density()); }

RVec phase_points(std::size_t m) {
  RVec out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
  return out;
}

}  // namespace eur
