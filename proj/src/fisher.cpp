#include "eur/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eur/decomposition.hpp"
#include "eur/error.hpp"
#include "eur/fft.hpp"

namespace eur {
namespace {

constexpr double kPi = std::numbers::pi;

FisherMetrics from_information(double info, double masked) {
  FisherMetrics m;
  m.information = info;
  m.masked_mass = masked;
  require(info > 0.0 && std::isfinite(info), ErrorKind::SingularInformation,
          "Fisher information is not positive and finite");
  m.length = 1.0 / std::sqrt(info);
  return m;
}

double information_sum(const RVec& p, const RVec& dp, const std::vector<char>& keep, double weight) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (keep[k]) s += dp[k] * dp[k] / p[k];
  return s * weight;
}

RVec normalized_values(const ProbabilityDensity& density) { return density.normalized().values(); }

// Information of a sampled density; `derive` maps samples to their derivative.
template <class Derive>
FisherMetrics sampled_information(const RVec& p, double weight, Derive derive) {
  double masked = 0.0;
  const auto keep = density_mask(p, weight, &masked);
  if (spectral_tail(p) <= kSpectralTail) {
    const RVec dp = derive(p);
    double info = information_sum(p, dp, keep, weight);
    // An isolated zero of a smooth density is a double zero, where
    // p'^2 / p tends to 2 p''.
    const std::size_t n = p.size();
    RVec ddp;
    for (std::size_t k = 0; k < n; ++k) {
      if (keep[k] || !keep[(k + n - 1) % n] || !keep[(k + 1) % n]) continue;
      if (ddp.empty()) ddp = derive(dp);
      info += 2.0 * std::max(0.0, ddp[k]) * weight;
    }
    return from_information(info, masked);
  }
  RVec root(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) root[k] = std::sqrt(p[k]);
  const RVec d = derive(root);
  double info = 0.0;
  for (double v : d) info += 4.0 * v * v;
  auto m = from_information(info * weight, masked);
  m.resolved = false;
  return m;
}

}  // namespace

double spectral_tail(const RVec& p) {
  CVec c(p.begin(), p.end());
  fft::forward(c);
  const std::size_t n = p.size();
  double tail = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (4 * static_cast<std::size_t>(std::abs(fft::signed_index(j, n))) >= 3 * (n / 2)) tail = std::max(tail, std::abs(c[j]));
  return tail / std::abs(c[0]);
}

std::string divergence_name(Divergence flag) {
  switch (flag) {
    case Divergence::Finite: return "finite";
    case Divergence::ZeroByDiscontinuity: return "zero-by-discontinuity";
    case Divergence::InfiniteByUniformity: return "infinite-by-uniformity";
  }
  return "unknown";
}

FisherMetrics fisher_length(const ProbabilityDensity& density) {
  require(density.support() == Support::Line, ErrorKind::InvalidArgument, "fisher_length needs a line density");
  const auto& grid = density.line_grid();
  return sampled_information(normalized_values(density), density.weight(),
                             [&](const RVec& f) { return fft::derivative(std::span<const double>(f), grid); });
}

FisherMetrics fisher_length_on_support(const ProbabilityDensity& density) {
  require(density.support() == Support::Line, ErrorKind::InvalidArgument, "needs a line density");
  const RVec p = normalized_values(density);
  const double h = density.weight();
  double masked = 0.0;
  const auto keep = density_mask(p, h, &masked);
  const auto first = static_cast<std::size_t>(std::find(keep.begin(), keep.end(), 1) - keep.begin());
  const auto last = p.size() - 1 - static_cast<std::size_t>(std::find(keep.rbegin(), keep.rend(), 1) - keep.rbegin());
  require(last >= first + 4, ErrorKind::GridResolution, "support needs at least five samples");
  for (std::size_t k = first; k <= last; ++k)
    require(keep[k], ErrorKind::InvalidArgument, "support must be a single interval");
  const std::size_t n = last - first + 1;
  RVec lp(n);
  for (std::size_t k = 0; k < n; ++k) lp[k] = std::log(p[first + k]);
  // Fourth-order stencils: central in the interior, one-sided at the two edges.
  auto d = [&](std::size_t i) {
    if (i >= 2 && i + 2 < n) return (lp[i - 2] - 8 * lp[i - 1] + 8 * lp[i + 1] - lp[i + 2]) / (12 * h);
    if (i < 2) {
      const auto* f = &lp[i];
      if (i == 0) return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
      return (-3 * lp[0] - 10 * lp[1] + 18 * lp[2] - 6 * lp[3] + lp[4]) / (12 * h);
    }
    const std::size_t j = n - 1 - i;
    const auto* f = &lp[n - 1];
    if (j == 0) return (25 * f[0] - 48 * f[-1] + 36 * f[-2] - 16 * f[-3] + 3 * f[-4]) / (12 * h);
    return (3 * lp[n - 1] + 10 * lp[n - 2] - 18 * lp[n - 3] + 6 * lp[n - 4] - lp[n - 5]) / (12 * h);
  };
  // Trapezoid over the support interval, normalized by the same rule.
  double info = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = d(i);
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    info += w * p[first + i] * g * g;
    mass += w * p[first + i];
  }
  return from_information(info / mass, masked);
}

FisherMetrics fisher_refinement_study(const DensityFactory& factory, const GridSpec& grid) {
  const auto coarse = fisher_length(factory(grid));
  auto fine = fisher_length(factory(grid.refined()));
  fine.refinement_ratio = *fine.length / *coarse.length;
  if (*fine.refinement_ratio < kDiscontinuityRatio) fine.flag = Divergence::ZeroByDiscontinuity;
  return fine;
}

FisherMetrics fisher_length_periodic(const ProbabilityDensity& density) {
  require(density.support() == Support::Circle, ErrorKind::InvalidArgument, "needs a circle density");
  const RVec p = normalized_values(density);
  double masked = 0.0;
  const auto keep = density_mask(p, density.weight(), &masked);
  if (information_sum(p, fft::periodic_derivative(p, 2.0 * kPi), keep, density.weight()) < kUniformInformation) {
    FisherMetrics m;
    m.masked_mass = masked;
    m.flag = Divergence::InfiniteByUniformity;
    return m;
  }
  return sampled_information(p, density.weight(), [](const RVec& f) { return fft::periodic_derivative(f, 2.0 * kPi); });
}

FisherMetrics fisher_length_mixed(const GridMixedState& state_in) {
  const auto state = normalize(state_in);
  const RVec p = state.density();
  const CVec pr = position_pr_diagonal(state, 1.0);
  double masked = 0.0;
  const auto keep = density_mask(p, state.grid().dx(), &masked);
  double info = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (keep[k]) info += pr[k].imag() * pr[k].imag() / p[k];
  return from_information(4.0 * info * state.grid().dx(), masked);
}

double phase_variance(const ProbabilityDensity& density, double theta) {
  require(density.support() == Support::Circle, ErrorKind::InvalidArgument, "needs a circle density");
  const RVec p = normalized_values(density);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double u = std::remainder(density.angle(k) - theta, 2.0 * kPi);  // in [-pi, pi]
    s += u * u * p[k];
  }
  return s * density.weight();
}

double circle_density_at(const ProbabilityDensity& density, double angle) {
  require(density.support() == Support::Circle, ErrorKind::InvalidArgument, "needs a circle density");
  const RVec p = normalized_values(density);
  const std::size_t m = p.size();
  CVec c(p.begin(), p.end());
  fft::forward(c);
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const long k = fft::signed_index(j, m);
    if (m % 2 == 0 && j == m / 2) {
      s += c[j].real() * std::cos(static_cast<double>(k) * angle);
    } else {
      s += (c[j] * std::polar(1.0, static_cast<double>(k) * angle)).real();
    }
  }
  return s / static_cast<double>(m);
}

double circular_mean(const ProbabilityDensity& density) {
  Complex s(0.0);
  for (std::size_t k = 0; k < density.size(); ++k) s += density.values()[k] * std::polar(1.0, density.angle(k));
  return std::arg(s);
}

PhaseCramerRao modified_cramer_rao(const ProbabilityDensity& density, double theta) {
  PhaseCramerRao r;
  r.spread = std::sqrt(phase_variance(density, theta));
  r.factor = std::abs(1.0 - 2.0 * kPi * circle_density_at(density, theta + kPi));
  r.fisher = fisher_length_periodic(density);
  if (r.fisher.length) r.bound = r.factor * *r.fisher.length;
  return r;
}

double entropy(const ProbabilityDensity& density) {
  const RVec p = normalized_values(density);
  double s = 0.0;
  for (double v : p)
    if (v > 0.0) s -= v * std::log(v);
  return s * density.weight();
}

double collision_length(const ProbabilityDensity& density) {
  require(density.support() == Support::Discrete, ErrorKind::InvalidArgument, "needs a discrete distribution");
  const RVec p = normalized_values(density);
  double s = 0.0;
  for (double v : p) s += v * v;
  return 1.0 / s;
}

Eigen::MatrixXd fisher_information_matrix(const ProbabilityDensity& density) {
  const RVec p = normalized_values(density);
  double masked = 0.0;
  const auto keep = density_mask(p, density.weight(), &masked);
  if (density.support() == Support::Line) {
    const RVec dp = fft::derivative(std::span<const double>(p), density.line_grid());
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = information_sum(p, dp, keep, density.weight());
    return m;
  }
  require(density.support() == Support::Plane, ErrorKind::InvalidArgument, "needs a line or plane density");
  const RVec d1 = fft::partial(std::span<const double>(p), density.plane_grid(), 0);
  const RVec d2 = fft::partial(std::span<const double>(p), density.plane_grid(), 1);
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!keep[k]) continue;
    m(0, 0) += d1[k] * d1[k] / p[k];
    m(0, 1) += d1[k] * d2[k] / p[k];
    m(1, 1) += d2[k] * d2[k] / p[k];
  }
  m(1, 0) = m(0, 1);
  return m * density.weight();
}

Eigen::MatrixXd fisher_covariance(const ProbabilityDensity& density) {
  const Eigen::MatrixXd info = fisher_information_matrix(density);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(info);
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  require(hi > 0.0 && lo > 1e-12 * hi, ErrorKind::SingularInformation, "Fisher information matrix is singular");
  return info.inverse();
}

Eigen::MatrixXd covariance(const ProbabilityDensity& density) {
  const RVec p = normalized_values(density);
  const double w = density.weight();
  if (density.support() == Support::Line) {
    const auto& g = density.line_grid();
    double m1 = 0, m2 = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      m1 += g.x(k) * p[k] * w;
      m2 += g.x(k) * g.x(k) * p[k] * w;
    }
    Eigen::MatrixXd c(1, 1);
    c(0, 0) = m2 - m1 * m1;
    return c;
  }
  require(density.support() == Support::Plane, ErrorKind::InvalidArgument, "needs a line or plane density");
  const auto& g = density.plane_grid();
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < g.axis1.size(); ++i) {
    for (std::size_t j = 0; j < g.axis2.size(); ++j) {
      const double q = p[g.index(i, j)] * w;
      const Eigen::Vector2d x(g.axis1.x(i), g.axis2.x(j));
      mean += q * x;
      second += q * x * x.transpose();
    }
  }
  return second - mean * mean.transpose();
}

DiffusionRun diffusion_entropy_rate(const ProbabilityDensity& density, double gamma, double drift, double dt,
                                    int steps) {
  require(density.support() == Support::Line, ErrorKind::InvalidArgument, "diffusion needs a line density");
  require(gamma >= 0.0 && dt > 0.0 && steps >= 1, ErrorKind::InvalidArgument,
          "diffusion needs gamma >= 0, dt > 0 and at least one step");
  const auto& grid = density.line_grid();
  const std::size_t n = grid.size();
  const RVec initial = normalized_values(density);
  CVec hat(initial.begin(), initial.end());
  fft::forward(hat);
  const RVec k = grid.wavenumbers();

  // Density at time t from the initial spectrum, exactly.
  auto at = [&](double t) {
    CVec c = hat;
    for (std::size_t j = 0; j < n; ++j) c[j] *= std::exp(Complex(-gamma * k[j] * k[j], drift * k[j]) * t);
    fft::backward(c);
    RVec p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = std::max(0.0, c[i].real() / static_cast<double>(n));
    return ProbabilityDensity::line(grid, std::move(p));
  };

  DiffusionRun run;
  run.gamma = gamma;
  run.drift = drift;
  run.dt = dt;
  run.steps = steps;
  // Entropy on the half-step lattice t = j dt / 2.
  RVec half(static_cast<std::size_t>(2 * steps + 2));
  for (std::size_t j = 0; j < half.size(); ++j) half[j] = entropy(at(0.5 * dt * static_cast<double>(j)));
  for (std::size_t j = 1; j < half.size(); ++j) {
    if (gamma > 0.0 && half[j] < half[j - 1] - 1e-12 * std::max(1.0, std::abs(half[j - 1])))
      fail(ErrorKind::UnstableStep, "entropy decreased under diffusion at t = " + std::to_string(0.5 * dt * j));
  }
  for (int s = 0; s <= steps; ++s) {
    const auto j = static_cast<std::size_t>(2 * s);
    const double t = dt * s;
    run.times.push_back(t);
    run.entropy.push_back(half[j]);
    if (s == 0) {
      run.rates.push_back((-3.0 * half[0] + 4.0 * half[1] - half[2]) / dt);
    } else {
      run.rates.push_back((half[j + 1] - half[j - 1]) / dt);
    }
    const auto m = fisher_length(at(t));
    run.predicted.push_back(gamma * m.information);
  }
  return run;
}

}  // namespace eur
