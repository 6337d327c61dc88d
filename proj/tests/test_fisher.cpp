#include <random>

#include "doctest.h"
#include "eur/error.hpp"
#include "eur/fisher.hpp"
#include "oracles.hpp"

using namespace eur;

namespace {

ProbabilityDensity gaussian_density(const GridSpec& g, double x0, double s) {
  RVec p(g.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(oracle::gaussian(g.x(i), x0, s));
  return ProbabilityDensity::line(g, p);
}

ProbabilityDensity half_line_gaussian(const GridSpec& g) {
  RVec p(g.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = g.x(i) >= 0.0 ? std::exp(-g.x(i) * g.x(i) / 2.0) : 0.0;
  return ProbabilityDensity::line(g, p);
}

ProbabilityDensity circle(std::size_t m, const std::function<double(double)>& f) {
  RVec p(m);
  for (std::size_t k = 0; k < m; ++k) p[k] = f(2.0 * oracle::pi * k / m);
  return ProbabilityDensity::circle(p).normalized();
}

double sd(const ProbabilityDensity& d) { return std::sqrt(covariance(d)(0, 0)); }

}  // namespace

TEST_CASE("Gaussian Fisher length equals its width") {
  const auto g = GridSpec::centered(1024, 40.0);
  for (double s : {0.5, 1.0, 2.3}) {
    const auto d = gaussian_density(g, 0.7, s);
    // Closed-form integrand p (x - x0)^2 / s^4 summed on the grid.
    RVec integrand(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double u = g.x(i) - 0.7;
      integrand[i] = d.values()[i] * u * u / std::pow(s, 4);
    }
    const auto m = fisher_length(d);
    REQUIRE(m.length);
    CHECK(*m.length == doctest::Approx(s).epsilon(1e-10));
    CHECK(m.information == doctest::Approx(oracle::integrate(integrand, g.dx())).epsilon(1e-10));
    CHECK(*m.length == doctest::Approx(sd(d)).epsilon(1e-8));
  }
}

TEST_CASE("half-line truncation: Fisher length scales like the square root of dx") {
  const auto g = GridSpec::centered(512, 40.0);
  const auto m = fisher_refinement_study(half_line_gaussian, g);
  REQUIRE(m.refinement_ratio);
  CHECK(m.flag == Divergence::ZeroByDiscontinuity);
  CHECK_FALSE(m.resolved);
  CHECK(*m.refinement_ratio == doctest::Approx(std::sqrt(0.5)).epsilon(0.05));
  // A second halving keeps shrinking it.
  const auto m2 = fisher_refinement_study(half_line_gaussian, g.refined());
  CHECK(*m2.length < *m.length);
  // Smooth densities are not flagged.
  const auto smooth = fisher_refinement_study([](const GridSpec& s) { return gaussian_density(s, 0.0, 1.0); }, g);
  CHECK(smooth.flag == Divergence::Finite);
  CHECK(*smooth.refinement_ratio == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("bimodal mixture has delta X strictly below Delta X") {
  const auto g = GridSpec::centered(2048, 60.0);
  RVec p(g.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = 0.5 * std::norm(oracle::gaussian(g.x(i), -4.0, 0.5)) + 0.5 * std::norm(oracle::gaussian(g.x(i), 4.0, 0.5));
  const auto d = ProbabilityDensity::line(g, p);
  const auto m = fisher_length(d);
  CHECK(*m.length < sd(d));
  CHECK(sd(d) == doctest::Approx(std::sqrt(16.0 + 0.25)).epsilon(1e-10));
  CHECK(*m.length == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("Cramer-Rao on Gaussians and perturbed non-Gaussians") {
  const auto g = GridSpec::centered(1024, 40.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 0.3 * u(rng), b = 0.3 * u(rng);
    RVec p(g.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double x = g.x(i);
      p[i] = std::exp(-x * x / 2.0) * (1.0 + a * std::sin(x) + b * std::cos(2 * x) + 0.2);
    }
    const auto d = ProbabilityDensity::line(g, p);
    CHECK(sd(d) > *fisher_length(d).length + 1e-6);
  }
  const auto gauss = gaussian_density(g, 1.0, 1.5);
  CHECK(std::abs(sd(gauss) - *fisher_length(gauss).length) < 1e-8);
}

TEST_CASE("scaling covariance and 1x1 Fisher covariance") {
  const auto base = GridSpec::centered(1024, 40.0);
  RVec p(base.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = base.x(i);
    p[i] = std::exp(-x * x / 2.0) * (1.2 + std::sin(x));
  }
  const double dx0 = *fisher_length(ProbabilityDensity::line(base, p)).length;
  for (double lambda : {0.5, 2.0, 7.0}) {
    const GridSpec scaled(base.size(), lambda * base.x_min(), lambda * base.x_max());
    CHECK(*fisher_length(ProbabilityDensity::line(scaled, p)).length == doctest::Approx(lambda * dx0).epsilon(1e-10));
  }
  const auto d = ProbabilityDensity::line(base, p);
  CHECK(std::sqrt(fisher_covariance(d)(0, 0)) == doctest::Approx(*fisher_length(d).length).epsilon(1e-10));
}

TEST_CASE("Fisher length on a half-line support") {
  const GridSpec g(4096, 0.0, 40.0);
  const double lambda = 1.7;
  RVec p(g.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(-g.x(i) / lambda) / lambda;
  const auto m = fisher_length_on_support(ProbabilityDensity::line(g, p));
  CHECK(*m.length == doctest::Approx(lambda).epsilon(1e-6));
}

TEST_CASE("periodic Fisher length") {
  const auto uniform = circle(256, [](double) { return 1.0; });
  const auto mu = fisher_length_periodic(uniform);
  CHECK(mu.flag == Divergence::InfiniteByUniformity);
  CHECK_FALSE(mu.length.has_value());

  // von Mises: p ~ exp(kappa cos(phi - mu)); Fisher info = kappa I1(kappa)/I0(kappa).
  const double kappa = 3.0, mean = 1.0;
  const auto vm = circle(512, [&](double phi) { return std::exp(kappa * std::cos(phi - mean)); });
  const auto mv = fisher_length_periodic(vm);
  REQUIRE(mv.length);
  CHECK(mv.information == doctest::Approx(kappa * std::cyl_bessel_i(1.0, kappa) / std::cyl_bessel_i(0.0, kappa)).epsilon(1e-10));
  const auto cr = modified_cramer_rao(vm, mean);
  CHECK(cr.slack() >= 0.0);

  // Narrow Gaussian centred on theta: near equality.
  const double s = 0.3, theta = 2.0;
  const auto tg = circle(1024, [&](double phi) {
    const double u = std::remainder(phi - theta, 2 * oracle::pi);
    return std::exp(-u * u / (2 * s * s));
  });
  const auto near = modified_cramer_rao(tg, theta);
  CHECK(near.slack() >= -1e-10);
  CHECK(near.slack() < 1e-3);
}

TEST_CASE("phase variance") {
  const auto uniform = circle(4096, [](double) { return 1.0; });
  CHECK(phase_variance(uniform, 0.3) == doctest::Approx(oracle::pi * oracle::pi / 3.0).epsilon(1e-5));
  double previous = 10.0;
  for (double s : {0.4, 0.2, 0.1, 0.05}) {
    const auto bump = circle(4096, [&](double phi) {
      const double u = std::remainder(phi - 1.0, 2 * oracle::pi);
      return std::exp(-u * u / (2 * s * s));
    });
    const double v = phase_variance(bump, 1.0);
    CHECK(v < previous);
    CHECK(v <= oracle::pi * oracle::pi);
    CHECK(v == doctest::Approx(s * s).epsilon(1e-6));
    previous = v;
  }
  const auto vm = circle(512, [](double phi) { return std::exp(std::cos(phi)) + 0.3 * std::sin(2 * phi) + 0.5; });
  for (double theta : {0.0, 1.0, 2.5}) CHECK(modified_cramer_rao(vm, theta).slack() >= 0.0);
  CHECK(circle_density_at(vm, 0.123) ==
        doctest::Approx((std::exp(std::cos(0.123)) + 0.3 * std::sin(0.246) + 0.5) / (oracle::integrate(
                            [&] {
                              RVec v(512);
                              for (std::size_t k = 0; k < 512; ++k) {
                                const double phi = 2 * oracle::pi * k / 512;
                                v[k] = std::exp(std::cos(phi)) + 0.3 * std::sin(2 * phi) + 0.5;
                              }
                              return v;
                            }(),
                            2 * oracle::pi / 512)))
            .epsilon(1e-10));
}

TEST_CASE("fisher_length_mixed") {
  const auto g = GridSpec::centered(256, 30.0);
  const auto pure = GridPureState(g, oracle::gaussian(g, 0.5, 1.3, 0.8));
  CHECK(*fisher_length_mixed(GridMixedState::from_pure(pure)).length == doctest::Approx(1.3).epsilon(1e-10));

  const GridPureState parts[] = {GridPureState(g, oracle::gaussian(g, -2.0, 1.0, 1.0)),
                                 GridPureState(g, oracle::gaussian(g, 1.5, 0.8, -0.4))};
  const double w[] = {0.4, 0.6};
  const auto rho = GridMixedState::mixture(w, parts);
  CHECK(*fisher_length_mixed(rho).length ==
        doctest::Approx(*fisher_length(position_density(rho)).length).epsilon(1e-8));

  // Truncated plane wave: a nearly flat density has a Fisher length far exceeding the box.
  CVec flat(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) flat[i] = std::polar(1.0 + 1e-3 * std::cos(2 * oracle::pi * g.x(i) / g.length()), 2 * oracle::pi * 9 * g.x(i) / g.length());
  CHECK(*fisher_length_mixed(GridMixedState::from_pure(GridPureState(g, flat))).length > 10 * g.length());
}

TEST_CASE("entropy and collision length") {
  const auto g = GridSpec::centered(1024, 40.0);
  const double s = 1.4;
  CHECK(entropy(gaussian_density(g, 0.0, s)) ==
        doctest::Approx(0.5 * std::log(2 * oracle::pi * std::exp(1.0) * s * s)).epsilon(1e-10));
  CHECK(collision_length(ProbabilityDensity::discrete({0.0, 1.0, 0.0})) == doctest::Approx(1.0));
  CHECK(collision_length(ProbabilityDensity::discrete(RVec(7, 1.0 / 7))) == doctest::Approx(7.0));
  const double l = collision_length(ProbabilityDensity::discrete({0.2, 0.5, 0.3}));
  CHECK(l >= 1.0);
  CHECK(l <= 3.0);
}

TEST_CASE("Fisher covariance in the plane") {
  const GridSpec a = GridSpec::centered(128, 24.0);
  const Grid2D g{a, a};
  auto gaussian2 = [&](const Eigen::Matrix2d& cov) {
    const Eigen::Matrix2d inv = cov.inverse();
    RVec p(g.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) {
        const Eigen::Vector2d x(a.x(i), a.x(j));
        p[g.index(i, j)] = std::exp(-0.5 * x.dot(inv * x));
      }
    return ProbabilityDensity::plane(g, p);
  };
  Eigen::Matrix2d diag;
  diag << 1.2 * 1.2, 0, 0, 0.7 * 0.7;
  CHECK((fisher_covariance(gaussian2(diag)) - diag).cwiseAbs().maxCoeff() < 1e-8);
  Eigen::Matrix2d corr;
  corr << 1.5, 0.8, 0.8, 1.1;
  CHECK((fisher_covariance(gaussian2(corr)) - corr).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((covariance(gaussian2(corr)) - corr).cwiseAbs().maxCoeff() < 1e-8);

  RVec ring(g.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double r = std::hypot(a.x(i), a.x(j));
      ring[g.index(i, j)] = std::exp(-(r - 3.0) * (r - 3.0) / (2 * 0.5 * 0.5));
    }
  const auto rd = ProbabilityDensity::plane(g, ring);
  const Eigen::Matrix2d gap = covariance(rd) - fisher_covariance(rd);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(gap).eigenvalues().minCoeff() > 0.0);

  // A density constant along one axis has singular information.
  RVec stripe(g.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) stripe[g.index(i, j)] = std::exp(-a.x(i) * a.x(i) / 2.0);
  try {
    fisher_covariance(ProbabilityDensity::plane(g, stripe));
    FAIL("expected SingularInformation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularInformation);
  }
}

TEST_CASE("de Bruijn identity under spectral heat flow") {
  const auto g = GridSpec::centered(1024, 40.0);
  const double s = 1.0, gamma = 1e-3;
  const auto run = diffusion_entropy_rate(gaussian_density(g, 0.0, s), gamma, 0.0, 0.5, 10);
  CHECK(run.rates[0] == doctest::Approx(gamma / (s * s)).epsilon(0.01));
  for (std::size_t k = 0; k < run.rates.size(); ++k) {
    // Analytic Gaussian heat flow: sigma^2(t) = sigma^2 + 2 gamma t.
    const double var = s * s + 2 * gamma * run.times[k];
    CHECK(run.predicted[k] == doctest::Approx(gamma / var).epsilon(1e-8));
    CHECK(run.rates[k] == doctest::Approx(run.predicted[k]).epsilon(0.01));
  }

  const auto drift = diffusion_entropy_rate(gaussian_density(g, 0.0, s), 0.0, 0.7, 0.5, 10);
  for (double e : drift.entropy) CHECK(e == doctest::Approx(drift.entropy[0]).epsilon(1e-8));

  RVec p(g.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = std::norm(oracle::gaussian(g.x(i), -2.0, 0.6)) + 0.5 * std::norm(oracle::gaussian(g.x(i), 2.5, 0.9));
  const auto bimodal = diffusion_entropy_rate(ProbabilityDensity::line(g, p), 0.02, 0.1, 0.25, 10);
  for (std::size_t k = 0; k < bimodal.rates.size(); ++k)
    CHECK(bimodal.rates[k] == doctest::Approx(bimodal.predicted[k]).epsilon(0.02));
}
