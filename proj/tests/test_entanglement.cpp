#include <random>

#include "doctest.h"
#include "eur/entanglement.hpp"
#include "eur/error.hpp"
#include "oracles.hpp"

using namespace eur;

namespace {

// psi = exp(-x^T S^{-1} x / 4 + i (x^T C x / 2 + k.x)), normalized numerically.
Grid2DState gaussian_2d(const Grid2D& g, const Eigen::Matrix2d& s, const Eigen::Matrix2d& c, const Eigen::Vector2d& k) {
  const Eigen::Matrix2d si = s.inverse();
  CVec psi(g.size());
  for (std::size_t i = 0; i < g.axis1.size(); ++i)
    for (std::size_t j = 0; j < g.axis2.size(); ++j) {
      const Eigen::Vector2d x(g.axis1.x(i), g.axis2.x(j));
      const double re = -0.25 * x.dot(si * x);
      const double im = 0.5 * x.dot(c * x) + k.dot(x);
      psi[g.index(i, j)] = std::exp(re) * std::polar(1.0, im);
    }
  return normalize(Grid2DState(g, psi));
}

Grid2DState product(const Grid2D& g, const std::function<Complex(double)>& f1, const std::function<Complex(double)>& f2) {
  CVec psi(g.size());
  for (std::size_t i = 0; i < g.axis1.size(); ++i)
    for (std::size_t j = 0; j < g.axis2.size(); ++j) psi[g.index(i, j)] = f1(g.axis1.x(i)) * f2(g.axis2.x(j));
  return normalize(Grid2DState(g, psi));
}

Grid2D square(std::size_t n, double length) {
  const auto axis = GridSpec::centered(n, length);
  return Grid2D{axis, axis};
}

// Largest spread of P_cl^1 over x2 at fixed x1, on points above 1e-6 of the peak density.
double p_cl1_spread_over_x2(const Grid2DState& s) {
  const auto comps = nonclassical_components_2d(s);
  const auto p = s.density();
  const double pm = *std::max_element(p.begin(), p.end());
  const auto& g = s.grid();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.axis1.size(); ++i) {
    double lo = 1e300, hi = -1e300;
    for (std::size_t j = 0; j < g.axis2.size(); ++j) {
      const auto k = g.index(i, j);
      if (p[k] < 1e-6 * pm) continue;
      lo = std::min(lo, comps.p_cl1[k]);
      hi = std::max(hi, comps.p_cl1[k]);
    }
    if (hi >= lo) worst = std::max(worst, hi - lo);
  }
  return worst;
}

}  // namespace

TEST_CASE("approximate EPR state moments and saturation") {
  const EprParams pr;
  CHECK(epr_regime(pr));
  const auto s = build_epr(pr, epr_grid(pr, 1024));
  const auto m = two_particle_moments(s);
  CHECK(m.relative_mean() == doctest::Approx(pr.a).epsilon(1e-6));
  CHECK(m.total_momentum_mean() == doctest::Approx(pr.p0).epsilon(1e-6));
  CHECK(m.relative_variance() == doctest::Approx(pr.sigma * pr.sigma).epsilon(1e-4));
  CHECK(m.total_momentum_variance() == doctest::Approx(1.0 / (pr.tau * pr.tau)).epsilon(1e-4));
  const Eigen::Matrix2d prod = m.cov_x * m.cov_p;
  CHECK((prod - 0.25 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-4);
  const double rx = correlation_coefficient(m.cov_x), rp = correlation_coefficient(m.cov_p);
  CHECK(rx > 0.999);
  CHECK(rp < -0.999);
  CHECK(std::abs(rx + rp) < 1e-3);

  const auto comps = nonclassical_components_2d(s);
  CHECK((comps.cov_p_nc - comps.cov_p).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(comps.additivity_residual < 1e-8);
  const auto p = s.density();
  const double pm = *std::max_element(p.begin(), p.end());
  double dev = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] > 1e-6 * pm) dev = std::max({dev, std::abs(comps.p_cl1[k] - 1.0), std::abs(comps.p_cl2[k] - 1.0)});
  CHECK(dev < 1e-3);

  SUBCASE("momentum collapse moves P_cl to p~") {
    for (double pv : {0.5, 1.0, 1.7}) {
      const auto c = collapse_momentum(s, pv);
      const double expected = epr_collapsed_momentum(pr, pv);
      CHECK(c.momentum.mean == doctest::Approx(expected).epsilon(1e-5));
      CHECK(c.state.norm() == doctest::Approx(1.0));
    }
    CHECK(epr_collapsed_momentum(pr, 0.5) == doctest::Approx(1.4999000).epsilon(1e-7));
    CHECK(epr_collapsed_momentum(pr, pr.p0 / 2) == doctest::Approx(pr.p0 / 2));
    CHECK(std::abs(collapse_momentum(s, 0.5).momentum.mean - pr.p0 / 2) > 0.1);
  }
  SUBCASE("position collapse keeps P_cl at p0 / 2") {
    const auto c = collapse_position(s, 0.0);
    CHECK(c.momentum.mean == doctest::Approx(pr.p0 / 2).epsilon(1e-6));
    const auto x1 = oracle::line_moments(c.state.density(), c.state.grid());
    CHECK(x1.first == doctest::Approx(pr.a).epsilon(1e-3));
  }
  SUBCASE("far tail collapses are rejected") {
    CHECK_THROWS_AS(collapse_position(s, 0.98 * s.grid().axis2.x_max()), Error);
    CHECK_THROWS_AS(collapse_position(s, 1.1 * s.grid().axis2.x_max()), Error);
  }
}

TEST_CASE("EPR grid checks") {
  EprParams pr;
  CHECK_THROWS_AS(build_epr(pr, square(128, 40.0)), Error);
  pr.sigma = 2.0;
  pr.tau = 0.5;
  CHECK_FALSE(epr_regime(pr));
}

TEST_CASE("factorized EPR parameters give a product state") {
  EprParams pr;
  pr.sigma = 1.0;
  pr.tau = 1.0;
  const auto s = build_epr(pr, square(256, 24.0));
  const auto m = two_particle_moments(s);
  CHECK(std::abs(correlation_coefficient(m.cov_x)) < 1e-10);
  CHECK(std::abs(correlation_coefficient(m.cov_p)) < 1e-10);
}

TEST_CASE("random correlated Gaussians satisfy the correlation relation") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto g = square(256, 36.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Matrix2d l;
    l << 0.8 + 0.4 * std::abs(u(rng)), 0.0, 0.6 * u(rng), 0.8 + 0.4 * std::abs(u(rng));
    const Eigen::Matrix2d sigma = l * l.transpose();
    Eigen::Matrix2d c;
    c << 0.3 * u(rng), 0.2 * u(rng), 0.0, 0.3 * u(rng);
    c(1, 0) = c(0, 1);
    const Eigen::Vector2d k(u(rng), u(rng));
    const auto s = gaussian_2d(g, sigma, c, k);
    const auto r = correlation_relation(s);
    const double r_oracle = sigma(0, 1) / std::sqrt(sigma(0, 0) * sigma(1, 1));
    CHECK(r.position.r_pearson == doctest::Approx(r_oracle).epsilon(1e-8));
    CHECK(r.position.r_fisher == doctest::Approx(r_oracle).epsilon(1e-6));
    CHECK(r.r_nonclassical == doctest::Approx(-r_oracle).epsilon(1e-8));
    CHECK(r.residual < 1e-6);

    const auto comps = nonclassical_components_2d(s);
    const Eigen::Matrix2d nc_oracle = 0.25 * sigma.inverse();
    const Eigen::Matrix2d cl_oracle = c * sigma * c.transpose();
    CHECK((comps.cov_p_nc - nc_oracle).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((comps.cov_p_cl - cl_oracle).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(comps.additivity_residual < 1e-8);
    CHECK(comps.mixed_partial_residual < 1e-8);
  }
}

TEST_CASE("product states: particle-1 decomposition ignores particle 2") {
  const auto g = square(256, 30.0);
  auto f1 = [](double x) { return oracle::gaussian(x, 0.5, 1.1, 0.7) * std::exp(Complex(0.0, 0.1 * x * x)); };
  auto f2 = [](double x) { return oracle::gaussian(x, -1.0, 0.9, -0.4); };
  const auto s = product(g, f1, f2);
  const auto comps = nonclassical_components_2d(s);
  CHECK(std::abs(comps.cov_p_nc(0, 1)) < 1e-10);
  CHECK(std::abs(comps.cov_p_cl(0, 1)) < 1e-10);

  const auto base = collapse_position(s, -1.0).momentum;
  // Displace and boost particle 2.
  auto moved = [&](double x) { return f2(x - 2.0) * std::exp(Complex(0.0, 1.3 * x)); };
  const auto s2 = product(g, f1, moved);
  const auto after_x = collapse_position(s2, 1.0).momentum;
  const auto after_p = collapse_momentum(s2, 0.9).momentum;
  double dx = 0.0, dp = 0.0;
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    if (!base.retained[i] || base.probability[i] < 1e-8) continue;
    dx = std::max(dx, std::abs(after_x.values[i] - base.values[i]));
    dp = std::max(dp, std::abs(after_p.values[i] - base.values[i]));
  }
  CHECK(dx < 1e-10);
  CHECK(dp < 1e-10);

  // The collapsed factor is f1 itself.
  CVec expect(g.axis1.size());
  for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = f1(g.axis1.x(i));
  const auto e = normalize(GridPureState(g.axis1, expect));
  const auto& got = collapse_position(s, -1.0).state.amplitudes();
  const Complex phase = got[128] / e.amplitudes()[128];
  double worst = 0.0;
  for (std::size_t i = 0; i < expect.size(); ++i) worst = std::max(worst, std::abs(got[i] - phase * e.amplitudes()[i]));
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-10);
  CHECK(worst < 1e-10);
}

TEST_CASE("superposed products: nonclassical momentum of particle 1 depends on x2") {
  const auto g = square(256, 30.0);
  auto a1 = [](double x) { return oracle::gaussian(x, -2.0, 1.0, 1.0); };
  auto a2 = [](double x) { return oracle::gaussian(x, -2.0, 1.0); };
  auto b1 = [](double x) { return oracle::gaussian(x, 2.0, 1.0, -1.0); };
  auto b2 = [](double x) { return oracle::gaussian(x, 2.0, 1.0); };
  const auto prod = product(g, a1, a2);
  const auto sup = normalize(Grid2DState(g, [&] {
    CVec psi(g.size());
    for (std::size_t i = 0; i < g.axis1.size(); ++i)
      for (std::size_t j = 0; j < g.axis2.size(); ++j)
        psi[g.index(i, j)] = a1(g.axis1.x(i)) * a2(g.axis2.x(j)) + b1(g.axis1.x(i)) * b2(g.axis2.x(j));
    return psi;
  }()));
  const double baseline = p_cl1_spread_over_x2(prod);
  const double spread = p_cl1_spread_over_x2(sup);
  CHECK(spread > 10.0 * std::max(baseline, 1e-12));
  CHECK(spread > 0.1);
}
