#include <boost/math/special_functions/airy.hpp>

#include <cmath>

#include "doctest.h"
#include "eur/energy.hpp"
#include "eur/error.hpp"
#include "oracles.hpp"

using namespace eur;

namespace {

ProbabilityDensity line_density(const GridSpec& grid, double (*f)(double)) {
  RVec p(grid.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = f(grid.x(k));
  return ProbabilityDensity::line(grid, p).normalized();
}

double gauss07(double x) { return std::exp(-x * x / (2 * 0.49)); }
double x2_gauss(double x) { return x * x * std::exp(-x * x / 2); }
double plain_gauss(double x) { return std::exp(-x * x / 2); }

}  // namespace

TEST_CASE("energy identity: harmonic ground state and a boosted Gaussian") {
  const GridSpec grid = GridSpec::centered(512, 30.0);
  const EnergyModel model = EnergyModel::harmonic();
  const double s = std::sqrt(0.5);

  const EnergySplit ground = energy_identity(GridPureState(grid, oracle::gaussian(grid, 0.0, s)), model);
  CHECK(ground.fisher_term == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(std::abs(ground.classical_term) < 1e-12);
  CHECK(ground.potential_term == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(ground.total == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(ground.residual < 1e-6);
  CHECK(ground.flags.empty());

  const double k = 1.5;
  const EnergySplit boosted = energy_identity(GridPureState(grid, oracle::gaussian(grid, 0.0, s, k)), model);
  CHECK(boosted.classical_term == doctest::Approx(k * k / 2).epsilon(1e-9));
  // <P^2> = hbar^2/(4 s^2) + k^2 for a Gaussian of position variance s^2.
  CHECK(boosted.hamiltonian == doctest::Approx(0.5 * (0.5 + k * k) + 0.25).epsilon(1e-9));
  CHECK(boosted.residual < 1e-6);
}

TEST_CASE("fisher bound is saturated by real eigenstates") {
  const GridSpec grid = GridSpec::centered(512, 30.0);
  const EnergyModel model = EnergyModel::harmonic();
  // First excited oscillator state x exp(-x^2/2): energy 3/2, node at the origin.
  CVec psi(grid.size());
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = grid.x(k) * std::exp(-grid.x(k) * grid.x(k) / 2);
  const GridPureState state = normalize(GridPureState(grid, psi));
  const BoundReport r = fisher_bound(position_density(state), model);
  CHECK(r.value == doctest::Approx(1.5).epsilon(1e-8));
  const EnergySplit split = energy_identity(state, model);
  CHECK(std::abs(r.value - split.hamiltonian) < 1e-8);
  // sqrt p = |psi| has a kink at the node, so no spectral Rayleigh quotient is attached.
  CHECK_FALSE(r.comparison.has_value());

  const BoundReport smooth = fisher_bound(line_density(grid, plain_gauss), model);
  REQUIRE(smooth.comparison.has_value());
  CHECK(std::abs(smooth.value - *smooth.comparison) < 1e-8);
}

TEST_CASE("fisher bound on a Gaussian matches the calculus oracle") {
  const GridSpec grid = GridSpec::centered(512, 30.0);
  const Constants c{.hbar = 1.3, .mass = 0.7, .omega = 1.9};
  const double sigma = 0.7;
  const BoundReport r = fisher_bound(line_density(grid, gauss07), EnergyModel::harmonic(c));
  const double expect = c.hbar * c.hbar / (8 * c.mass * sigma * sigma) + c.mass * c.omega * c.omega * sigma * sigma / 2;
  CHECK(r.value == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("fisher bound with a sampled potential against a direct Hamiltonian quadrature") {
  const GridSpec grid = GridSpec::centered(512, 30.0);
  RVec v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double x = grid.x(k);
    v[k] = 0.25 * x * x * x * x - x * x + 0.3 * std::sin(x);
  }
  const EnergyModel model = EnergyModel::sampled(grid, v);
  const ProbabilityDensity p = line_density(grid, gauss07);
  const BoundReport r = fisher_bound(p, model);

  // sqrt p is a Gaussian with closed-form derivative; quadrature of (hbar^2/2m) (sqrt p)'^2 + V p.
  const double s2 = 0.49;
  double kin = 0.0, pot = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid.x(k);
    const double root = std::sqrt(p.values()[k]);
    const double d = -x / (2 * s2) * root;
    kin += 0.5 * d * d;
    pot += v[k] * p.values()[k];
  }
  const double h = (kin + pot) * grid.dx();
  CHECK(r.value <= h + 1e-8);
  CHECK(std::abs(r.value - h) < 1e-8);
  REQUIRE(r.comparison.has_value());
  CHECK(std::abs(*r.comparison - h) < 1e-8);
}

TEST_CASE("exponential density under gravity: dX = lambda on the support") {
  const double lambda = 0.8;
  // Samples at cell midpoints so the floor at x = 0 falls between two of them.
  const double dx = 32.0 / 4096;
  const GridSpec grid(4096, -2.0 + dx / 2, 30.0 + dx / 2);
  RVec p(grid.size());
  for (std::size_t k = 0; k < p.size(); ++k)
    p[k] = grid.x(k) >= 0.0 ? std::exp(-grid.x(k) / lambda) / lambda : 0.0;
  const BoundReport r = fisher_bound(ProbabilityDensity::line(grid, p).normalized(), EnergyModel::gravity(1.0));
  CHECK(r.terms.at("fisher_length") == doctest::Approx(lambda).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(1.0 / (8 * lambda * lambda) + lambda).epsilon(1e-4));
}

TEST_CASE("coulomb ground-state bound from numeric minimization") {
  const BoundReport one = coulomb_groundstate_bound(1.0, 1.0);
  CHECK(one.kind == BoundKind::CoulombClosedForm);
  CHECK(std::abs(one.value + 0.5) < 0.5e-9);
  CHECK(one.minimizer.at("u") == doctest::Approx(1.0).epsilon(1e-6));

  const BoundReport two = coulomb_groundstate_bound(2.0, 1.0);
  CHECK(std::abs(two.value + 2.0) < 2e-9);
  CHECK(two.minimizer.at("u") == doctest::Approx(two.terms.at("closed_form_minimizer")).epsilon(1e-6));

  const Constants c{.hbar = 0.5, .mass = 2.0};
  const BoundReport scaled = coulomb_groundstate_bound(1.5, 0.8, c);
  const double expect = -1.5 * 1.5 * std::pow(0.8, 4) * 2.0 / (2 * 0.25);
  CHECK(std::abs(scaled.value / expect - 1.0) < 1e-9);
}

TEST_CASE("inverse-distance bound on a density vanishing at the origin") {
  const GridSpec grid = GridSpec::centered(1024, 40.0);
  const ProbabilityDensity p = line_density(grid, x2_gauss);
  const InverseDistance u = inverse_distance_mean(p);
  REQUIRE(u.finite);
  // <|x|^-1> = integral |x| e^{-x^2/2} / integral x^2 e^{-x^2/2} = 2/sqrt(2 pi).
  CHECK(u.value == doctest::Approx(2.0 / std::sqrt(2.0 * oracle::pi)).epsilon(1e-6));
  const InverseDistanceCheck check = inverse_distance_check(p);
  CHECK(check.inverse_fisher_squared == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(check.holds);
  CHECK(check.slack == doctest::Approx(3.0 - 8.0 / oracle::pi).epsilon(1e-5));

  CHECK_FALSE(inverse_distance_mean(line_density(grid, plain_gauss)).finite);
  CHECK_FALSE(inverse_distance_check(line_density(grid, plain_gauss)).holds);
}

TEST_CASE("harmonic family bounds reach hbar omega / 2") {
  for (const Constants c : {Constants{}, Constants{.hbar = 2.0, .mass = 3.0, .omega = 0.5}}) {
    const EnergyModel model = EnergyModel::harmonic(c);
    for (BoundKind kind : {BoundKind::Fisher, BoundKind::Entropic}) {
      const BoundReport r = groundstate_bound(kind, model);
      CHECK(r.value == doctest::Approx(0.5 * c.hbar * c.omega).epsilon(1e-9));
      const double sigma = std::sqrt(c.hbar / (2 * c.mass * c.omega));
      CHECK(r.minimizer.at("sigma") == doctest::Approx(sigma).epsilon(1e-6));
      CHECK(r.terms.at("closed_form_minimizer") == doctest::Approx(sigma).epsilon(1e-12));
      CHECK(r.consistent());
    }
  }
}

TEST_CASE("bouncer bounds and the Airy comparison") {
  const double a0 = boost::math::airy_ai_zero<double>(1);
  CHECK(std::abs(airy_first_zero() + a0) < 1e-10);

  const BoundReport ent = groundstate_bound(BoundKind::Entropic, EnergyModel::gravity(1.0));
  const double coefficient = 1.5 * std::cbrt(oracle::pi / (2 * std::exp(1.0)));
  CHECK(ent.terms.at("coefficient") == doctest::Approx(coefficient).epsilon(1e-10));
  CHECK(std::abs(ent.terms.at("coefficient") - 1.249) < 1e-3);
  CHECK(ent.terms.at("comparison_coefficient") == doctest::Approx(-std::cbrt(0.5) * a0).epsilon(1e-10));
  CHECK(std::abs(ent.terms.at("comparison_coefficient") - 1.856) < 1e-3);
  CHECK(ent.minimizer.at("lambda") == doctest::Approx(ent.terms.at("closed_form_minimizer")).epsilon(1e-6));
  CHECK(ent.consistent());

  const BoundReport fis = groundstate_bound(BoundKind::Fisher, EnergyModel::gravity(1.0));
  // hbar^2/(8 m l^2) + m g l is minimal at (3/2)(1/4)^{1/3} (m g^2 hbar^2)^{1/3}.
  CHECK(fis.terms.at("coefficient") == doctest::Approx(1.5 * std::cbrt(0.25)).epsilon(1e-10));

  const Constants c{.hbar = 0.7, .mass = 1.7};
  const BoundReport scaled = groundstate_bound(BoundKind::Entropic, EnergyModel::gravity(9.81, c));
  CHECK(scaled.terms.at("coefficient") == doctest::Approx(coefficient).epsilon(1e-10));
}

TEST_CASE("entropic bound <= fisher bound <= <H> for real wavefunctions") {
  const GridSpec grid = GridSpec::centered(512, 30.0);
  const EnergyModel model = EnergyModel::harmonic();
  for (double shift : {0.0, 1.0, 2.5}) {
    CVec psi(grid.size());
    for (std::size_t k = 0; k < psi.size(); ++k) {
      const double x = grid.x(k);
      psi[k] = std::exp(-(x - shift) * (x - shift)) + 0.6 * std::exp(-(x + 1) * (x + 1) / 3);
    }
    const GridPureState state = normalize(GridPureState(grid, psi));
    const ProbabilityDensity p = position_density(state);
    const double h = energy_identity(state, model).hamiltonian;
    const double fb = fisher_bound(p, model).value;
    const double eb = entropic_bound(p, model).value;
    CHECK(fb - eb >= -1e-8);
    CHECK(h - fb >= -1e-8);
  }
}

TEST_CASE("compact support: fisher kinetic term grows under refinement") {
  const auto factory = [](const GridSpec& g) {
    RVec p(g.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::abs(g.x(k)) < 1.0 ? 1.0 : 0.0;
    return ProbabilityDensity::line(g, p).normalized();
  };
  const RVec kin = fisher_kinetic_refinement(factory, GridSpec::centered(256, 8.0), 4);
  for (std::size_t i = 1; i < kin.size(); ++i) CHECK(kin[i] > 1.3 * kin[i - 1]);
}

TEST_CASE("energy argument validation") {
  CHECK_THROWS_AS(EnergyModel::coulomb(-1.0, 1.0), Error);
  CHECK_THROWS_AS(EnergyModel::gravity(0.0), Error);
  CHECK_THROWS_AS(groundstate_bound(BoundKind::Fisher, EnergyModel::sampled(GridSpec::centered(8, 1.0), RVec(8, 0.0))),
                  Error);
}
