#include <random>

#include "doctest.h"
#include "eur/error.hpp"
#include "eur/fft.hpp"
#include "eur/random_states.hpp"
#include "eur/state.hpp"
#include "oracles.hpp"

using namespace eur;

namespace {

GridPureState gaussian_state(const GridSpec& g, double x0, double s, double k = 0.0) {
  return GridPureState(g, oracle::gaussian(g, x0, s, k));
}

}  // namespace

TEST_CASE("grid spec invariants") {
  const GridSpec g(16, -2.0, 2.0);
  CHECK(g.dx() == doctest::Approx(0.25));
  CHECK(g.conjugate_spacing(1.0) == doctest::Approx(2.0 * oracle::pi / 4.0));
  CHECK(g.conjugate(1.0).x(8) == doctest::Approx(0.0));
  CHECK_THROWS_AS(GridSpec(7, 0.0, 1.0), Error);
  CHECK_THROWS_AS(GridSpec(16, 1.0, 1.0), Error);
  CHECK_THROWS_AS(Constants{.hbar = 0.0}.validate(), Error);
}

TEST_CASE("normalize") {
  const auto g = GridSpec::centered(256, 20.0);
  const auto psi = gaussian_state(g, 0.0, 1.0);
  const auto same = normalize(psi);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(same.amplitudes()[k] - psi.amplitudes()[k]) < 1e-12);

  CVec tripled = psi.amplitudes();
  for (auto& z : tripled) z *= 3.0;
  const auto back = normalize(GridPureState(g, tripled));
  CHECK(back.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(back.amplitudes()[128] - psi.amplitudes()[128]) < 1e-12);

  try {
    normalize(GridPureState(g, CVec(g.size())));
    FAIL("expected ZeroNorm");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroNorm);
  }
  CHECK_THROWS_AS(normalize(FockState::pure(CVec(4))), Error);
}

TEST_CASE("momentum transform matches direct quadrature") {
  const auto g = GridSpec::centered(256, 24.0);
  const double s = 0.8;
  const double hbar = 0.7;
  const auto psi = gaussian_state(g, 0.5, s);
  const auto phi = to_momentum(psi, hbar);
  double worst = 0.0;
  for (std::size_t a = 0; a < g.size(); a += 7) {
    const double p = phi.grid().x(a);
    worst = std::max(worst, std::abs(phi.amplitudes()[a] - oracle::momentum_amplitude(psi.amplitudes(), g, p, hbar)));
  }
  CHECK(worst < 1e-12);
  // Width of the momentum density.
  const auto [mp, vp] = oracle::line_moments(phi.density(), phi.grid());
  CHECK(mp == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::sqrt(vp) == doctest::Approx(hbar / (2.0 * s)).epsilon(1e-10));
}

TEST_CASE("boost shifts the momentum density by hbar k") {
  const auto g = GridSpec::centered(512, 40.0);
  const double hbar = 1.3;
  const double k = 2.0;
  const auto phi = to_momentum(gaussian_state(g, 0.0, 1.0, k), hbar);
  // Direct quadrature oracle of the shifted mean.
  double m0 = 0, m1 = 0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    const double p = phi.grid().x(a);
    const double w = std::norm(oracle::momentum_amplitude(oracle::gaussian(g, 0.0, 1.0, k), g, p, hbar));
    m0 += w;
    m1 += w * p;
  }
  CHECK(m1 / m0 == doctest::Approx(hbar * k).epsilon(1e-10));
  CHECK(moment(GridPureState(g, oracle::gaussian(g, 0.0, 1.0, k)), Observable::P, 1, Constants{.hbar = hbar}) ==
        doctest::Approx(hbar * k).epsilon(1e-10));
}

TEST_CASE("Parseval and round trip on a random smooth state") {
  std::mt19937_64 rng(11);
  const auto g = suite_grid();
  const auto psi = random_smooth_spec(rng).sample(g);
  const auto phi = to_momentum(psi, 1.0);
  CHECK(phi.norm() == doctest::Approx(1.0).epsilon(1e-10));
  const auto back = from_momentum(phi, g, 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(back.amplitudes()[k] - psi.amplitudes()[k]));
  CHECK(worst < 1e-10);
}

TEST_CASE("spectral derivative") {
  const auto g = GridSpec::centered(128, 10.0);
  CVec wave(g.size());
  CVec expected(g.size());
  const double w = 2.0 * oracle::pi / g.length();
  for (std::size_t k = 0; k < g.size(); ++k) {
    wave[k] = std::sin(w * g.x(k));
    expected[k] = w * std::cos(w * g.x(k));
  }
  auto d = spectral_derivative(wave, g);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(d[k] - expected[k]) < 1e-10);

  d = spectral_derivative(CVec(g.size(), Complex(2.5)), g);
  for (const auto& z : d) CHECK(std::abs(z) < 1e-12);

  // Gaussian occupying well under a quarter of the box: closed form and a finite-difference cross-check.
  const auto fine = GridSpec::centered(512, 20.0);
  const double s = 0.7;
  const CVec gauss = oracle::gaussian(fine, 0.0, s);
  d = spectral_derivative(gauss, fine);
  const CVec fd = oracle::finite_difference(gauss, fine.dx());
  double worst = 0.0, worst_fd = 0.0, peak = 0.0;
  for (std::size_t k = 0; k < fine.size(); ++k) {
    const Complex exact = -fine.x(k) / (2.0 * s * s) * gauss[k];
    peak = std::max(peak, std::abs(exact));
    worst = std::max(worst, std::abs(d[k] - exact));
    worst_fd = std::max(worst_fd, std::abs(fd[k] - exact));
  }
  CHECK(worst / peak < 1e-8);
  CHECK(worst_fd / peak < 1e-4);
}

TEST_CASE("moments") {
  const auto g = GridSpec::centered(512, 30.0);
  const double s = 1.2;
  const AnyState psi = GridPureState(g, oracle::gaussian(g, 0.0, s));
  RVec x2(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) x2[k] = g.x(k) * g.x(k) * std::norm(oracle::gaussian(g.x(k), 0.0, s));
  CHECK(moment(psi, Observable::X, 2) == doctest::Approx(oracle::integrate(x2, g.dx())).epsilon(1e-12));
  CHECK(moment(psi, Observable::X, 2) == doctest::Approx(s * s).epsilon(1e-10));

  const AnyState fock = FockState::number(3, 6);
  CHECK(moment(fock, Observable::N, 1) == doctest::Approx(3.0));

  CVec amps(5, Complex(0.0));
  amps[4] = 1.0;  // j = 2 with j_min = -2
  const AnyState rotor = PeriodicState::pure(-2, amps);
  const double hbar = 0.5;
  CHECK(moment(rotor, Observable::J, 2, Constants{.hbar = hbar}) == doctest::Approx(4.0 * hbar * hbar));

  try {
    moment(fock, Observable::X, 1);
    FAIL("expected UnsupportedObservable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedObservable);
  }
  CHECK_THROWS_AS(moment(AnyState(FiniteState::maximally_mixed(3)), Observable::N, 1), Error);
}

TEST_CASE("Fourier consistency of Var P") {
  std::mt19937_64 rng(3);
  const auto g = suite_grid();
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = random_smooth_spec(rng).sample(g);
    const double vp = moment(psi, Observable::P, 2) - std::pow(moment(psi, Observable::P, 1), 2);
    const CVec d1 = spectral_derivative(psi.amplitudes(), g);
    double p1 = 0.0, p2 = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      p1 += (std::conj(psi.amplitudes()[k]) * Complex(0.0, -1.0) * d1[k]).real();
      p2 += std::norm(d1[k]);
    }
    p1 *= g.dx();
    p2 *= g.dx();
    CHECK(vp == doctest::Approx(p2 - p1 * p1).epsilon(1e-8));
  }
}

TEST_CASE("mixed states") {
  std::mt19937_64 rng(5);
  const auto g = GridSpec::centered(128, 24.0);
  const auto rho = random_two_gaussian_mixture(g, rng);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.purity() <= 1.0 + 1e-12);
  const auto ev = rho.eigenvalues();
  CHECK(ev.minCoeff() >= -1e-10 * ev.maxCoeff());
  // Momentum matrix diagonal equals the mixture of pure momentum densities.
  const auto pd = momentum_density(rho, 1.0);
  CHECK(pd.total() == doctest::Approx(1.0).epsilon(1e-10));

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(128, 128);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(GridMixedState(g, bad), Error);
}

TEST_CASE("free evolution follows the spreading law") {
  const auto g = GridSpec::centered(1024, 80.0);
  const double s = 1.0;
  const Constants c{.hbar = 1.0, .mass = 2.0};
  const auto psi = gaussian_state(g, 0.0, s, 0.5);
  const RVec v(g.size(), 0.0);
  const double dt = 0.3;
  const auto out = evolve_step(psi, v, dt, c);
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-10));
  const auto [mean, var] = oracle::line_moments(out.density(), g);
  const double spread = c.hbar * dt / (2.0 * c.mass * s);
  CHECK(var == doctest::Approx(s * s + spread * spread).epsilon(1e-6));
  CHECK(mean == doctest::Approx(c.hbar * 0.5 * dt / c.mass).epsilon(1e-6));

  const auto same = evolve_step(psi, v, 0.0, c);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(same.amplitudes()[k] - psi.amplitudes()[k]) < 1e-12);

  // Harmonic well: norm still preserved.
  RVec harmonic(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) harmonic[k] = 0.5 * g.x(k) * g.x(k);
  CHECK(evolve_step(psi, harmonic, 0.05, c).norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rotator eigenstate keeps its phase density") {
  CVec amps(16, Complex(0.0));
  amps[9] = 1.0;
  const auto rotor = PeriodicState::pure(-8, amps);
  const RVec v(16, 0.0);
  const auto out = evolve_step(rotor, v, 0.37);
  const auto& a = out.levels().amplitudes();
  CHECK(std::abs(a[9]) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (i != 9) CHECK(std::abs(a[i]) < 1e-12);
  CHECK(std::arg(a[9]) == doctest::Approx(-0.5 * 0.37).epsilon(1e-12));
}

TEST_CASE("Fock and finite constructors") {
  const auto coh = FockState::poissonian(2.0, 40);
  CHECK(coh.levels().trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(moment(coh, Observable::N, 1) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(FockState::extended(2, CVec{0.0, 0.0, 1.0}).is_physical());
  CHECK_FALSE(FockState::extended(1, CVec{0.5, 1.0}).is_physical());
  CHECK(coh.with_cutoff(80).cutoff() == 80);
  CHECK(FiniteState::maximally_mixed(4).levels().purity() == doctest::Approx(0.25));
  CHECK_THROWS_AS(FiniteState::pure(CVec{1.0}), Error);
}

TEST_CASE("box edge ratio") {
  const auto g = GridSpec::centered(256, 30.0);
  CHECK(box_edge_ratio(gaussian_state(g, 0.0, 1.0)) < kBoxEdgeRatio);
  CHECK(box_edge_ratio(gaussian_state(g, 0.0, 5.0)) > kBoxEdgeRatio);
}
