#include <cmath>
#include <sstream>

#include "doctest.h"
#include "eur/error.hpp"
#include "eur/fisher.hpp"
#include "eur/signal.hpp"
#include "oracles.hpp"

using namespace eur;

namespace {

// Gaussian envelope of time spread s with carrier f0 and chirp rate beta.
SignalRecord pulse(const GridSpec& grid, double s, double f0, double beta = 0.0) {
  CVec a(grid.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = grid.x(k);
    a[k] = std::polar(std::exp(-t * t / (4 * s * s)), 2 * oracle::pi * f0 * t + beta * t * t);
  }
  return SignalRecord(grid, a);
}

double max_deviation(const SignalRecord& sig, const InstantaneousFrequency& fi, double (*expect)(double)) {
  const RVec p = sig.time_density().values();
  const double peak = *std::max_element(p.begin(), p.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] > 1e-6 * peak) worst = std::max(worst, std::abs(fi.values[k] - expect(sig.times().x(k))));
  return worst;
}

constexpr double kBeta = 1.7;
constexpr double kCarrier = 3.0;

}  // namespace

TEST_CASE("instantaneous frequency of carriers, chirps and real pulses") {
  const GridSpec grid = GridSpec::centered(1024, 20.0);
  const SignalRecord plain = pulse(grid, 0.6, kCarrier);
  CHECK(max_deviation(plain, instantaneous_frequency(plain), [](double) { return kCarrier; }) < 1e-8);

  const SignalRecord chirp = pulse(grid, 0.6, kCarrier, kBeta);
  CHECK(max_deviation(chirp, instantaneous_frequency(chirp),
                      [](double t) { return kBeta * t / oracle::pi + kCarrier; }) < 1e-8);

  const SignalRecord real = pulse(grid, 0.6, 0.0);
  for (double f : instantaneous_frequency(real).values) CHECK(f == 0.0);
}

TEST_CASE("frequency representation uses exp(+2 pi i f t)") {
  const GridSpec grid = GridSpec::centered(256, 16.0);
  const SignalRecord sig = pulse(grid, 0.7, 1.25);
  CHECK(sig.parseval_error() < 1e-10);
  const FrequencySpectrum spec = sig.spectrum();
  for (std::size_t k = 0; k < spec.frequencies.size(); k += 17) {
    Complex direct(0.0);
    for (std::size_t j = 0; j < grid.size(); ++j)
      direct += sig.amplitudes()[j] * std::polar(1.0, 2 * oracle::pi * spec.frequencies[k] * grid.x(j));
    direct *= grid.dx();
    CHECK(std::abs(direct - spec.amplitudes[k]) < 1e-12);
  }
  // A carrier at +f0 puts the spectral weight at f = -f0 under this sign.
  const RelationReport r = verify_time_frequency(sig);
  CHECK(r.provenance["mean_f"].get<double>() == doctest::Approx(-1.25).epsilon(1e-10));
  CHECK(r.provenance["mean_f_inst"].get<double>() == doctest::Approx(1.25).epsilon(1e-10));
}

TEST_CASE("Gaussian pulse saturates the time-frequency relation") {
  const GridSpec grid = GridSpec::centered(512, 24.0);
  const double s = 0.8;
  const RelationReport r = verify_time_frequency(pulse(grid, s, kCarrier));
  CHECK(r.left.at("delta_t") == doctest::Approx(s).epsilon(1e-9));
  CHECK(r.left.at("Delta_f_fluc") == doctest::Approx(1.0 / (4 * oracle::pi * s)).epsilon(1e-9));
  CHECK(r.verdict == Verdict::Equality);
  CHECK(r.residual < 1e-6);
  CHECK(r.passed());
}

TEST_CASE("chirped pulse: Var f_inst is subtracted") {
  const GridSpec grid = GridSpec::centered(2048, 40.0);
  const RelationReport r = verify_time_frequency(pulse(grid, 0.8, kCarrier, kBeta));
  const double var_inst = r.provenance["var_f_inst"].get<double>();
  // f_inst = beta t / pi + f0 has variance (beta s / pi)^2.
  CHECK(var_inst == doctest::Approx(std::pow(kBeta * 0.8 / oracle::pi, 2)).epsilon(1e-8));
  CHECK(r.verdict == Verdict::Equality);
  CHECK(r.residual < 1e-6);
  CHECK(r.passed());
}

TEST_CASE("time-frequency report equals the position-momentum report at hbar = 1/(2 pi)") {
  const GridSpec grid = GridSpec::centered(1024, 40.0);
  for (double beta : {0.0, 0.9, -2.1}) {
    CVec a(grid.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double t = grid.x(k);
      a[k] = std::polar(std::exp(-t * t / 2) + 0.5 * std::exp(-(t - 2) * (t - 2)), beta * t * t + 0.4 * t);
    }
    const SignalRecord sig(grid, a);
    RelationOptions xp_opts;
    xp_opts.constants.hbar = kSignalHbar;
    const RelationReport tf = verify_time_frequency(sig);
    const RelationReport xp = verify_position_momentum(sig.as_wavefunction(), xp_opts);
    CHECK(std::abs(tf.left.at("delta_t") - xp.left.at("delta_X")) < 1e-10);
    CHECK(std::abs(tf.left.at("Delta_f_fluc") - xp.left.at("Delta_P_nc")) < 1e-10);
    CHECK(std::abs(tf.residual - xp.residual) < 1e-10);
    CHECK(tf.passed());
  }
}

TEST_CASE("causal pulse is flagged with a divergent frequency spread") {
  const auto factory = [](const GridSpec& g) {
    CVec a(g.size());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = g.x(k) >= 0.0 ? Complex(std::exp(-g.x(k) / 2)) : 0.0;
    return SignalRecord(g, a);
  };
  const RelationReport r = verify_time_frequency(factory, GridSpec(512, -4.0, 60.0), {}, 3);
  CHECK(r.verdict == Verdict::FlaggedInfinite);
  CHECK(r.provenance["fisher_refinement_ratio"].get<double>() < kDiscontinuityRatio);
  // The spectrum of a jump falls as 1/f^2, so Var f grows linearly with the bandwidth.
  const double growth = r.provenance["Delta_f_growth_ratio"].get<double>();
  CHECK(growth == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("signal CSV ingestion") {
  std::stringstream good;
  good << "im,t,re\n";
  for (int k = 0; k < 64; ++k) {
    const double t = -4.0 + 0.125 * k;
    good << 0.0 << "," << t << "," << std::exp(-t * t) << "\n";
  }
  const SignalRecord sig = read_signal_csv(good);
  CHECK(sig.times().size() == 64);
  CHECK(sig.times().dx() == doctest::Approx(0.125));
  CHECK(sig.times().x_min() == doctest::Approx(-4.0));

  std::stringstream missing("t,re\n0,1\n");
  CHECK_THROWS_AS(read_signal_csv(missing), ParseError);

  std::stringstream bad("t,re,im\n0,1,0\n0.1,x1,0\n");
  try {
    read_signal_csv(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 5);
  }

  std::stringstream uneven("t,re,im\n0,1,0\n0.1,1,0\n0.3,1,0\n0.4,1,0\n");
  CHECK_THROWS_AS(read_signal_csv(uneven), Error);
}
