#pragma once

#include <functional>
#include <istream>
#include <numbers>
#include <vector>

#include "eur/relations.hpp"
#include "eur/state.hpp"

namespace eur {

/// Frequency representation A(f) = integral a(t) exp(+2 pi i f t) dt on an
/// ascending frequency lattice.
struct FrequencySpectrum {
  RVec frequencies;
  CVec amplitudes;
  double df = 0.0;
};

/// Complex amplitude a(t) on uniform sample times, normalized so that
/// integral |a|^2 dt = 1.
class SignalRecord {
 public:
  SignalRecord(GridSpec times, CVec amplitudes);
  /// Validates uniform spacing of `times` (relative 1e-9).
  static SignalRecord from_samples(const RVec& times, CVec amplitudes);

  const GridSpec& times() const noexcept { return times_; }
  const CVec& amplitudes() const noexcept { return amplitudes_; }
  /// Norm of the amplitudes as supplied, before normalization.
  double input_norm() const noexcept { return input_norm_; }

  ProbabilityDensity time_density() const;
  FrequencySpectrum spectrum() const;
  ProbabilityDensity frequency_density() const;
  /// |integral |A|^2 df - 1|.
  double parseval_error() const;
  /// The same samples read as psi(x); with hbar = 1/(2 pi), p = -f.
  GridPureState as_wavefunction() const;

 private:
  GridSpec times_;
  CVec amplitudes_;
  double input_norm_ = 1.0;
};

/// Action unit under which a signal is a wavefunction.
inline constexpr double kSignalHbar = 0.5 * std::numbers::inv_pi;

struct InstantaneousFrequency {
  RVec values;  ///< Im(a* a') / (2 pi |a|^2); zero on masked samples
  std::vector<char> retained;
  double masked_mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Branch-free phase derivative with a spectral a'. Throws VanishingDensity
/// when too much probability sits on masked samples.
InstantaneousFrequency instantaneous_frequency(const SignalRecord& signal);

/// delta t * Delta f_fluc = 1/(4 pi) with Delta f_fluc^2 = Var f - Var f_inst,
/// plus Delta f * Delta t >= 1/(4 pi). Relation id "tf".
RelationReport verify_time_frequency(const SignalRecord& signal, const RelationOptions& options = {});

using SignalFactory = std::function<SignalRecord(const GridSpec&)>;

/// Same as above; a signal whose density is not band-limited is resampled
/// over `refinements` halvings of dt, tracing delta t and Delta f.
RelationReport verify_time_frequency(const SignalFactory& factory, const GridSpec& times,
                                     const RelationOptions& options = {}, int refinements = 3);

/// Reads a CSV with a header naming the columns t, re, im (any order, extra
/// columns ignored). Throws ParseError on malformed input.
SignalRecord read_signal_csv(std::istream& in);

}  // namespace eur
