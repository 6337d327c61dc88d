#include "eur/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "eur/decomposition.hpp"
#include "eur/error.hpp"
#include "eur/fft.hpp"
#include "eur/fisher.hpp"

namespace eur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuarterOverPi = 0.25 * std::numbers::inv_pi;

double norm_squared(const CVec& a, double dt) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return s * dt;
}

nlohmann::ordered_json grid_block(const GridSpec& g) {
  return {{"n_points", g.size()}, {"t_min", g.x_min()}, {"t_max", g.x_max()}, {"dt", g.dx()}};
}

struct Sides {
  FisherMetrics fisher;
  double var_f = 0.0;
  double mean_f = 0.0;
  double var_t = 0.0;
  InstantaneousFrequency inst;
};

Sides sides(const SignalRecord& s) {
  Sides out;
  out.fisher = fisher_length(s.time_density());
  const Eigen::MatrixXd ct = covariance(s.time_density());
  out.var_t = ct(0, 0);
  const ProbabilityDensity fd = s.frequency_density();
  double m1 = 0.0, m2 = 0.0;
  const GridSpec& fg = fd.line_grid();
  // The Nyquist bin stands for both +f_N and -f_N, so it carries no mean.
  const double nyquist = 0.5 / s.times().dx();
  for (std::size_t k = 0; k < fd.size(); ++k) {
    if (std::abs(std::abs(fg.x(k)) - nyquist) > 1e-9 * nyquist) m1 += fg.x(k) * fd.values()[k];
    m2 += fg.x(k) * fg.x(k) * fd.values()[k];
  }
  out.mean_f = m1 * fd.weight();
  out.var_f = m2 * fd.weight() - out.mean_f * out.mean_f;
  out.inst = instantaneous_frequency(s);
  return out;
}

bool monotone_growth(const RVec& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1] * (1.0 + 1e-3))) return false;
  return v.size() > 1;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

SignalRecord::SignalRecord(GridSpec times, CVec amplitudes) : times_(times), amplitudes_(std::move(amplitudes)) {
  require(amplitudes_.size() == times_.size(), ErrorKind::InvalidArgument, "amplitude count must match sample times");
  for (const auto& z : amplitudes_)
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::InvalidArgument,
            "signal amplitudes must be finite");
  const double n2 = norm_squared(amplitudes_, times_.dx());
  require(n2 > 1e-300, ErrorKind::ZeroNorm, "signal has zero energy");
  input_norm_ = std::sqrt(n2);
  for (auto& z : amplitudes_) z /= input_norm_;
}

SignalRecord SignalRecord::from_samples(const RVec& times, CVec amplitudes) {
  require(times.size() >= 4, ErrorKind::InvalidArgument, "a signal needs at least four samples");
  require(times.size() == amplitudes.size(), ErrorKind::InvalidArgument, "time and amplitude counts differ");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  require(dt > 0.0, ErrorKind::InvalidArgument, "sample times must increase");
  for (std::size_t k = 1; k < times.size(); ++k)
    require(std::abs(times[k] - times[k - 1] - dt) <= 1e-9 * dt, ErrorKind::InvalidArgument,
            "sample times must be uniformly spaced");
  const GridSpec grid(times.size(), times.front(), times.front() + static_cast<double>(times.size()) * dt);
  return SignalRecord(grid, std::move(amplitudes));
}

ProbabilityDensity SignalRecord::time_density() const {
  RVec p(amplitudes_.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(amplitudes_[k]);
  return ProbabilityDensity::line(times_, std::move(p));
}

GridPureState SignalRecord::as_wavefunction() const { return GridPureState(times_, amplitudes_); }

FrequencySpectrum SignalRecord::spectrum() const {
  // With hbar = 1/(2 pi) the momentum transform is integral a(t) exp(-2 pi i p t) dt = A(-p).
  const GridPureState m = to_momentum(as_wavefunction(), kSignalHbar);
  const std::size_t n = m.grid().size();
  FrequencySpectrum out;
  out.df = m.grid().dx();
  out.frequencies.resize(n);
  out.amplitudes.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.frequencies[k] = -m.grid().x(n - 1 - k);
    out.amplitudes[k] = m.amplitudes()[n - 1 - k];
  }
  return out;
}

ProbabilityDensity SignalRecord::frequency_density() const {
  const FrequencySpectrum s = spectrum();
  RVec p(s.amplitudes.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(s.amplitudes[k]);
  const double f0 = s.frequencies.front();
  const GridSpec grid(p.size(), f0, f0 + static_cast<double>(p.size()) * s.df);
  return ProbabilityDensity::line(grid, std::move(p));
}

double SignalRecord::parseval_error() const {
  const FrequencySpectrum s = spectrum();
  return std::abs(norm_squared(s.amplitudes, s.df) - 1.0);
}

InstantaneousFrequency instantaneous_frequency(const SignalRecord& signal) {
  const CVec& a = signal.amplitudes();
  // Real and imaginary parts are differentiated separately, so a real signal gives exactly zero.
  RVec re(a.size()), im(a.size()), p(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    re[k] = a[k].real();
    im[k] = a[k].imag();
    p[k] = std::norm(a[k]);
  }
  const RVec dre = fft::derivative(std::span<const double>(re), signal.times());
  const RVec dim = fft::derivative(std::span<const double>(im), signal.times());
  const double dt = signal.times().dx();
  InstantaneousFrequency out;
  out.retained = density_mask(p, dt, &out.masked_mass);
  out.values.assign(a.size(), 0.0);
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!out.retained[k]) continue;
    const double f = (re[k] * dim[k] - im[k] * dre[k]) / (2.0 * std::numbers::pi * p[k]);
    out.values[k] = f;
    m0 += p[k];
    m1 += p[k] * f;
    m2 += p[k] * f * f;
  }
  out.mean = m1 / m0;
  out.variance = m2 / m0 - out.mean * out.mean;
  return out;
}

RelationReport verify_time_frequency(const SignalRecord& signal, const RelationOptions& o) {
  RelationReport r;
  r.relation = "tf";
  r.state_id = o.state_id;
  const Sides s = sides(signal);
  const double tol = o.tolerances.grid;
  const double fluc = std::sqrt(std::max(0.0, s.var_f - s.inst.variance));
  r.left["delta_t"] = s.fisher.length.value_or(kInf);
  r.left["Delta_f_fluc"] = fluc;
  r.right["1/(4 pi)"] = kQuarterOverPi;
  r.rhs = kQuarterOverPi;
  r.lhs = s.fisher.length ? *s.fisher.length * fluc : kInf;
  r.provenance["grid"] = grid_block(signal.times());
  r.provenance["convention"] = "A(f) = integral a(t) exp(+2 pi i f t) dt, so <f> = -<f_inst>";
  r.provenance["var_f"] = s.var_f;
  r.provenance["var_f_inst"] = s.inst.variance;
  r.provenance["mean_f"] = s.mean_f;
  r.provenance["mean_f_inst"] = s.inst.mean;
  r.provenance["masked_mass"] = s.inst.masked_mass;
  r.provenance["parseval_error"] = signal.parseval_error();
  r.provenance["fisher_resolved"] = s.fisher.resolved;
  if (!s.fisher.resolved) r.flags.push_back("density-not-band-limited: run a refinement study");
  detail::settle_equality(r, tol);

  const double spread_f = std::sqrt(std::max(0.0, s.var_f));
  const double spread_t = std::sqrt(std::max(0.0, s.var_t));
  r.checks.push_back(
      detail::inequality_check("heisenberg: Delta f * Delta t >= 1/(4 pi)", spread_f * spread_t, kQuarterOverPi, tol));
  if (s.fisher.length)
    r.checks.push_back(detail::inequality_check("cramer-rao: Delta t >= delta_t", spread_t, *s.fisher.length, tol));
  r.checks.push_back(detail::inequality_check("Delta f >= Delta_f_fluc", spread_f, fluc, tol));
  // Means are compared on the scale of the frequency spread, so a zero mean is not a 0/0.
  const double scale = std::max({std::abs(s.mean_f), spread_f, 1e-300});
  const double mean_residual = std::abs(s.mean_f + s.inst.mean) / scale;
  r.checks.push_back(LinkCheck{"convention: <f> = -<f_inst>", s.mean_f, -s.inst.mean, true, mean_residual, tol,
                               mean_residual <= tol});
  return r;
}

RelationReport verify_time_frequency(const SignalFactory& factory, const GridSpec& times, const RelationOptions& o,
                                     int refinements) {
  RelationReport base = verify_time_frequency(factory(times), o);
  if (base.provenance.value("fisher_resolved", true) || refinements < 1) return base;
  RVec fisher, spread;
  std::vector<nlohmann::ordered_json> grids;
  GridSpec g = times;
  for (int level = 0; level <= refinements; ++level, g = g.refined()) {
    const SignalRecord s = factory(g);
    fisher.push_back(fisher_length(s.time_density()).length.value_or(kInf));
    spread.push_back(std::sqrt(std::max(0.0, covariance(s.frequency_density())(0, 0))));
    grids.push_back(grid_block(g));
  }
  const std::size_t last = fisher.size() - 1;
  const double ratio = fisher[last] / fisher[last - 1];
  const double growth = spread[last] / spread[last - 1];
  const bool vanishing = ratio < kDiscontinuityRatio;
  const bool divergent = monotone_growth(spread);
  base.provenance["refinement_grids"] = grids;
  base.provenance["delta_t_trace"] = fisher;
  base.provenance["Delta_f_trace"] = spread;
  base.provenance["fisher_refinement_ratio"] = ratio;
  base.provenance["Delta_f_growth_ratio"] = growth;
  base.left["delta_t"] = fisher[last];
  base.left["Delta_f"] = spread[last];
  base.lhs = kInf;
  base.residual = kInf;
  if (vanishing) base.flags.push_back("delta_t: zero-by-discontinuity");
  if (divergent) base.flags.push_back("Delta_f: divergent under refinement");
  if (!vanishing && !divergent) base.flags.push_back("unresolved density without a refinement trend");
  base.verdict = vanishing && divergent ? Verdict::FlaggedInfinite : Verdict::Violated;
  if (base.verdict == Verdict::FlaggedInfinite)
    base.flags.push_back("conclusion: Delta f is infinite in the continuum");
  return base;
}

SignalRecord read_signal_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> column;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw ParseError(line_no == 0 ? 1 : line_no, 0, "missing header with columns t, re, im");
  const auto header = split(line);
  for (std::size_t c = 0; c < header.size(); ++c) column[trim(header[c])] = c;
  for (const char* name : {"t", "re", "im"})
    if (!column.count(name)) throw ParseError(line_no, 0, std::string("header lacks column '") + name + "'");
  const std::size_t need = std::max({column["t"], column["re"], column["im"]}) + 1;

  RVec times;
  CVec values;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() < need)
      throw ParseError(line_no, 0, "expected at least " + std::to_string(need) + " columns");
    // Column offsets of each cell, for error positions.
    std::vector<std::size_t> offset(cells.size(), 1);
    for (std::size_t c = 1; c < cells.size(); ++c) offset[c] = offset[c - 1] + cells[c - 1].size() + 1;
    auto number = [&](const char* name) {
      const std::size_t c = column[name];
      const std::string cell = trim(cells[c]);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw ParseError(line_no, offset[c], std::string("bad number in column '") + name + "': '" + cell + "'");
      return v;
    };
    times.push_back(number("t"));
    values.emplace_back(number("re"), number("im"));
  }
  return SignalRecord::from_samples(times, std::move(values));
}

}  // namespace eur
