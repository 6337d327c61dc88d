#include "eur/mub.hpp"

#include <cmath>
#include <numbers>

#include "eur/error.hpp"

namespace eur {

bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

MubSet mub_construct(std::size_t d) {
  require(is_prime(d), ErrorKind::NotPrime, std::to_string(d) + " is not prime");
  const auto n = static_cast<Eigen::Index>(d);
  MubSet set{d, {Eigen::MatrixXcd::Identity(n, n)}};
  const double r = 1.0 / std::sqrt(static_cast<double>(d));
  if (d == 2) {
    const Complex i(0.0, 1.0);
    Eigen::MatrixXcd x(2, 2), y(2, 2);
    x << r, r, r, -r;
    y << r, r, r * i, -r * i;
    set.bases.push_back(x);
    set.bases.push_back(y);
    return set;
  }
  for (std::size_t b = 0; b < d; ++b) {
    Eigen::MatrixXcd basis(n, n);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t e = (b * k * k + a * k) % d;
        basis(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) =
            r * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(d));
      }
    }
    set.bases.push_back(std::move(basis));
  }
  return set;
}

ComplementarityReport complementarity_check(const std::vector<Eigen::MatrixXcd>& bases) {
  require(!bases.empty(), ErrorKind::InvalidArgument, "empty basis set");
  const auto n = bases.front().rows();
  ComplementarityReport report;
  for (const auto& b : bases) {
    require(b.rows() == n && b.cols() == n, ErrorKind::InvalidArgument, "bases must be square and of equal size");
    report.orthonormality_error = std::max(
        report.orthonormality_error, (b.adjoint() * b - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  const double target = 1.0 / static_cast<double>(n);
  for (std::size_t a = 0; a < bases.size(); ++a) {
    for (std::size_t c = a + 1; c < bases.size(); ++c) {
      const Eigen::MatrixXd overlaps = (bases[a].adjoint() * bases[c]).cwiseAbs2();
      report.overlap_deviation = std::max(report.overlap_deviation, (overlaps.array() - target).abs().maxCoeff());
    }
  }
  report.complementary = report.orthonormality_error < kComplementarityTolerance &&
                         report.overlap_deviation < kComplementarityTolerance;
  return report;
}

MubSet make_mub_set(std::vector<Eigen::MatrixXcd> bases) {
  const auto report = complementarity_check(bases);
  require(report.complementary, ErrorKind::NotComplementary,
          "overlap deviation " + std::to_string(report.overlap_deviation) + ", orthonormality error " +
              std::to_string(report.orthonormality_error));
  const auto d = static_cast<std::size_t>(bases.front().rows());
  return MubSet{d, std::move(bases)};
}

ProbabilityDensity measurement_distribution(const FiniteState& state, const Eigen::MatrixXcd& basis) {
  require(basis.rows() == static_cast<Eigen::Index>(state.dimension()), ErrorKind::InvalidArgument,
          "basis and state dimensions differ");
  const Eigen::MatrixXcd in_basis = basis.adjoint() * state.matrix() * basis;
  RVec p(static_cast<std::size_t>(basis.cols()));
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(0.0, in_basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
  return ProbabilityDensity::discrete(std::move(p));
}

}  // namespace eur
