#include "eur/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "eur/constants.hpp"
#include "eur/error.hpp"

namespace eur {

void Constants::validate() const {
  require(hbar > 0 && mass > 0 && omega > 0 && moment_of_inertia > 0, ErrorKind::InvalidArgument,
          "constants must be strictly positive");
  require(std::isfinite(hbar) && std::isfinite(mass) && std::isfinite(omega) &&
              std::isfinite(moment_of_inertia),
          ErrorKind::InvalidArgument, "constants must be finite");
}

GridSpec::GridSpec(std::size_t n_points, double x_min, double x_max)
    : n_(n_points), x_min_(x_min), x_max_(x_max) {
  require(n_points >= 8 && n_points % 2 == 0, ErrorKind::InvalidArgument,
          "grid needs an even number of points >= 8, got " + std::to_string(n_points));
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max, ErrorKind::InvalidArgument,
          "grid bounds must satisfy x_min < x_max");
}

GridSpec GridSpec::centered(std::size_t n_points, double length) {
  return GridSpec(n_points, -0.5 * length, 0.5 * length);
}

RVec GridSpec::points() const {
  RVec out(n_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = x(k);
  return out;
}

double GridSpec::conjugate_spacing(double hbar) const noexcept {
  return 2.0 * std::numbers::pi * hbar / (static_cast<double>(n_) * dx());
}

GridSpec GridSpec::conjugate(double hbar) const {
  const double dp = conjugate_spacing(hbar);
  const double half = 0.5 * static_cast<double>(n_) * dp;
  return GridSpec(n_, -half, half);
}

RVec GridSpec::wavenumbers() const {
  RVec k(n_);
  const double dk = 2.0 * std::numbers::pi / length();
  for (std::size_t j = 0; j < n_; ++j) {
    const auto sj = static_cast<long>(j);
    const auto sn = static_cast<long>(n_);
    k[j] = dk * static_cast<double>(sj < sn / 2 ? sj : sj - sn);
  }
  return k;
}

}  // namespace eur
