#include "eur/random_states.hpp"

#include <cmath>

namespace eur {

GridPureState SmoothStateSpec::sample(const GridSpec& grid) const {
  CVec psi(grid.size(), Complex(0.0));
  for (const auto& t : terms) {
    for (std::size_t k = 0; k < psi.size(); ++k) {
      const double u = grid.x(k) - t.center;
      psi[k] += t.coefficient * std::polar(std::exp(-u * u / (4.0 * t.width * t.width)), t.wavenumber * grid.x(k));
    }
  }
  return normalize(GridPureState(grid, std::move(psi)));
}

GridSpec suite_grid(std::size_t n_points) { return GridSpec::centered(n_points, 60.0); }

SmoothStateSpec random_smooth_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 4);
  std::uniform_real_distribution<double> center(-5.0, 5.0);
  std::uniform_real_distribution<double> width(0.5, 1.5);
  std::uniform_real_distribution<double> wavenumber(-3.0, 3.0);
  std::normal_distribution<double> normal;
  SmoothStateSpec spec;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    GaussianTerm t;
    t.coefficient = Complex(normal(rng), normal(rng));
    t.center = center(rng);
    t.width = width(rng);
    t.wavenumber = wavenumber(rng);
    spec.terms.push_back(t);
  }
  return spec;
}

GridMixedState random_two_gaussian_mixture(const GridSpec& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> width(0.5, 1.0);
  std::uniform_real_distribution<double> separation(1.5, 3.0);
  std::uniform_real_distribution<double> wavenumber(-1.0, 1.0);
  const double w = width(rng);
  const double d = separation(rng) * w;
  std::vector<GridPureState> parts;
  for (double c : {-d, d}) {
    SmoothStateSpec spec;
    spec.terms.push_back({Complex(1.0), c, w, wavenumber(rng)});
    parts.push_back(spec.sample(grid));
  }
  const double weights[] = {0.5, 0.5};
  return GridMixedState::mixture(weights, parts);
}

CVec random_pure_amplitudes(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVec a(d);
  double n2 = 0.0;
  for (auto& z : a) {
    z = Complex(normal(rng), normal(rng));
    n2 += std::norm(z);
  }
  for (auto& z : a) z /= std::sqrt(n2);
  return a;
}

Eigen::MatrixXcd random_density_matrix(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

Eigen::MatrixXcd random_hermitian(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  return 0.5 * (g + g.adjoint());
}

}  // namespace eur
