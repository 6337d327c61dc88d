#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>

#include "eur/grid.hpp"
#include "eur/state.hpp"

namespace eur {

/// Sign s in <phi|l> = (2 pi)^{-1/2} exp(s i l phi). The rotator phase ket is
/// sum_j exp(-i j phi)|j>, so s = +1; the photon-number phase ket is
/// sum_n exp(+i n phi)|n>, so s = -1.
enum class PhaseConvention : int { Rotator = 1, Photon = -1 };

/// <phi_k|A|phi_k> at phi_k = 2 pi k / m for an operator given by its matrix
/// over consecutive levels starting at `first_level`. Exact for any m: the
/// quadratic form is a trigonometric polynomial evaluated by one DFT.
CVec phase_quadratic_form(const Eigen::MatrixXcd& a, int first_level, std::size_t m, PhaseConvention convention);

/// Same as above, differentiated once with respect to phi.
CVec phase_quadratic_form_derivative(const Eigen::MatrixXcd& a, int first_level, std::size_t m,
                                     PhaseConvention convention);

/// Amplitude (2 pi)^{-1/2} sum_l c_l exp(s i l phi_k) at phi_k = 2 pi k / m.
CVec phase_amplitude(std::span<const Complex> coefficients, int first_level, std::size_t m,
                     PhaseConvention convention);

/// Number of phase samples that resolves a d-level state comfortably.
std::size_t default_phase_points(std::size_t dimension);

/// |f(phi)|^2 for a rotator state on m phase samples.
ProbabilityDensity phase_density(const PeriodicState& state, std::size_t m);

/// <phi|rho|phi> for the canonical (Susskind-Glogower) phase POM. Only the
/// physical block n >= 0 contributes unless `extended` is set, in which case
/// the orthogonal extended phase kets over every stored level are used.
ProbabilityDensity phase_density(const FockState& state, std::size_t m, bool extended = false);

/// Diagonal operator sum_l w(l)|l><l| applied on the left of rho: (W rho)_{ab} = w(l_a) rho_ab.
Eigen::MatrixXcd left_multiply_levels(const LevelState& state, double scale);

}  // namespace eur
