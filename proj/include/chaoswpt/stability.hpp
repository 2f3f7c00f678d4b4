#pragma once

// Equilibria and local stability of the scaled Lorenz system and the Henon map.

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "chaoswpt/dynamics.hpp"

namespace chaoswpt {

using Matrix3 = std::array<std::array<double, 3>, 3>;

template <class State>
struct EquilibriumSet {
    std::vector<State> points;
    bool exists_nontrivial = false;
};

/// Origin first, then P1 (positive x, y) and P2 when r > 1.
[[nodiscard]] EquilibriumSet<State3> lorenz_equilibria(const LorenzParams& p, const ScalingFactors& e);

/// Analytic Jacobian of the scaled Lorenz right-hand side at s.
[[nodiscard]] Matrix3 lorenz_jacobian(const State3& s, const LorenzParams& p, const ScalingFactors& e);

/// Monic cubic lambda^3 + a2 lambda^2 + a1 lambda + a0 shared by the
/// Jacobians at both nontrivial equilibria.
struct CharPoly {
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;

    [[nodiscard]] std::complex<double> operator()(std::complex<double> lambda) const noexcept {
        return ((lambda + a2) * lambda + a1) * lambda + a0;
    }
    [[nodiscard]] std::array<std::complex<double>, 3> roots() const;
};

[[nodiscard]] CharPoly characteristic_poly(const LorenzParams& p);

/// Roots of a monic real cubic. One real root is obtained in closed form and
/// Newton-polished; the remaining pair comes from the deflated quadratic.
[[nodiscard]] std::array<std::complex<double>, 3> cubic_roots(double a2, double a1, double a0);

struct OpenInterval {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] constexpr bool contains(double v) const noexcept { return lower < v && v < upper; }
};

/// Hurwitz matrix of a monic cubic: [[a2, a0, 0], [1, a1, 0], [0, a2, a0]].
[[nodiscard]] Matrix3 hurwitz_matrix(const CharPoly& poly);

/// Determinants of the 1x1, 2x2 and 3x3 leading principal submatrices.
[[nodiscard]] std::array<double, 3> leading_principal_minors(const Matrix3& m);

struct StabilityVerdict {
    /// minors all positive, sigma > beta + 1, and r inside r_interval.
    bool stable = false;
    /// (1, sigma (sigma + beta + 3) / (sigma - beta - 1)); absent when sigma <= beta + 1.
    std::optional<OpenInterval> r_interval;
    std::array<double, 3> hurwitz_minors{};
    bool sigma_gt_beta_plus_1 = false;

    /// The bare Hurwitz test: all leading minors strictly positive.
    [[nodiscard]] bool minors_positive() const noexcept {
        return hurwitz_minors[0] > 0.0 && hurwitz_minors[1] > 0.0 && hurwitz_minors[2] > 0.0;
    }

    /// Throws UndefinedIntervalError when sigma <= beta + 1.
    [[nodiscard]] const OpenInterval& require_interval() const;
};

/// Stability of the nontrivial equilibria P1/P2. The verdict does not depend
/// on the scaling factors.
[[nodiscard]] StabilityVerdict hurwitz_stable(const LorenzParams& p);

/// Upper end of the stable r range for fixed sigma, beta. Throws
/// UndefinedIntervalError when sigma <= beta + 1.
[[nodiscard]] double stable_r_upper_bound(double sigma, double beta);

/// Phi = (delta - 1 + sqrt((1 - delta)^2 + 4 gamma)) / (2 gamma).
/// Throws ComplexFixedPointError for a negative discriminant.
[[nodiscard]] double henon_phi(const HenonParams& p);

/// The single fixed point (Phi, delta Phi).
[[nodiscard]] EquilibriumSet<State2> henon_equilibrium(const HenonParams& p);

struct HenonStabilityVerdict {
    bool stable = false;
    /// (-(1 - delta)^2 / 4, 3 (1 - delta)^2 / 4)
    OpenInterval gamma_interval;
    bool delta_in_unit_interval = false;
    bool gamma_nonzero = false;
};

[[nodiscard]] HenonStabilityVerdict henon_stable(const HenonParams& p);

/// Spectral radius of the map Jacobian [[-2 gamma x, 1], [delta, 0]] at the
/// fixed point. Cross-check for henon_stable.
[[nodiscard]] double henon_spectral_radius(const HenonParams& p);

struct StabilityScanRow {
    double sigma = 0.0;
    double beta = 0.0;
    double r = 0.0;
    StabilityVerdict verdict;
};

/// Verdicts over the cartesian product sigma x beta x r, r varying fastest.
[[nodiscard]] std::vector<StabilityScanRow> stability_scan(std::span<const double> sigmas,
                                                           std::span<const double> betas,
                                                           std::span<const double> rs);

/// CSV `sigma,beta,r,stable,minor1,minor2,minor3`.
void write_stability_scan_csv(std::ostream& os, std::span<const StabilityScanRow> rows);

}  // namespace chaoswpt
