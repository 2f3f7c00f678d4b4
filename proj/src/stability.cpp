#include "chaoswpt/stability.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "chaoswpt/csv.hpp"

namespace chaoswpt {

EquilibriumSet<State3> lorenz_equilibria(const LorenzParams& p, const ScalingFactors& e) {
    p.validate();
    e.validate();
    EquilibriumSet<State3> set;
    set.points.push_back({0.0, 0.0, 0.0});
    if (p.r > 1.0) {
        const double amp = std::sqrt(p.beta * (p.r - 1.0));
        const double z = (p.r - 1.0) / e.eps_z;
        set.points.push_back({amp / e.eps_x, amp / e.eps_y, z});
        set.points.push_back({-amp / e.eps_x, -amp / e.eps_y, z});
        set.exists_nontrivial = true;
    }
    return set;
}

Matrix3 lorenz_jacobian(const State3& s, const LorenzParams& p, const ScalingFactors& e) {
    p.validate();
    e.validate();
    const double x_over_y = e.eps_x / e.eps_y;
    const double xy_over_z = e.eps_x * e.eps_y / e.eps_z;
    return Matrix3{{
        {-p.sigma, p.sigma * e.eps_y / e.eps_x, 0.0},
        {x_over_y * (p.r - e.eps_z * s.z), -1.0, -x_over_y * e.eps_z * s.x},
        {xy_over_z * s.y, xy_over_z * s.x, -p.beta},
    }};
}

CharPoly characteristic_poly(const LorenzParams& p) {
    p.validate();
    return {p.sigma + p.beta + 1.0, p.beta * (p.sigma + p.r), 2.0 * p.sigma * p.beta * (p.r - 1.0)};
}

std::array<std::complex<double>, 3> CharPoly::roots() const { return cubic_roots(a2, a1, a0); }

namespace {

double real_cubic_root(double a2, double a1, double a0) {
    // x = t - a2/3 gives t^3 + p t + q = 0.
    const double shift = a2 / 3.0;
    const double p = a1 - a2 * shift;
    const double q = 2.0 * shift * shift * shift - a1 * shift + a0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;

    double t;
    if (disc > 0.0) {
        const double u = std::cbrt(-0.5 * q - std::copysign(std::sqrt(disc), q));
        t = u == 0.0 ? 0.0 : u - p / (3.0 * u);
    } else if (p < 0.0) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        t = m * std::cos(std::acos(arg) / 3.0);
    } else {
        t = std::cbrt(-q);
    }

    double x = t - shift;
    for (int iter = 0; iter < 4; ++iter) {
        const double f = ((x + a2) * x + a1) * x + a0;
        const double df = (3.0 * x + 2.0 * a2) * x + a1;
        if (df == 0.0) break;
        const double step = f / df;
        if (!std::isfinite(step)) break;
        x -= step;
        if (std::fabs(step) <= 1e-16 * std::fmax(1.0, std::fabs(x))) break;
    }
    return x;
}

}  // namespace

std::array<std::complex<double>, 3> cubic_roots(double a2, double a1, double a0) {
    const double x1 = real_cubic_root(a2, a1, a0);
    // Synthetic division: (lambda - x1)(lambda^2 + b1 lambda + b0).
    const double b1 = a2 + x1;
    const double b0 = a1 + x1 * b1;
    const double disc = b1 * b1 - 4.0 * b0;

    std::complex<double> x2;
    std::complex<double> x3;
    if (disc >= 0.0) {
        const double w = -0.5 * (b1 + std::copysign(std::sqrt(disc), b1));
        x2 = w;
        x3 = w != 0.0 ? b0 / w : 0.0;
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        x2 = {-0.5 * b1, im};
        x3 = {-0.5 * b1, -im};
    }
    return {std::complex<double>(x1), x2, x3};
}

Matrix3 hurwitz_matrix(const CharPoly& poly) {
    return Matrix3{{
        {poly.a2, poly.a0, 0.0},
        {1.0, poly.a1, 0.0},
        {0.0, poly.a2, poly.a0},
    }};
}

std::array<double, 3> leading_principal_minors(const Matrix3& m) {
    const double d1 = m[0][0];
    const double d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return {d1, d2, d3};
}

const OpenInterval& StabilityVerdict::require_interval() const {
    if (!r_interval) throw UndefinedIntervalError("sigma <= beta + 1: stable r interval has no finite upper bound");
    return *r_interval;
}

double stable_r_upper_bound(double sigma, double beta) {
    if (!(sigma > beta + 1.0)) {
        throw UndefinedIntervalError("sigma <= beta + 1: stable r interval has no finite upper bound");
    }
    return sigma * (sigma + beta + 3.0) / (sigma - beta - 1.0);
}

StabilityVerdict hurwitz_stable(const LorenzParams& p) {
    p.validate();
    StabilityVerdict v;
    v.hurwitz_minors = leading_principal_minors(hurwitz_matrix(characteristic_poly(p)));
    v.sigma_gt_beta_plus_1 = p.sigma > p.beta + 1.0;
    if (v.sigma_gt_beta_plus_1) v.r_interval = OpenInterval{1.0, stable_r_upper_bound(p.sigma, p.beta)};
    v.stable = v.minors_positive() && v.sigma_gt_beta_plus_1 && v.r_interval->contains(p.r);
    return v;
}

double henon_phi(const HenonParams& p) {
    p.validate();
    const double one_minus = 1.0 - p.delta;
    const double disc = one_minus * one_minus + 4.0 * p.gamma;
    if (disc < 0.0) throw ComplexFixedPointError("henon fixed point is complex: (1 - delta)^2 + 4 gamma < 0");
    return (p.delta - 1.0 + std::sqrt(disc)) / (2.0 * p.gamma);
}

EquilibriumSet<State2> henon_equilibrium(const HenonParams& p) {
    const double phi = henon_phi(p);
    return {{State2{phi, p.delta * phi}}, true};
}

HenonStabilityVerdict henon_stable(const HenonParams& p) {
    HenonStabilityVerdict v;
    const double sq = (1.0 - p.delta) * (1.0 - p.delta);
    v.gamma_interval = {-0.25 * sq, 0.75 * sq};
    v.delta_in_unit_interval = 0.0 < p.delta && p.delta < 1.0;
    v.gamma_nonzero = p.gamma != 0.0;
    v.stable = std::isfinite(p.gamma) && v.delta_in_unit_interval && v.gamma_nonzero &&
               v.gamma_interval.contains(p.gamma);
    return v;
}

double henon_spectral_radius(const HenonParams& p) {
    // Characteristic polynomial of [[-2 gamma x, 1], [delta, 0]]: lambda^2 + 2 gamma x lambda - delta.
    const double b = 2.0 * p.gamma * henon_phi(p);
    const std::complex<double> disc = std::sqrt(std::complex<double>(b * b + 4.0 * p.delta));
    const std::complex<double> l1 = 0.5 * (-b + disc);
    const std::complex<double> l2 = 0.5 * (-b - disc);
    return std::max(std::abs(l1), std::abs(l2));
}

std::vector<StabilityScanRow> stability_scan(std::span<const double> sigmas, std::span<const double> betas,
                                             std::span<const double> rs) {
    std::vector<StabilityScanRow> rows;
    rows.reserve(sigmas.size() * betas.size() * rs.size());
    for (double sigma : sigmas) {
        for (double beta : betas) {
            for (double r : rs) rows.push_back({sigma, beta, r, hurwitz_stable({sigma, r, beta})});
        }
    }
    return rows;
}

void write_stability_scan_csv(std::ostream& os, std::span<const StabilityScanRow> rows) {
    os << "sigma,beta,r,stable,minor1,minor2,minor3\n";
    for (const auto& row : rows) {
        os << csv::format_double(row.sigma) << ',' << csv::format_double(row.beta) << ','
           << csv::format_double(row.r) << ',' << csv::format_bool(row.verdict.stable) << ','
           << csv::format_double(row.verdict.hurwitz_minors[0]) << ','
           << csv::format_double(row.verdict.hurwitz_minors[1]) << ','
           << csv::format_double(row.verdict.hurwitz_minors[2]) << '\n';
    }
}

}  // namespace chaoswpt
