#include "chaoswpt/harvest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chaoswpt/csv.hpp"
#include "chaoswpt/stability.hpp"

namespace chaoswpt {
namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require(bool ok, const char* what) {
    if (!ok) throw InvalidArgument(what);
}

}  // namespace

double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void LinkBudget::validate() const {
    require(std::isfinite(pt_dbm), "transmit power must be finite");
    require(positive_finite(d_m), "distance must be positive");
    require(std::isfinite(alpha) && alpha > 0.0, "pathloss exponent must be positive");
    if (noise_variance) require(std::isfinite(*noise_variance) && *noise_variance >= 0.0, "noise variance must be >= 0");
}

double LinkBudget::pt_watts() const noexcept { return dbm_to_watts(pt_dbm); }

void RectennaParams::validate() const {
    require(positive_finite(k2), "k2 must be positive");
    require(positive_finite(k4), "k4 must be positive");
    require(positive_finite(r_ant), "antenna resistance must be positive");
}

void FadingMoments::validate() const {
    require(std::isfinite(m2) && m2 >= 0.0, "fading m2 must be >= 0");
    require(std::isfinite(m4) && m4 >= m2 * m2 * (1.0 - 1e-12), "fading m4 must be >= m2^2");
}

HarvestCoefficients coefficients(const LinkBudget& lb, const RectennaParams& rp) {
    lb.validate();
    rp.validate();
    const double pt = lb.pt_watts();
    const double loss = std::pow(lb.d_m, -lb.alpha);
    return {loss * rp.k2 * rp.r_ant * pt, loss * loss * rp.k4 * rp.r_ant * rp.r_ant * pt * pt};
}

double dc_from_moments(double m2, double m4, const HarvestCoefficients& c) {
    if (!(m2 >= 0.0) || !std::isfinite(m2) || !std::isfinite(m4)) {
        throw InvalidArgument("moments must be finite and m2 >= 0");
    }
    // Relative slack for constant signals where m4 == m2^2 up to rounding.
    if (m4 < m2 * m2 * (1.0 - 1e-12)) throw MomentInconsistencyError("fourth moment is below the squared second moment");
    return c.rho1 * m2 + c.rho2 * m4;
}

double dc_from_moments(double m2, double m4, const HarvestCoefficients& c, const FadingMoments& f) {
    f.validate();
    return dc_from_moments(f.m2 * m2, f.m4 * m4, HarvestCoefficients{c.rho1, c.rho2});
}

bool saturation_warning(double m2, double m4, const HarvestCoefficients& c) noexcept {
    return c.rho2 * m4 > 10.0 * c.rho1 * m2;
}

Moments lorenz_steady_moments(const LorenzParams& p, const ScalingFactors& e) {
    p.validate();
    e.validate();
    const double m2 = p.beta * (p.r - 1.0) / (e.eps_x * e.eps_x);
    return {m2, m2 * m2};
}

double eta_scaled_lorenz(const LorenzParams& p, const ScalingFactors& e, const HarvestCoefficients& c,
                         const FadingMoments& f) {
    if (!hurwitz_stable(p).stable) {
        throw UnstableRegimeError("closed-form DC requires a stable Lorenz configuration");
    }
    f.validate();
    e.validate();
    const double amp2 = p.beta * (p.r - 1.0);
    const double ex2 = e.eps_x * e.eps_x;
    return f.m2 * c.rho1 * amp2 / ex2 + f.m4 * c.rho2 * amp2 * amp2 / (ex2 * ex2);
}

double eta_ideal_lorenz(const LorenzParams& p, const HarvestCoefficients& c, const FadingMoments& f) {
    return eta_scaled_lorenz(p, ScalingFactors{}, c, f);
}

double eta_henon(const HenonParams& p, const HarvestCoefficients& c, const FadingMoments& f) {
    if (!henon_stable(p).stable) throw UnstableRegimeError("closed-form DC requires a stable Henon configuration");
    f.validate();
    const double phi = henon_phi(p);
    const double phi2 = phi * phi;
    return f.m2 * c.rho1 * phi2 + f.m4 * c.rho2 * phi2 * phi2;
}

bool lorenz_beats_henon(const LorenzParams& pl, const HenonParams& ph) {
    if (!hurwitz_stable(pl).stable) throw UnstableRegimeError("lorenz configuration is not stable");
    if (!henon_stable(ph).stable) throw UnstableRegimeError("henon configuration is not stable");
    return std::sqrt(pl.beta * (pl.r - 1.0)) > henon_phi(ph);
}

namespace {

template <class Range, class Get>
Moments accumulate_moments(const Range& samples, Get get) {
    if (samples.empty()) throw InvalidArgument("moments need at least one sample");
    double s2 = 0.0;
    double s4 = 0.0;
    for (const auto& s : samples) {
        const double v = get(s);
        const double v2 = v * v;
        s2 += v2;
        s4 += v2 * v2;
    }
    const auto n = static_cast<double>(samples.size());
    return {s2 / n, s4 / n};
}

template <class Range, class Get>
double papr_of(const Range& samples, Get get) {
    if (samples.size() < 2) throw DegenerateSignalError("PAPR needs at least two samples");
    double peak = 0.0;
    double sum = 0.0;
    for (const auto& s : samples) {
        const double v = get(s);
        const double p = v * v;
        peak = std::max(peak, p);
        sum += p;
    }
    const double mean = sum / static_cast<double>(samples.size());
    if (!(mean >= kMinSignalPower)) throw DegenerateSignalError("mean signal power is too small for PAPR");
    return 10.0 * std::log10(peak / mean);
}

}  // namespace

Moments sample_moments(std::span<const State3> samples, Axis axis) {
    return accumulate_moments(samples, [axis](const State3& s) { return component(s, axis); });
}

Moments sample_moments(std::span<const State2> samples, Axis axis) {
    if (axis == Axis::z) throw InvalidArgument("henon state has no z component");
    return accumulate_moments(samples, [axis](const State2& s) { return axis == Axis::x ? s.x : s.y; });
}

Moments sample_moments(std::span<const double> samples) {
    return accumulate_moments(samples, [](double v) { return v; });
}

double papr_db(std::span<const double> samples) {
    return papr_of(samples, [](double v) { return v; });
}

double papr(const LorenzTrajectory& tr, Axis axis) {
    return papr_of(tr.post_transient(), [axis](const State3& s) { return component(s, axis); });
}

double papr(const HenonTrajectory& tr, Axis axis) {
    if (axis == Axis::z) throw InvalidArgument("henon state has no z component");
    return papr_of(tr.post_transient(), [axis](const State2& s) { return axis == Axis::x ? s.x : s.y; });
}

std::size_t papr_window_start(std::size_t n_samples, std::size_t transient_cutoff, bool stable) {
    if (stable) return transient_cutoff;
    return transient_cutoff_for(n_samples, 0.1);
}

std::vector<double> multisine_samples(std::size_t n_tones, std::size_t samples_per_period) {
    require(n_tones >= 1, "multisine needs at least one tone");
    require(samples_per_period > 2 * n_tones, "multisine sampling must exceed twice the highest tone");
    const double amp = std::sqrt(2.0 / static_cast<double>(n_tones));
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> out(samples_per_period);
    for (std::size_t k = 0; k < samples_per_period; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(samples_per_period);
        double s = 0.0;
        for (std::size_t n = 1; n <= n_tones; ++n) s += std::cos(two_pi * static_cast<double>(n) * t);
        out[k] = amp * s;
    }
    return out;
}

Moments multisine_moments(std::size_t n_tones, std::size_t samples_per_period) {
    // s^4 is a trig polynomial of degree 4N, so the uniform rule over one
    // period is exact once samples_per_period > 4N.
    require(samples_per_period > 4 * n_tones, "multisine moment quadrature needs more than 4N samples per period");
    const auto s = multisine_samples(n_tones, samples_per_period);
    return sample_moments(s);
}

std::string report_csv_header() { return "system,r_or_gamma,delta,eps,pt_dbm,eta_analytic,eta_empirical,papr_db,stable"; }

std::string report_csv_row(const HarvestReport& r) {
    std::string row = r.system;
    row += ',';
    row += csv::format_double(r.r_or_gamma);
    row += ',';
    row += csv::format_optional(r.delta);
    row += ',';
    row += csv::format_optional(r.eps);
    row += ',';
    row += csv::format_double(r.pt_dbm);
    row += ',';
    row += csv::format_optional(r.eta_analytic);
    row += ',';
    row += csv::format_optional(r.eta_empirical);
    row += ',';
    row += csv::format_optional(r.papr_db);
    row += ',';
    row += csv::format_bool(r.stable);
    return row;
}

}  // namespace chaoswpt
