#pragma once

// Link budget, fourth-order rectenna model, closed-form harvested DC and
// waveform metrics (PAPR, multisine baseline).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaoswpt/dynamics.hpp"

namespace chaoswpt {

struct LinkBudget {
    double pt_dbm = 30.0;
    double d_m = 20.0;
    double alpha = 4.0;
    /// Receiver noise variance. Carried for completeness; never enters the
    /// harvested-DC model.
    std::optional<double> noise_variance;

    void validate() const;
    /// Transmit power in watts, 10^((dBm - 30) / 10).
    [[nodiscard]] double pt_watts() const noexcept;
};

struct RectennaParams {
    double k2 = 0.0034;
    double k4 = 0.3829;
    double r_ant = 50.0;

    void validate() const;
};

struct HarvestCoefficients {
    double rho1 = 0.0;  ///< d^-alpha k2 R_ant P_t
    double rho2 = 0.0;  ///< d^-2alpha k4 R_ant^2 P_t^2
};

/// Raw second and fourth moments of the channel gain; (1, 1) means no fading.
struct FadingMoments {
    double m2 = 1.0;
    double m4 = 1.0;

    void validate() const;
};

[[nodiscard]] double dbm_to_watts(double dbm) noexcept;

[[nodiscard]] HarvestCoefficients coefficients(const LinkBudget& lb, const RectennaParams& rp);

/// rho1 m2 + rho2 m4 for a waveform with the given second and fourth moments.
/// Throws MomentInconsistencyError when m4 < m2^2 (beyond rounding).
[[nodiscard]] double dc_from_moments(double m2, double m4, const HarvestCoefficients& c);

/// Same with the fading moments multiplying the two terms.
[[nodiscard]] double dc_from_moments(double m2, double m4, const HarvestCoefficients& c, const FadingMoments& f);

/// True when the fourth-order term exceeds ten times the second-order term,
/// i.e. the operating point is likely outside the small-signal diode model.
[[nodiscard]] bool saturation_warning(double m2, double m4, const HarvestCoefficients& c) noexcept;

/// Steady-state DC of the scaled Lorenz transmitter. Throws
/// UnstableRegimeError outside the Hurwitz-stable region.
[[nodiscard]] double eta_scaled_lorenz(const LorenzParams& p, const ScalingFactors& e, const HarvestCoefficients& c,
                                       const FadingMoments& f = {});

/// eta_scaled_lorenz with unit scaling.
[[nodiscard]] double eta_ideal_lorenz(const LorenzParams& p, const HarvestCoefficients& c, const FadingMoments& f = {});

/// rho1 Phi^2 + rho2 Phi^4 at the Henon fixed point. Throws
/// UnstableRegimeError or ComplexFixedPointError.
[[nodiscard]] double eta_henon(const HenonParams& p, const HarvestCoefficients& c, const FadingMoments& f = {});

/// sqrt(beta (r - 1)) > Phi. Both systems must be stable.
[[nodiscard]] bool lorenz_beats_henon(const LorenzParams& pl, const HenonParams& ph);

/// Steady-state moments of x_sc at P1/P2: beta (r-1) / eps_x^2 and its square.
struct Moments {
    double m2 = 0.0;
    double m4 = 0.0;
};

[[nodiscard]] Moments lorenz_steady_moments(const LorenzParams& p, const ScalingFactors& e);

/// Moments of one component of a sample window.
[[nodiscard]] Moments sample_moments(std::span<const State3> samples, Axis axis);
[[nodiscard]] Moments sample_moments(std::span<const State2> samples, Axis axis);
[[nodiscard]] Moments sample_moments(std::span<const double> samples);

inline constexpr double kMinSignalPower = 1e-30;

/// 10 log10(max x^2 / mean x^2) over the samples. Throws
/// DegenerateSignalError when fewer than two samples are given or the mean
/// power is below kMinSignalPower.
[[nodiscard]] double papr_db(std::span<const double> samples);

/// PAPR of one component over the post-transient window of a trajectory.
[[nodiscard]] double papr(const LorenzTrajectory& tr, Axis axis);
[[nodiscard]] double papr(const HenonTrajectory& tr, Axis axis);

/// Start index of the PAPR window: the transient cutoff for stable runs, the
/// first 10% discarded otherwise.
[[nodiscard]] std::size_t papr_window_start(std::size_t n_samples, std::size_t transient_cutoff, bool stable);

inline constexpr std::size_t kMultisineSamplesPerPeriod = 10000;

/// One period of s(t) = sqrt(2/N) sum_{n=1..N} cos(2 pi n t), t in [0, 1).
[[nodiscard]] std::vector<double> multisine_samples(std::size_t n_tones,
                                                    std::size_t samples_per_period = kMultisineSamplesPerPeriod);

/// Time-averaged m2 and m4 of the unit-power zero-phase N-tone multisine.
[[nodiscard]] Moments multisine_moments(std::size_t n_tones,
                                        std::size_t samples_per_period = kMultisineSamplesPerPeriod);

/// One configuration's analytic and empirical harvest figures.
struct HarvestReport {
    std::string system;                 ///< "lorenz", "henon" or "multisine"
    double r_or_gamma = 0.0;            ///< r, gamma, or tone count
    std::optional<double> delta;        ///< Henon only
    std::optional<double> eps;          ///< Lorenz only (uniform scaling)
    double pt_dbm = 0.0;
    std::optional<double> eta_analytic; ///< absent outside the stable region
    std::optional<double> eta_empirical;
    std::optional<double> m2_emp;
    std::optional<double> m4_emp;
    std::optional<double> papr_db;
    bool stable = false;
    bool saturation_warning = false;
};

/// `system,r_or_gamma,delta,eps,pt_dbm,eta_analytic,eta_empirical,papr_db,stable`
[[nodiscard]] std::string report_csv_header();
[[nodiscard]] std::string report_csv_row(const HarvestReport& r);

}  // namespace chaoswpt
