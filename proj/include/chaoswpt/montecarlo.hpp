#pragma once

// Ensemble runs over random initial points, steady-state detection and
// parameter sweeps pairing closed-form predictions with empirical estimates.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "chaoswpt/dynamics.hpp"
#include "chaoswpt/harvest.hpp"

namespace chaoswpt {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] constexpr bool degenerate() const noexcept { return lo == hi; }
};

struct EnsembleConfig {
    std::size_t n_realizations = 1000;
    std::uint64_t seed = 1;
    /// Uniform sampling box for Lorenz initial points (x, y, z).
    std::array<Interval, 3> init_box{{{-20.0, 20.0}, {-20.0, 20.0}, {0.0, 40.0}}};
    /// Uniform sampling box for Henon initial points (x, y).
    std::array<Interval, 2> henon_init_box{{{-0.5, 0.5}, {-0.5, 0.5}}};
    double dt = 1e-3;
    double horizon = 100.0;
    std::size_t henon_steps = 2000;
    double steady_state_tol = 1e-3;
    double transient_fraction = kDefaultTransientFraction;
    /// Start the moment window at the detected steady state when that comes
    /// before the fixed transient cutoff.
    bool use_detected_steady_state = false;
    double divergence_bound = kDefaultDivergenceBound;
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;

    void validate() const;
    [[nodiscard]] IntegrationOptions integration() const;
};

/// Engine for realization `index` of a run keyed by `seed`. Streams are
/// independent of evaluation order.
[[nodiscard]] std::mt19937_64 realization_engine(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
[[nodiscard]] double uniform01(std::mt19937_64& gen);

/// Smallest i such that every component varies by less than tol over
/// samples[i, end), with that window covering at least 10% of the samples.
[[nodiscard]] std::optional<std::size_t> detect_steady_state(std::span<const State3> samples, double tol);
[[nodiscard]] std::optional<std::size_t> detect_steady_state(std::span<const State2> samples, double tol);

template <class State>
[[nodiscard]] std::optional<std::size_t> detect_steady_state(const Trajectory<State>& tr, double tol) {
    return detect_steady_state(tr.samples(), tol);
}

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
    std::size_t count = 0;
};

struct ConvergenceStats {
    double fraction_converged = 0.0;
    std::optional<double> mean_convergence_time;
};

struct EnsembleResult {
    std::size_t n_realizations = 0;
    std::size_t n_diverged = 0;
    /// Post-transient moments of the x component, over non-diverged runs.
    MeanSE m2;
    MeanSE m4;
    /// Sample covariance of the per-run (m2, m4) pairs.
    double cov_m2_m4 = 0.0;
    MeanSE papr_db;
    ConvergenceStats convergence;
    bool stable = false;

    /// Empirical DC: mean and standard error of rho1 m2 + rho2 m4 per run.
    [[nodiscard]] std::optional<MeanSE> eta(const HarvestCoefficients& c, const FadingMoments& f = {}) const;
};

/// A box with every side degenerate holds one point; such runs use a single
/// realization since all would be identical.
[[nodiscard]] EnsembleResult run_ensemble(const EnsembleConfig& cfg, const LorenzParams& p, const ScalingFactors& e);
[[nodiscard]] EnsembleResult run_ensemble(const EnsembleConfig& cfg, const HenonParams& p);

enum class SystemKind { lorenz, henon, multisine };
enum class SweepParameter { r, eps, pt_dbm, gamma, delta, n_tones, sigma };

[[nodiscard]] std::string_view to_string(SystemKind k) noexcept;
[[nodiscard]] std::string_view to_string(SweepParameter p) noexcept;
[[nodiscard]] std::optional<SystemKind> parse_system_kind(std::string_view s) noexcept;
[[nodiscard]] std::optional<SweepParameter> parse_sweep_parameter(std::string_view s) noexcept;

/// Everything needed to evaluate one configuration of one system.
struct SystemConfig {
    SystemKind system = SystemKind::lorenz;
    LorenzParams lorenz;
    ScalingFactors scaling;
    HenonParams henon;
    std::size_t n_tones = 4;
    LinkBudget link;
    RectennaParams rectenna;
    FadingMoments fading;
    EnsembleConfig ensemble;
};

struct SweepSpec {
    SweepParameter parameter = SweepParameter::r;
    std::vector<double> values;
    SystemConfig fixed;

    /// Throws InvalidSweepError for an inapplicable parameter or values that
    /// are empty or not strictly monotone.
    void validate() const;
};

/// `fixed` with the swept parameter set to `value`.
[[nodiscard]] SystemConfig apply_sweep_value(const SystemConfig& fixed, SweepParameter parameter, double value);

struct SweepPoint {
    double value = 0.0;
    SystemConfig config;
    HarvestReport report;
    /// Absent for the deterministic multisine baseline.
    std::optional<EnsembleResult> ensemble;
};

/// Analytic prediction (when stable) paired with the ensemble estimate.
[[nodiscard]] SweepPoint evaluate(const SystemConfig& cfg);

/// One point per value, in the order given.
[[nodiscard]] std::vector<SweepPoint> sweep(const SweepSpec& spec);

/// HarvestReport columns followed by
/// `sigma,m2_mean,m2_se,m4_mean,m4_se,eta_empirical_se,papr_db_se,fraction_converged,mean_convergence_time,n_diverged,saturation_warning`.
[[nodiscard]] std::string sweep_csv_header();
[[nodiscard]] std::string sweep_csv_row(const SweepPoint& p);
void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points);

}  // namespace chaoswpt
