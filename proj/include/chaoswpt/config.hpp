#pragma once

// Experiment configuration: a JSON document whose every field is optional.
// Missing fields take the documented defaults; validation reports every
// violated constraint at once.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chaoswpt/montecarlo.hpp"

namespace chaoswpt {

enum class ExperimentKind { trajectory, stability_scan, fig2, fig3, fig4, sweep };

[[nodiscard]] std::string_view to_string(ExperimentKind k) noexcept;
[[nodiscard]] std::optional<ExperimentKind> parse_experiment_kind(std::string_view s) noexcept;

struct TrajectorySection {
    State3 initial_point{1.0, -5.0, 20.0};
    State2 henon_initial_point{0.0, 0.0};
    double dt = 1e-3;
    double horizon = 50.0;
    std::size_t henon_steps = 500;
};

struct StabilityScanSection {
    std::vector<double> sigma{10.0};
    std::vector<double> beta{8.0 / 3.0};
    std::vector<double> r{24.7, 24.8};
};

struct SweepSection {
    SweepParameter parameter = SweepParameter::r;
    std::vector<double> values{5.0, 10.0, 15.0, 20.0};
};

/// DC versus r for each scaling factor, stable region.
struct Fig2Section {
    std::vector<double> r{2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 22.0};
    std::vector<double> eps{1.0, 2.0, 6.0};
    /// When set, every run starts here (unscaled coordinates) instead of
    /// sampling the ensemble box.
    std::optional<State3> initial_point = State3{4.0, -10.0, 0.6};
};

/// PAPR and DC versus r in the unstable region, for scaled and unscaled
/// transmitters and several sigma values.
struct Fig3Section {
    std::vector<double> r{26.0, 28.0, 30.0, 32.0, 34.0, 36.0, 38.0, 40.0};
    std::vector<double> eps{1.0, 6.0};
    std::vector<double> sigma{10.0, 14.0};
    std::optional<State3> initial_point = State3{0.1, 10.0, 0.1};
};

/// DC versus transmit power for Lorenz, Henon and multisine waveforms.
struct Fig4Section {
    std::vector<double> pt_dbm{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
    std::vector<double> lorenz_r{12.0, 20.0};
    std::vector<HenonParams> henon{{0.2, 0.1}, {0.001, 0.9}};
    std::vector<std::size_t> n_tones{1, 2, 4, 8};
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::fig2;
    SystemConfig system;
    std::filesystem::path output_dir = "out";
    TrajectorySection trajectory;
    StabilityScanSection stability_scan;
    SweepSection sweep;
    Fig2Section fig2;
    Fig3Section fig3;
    Fig4Section fig4;
};

/// Command-line values that take precedence over the document.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::size_t> realizations;
};

/// Parses and validates a configuration document. Empty or whitespace-only
/// text yields the defaults. Throws ConfigError naming every offending field.
[[nodiscard]] ExperimentConfig validate_config(std::string_view text, const ConfigOverrides& overrides = {});

/// Full configuration, defaults included, as a JSON document that
/// validate_config accepts.
[[nodiscard]] std::string config_to_text(const ExperimentConfig& cfg);

/// Run manifest: the configuration echo plus a `manifest` block listing the
/// produced files. validate_config reads it back as the same configuration.
[[nodiscard]] std::string manifest_text(const ExperimentConfig& cfg, const std::vector<std::string>& outputs);

}  // namespace chaoswpt
