#pragma once

#include <filesystem>
#include <vector>

#include "chaoswpt/config.hpp"

namespace chaoswpt {

struct ExperimentOutput {
    /// CSV files followed by their manifests.
    std::vector<std::filesystem::path> files;
};

/// Runs the configured experiment and writes its CSV and manifest into
/// cfg.output_dir (created when missing).
///
///   trajectory      trajectory.csv       raw time series of the chosen system
///   stability-scan  stability_scan.csv   Hurwitz verdict per (sigma, beta, r)
///   fig2            fig2.csv             DC vs r per eps, analytic and empirical
///   fig3            fig3.csv             PAPR and DC vs r, unstable region
///   fig4            fig4.csv             DC vs transmit power per waveform
///   sweep           sweep.csv            one row per swept value
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

}  // namespace chaoswpt
