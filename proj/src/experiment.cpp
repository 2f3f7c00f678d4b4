#include "chaoswpt/experiment.hpp"

#include <sstream>
#include <string>

#include "chaoswpt/csv.hpp"
#include "chaoswpt/stability.hpp"

namespace chaoswpt {
namespace {

namespace fs = std::filesystem;

void pin_initial_point(EnsembleConfig& en, const std::optional<State3>& p) {
    if (!p) return;
    en.init_box = {{{p->x, p->x}, {p->y, p->y}, {p->z, p->z}}};
}

void append_sweep(std::vector<SweepPoint>& out, const SweepSpec& spec) {
    auto points = sweep(spec);
    out.insert(out.end(), std::make_move_iterator(points.begin()), std::make_move_iterator(points.end()));
}

std::string sweep_table(const std::vector<SweepPoint>& points) {
    std::ostringstream os;
    write_sweep_csv(os, points);
    return os.str();
}

std::string run_trajectory(const ExperimentConfig& cfg) {
    const SystemConfig& sys = cfg.system;
    const auto& tr = cfg.trajectory;
    std::ostringstream os;
    switch (sys.system) {
        case SystemKind::lorenz: {
            IntegrationOptions opts;
            opts.dt = tr.dt;
            opts.horizon = tr.horizon;
            opts.divergence_bound = sys.ensemble.divergence_bound;
            opts.transient_fraction = sys.ensemble.transient_fraction;
            const auto traj =
                integrate_lorenz(scale_state(tr.initial_point, sys.scaling), sys.lorenz, sys.scaling, opts);
            write_trajectory_csv(os, traj);
            break;
        }
        case SystemKind::henon: {
            const auto traj = iterate_henon(tr.henon_initial_point, sys.henon, tr.henon_steps,
                                            sys.ensemble.divergence_bound, sys.ensemble.transient_fraction);
            write_trajectory_csv(os, traj);
            break;
        }
        case SystemKind::multisine: {
            const auto s = multisine_samples(sys.n_tones);
            os << "t,s\n";
            for (std::size_t k = 0; k < s.size(); ++k) {
                os << csv::format_double(static_cast<double>(k) / static_cast<double>(s.size())) << ','
                   << csv::format_double(s[k]) << '\n';
            }
            break;
        }
    }
    return os.str();
}

std::string run_stability_scan(const ExperimentConfig& cfg) {
    const auto rows = stability_scan(cfg.stability_scan.sigma, cfg.stability_scan.beta, cfg.stability_scan.r);
    std::ostringstream os;
    write_stability_scan_csv(os, rows);
    return os.str();
}

std::string run_fig2(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> points;
    for (double eps : cfg.fig2.eps) {
        SweepSpec spec;
        spec.parameter = SweepParameter::r;
        spec.values = cfg.fig2.r;
        spec.fixed = cfg.system;
        spec.fixed.system = SystemKind::lorenz;
        spec.fixed.scaling = ScalingFactors::uniform(eps);
        pin_initial_point(spec.fixed.ensemble, cfg.fig2.initial_point);
        append_sweep(points, spec);
    }
    return sweep_table(points);
}

std::string run_fig3(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> points;
    for (double sigma : cfg.fig3.sigma) {
        for (double eps : cfg.fig3.eps) {
            SweepSpec spec;
            spec.parameter = SweepParameter::r;
            spec.values = cfg.fig3.r;
            spec.fixed = cfg.system;
            spec.fixed.system = SystemKind::lorenz;
            spec.fixed.lorenz.sigma = sigma;
            spec.fixed.scaling = ScalingFactors::uniform(eps);
            pin_initial_point(spec.fixed.ensemble, cfg.fig3.initial_point);
            append_sweep(points, spec);
        }
    }
    return sweep_table(points);
}

std::string run_fig4(const ExperimentConfig& cfg) {
    std::vector<SweepPoint> points;
    SweepSpec spec;
    spec.parameter = SweepParameter::pt_dbm;
    spec.values = cfg.fig4.pt_dbm;

    for (double r : cfg.fig4.lorenz_r) {
        spec.fixed = cfg.system;
        spec.fixed.system = SystemKind::lorenz;
        spec.fixed.scaling = ScalingFactors{};
        spec.fixed.lorenz.r = r;
        append_sweep(points, spec);
    }
    for (const auto& h : cfg.fig4.henon) {
        spec.fixed = cfg.system;
        spec.fixed.system = SystemKind::henon;
        spec.fixed.henon = h;
        append_sweep(points, spec);
    }
    for (std::size_t n : cfg.fig4.n_tones) {
        spec.fixed = cfg.system;
        spec.fixed.system = SystemKind::multisine;
        spec.fixed.n_tones = n;
        append_sweep(points, spec);
    }
    return sweep_table(points);
}

std::string run_sweep(const ExperimentConfig& cfg) {
    return sweep_table(sweep(SweepSpec{cfg.sweep.parameter, cfg.sweep.values, cfg.system}));
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    std::string stem;
    std::string body;
    switch (cfg.experiment) {
        case ExperimentKind::trajectory: stem = "trajectory"; body = run_trajectory(cfg); break;
        case ExperimentKind::stability_scan: stem = "stability_scan"; body = run_stability_scan(cfg); break;
        case ExperimentKind::fig2: stem = "fig2"; body = run_fig2(cfg); break;
        case ExperimentKind::fig3: stem = "fig3"; body = run_fig3(cfg); break;
        case ExperimentKind::fig4: stem = "fig4"; body = run_fig4(cfg); break;
        case ExperimentKind::sweep: stem = "sweep"; body = run_sweep(cfg); break;
    }

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

    const fs::path csv_path = cfg.output_dir / (stem + ".csv");
    const fs::path manifest_path = cfg.output_dir / (stem + ".manifest.json");
    csv::write_file_atomic(csv_path, body);
    csv::write_file_atomic(manifest_path, manifest_text(cfg, {csv_path.filename().string()}));
    return {{csv_path, manifest_path}};
}

}  // namespace chaoswpt
