#include "chaoswpt/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "chaoswpt/csv.hpp"
#include "chaoswpt/stability.hpp"

namespace chaoswpt {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidArgument(what);
}

bool valid_interval(const Interval& iv) { return std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi; }

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double draw(std::mt19937_64& gen, const Interval& iv) { return iv.lo + (iv.hi - iv.lo) * uniform01(gen); }

struct RunOutcome {
    bool diverged = false;
    double m2 = 0.0;
    double m4 = 0.0;
    std::optional<double> papr_db;
    std::optional<double> convergence_time;
};

template <class State>
RunOutcome summarize(std::span<const State> samples, double dt, const EnsembleConfig& cfg, bool stable) {
    RunOutcome out;
    const std::size_t n = samples.size();
    std::size_t start = transient_cutoff_for(n, cfg.transient_fraction);
    const auto steady = detect_steady_state(samples, cfg.steady_state_tol);
    if (steady) {
        out.convergence_time = static_cast<double>(*steady) * dt;
        if (cfg.use_detected_steady_state && *steady < start) start = *steady;
    }
    const auto window = samples.subspan(start);
    const Moments m = sample_moments(window, Axis::x);
    out.m2 = m.m2;
    out.m4 = m.m4;

    const std::size_t papr_start = papr_window_start(n, start, stable);
    std::vector<double> xs;
    xs.reserve(n - papr_start);
    for (std::size_t i = papr_start; i < n; ++i) xs.push_back(samples[i].x);
    try {
        out.papr_db = chaoswpt::papr_db(xs);
    } catch (const DegenerateSignalError&) {
        out.papr_db.reset();
    }
    return out;
}

unsigned resolve_workers(unsigned requested, std::size_t n) {
    unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(n, 1)));
}

// Runs `body(index, buffer)` for every index on a pool of workers. Each
// worker owns one buffer; results land in per-index slots so the outcome is
// independent of scheduling.
template <class State, class Body>
std::vector<RunOutcome> parallel_runs(std::size_t n, unsigned workers, Body body) {
    std::vector<RunOutcome> results(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        std::vector<State> buffer;
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                results[i] = body(i, buffer);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

MeanSE mean_se(const std::vector<double>& v) {
    MeanSE out;
    out.count = v.size();
    if (v.empty()) return out;
    double sum = 0.0;
    for (double x : v) sum += x;
    out.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - out.mean) * (x - out.mean);
        const double var = ss / static_cast<double>(v.size() - 1);
        out.se = std::sqrt(var / static_cast<double>(v.size()));
    }
    return out;
}

EnsembleResult aggregate(const std::vector<RunOutcome>& runs, bool stable) {
    EnsembleResult res;
    res.n_realizations = runs.size();
    res.stable = stable;

    std::vector<double> m2s, m4s, paprs, times;
    for (const auto& run : runs) {
        if (run.diverged) {
            ++res.n_diverged;
            continue;
        }
        m2s.push_back(run.m2);
        m4s.push_back(run.m4);
        if (run.papr_db) paprs.push_back(*run.papr_db);
        if (run.convergence_time) times.push_back(*run.convergence_time);
    }
    res.m2 = mean_se(m2s);
    res.m4 = mean_se(m4s);
    res.papr_db = mean_se(paprs);
    if (m2s.size() > 1) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m2s.size(); ++i) acc += (m2s[i] - res.m2.mean) * (m4s[i] - res.m4.mean);
        res.cov_m2_m4 = acc / static_cast<double>(m2s.size() - 1);
    }
    res.convergence.fraction_converged =
        runs.empty() ? 0.0 : static_cast<double>(times.size()) / static_cast<double>(runs.size());
    if (!times.empty()) res.convergence.mean_convergence_time = mean_se(times).mean;
    return res;
}

template <std::size_t N>
bool all_degenerate(const std::array<Interval, N>& box) {
    return std::all_of(box.begin(), box.end(), [](const Interval& iv) { return iv.degenerate(); });
}

template <class State>
std::optional<std::size_t> detect_impl(std::span<const State> samples, double tol) {
    const std::size_t n = samples.size();
    if (n == 0) throw InvalidArgument("steady-state detection needs a nonempty trajectory");
    require(tol > 0.0, "steady-state tolerance must be positive");
    const std::size_t min_window = std::max<std::size_t>(1, (n + 9) / 10);
    const std::size_t last_start = n - min_window;

    State lo = samples[n - 1];
    State hi = samples[n - 1];
    std::size_t first = 0;
    for (std::size_t k = n; k-- > 0;) {
        const State& s = samples[k];
        double spread = 0.0;
        if constexpr (std::is_same_v<State, State3>) {
            lo = {std::fmin(lo.x, s.x), std::fmin(lo.y, s.y), std::fmin(lo.z, s.z)};
            hi = {std::fmax(hi.x, s.x), std::fmax(hi.y, s.y), std::fmax(hi.z, s.z)};
            spread = std::fmax(hi.x - lo.x, std::fmax(hi.y - lo.y, hi.z - lo.z));
        } else {
            lo = {std::fmin(lo.x, s.x), std::fmin(lo.y, s.y)};
            hi = {std::fmax(hi.x, s.x), std::fmax(hi.y, s.y)};
            spread = std::fmax(hi.x - lo.x, hi.y - lo.y);
        }
        if (!(spread < tol)) {
            first = k + 1;
            break;
        }
    }
    if (first > last_start) return std::nullopt;
    return first;
}

}  // namespace

void EnsembleConfig::validate() const {
    require(n_realizations >= 1, "ensemble needs at least one realization");
    for (const auto& iv : init_box) require(valid_interval(iv), "lorenz init box needs lo <= hi on every axis");
    for (const auto& iv : henon_init_box) require(valid_interval(iv), "henon init box needs lo <= hi on every axis");
    require(std::isfinite(dt) && dt > 0.0, "ensemble dt must be positive");
    require(std::isfinite(horizon) && horizon >= dt, "ensemble horizon must be at least dt");
    require(henon_steps >= 1, "henon steps must be positive");
    require(std::isfinite(steady_state_tol) && steady_state_tol > 0.0, "steady-state tolerance must be positive");
    require(transient_fraction >= 0.0 && transient_fraction < 1.0, "transient fraction must lie in [0, 1)");
    require(std::isfinite(divergence_bound) && divergence_bound > 0.0, "divergence bound must be positive");
}

IntegrationOptions EnsembleConfig::integration() const {
    return {dt, horizon, divergence_bound, transient_fraction};
}

std::mt19937_64 realization_engine(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t key = splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::optional<std::size_t> detect_steady_state(std::span<const State3> samples, double tol) {
    return detect_impl(samples, tol);
}

std::optional<std::size_t> detect_steady_state(std::span<const State2> samples, double tol) {
    return detect_impl(samples, tol);
}

std::optional<MeanSE> EnsembleResult::eta(const HarvestCoefficients& c, const FadingMoments& f) const {
    if (m2.count == 0) return std::nullopt;
    const double a = f.m2 * c.rho1;
    const double b = f.m4 * c.rho2;
    MeanSE out;
    out.count = m2.count;
    out.mean = a * m2.mean + b * m4.mean;
    const auto n = static_cast<double>(m2.count);
    const double var = a * a * m2.se * m2.se * n + b * b * m4.se * m4.se * n + 2.0 * a * b * cov_m2_m4;
    out.se = std::sqrt(std::max(var, 0.0) / n);
    return out;
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg, const LorenzParams& p, const ScalingFactors& e) {
    cfg.validate();
    p.validate();
    e.validate();
    const bool stable = hurwitz_stable(p).stable;
    const IntegrationOptions opts = cfg.integration();
    const std::size_t n = all_degenerate(cfg.init_box) ? 1 : cfg.n_realizations;

    auto runs = parallel_runs<State3>(n, resolve_workers(cfg.workers, n), [&](std::size_t i, std::vector<State3>& buf) {
        auto gen = realization_engine(cfg.seed, i);
        const State3 origin{draw(gen, cfg.init_box[0]), draw(gen, cfg.init_box[1]), draw(gen, cfg.init_box[2])};
        try {
            integrate_lorenz_into(buf, scale_state(origin, e), p, e, opts);
        } catch (const DivergenceError&) {
            RunOutcome diverged;
            diverged.diverged = true;
            return diverged;
        }
        return summarize<State3>(buf, opts.dt, cfg, stable);
    });
    return aggregate(runs, stable);
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg, const HenonParams& p) {
    cfg.validate();
    p.validate();
    const bool stable = henon_stable(p).stable;
    const std::size_t n = all_degenerate(cfg.henon_init_box) ? 1 : cfg.n_realizations;

    auto runs = parallel_runs<State2>(n, resolve_workers(cfg.workers, n), [&](std::size_t i, std::vector<State2>& buf) {
        auto gen = realization_engine(cfg.seed, i);
        const State2 origin{draw(gen, cfg.henon_init_box[0]), draw(gen, cfg.henon_init_box[1])};
        try {
            iterate_henon_into(buf, origin, p, cfg.henon_steps, cfg.divergence_bound);
        } catch (const DivergenceError&) {
            RunOutcome diverged;
            diverged.diverged = true;
            return diverged;
        }
        return summarize<State2>(buf, 1.0, cfg, stable);
    });
    return aggregate(runs, stable);
}

std::string_view to_string(SystemKind k) noexcept {
    switch (k) {
        case SystemKind::lorenz: return "lorenz";
        case SystemKind::henon: return "henon";
        case SystemKind::multisine: return "multisine";
    }
    return "lorenz";
}

std::string_view to_string(SweepParameter p) noexcept {
    switch (p) {
        case SweepParameter::r: return "r";
        case SweepParameter::eps: return "eps";
        case SweepParameter::pt_dbm: return "pt_dbm";
        case SweepParameter::gamma: return "gamma";
        case SweepParameter::delta: return "delta";
        case SweepParameter::n_tones: return "n_tones";
        case SweepParameter::sigma: return "sigma";
    }
    return "r";
}

std::optional<SystemKind> parse_system_kind(std::string_view s) noexcept {
    for (auto k : {SystemKind::lorenz, SystemKind::henon, SystemKind::multisine}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view s) noexcept {
    for (auto p : {SweepParameter::r, SweepParameter::eps, SweepParameter::pt_dbm, SweepParameter::gamma,
                   SweepParameter::delta, SweepParameter::n_tones, SweepParameter::sigma}) {
        if (to_string(p) == s) return p;
    }
    return std::nullopt;
}

namespace {

bool applicable(SystemKind system, SweepParameter p) {
    if (p == SweepParameter::pt_dbm) return true;
    switch (system) {
        case SystemKind::lorenz:
            return p == SweepParameter::r || p == SweepParameter::sigma || p == SweepParameter::eps;
        case SystemKind::henon: return p == SweepParameter::gamma || p == SweepParameter::delta;
        case SystemKind::multisine: return p == SweepParameter::n_tones;
    }
    return false;
}

bool strictly_monotone(const std::vector<double>& v) {
    if (v.size() < 2) return true;
    const bool up = v[1] > v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
    }
    return true;
}

}  // namespace

void SweepSpec::validate() const {
    if (!applicable(fixed.system, parameter)) {
        throw InvalidSweepError("sweep parameter '" + std::string(to_string(parameter)) + "' does not apply to system '" +
                                std::string(to_string(fixed.system)) + "'");
    }
    if (values.empty()) throw InvalidSweepError("sweep values must be nonempty");
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
        throw InvalidSweepError("sweep values must be finite");
    }
    if (!strictly_monotone(values)) throw InvalidSweepError("sweep values must be strictly monotone");
    if (parameter == SweepParameter::n_tones) {
        for (double v : values) {
            if (v < 1.0 || v != std::floor(v)) throw InvalidSweepError("n_tones values must be positive integers");
        }
    }
}

SystemConfig apply_sweep_value(const SystemConfig& fixed, SweepParameter parameter, double value) {
    SystemConfig cfg = fixed;
    switch (parameter) {
        case SweepParameter::r: cfg.lorenz.r = value; break;
        case SweepParameter::sigma: cfg.lorenz.sigma = value; break;
        case SweepParameter::eps: cfg.scaling = ScalingFactors::uniform(value); break;
        case SweepParameter::pt_dbm: cfg.link.pt_dbm = value; break;
        case SweepParameter::gamma: cfg.henon.gamma = value; break;
        case SweepParameter::delta: cfg.henon.delta = value; break;
        case SweepParameter::n_tones: cfg.n_tones = static_cast<std::size_t>(value); break;
    }
    return cfg;
}

namespace {

SweepPoint evaluate_with(const SystemConfig& cfg, const std::optional<EnsembleResult>& cached) {
    SweepPoint pt;
    pt.config = cfg;
    HarvestReport& rep = pt.report;
    rep.system = std::string(to_string(cfg.system));
    rep.pt_dbm = cfg.link.pt_dbm;
    const HarvestCoefficients c = coefficients(cfg.link, cfg.rectenna);
    cfg.fading.validate();

    std::optional<Moments> analytic_moments;
    switch (cfg.system) {
        case SystemKind::lorenz: {
            rep.r_or_gamma = cfg.lorenz.r;
            rep.eps = cfg.scaling.eps_x;
            rep.stable = hurwitz_stable(cfg.lorenz).stable;
            if (rep.stable) {
                rep.eta_analytic = eta_scaled_lorenz(cfg.lorenz, cfg.scaling, c, cfg.fading);
                analytic_moments = lorenz_steady_moments(cfg.lorenz, cfg.scaling);
            }
            pt.ensemble = cached ? *cached : run_ensemble(cfg.ensemble, cfg.lorenz, cfg.scaling);
            break;
        }
        case SystemKind::henon: {
            rep.r_or_gamma = cfg.henon.gamma;
            rep.delta = cfg.henon.delta;
            rep.stable = henon_stable(cfg.henon).stable;
            if (rep.stable) {
                rep.eta_analytic = eta_henon(cfg.henon, c, cfg.fading);
                const double phi = henon_phi(cfg.henon);
                analytic_moments = Moments{phi * phi, phi * phi * phi * phi};
            }
            pt.ensemble = cached ? *cached : run_ensemble(cfg.ensemble, cfg.henon);
            break;
        }
        case SystemKind::multisine: {
            rep.r_or_gamma = static_cast<double>(cfg.n_tones);
            rep.stable = true;
            const Moments m = multisine_moments(cfg.n_tones);
            analytic_moments = m;
            rep.eta_analytic = dc_from_moments(m.m2, m.m4, c, cfg.fading);
            rep.papr_db = papr_db(multisine_samples(cfg.n_tones));
            break;
        }
    }

    if (pt.ensemble) {
        const EnsembleResult& ens = *pt.ensemble;
        if (const auto eta = ens.eta(c, cfg.fading)) {
            rep.eta_empirical = eta->mean;
            rep.m2_emp = ens.m2.mean;
            rep.m4_emp = ens.m4.mean;
        }
        if (ens.papr_db.count > 0) rep.papr_db = ens.papr_db.mean;
    }
    if (analytic_moments) {
        rep.saturation_warning = saturation_warning(analytic_moments->m2, analytic_moments->m4, c);
    } else if (rep.m2_emp) {
        rep.saturation_warning = saturation_warning(*rep.m2_emp, *rep.m4_emp, c);
    }
    return pt;
}

}  // namespace

SweepPoint evaluate(const SystemConfig& cfg) { return evaluate_with(cfg, std::nullopt); }

std::vector<SweepPoint> sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepPoint> out;
    out.reserve(spec.values.size());
    // Transmit power does not enter the dynamics; one ensemble serves every value.
    std::optional<EnsembleResult> shared;
    for (double v : spec.values) {
        SweepPoint pt = evaluate_with(apply_sweep_value(spec.fixed, spec.parameter, v), shared);
        if (spec.parameter == SweepParameter::pt_dbm && !shared) shared = pt.ensemble;
        pt.value = v;
        out.push_back(std::move(pt));
    }
    return out;
}

std::string sweep_csv_header() {
    return report_csv_header() +
           ",sigma,m2_mean,m2_se,m4_mean,m4_se,eta_empirical_se,papr_db_se,fraction_converged,"
           "mean_convergence_time,n_diverged,saturation_warning";
}

std::string sweep_csv_row(const SweepPoint& p) {
    std::string row = report_csv_row(p.report);
    const auto field = [&row](const std::string& s) {
        row += ',';
        row += s;
    };
    field(p.config.system == SystemKind::lorenz ? csv::format_double(p.config.lorenz.sigma) : std::string{});
    if (p.ensemble) {
        const EnsembleResult& e = *p.ensemble;
        const HarvestCoefficients c = coefficients(p.config.link, p.config.rectenna);
        const auto eta = e.eta(c, p.config.fading);
        field(e.m2.count ? csv::format_double(e.m2.mean) : std::string{});
        field(e.m2.count ? csv::format_double(e.m2.se) : std::string{});
        field(e.m4.count ? csv::format_double(e.m4.mean) : std::string{});
        field(e.m4.count ? csv::format_double(e.m4.se) : std::string{});
        field(eta ? csv::format_double(eta->se) : std::string{});
        field(e.papr_db.count ? csv::format_double(e.papr_db.se) : std::string{});
        field(csv::format_double(e.convergence.fraction_converged));
        field(csv::format_optional(e.convergence.mean_convergence_time));
        field(std::to_string(e.n_diverged));
    } else {
        for (int i = 0; i < 9; ++i) field(std::string{});
    }
    field(std::string(csv::format_bool(p.report.saturation_warning)));
    return row;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points) {
    os << sweep_csv_header() << '\n';
    for (const auto& p : points) os << sweep_csv_row(p) << '\n';
}

}  // namespace chaoswpt
