#include "chaoswpt/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "json.hpp"

namespace chaoswpt {

using nlohmann::json;

std::string_view to_string(ExperimentKind k) noexcept {
    switch (k) {
        case ExperimentKind::trajectory: return "trajectory";
        case ExperimentKind::stability_scan: return "stability-scan";
        case ExperimentKind::fig2: return "fig2";
        case ExperimentKind::fig3: return "fig3";
        case ExperimentKind::fig4: return "fig4";
        case ExperimentKind::sweep: return "sweep";
    }
    return "fig2";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view s) noexcept {
    for (auto k : {ExperimentKind::trajectory, ExperimentKind::stability_scan, ExperimentKind::fig2,
                   ExperimentKind::fig3, ExperimentKind::fig4, ExperimentKind::sweep}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

namespace {

// Reads fields out of a JSON object, recording type errors and unknown keys
// against a dotted path instead of stopping at the first one.
class Reader {
public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    void fail(const std::string& path, const std::string& what) { errors_.push_back(path + ": " + what); }

    // Returns the sub-object for `key` or nullptr when absent or not an object.
    const json* object(const json& parent, const std::string& key, const std::string& path) {
        auto it = parent.find(key);
        if (it == parent.end() || it->is_null()) return nullptr;
        if (!it->is_object()) {
            fail(path, "expected an object");
            return nullptr;
        }
        return &*it;
    }

    void known_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& prefix) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const bool ok = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; });
            if (!ok) fail(join(prefix, it.key()), "unknown key");
        }
    }

    void number(const json& obj, const char* key, double& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        if (!it->is_number()) return fail(join(prefix, key), "expected a number");
        out = it->get<double>();
    }

    void optional_number(const json& obj, const char* key, std::optional<double>& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        if (it->is_null()) {
            out.reset();
            return;
        }
        if (!it->is_number()) return fail(join(prefix, key), "expected a number or null");
        out = it->get<double>();
    }

    template <class Unsigned>
    void count(const json& obj, const char* key, Unsigned& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        if (!it->is_number_unsigned()) return fail(join(prefix, key), "expected a non-negative integer");
        out = it->get<Unsigned>();
    }

    void boolean(const json& obj, const char* key, bool& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        if (!it->is_boolean()) return fail(join(prefix, key), "expected true or false");
        out = it->get<bool>();
    }

    bool string(const json& obj, const char* key, std::string& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return false;
        if (!it->is_string()) {
            fail(join(prefix, key), "expected a string");
            return false;
        }
        out = it->get<std::string>();
        return true;
    }

    void numbers(const json& obj, const char* key, std::vector<double>& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        const auto path = join(prefix, key);
        if (!it->is_array()) return fail(path, "expected an array of numbers");
        std::vector<double> values;
        for (const auto& v : *it) {
            if (!v.is_number()) return fail(path, "expected an array of numbers");
            values.push_back(v.get<double>());
        }
        out = std::move(values);
    }

    void counts(const json& obj, const char* key, std::vector<std::size_t>& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        const auto path = join(prefix, key);
        if (!it->is_array()) return fail(path, "expected an array of positive integers");
        std::vector<std::size_t> values;
        for (const auto& v : *it) {
            if (!v.is_number_unsigned()) return fail(path, "expected an array of positive integers");
            values.push_back(v.get<std::size_t>());
        }
        out = std::move(values);
    }

    std::optional<std::vector<double>> fixed_array(const json& v, std::size_t n, const std::string& path) {
        if (!v.is_array() || v.size() != n) {
            fail(path, "expected an array of " + std::to_string(n) + " numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) {
                fail(path, "expected an array of " + std::to_string(n) + " numbers");
                return std::nullopt;
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    void point3(const json& obj, const char* key, State3& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        if (auto v = fixed_array(*it, 3, join(prefix, key))) out = {(*v)[0], (*v)[1], (*v)[2]};
    }

    void optional_point3(const json& obj, const char* key, std::optional<State3>& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        if (it->is_null()) {
            out.reset();
            return;
        }
        if (auto v = fixed_array(*it, 3, join(prefix, key))) out = State3{(*v)[0], (*v)[1], (*v)[2]};
    }

    void point2(const json& obj, const char* key, State2& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        if (auto v = fixed_array(*it, 2, join(prefix, key))) out = {(*v)[0], (*v)[1]};
    }

    template <std::size_t N>
    void box(const json& obj, const char* key, std::array<Interval, N>& out, const std::string& prefix) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        const auto path = join(prefix, key);
        if (!it->is_array() || it->size() != N) {
            return fail(path, "expected " + std::to_string(N) + " [lo, hi] pairs");
        }
        std::array<Interval, N> result{};
        for (std::size_t i = 0; i < N; ++i) {
            auto v = fixed_array((*it)[i], 2, path + "[" + std::to_string(i) + "]");
            if (!v) return;
            result[i] = {(*v)[0], (*v)[1]};
        }
        out = result;
    }

    static std::string join(const std::string& prefix, std::string_view key) {
        return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
    }

private:
    std::vector<std::string>& errors_;
};

class Checker {
public:
    explicit Checker(std::vector<std::string>& errors) : errors_(errors) {}

    void that(bool ok, const std::string& path, const std::string& what) {
        if (!ok) errors_.push_back(path + ": " + what);
    }
    void positive(double v, const std::string& path) { that(std::isfinite(v) && v > 0.0, path, "must be positive"); }
    void finite(double v, const std::string& path) { that(std::isfinite(v), path, "must be finite"); }
    void nonempty(bool empty, const std::string& path) { that(!empty, path, "must not be empty"); }

    void monotone(const std::vector<double>& v, const std::string& path) {
        nonempty(v.empty(), path);
        bool ok = std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
        if (v.size() >= 2) {
            const bool up = v[1] > v[0];
            for (std::size_t i = 1; i < v.size(); ++i) ok = ok && (up ? v[i] > v[i - 1] : v[i] < v[i - 1]);
        }
        that(ok, path, "values must be finite and strictly monotone");
    }

private:
    std::vector<std::string>& errors_;
};

void read_document(const json& doc, ExperimentConfig& cfg, Reader& rd) {
    rd.known_keys(doc,
                  {"experiment", "system", "output_dir", "lorenz", "scaling", "henon", "multisine", "link", "rectenna",
                   "fading", "ensemble", "trajectory", "stability_scan", "sweep", "fig2", "fig3", "fig4", "manifest"},
                  "");

    std::string text;
    if (rd.string(doc, "experiment", text, "")) {
        if (auto k = parse_experiment_kind(text)) {
            cfg.experiment = *k;
        } else {
            rd.fail("experiment", "unknown experiment '" + text +
                                      "' (expected trajectory, stability-scan, fig2, fig3, fig4 or sweep)");
        }
    }
    if (rd.string(doc, "system", text, "")) {
        if (auto k = parse_system_kind(text)) {
            cfg.system.system = *k;
        } else {
            rd.fail("system", "unknown system '" + text + "' (expected lorenz, henon or multisine)");
        }
    }
    if (rd.string(doc, "output_dir", text, "")) cfg.output_dir = text;

    SystemConfig& sys = cfg.system;
    if (const json* o = rd.object(doc, "lorenz", "lorenz")) {
        rd.known_keys(*o, {"sigma", "r", "beta"}, "lorenz");
        rd.number(*o, "sigma", sys.lorenz.sigma, "lorenz");
        rd.number(*o, "r", sys.lorenz.r, "lorenz");
        rd.number(*o, "beta", sys.lorenz.beta, "lorenz");
    }
    if (const json* o = rd.object(doc, "scaling", "scaling")) {
        rd.known_keys(*o, {"eps", "eps_x", "eps_y", "eps_z"}, "scaling");
        double eps = std::nan("");
        rd.number(*o, "eps", eps, "scaling");
        if (!std::isnan(eps)) sys.scaling = ScalingFactors::uniform(eps);
        rd.number(*o, "eps_x", sys.scaling.eps_x, "scaling");
        rd.number(*o, "eps_y", sys.scaling.eps_y, "scaling");
        rd.number(*o, "eps_z", sys.scaling.eps_z, "scaling");
    }
    if (const json* o = rd.object(doc, "henon", "henon")) {
        rd.known_keys(*o, {"gamma", "delta"}, "henon");
        rd.number(*o, "gamma", sys.henon.gamma, "henon");
        rd.number(*o, "delta", sys.henon.delta, "henon");
    }
    if (const json* o = rd.object(doc, "multisine", "multisine")) {
        rd.known_keys(*o, {"n_tones"}, "multisine");
        rd.count(*o, "n_tones", sys.n_tones, "multisine");
    }
    if (const json* o = rd.object(doc, "link", "link")) {
        rd.known_keys(*o, {"pt_dbm", "d_m", "alpha", "noise_variance"}, "link");
        rd.number(*o, "pt_dbm", sys.link.pt_dbm, "link");
        rd.number(*o, "d_m", sys.link.d_m, "link");
        rd.number(*o, "alpha", sys.link.alpha, "link");
        rd.optional_number(*o, "noise_variance", sys.link.noise_variance, "link");
    }
    if (const json* o = rd.object(doc, "rectenna", "rectenna")) {
        rd.known_keys(*o, {"k2", "k4", "r_ant"}, "rectenna");
        rd.number(*o, "k2", sys.rectenna.k2, "rectenna");
        rd.number(*o, "k4", sys.rectenna.k4, "rectenna");
        rd.number(*o, "r_ant", sys.rectenna.r_ant, "rectenna");
    }
    if (const json* o = rd.object(doc, "fading", "fading")) {
        rd.known_keys(*o, {"m2", "m4"}, "fading");
        rd.number(*o, "m2", sys.fading.m2, "fading");
        rd.number(*o, "m4", sys.fading.m4, "fading");
    }
    if (const json* o = rd.object(doc, "ensemble", "ensemble")) {
        const std::string p = "ensemble";
        EnsembleConfig& en = sys.ensemble;
        rd.known_keys(*o,
                      {"n_realizations", "seed", "init_box", "henon_init_box", "dt", "horizon", "henon_steps",
                       "steady_state_tol", "transient_fraction", "use_detected_steady_state", "divergence_bound",
                       "workers"},
                      p);
        rd.count(*o, "n_realizations", en.n_realizations, p);
        rd.count(*o, "seed", en.seed, p);
        rd.box(*o, "init_box", en.init_box, p);
        rd.box(*o, "henon_init_box", en.henon_init_box, p);
        rd.number(*o, "dt", en.dt, p);
        rd.number(*o, "horizon", en.horizon, p);
        rd.count(*o, "henon_steps", en.henon_steps, p);
        rd.number(*o, "steady_state_tol", en.steady_state_tol, p);
        rd.number(*o, "transient_fraction", en.transient_fraction, p);
        rd.boolean(*o, "use_detected_steady_state", en.use_detected_steady_state, p);
        rd.number(*o, "divergence_bound", en.divergence_bound, p);
        rd.count(*o, "workers", en.workers, p);
    }
    if (const json* o = rd.object(doc, "trajectory", "trajectory")) {
        const std::string p = "trajectory";
        rd.known_keys(*o, {"initial_point", "henon_initial_point", "dt", "horizon", "henon_steps"}, p);
        rd.point3(*o, "initial_point", cfg.trajectory.initial_point, p);
        rd.point2(*o, "henon_initial_point", cfg.trajectory.henon_initial_point, p);
        rd.number(*o, "dt", cfg.trajectory.dt, p);
        rd.number(*o, "horizon", cfg.trajectory.horizon, p);
        rd.count(*o, "henon_steps", cfg.trajectory.henon_steps, p);
    }
    if (const json* o = rd.object(doc, "stability_scan", "stability_scan")) {
        const std::string p = "stability_scan";
        rd.known_keys(*o, {"sigma", "beta", "r"}, p);
        rd.numbers(*o, "sigma", cfg.stability_scan.sigma, p);
        rd.numbers(*o, "beta", cfg.stability_scan.beta, p);
        rd.numbers(*o, "r", cfg.stability_scan.r, p);
    }
    if (const json* o = rd.object(doc, "sweep", "sweep")) {
        const std::string p = "sweep";
        rd.known_keys(*o, {"parameter", "values"}, p);
        if (rd.string(*o, "parameter", text, p)) {
            if (auto sp = parse_sweep_parameter(text)) {
                cfg.sweep.parameter = *sp;
            } else {
                rd.fail("sweep.parameter",
                        "unknown parameter '" + text + "' (expected r, eps, pt_dbm, gamma, delta, n_tones or sigma)");
            }
        }
        rd.numbers(*o, "values", cfg.sweep.values, p);
    }
    if (const json* o = rd.object(doc, "fig2", "fig2")) {
        rd.known_keys(*o, {"r", "eps", "initial_point"}, "fig2");
        rd.numbers(*o, "r", cfg.fig2.r, "fig2");
        rd.numbers(*o, "eps", cfg.fig2.eps, "fig2");
        rd.optional_point3(*o, "initial_point", cfg.fig2.initial_point, "fig2");
    }
    if (const json* o = rd.object(doc, "fig3", "fig3")) {
        rd.known_keys(*o, {"r", "eps", "sigma", "initial_point"}, "fig3");
        rd.numbers(*o, "r", cfg.fig3.r, "fig3");
        rd.numbers(*o, "eps", cfg.fig3.eps, "fig3");
        rd.numbers(*o, "sigma", cfg.fig3.sigma, "fig3");
        rd.optional_point3(*o, "initial_point", cfg.fig3.initial_point, "fig3");
    }
    if (const json* o = rd.object(doc, "fig4", "fig4")) {
        rd.known_keys(*o, {"pt_dbm", "lorenz_r", "henon", "n_tones"}, "fig4");
        rd.numbers(*o, "pt_dbm", cfg.fig4.pt_dbm, "fig4");
        rd.numbers(*o, "lorenz_r", cfg.fig4.lorenz_r, "fig4");
        rd.counts(*o, "n_tones", cfg.fig4.n_tones, "fig4");
        if (auto it = o->find("henon"); it != o->end()) {
            if (!it->is_array()) {
                rd.fail("fig4.henon", "expected an array of [gamma, delta] pairs");
            } else {
                std::vector<HenonParams> pairs;
                bool ok = true;
                for (std::size_t i = 0; i < it->size(); ++i) {
                    auto v = rd.fixed_array((*it)[i], 2, "fig4.henon[" + std::to_string(i) + "]");
                    if (!v) {
                        ok = false;
                        continue;
                    }
                    pairs.push_back({(*v)[0], (*v)[1]});
                }
                if (ok) cfg.fig4.henon = std::move(pairs);
            }
        }
    }
}

void check_lorenz(Checker& ck, const LorenzParams& p, const std::string& prefix) {
    ck.positive(p.sigma, prefix + ".sigma");
    ck.positive(p.r, prefix + ".r");
    ck.positive(p.beta, prefix + ".beta");
}

void check_box(Checker& ck, std::span<const Interval> box, const std::string& path) {
    for (std::size_t i = 0; i < box.size(); ++i) {
        const auto& iv = box[i];
        ck.that(std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi,
                path + "[" + std::to_string(i) + "]", "interval needs finite lo <= hi");
    }
}

void check(const ExperimentConfig& cfg, Checker& ck) {
    const SystemConfig& sys = cfg.system;
    check_lorenz(ck, sys.lorenz, "lorenz");
    ck.that(std::isfinite(sys.scaling.eps_x) && sys.scaling.eps_x >= 1.0, "scaling.eps_x", "must lie in [1, inf)");
    ck.that(std::isfinite(sys.scaling.eps_y) && sys.scaling.eps_y >= 1.0, "scaling.eps_y", "must lie in [1, inf)");
    ck.that(std::isfinite(sys.scaling.eps_z) && sys.scaling.eps_z >= 1.0, "scaling.eps_z", "must lie in [1, inf)");
    ck.that(std::isfinite(sys.henon.gamma) && sys.henon.gamma != 0.0, "henon.gamma", "must be finite and nonzero");
    ck.finite(sys.henon.delta, "henon.delta");
    ck.that(sys.n_tones >= 1, "multisine.n_tones", "must be at least 1");
    ck.finite(sys.link.pt_dbm, "link.pt_dbm");
    ck.positive(sys.link.d_m, "link.d_m");
    ck.positive(sys.link.alpha, "link.alpha");
    if (sys.link.noise_variance) {
        ck.that(std::isfinite(*sys.link.noise_variance) && *sys.link.noise_variance >= 0.0, "link.noise_variance",
                "must be >= 0");
    }
    ck.positive(sys.rectenna.k2, "rectenna.k2");
    ck.positive(sys.rectenna.k4, "rectenna.k4");
    ck.positive(sys.rectenna.r_ant, "rectenna.r_ant");
    ck.that(std::isfinite(sys.fading.m2) && sys.fading.m2 >= 0.0, "fading.m2", "must be >= 0");
    ck.that(std::isfinite(sys.fading.m4) && sys.fading.m4 >= sys.fading.m2 * sys.fading.m2 * (1.0 - 1e-12),
            "fading.m4", "must be >= fading.m2^2");

    const EnsembleConfig& en = sys.ensemble;
    ck.that(en.n_realizations >= 1, "ensemble.n_realizations", "must be at least 1");
    check_box(ck, en.init_box, "ensemble.init_box");
    check_box(ck, en.henon_init_box, "ensemble.henon_init_box");
    ck.positive(en.dt, "ensemble.dt");
    ck.that(std::isfinite(en.horizon) && en.horizon >= en.dt, "ensemble.horizon", "must be at least ensemble.dt");
    ck.that(en.henon_steps >= 1, "ensemble.henon_steps", "must be at least 1");
    ck.positive(en.steady_state_tol, "ensemble.steady_state_tol");
    ck.that(en.transient_fraction >= 0.0 && en.transient_fraction < 1.0, "ensemble.transient_fraction",
            "must lie in [0, 1)");
    ck.positive(en.divergence_bound, "ensemble.divergence_bound");

    const auto& tr = cfg.trajectory;
    ck.that(tr.initial_point.is_finite(), "trajectory.initial_point", "must be finite");
    ck.that(tr.henon_initial_point.is_finite(), "trajectory.henon_initial_point", "must be finite");
    ck.positive(tr.dt, "trajectory.dt");
    ck.that(std::isfinite(tr.horizon) && tr.horizon >= tr.dt, "trajectory.horizon", "must be at least trajectory.dt");
    ck.that(tr.henon_steps >= 1, "trajectory.henon_steps", "must be at least 1");

    const auto positive_list = [&ck](const std::vector<double>& v, const std::string& path) {
        ck.nonempty(v.empty(), path);
        ck.that(std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; }), path,
                "values must be positive");
    };
    positive_list(cfg.stability_scan.sigma, "stability_scan.sigma");
    positive_list(cfg.stability_scan.beta, "stability_scan.beta");
    positive_list(cfg.stability_scan.r, "stability_scan.r");

    if (cfg.experiment == ExperimentKind::sweep) {
        SweepSpec spec{cfg.sweep.parameter, cfg.sweep.values, sys};
        try {
            spec.validate();
        } catch (const InvalidSweepError& e) {
            ck.that(false, "sweep", e.what());
        }
    }

    ck.monotone(cfg.fig2.r, "fig2.r");
    ck.monotone(cfg.fig2.eps, "fig2.eps");
    for (double e : cfg.fig2.eps) ck.that(e >= 1.0, "fig2.eps", "values must lie in [1, inf)");
    if (cfg.fig2.initial_point) ck.that(cfg.fig2.initial_point->is_finite(), "fig2.initial_point", "must be finite");
    ck.monotone(cfg.fig3.r, "fig3.r");
    ck.monotone(cfg.fig3.eps, "fig3.eps");
    for (double e : cfg.fig3.eps) ck.that(e >= 1.0, "fig3.eps", "values must lie in [1, inf)");
    ck.nonempty(cfg.fig3.sigma.empty(), "fig3.sigma");
    for (double s : cfg.fig3.sigma) ck.positive(s, "fig3.sigma");
    if (cfg.fig3.initial_point) ck.that(cfg.fig3.initial_point->is_finite(), "fig3.initial_point", "must be finite");
    ck.monotone(cfg.fig4.pt_dbm, "fig4.pt_dbm");
    for (double r : cfg.fig4.lorenz_r) ck.positive(r, "fig4.lorenz_r");
    for (const auto& h : cfg.fig4.henon) {
        ck.that(std::isfinite(h.gamma) && h.gamma != 0.0 && std::isfinite(h.delta), "fig4.henon",
                "pairs need finite delta and nonzero gamma");
    }
    for (std::size_t n : cfg.fig4.n_tones) ck.that(n >= 1, "fig4.n_tones", "values must be at least 1");
}

json point_json(const State3& s) { return json::array({s.x, s.y, s.z}); }

template <std::size_t N>
json box_json(const std::array<Interval, N>& box) {
    json out = json::array();
    for (const auto& iv : box) out.push_back(json::array({iv.lo, iv.hi}));
    return out;
}

json to_json(const ExperimentConfig& cfg) {
    const SystemConfig& s = cfg.system;
    const EnsembleConfig& en = s.ensemble;
    json j;
    j["experiment"] = std::string(to_string(cfg.experiment));
    j["system"] = std::string(to_string(s.system));
    j["output_dir"] = cfg.output_dir.generic_string();
    j["lorenz"] = {{"sigma", s.lorenz.sigma}, {"r", s.lorenz.r}, {"beta", s.lorenz.beta}};
    j["scaling"] = {{"eps_x", s.scaling.eps_x}, {"eps_y", s.scaling.eps_y}, {"eps_z", s.scaling.eps_z}};
    j["henon"] = {{"gamma", s.henon.gamma}, {"delta", s.henon.delta}};
    j["multisine"] = {{"n_tones", s.n_tones}};
    j["link"] = {{"pt_dbm", s.link.pt_dbm}, {"d_m", s.link.d_m}, {"alpha", s.link.alpha}};
    j["link"]["noise_variance"] = s.link.noise_variance ? json(*s.link.noise_variance) : json(nullptr);
    j["rectenna"] = {{"k2", s.rectenna.k2}, {"k4", s.rectenna.k4}, {"r_ant", s.rectenna.r_ant}};
    j["fading"] = {{"m2", s.fading.m2}, {"m4", s.fading.m4}};
    j["ensemble"] = {{"n_realizations", en.n_realizations},
                     {"seed", en.seed},
                     {"init_box", box_json(en.init_box)},
                     {"henon_init_box", box_json(en.henon_init_box)},
                     {"dt", en.dt},
                     {"horizon", en.horizon},
                     {"henon_steps", en.henon_steps},
                     {"steady_state_tol", en.steady_state_tol},
                     {"transient_fraction", en.transient_fraction},
                     {"use_detected_steady_state", en.use_detected_steady_state},
                     {"divergence_bound", en.divergence_bound},
                     {"workers", en.workers}};
    const auto& tr = cfg.trajectory;
    j["trajectory"] = {{"initial_point", point_json(tr.initial_point)},
                       {"henon_initial_point", json::array({tr.henon_initial_point.x, tr.henon_initial_point.y})},
                       {"dt", tr.dt},
                       {"horizon", tr.horizon},
                       {"henon_steps", tr.henon_steps}};
    j["stability_scan"] = {
        {"sigma", cfg.stability_scan.sigma}, {"beta", cfg.stability_scan.beta}, {"r", cfg.stability_scan.r}};
    j["sweep"] = {{"parameter", std::string(to_string(cfg.sweep.parameter))}, {"values", cfg.sweep.values}};
    j["fig2"] = {{"r", cfg.fig2.r}, {"eps", cfg.fig2.eps}};
    j["fig2"]["initial_point"] = cfg.fig2.initial_point ? point_json(*cfg.fig2.initial_point) : json(nullptr);
    j["fig3"] = {{"r", cfg.fig3.r}, {"eps", cfg.fig3.eps}, {"sigma", cfg.fig3.sigma}};
    j["fig3"]["initial_point"] = cfg.fig3.initial_point ? point_json(*cfg.fig3.initial_point) : json(nullptr);
    json henon = json::array();
    for (const auto& h : cfg.fig4.henon) henon.push_back(json::array({h.gamma, h.delta}));
    j["fig4"] = {{"pt_dbm", cfg.fig4.pt_dbm}, {"lorenz_r", cfg.fig4.lorenz_r}, {"henon", henon},
                 {"n_tones", cfg.fig4.n_tones}};
    return j;
}

}  // namespace

ExperimentConfig validate_config(std::string_view text, const ConfigOverrides& overrides) {
    std::vector<std::string> errors;
    ExperimentConfig cfg;

    const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (!blank) {
        json doc;
        try {
            doc = json::parse(text.begin(), text.end());
        } catch (const json::parse_error& e) {
            throw ConfigError({std::string("document: not valid JSON (") + e.what() + ")"});
        }
        if (!doc.is_object()) throw ConfigError({"document: top level must be a JSON object"});
        Reader rd(errors);
        read_document(doc, cfg, rd);
    }

    if (overrides.seed) cfg.system.ensemble.seed = *overrides.seed;
    if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
    if (overrides.realizations) cfg.system.ensemble.n_realizations = *overrides.realizations;

    Checker ck(errors);
    check(cfg, ck);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

std::string config_to_text(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string manifest_text(const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
    json j = to_json(cfg);
    j["manifest"] = {{"tool", "chaoswpt"}, {"format_version", 1}, {"seed", cfg.system.ensemble.seed},
                     {"outputs", outputs}};
    return j.dump(2) + "\n";
}

}  // namespace chaoswpt
