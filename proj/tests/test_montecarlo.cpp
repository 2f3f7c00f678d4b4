#include <cmath>
#include <sstream>

#include "chaoswpt/montecarlo.hpp"
#include "chaoswpt/stability.hpp"
#include "doctest.h"

using namespace chaoswpt;

namespace {

const LorenzParams kR12{10.0, 12.0, 8.0 / 3.0};
const LorenzParams kR28{10.0, 28.0, 8.0 / 3.0};

EnsembleConfig small(std::size_t n, double horizon) {
    EnsembleConfig cfg;
    cfg.n_realizations = n;
    cfg.horizon = horizon;
    cfg.workers = 1;
    return cfg;
}

}  // namespace

TEST_CASE("realization streams depend only on seed and index") {
    auto a = realization_engine(7, 3);
    auto b = realization_engine(7, 3);
    auto c = realization_engine(7, 4);
    auto d = realization_engine(8, 3);
    const auto va = a();
    CHECK(va == b());
    CHECK(va != c());
    CHECK(va != d());
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform01(a);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("steady state of a constant trajectory starts at 0") {
    const std::vector<State3> flat(100, State3{1.0, 2.0, 3.0});
    CHECK(detect_steady_state(flat, 1e-9) == std::optional<std::size_t>(0));
    const std::vector<State2> flat2(10, State2{1.0, 2.0});
    CHECK(detect_steady_state(flat2, 1e-9) == std::optional<std::size_t>(0));
    CHECK_THROWS_AS((void)detect_steady_state(std::span<const State3>{}, 1e-3), InvalidArgument);
}

TEST_CASE("steady state needs a trailing window of at least 10 percent") {
    std::vector<State2> v(100, State2{0.0, 0.0});
    for (std::size_t i = 0; i < 95; ++i) v[i].x = static_cast<double>(i);
    CHECK_FALSE(detect_steady_state(v, 1e-3));
    for (std::size_t i = 0; i < 95; ++i) v[i].x = i < 80 ? static_cast<double>(i) : 0.0;
    CHECK(detect_steady_state(v, 1e-3) == std::optional<std::size_t>(80));
}

TEST_CASE("stable r=12 run settles and r=30 does not") {
    const auto tr = integrate_lorenz({1.0, -5.0, 20.0}, kR12, {});
    // The slowest mode decays like exp(-0.4897 t); shrinking a deviation of
    // order 10 below 1e-3 takes t = ln(1e4) / 0.4897 or about 18.8.
    const auto strict = detect_steady_state(tr, 1e-3);
    REQUIRE(strict);
    CHECK(tr.time(*strict) > 15.0);
    CHECK(tr.time(*strict) < 21.0);
    const auto coarse = detect_steady_state(tr, 0.1);
    REQUIRE(coarse);
    CHECK(tr.time(*coarse) < 10.0);

    const auto chaotic = integrate_lorenz({1.0, -5.0, 20.0}, {10.0, 30.0, 8.0 / 3.0}, {});
    CHECK_FALSE(detect_steady_state(chaotic, 1e-3));
}

TEST_CASE("stable ensemble moments match the equilibrium") {
    const auto cfg = small(60, 100.0);
    for (double eps : {1.0, 6.0}) {
        const auto res = run_ensemble(cfg, kR12, ScalingFactors::uniform(eps));
        const auto m = lorenz_steady_moments(kR12, ScalingFactors::uniform(eps));
        CHECK(res.n_diverged == 0);
        CHECK(res.m2.count == 60);
        CHECK(std::abs(res.m2.mean / m.m2 - 1.0) < 1e-2);
        CHECK(std::abs(res.m4.mean / m.m4 - 1.0) < 2e-2);
        CHECK(res.stable);
        CHECK(res.convergence.fraction_converged == 1.0);
        REQUIRE(res.convergence.mean_convergence_time);
        CHECK(*res.convergence.mean_convergence_time < 50.0);
    }
}

TEST_CASE("henon ensemble moments match the fixed point") {
    const HenonParams p{0.2, 0.1};
    const auto res = run_ensemble(small(200, 100.0), p);
    const double phi = henon_phi(p);
    CHECK(res.m2.mean == doctest::Approx(phi * phi).epsilon(1e-9));
    CHECK(res.m4.mean == doctest::Approx(phi * phi * phi * phi).epsilon(1e-9));
    CHECK(res.m2.mean == doctest::Approx(0.850350).epsilon(1e-6));
}

TEST_CASE("results do not depend on the worker count") {
    auto cfg = small(24, 8.0);
    const auto a = run_ensemble(cfg, kR28, {});
    cfg.workers = 4;
    const auto b = run_ensemble(cfg, kR28, {});
    CHECK(a.m2.mean == b.m2.mean);
    CHECK(a.m4.mean == b.m4.mean);
    CHECK(a.m2.se == b.m2.se);
    CHECK(a.papr_db.mean == b.papr_db.mean);
    cfg.seed = 2;
    const auto c = run_ensemble(cfg, kR28, {});
    CHECK(a.m2.mean != c.m2.mean);
}

TEST_CASE("standard error shrinks like one over root n") {
    const auto a = run_ensemble(small(100, 6.0), kR28, {});
    const auto b = run_ensemble(small(400, 6.0), kR28, {});
    const double ratio = a.m2.se / b.m2.se;
    CHECK(ratio > 1.5);
    CHECK(ratio < 2.7);
}

TEST_CASE("degenerate box runs a single realization") {
    auto cfg = small(100, 50.0);
    cfg.init_box = {{{4.0, 4.0}, {-10.0, -10.0}, {0.6, 0.6}}};
    const auto res = run_ensemble(cfg, kR12, {});
    CHECK(res.n_realizations == 1);
    CHECK(res.m2.se == 0.0);
}

TEST_CASE("diverged runs are counted and excluded") {
    auto cfg = small(10, 5.0);
    cfg.divergence_bound = 15.0;
    const auto res = run_ensemble(cfg, kR28, {});
    CHECK(res.n_diverged == 10);
    CHECK(res.m2.count == 0);
    CHECK_FALSE(res.eta(coefficients({}, {})));
}

TEST_CASE("invalid ensemble configuration") {
    auto cfg = small(0, 5.0);
    CHECK_THROWS_AS((void)run_ensemble(cfg, kR12, {}), InvalidArgument);
    cfg = small(10, 5.0);
    cfg.init_box[0] = {1.0, -1.0};
    CHECK_THROWS_AS((void)run_ensemble(cfg, kR12, {}), InvalidArgument);
}

TEST_CASE("empirical DC grows with r in the stable region") {
    SweepSpec spec;
    spec.parameter = SweepParameter::r;
    spec.values = {5.0, 10.0, 15.0, 20.0};
    spec.fixed.ensemble = small(20, 100.0);
    const auto pts = sweep(spec);
    REQUIRE(pts.size() == 4);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        REQUIRE(pts[i].report.eta_analytic);
        REQUIRE(pts[i].report.eta_empirical);
        CHECK(std::abs(*pts[i].report.eta_empirical / *pts[i].report.eta_analytic - 1.0) < 1e-2);
        if (i > 0) CHECK(*pts[i].report.eta_empirical > *pts[i - 1].report.eta_empirical);
    }
}

TEST_CASE("unstable sweep leaves the analytic value blank") {
    SweepSpec spec;
    spec.parameter = SweepParameter::eps;
    spec.values = {1.0, 6.0};
    spec.fixed.lorenz = kR28;
    spec.fixed.ensemble = small(30, 20.0);
    const auto pts = sweep(spec);
    REQUIRE(pts.size() == 2);
    CHECK_FALSE(pts[0].report.eta_analytic);
    CHECK_FALSE(pts[0].report.stable);
    REQUIRE(pts[0].report.papr_db);
    REQUIRE(pts[1].report.papr_db);
    // Scaling compresses the amplitude but barely changes the peak-to-average ratio.
    CHECK(std::abs(*pts[0].report.papr_db - *pts[1].report.papr_db) < 0.5);
    CHECK(*pts[0].report.eta_empirical > 10.0 * *pts[1].report.eta_empirical);
}

TEST_CASE("transmit power sweep reuses one ensemble") {
    SweepSpec spec;
    spec.parameter = SweepParameter::pt_dbm;
    spec.values = {20.0, 30.0};
    spec.fixed.system = SystemKind::henon;
    spec.fixed.ensemble = small(10, 10.0);
    const auto pts = sweep(spec);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].ensemble->m2.mean == pts[1].ensemble->m2.mean);
    CHECK(*pts[1].report.eta_empirical > 10.0 * *pts[0].report.eta_empirical);
}

TEST_CASE("multisine evaluation is deterministic and analytic") {
    SystemConfig cfg;
    cfg.system = SystemKind::multisine;
    cfg.n_tones = 1;
    const auto pt = evaluate(cfg);
    CHECK_FALSE(pt.ensemble);
    REQUIRE(pt.report.eta_analytic);
    CHECK(*pt.report.eta_analytic == doctest::Approx(1.0625e-6 + 1.5 * 3.7392578125e-8));
    CHECK(*pt.report.papr_db == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-9));
}

TEST_CASE("invalid sweeps") {
    SweepSpec spec;
    spec.parameter = SweepParameter::gamma;
    spec.values = {0.1, 0.2};
    CHECK_THROWS_AS(spec.validate(), InvalidSweepError);
    spec.parameter = SweepParameter::r;
    spec.values = {};
    CHECK_THROWS_AS(spec.validate(), InvalidSweepError);
    spec.values = {5.0, 10.0, 7.0};
    CHECK_THROWS_AS(spec.validate(), InvalidSweepError);
    spec.values = {5.0, 5.0};
    CHECK_THROWS_AS(spec.validate(), InvalidSweepError);
    spec.values = {20.0, 10.0};
    CHECK_NOTHROW(spec.validate());
    spec.fixed.system = SystemKind::multisine;
    spec.parameter = SweepParameter::n_tones;
    spec.values = {1.0, 2.5};
    CHECK_THROWS_AS(spec.validate(), InvalidSweepError);
}

TEST_CASE("sweep csv layout") {
    SweepSpec spec;
    spec.parameter = SweepParameter::n_tones;
    spec.values = {1.0, 2.0};
    spec.fixed.system = SystemKind::multisine;
    std::ostringstream os;
    write_sweep_csv(os, sweep(spec));
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == sweep_csv_header());
    CHECK(line.rfind(report_csv_header() + ",sigma,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("multisine,1,,,30,", 0) == 0);
}
