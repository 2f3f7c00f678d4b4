#include <cmath>
#include <numbers>

#include "chaoswpt/harvest.hpp"
#include "chaoswpt/stability.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace chaoswpt;

namespace {

const HarvestCoefficients kC = coefficients({}, {});

// E[(sum_{n=1..N} cos n t)^4] over one period, by counting sign/index tuples
// with zero total frequency.
double cos_sum_fourth_moment(int n_tones) {
    long count = 0;
    for (int a = -n_tones; a <= n_tones; ++a)
        for (int b = -n_tones; b <= n_tones; ++b)
            for (int c = -n_tones; c <= n_tones; ++c) {
                const int d = -(a + b + c);
                if (a != 0 && b != 0 && c != 0 && d != 0 && std::abs(d) <= n_tones) ++count;
            }
    return static_cast<double>(count) / 16.0;
}

}  // namespace

TEST_CASE("link budget coefficients") {
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(kC.rho1 == doctest::Approx(1.0625e-6).epsilon(1e-14));
    CHECK(kC.rho2 == doctest::Approx(3.7392578125e-8).epsilon(1e-14));
    CHECK(dc_from_moments(1.0, 1.0, kC) == doctest::Approx(1.099892578125e-6).epsilon(1e-14));
}

TEST_CASE("coefficients scale linearly and quadratically with power") {
    testgen::Gen g(1);
    for (int i = 0; i < 100; ++i) {
        LinkBudget lb{g.uniform(-10.0, 40.0), g.uniform(1.0, 100.0), g.uniform(2.0, 5.0), std::nullopt};
        const RectennaParams rp{g.uniform(1e-3, 1e-2), g.uniform(0.1, 1.0), g.uniform(10.0, 100.0)};
        const auto c0 = coefficients(lb, rp);
        CHECK(c0.rho2 / (c0.rho1 * c0.rho1) == doctest::Approx(rp.k4 / (rp.k2 * rp.k2)).epsilon(1e-12));
        lb.pt_dbm += 10.0;
        const auto c1 = coefficients(lb, rp);
        CHECK(c1.rho1 / c0.rho1 == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(c1.rho2 / c0.rho2 == doctest::Approx(100.0).epsilon(1e-12));
    }
}

TEST_CASE("invalid link or rectenna parameters") {
    CHECK_THROWS_AS((void)coefficients({30.0, 0.0, 4.0, std::nullopt}, {}), InvalidArgument);
    CHECK_THROWS_AS((void)coefficients({30.0, 20.0, -1.0, std::nullopt}, {}), InvalidArgument);
    CHECK_THROWS_AS((void)coefficients({}, {-1.0, 0.3, 50.0}), InvalidArgument);
}

TEST_CASE("moments must be consistent") {
    CHECK_THROWS_AS((void)dc_from_moments(2.0, 3.9, kC), MomentInconsistencyError);
    CHECK_THROWS_AS((void)dc_from_moments(-1.0, 3.0, kC), InvalidArgument);
    CHECK(dc_from_moments(2.0, 4.0, kC) == doctest::Approx(2.0 * kC.rho1 + 4.0 * kC.rho2));
    CHECK_THROWS_AS((void)dc_from_moments(1.0, 1.0, kC, {1.0, 0.5}), InvalidArgument);
}

TEST_CASE("fading moments multiply the two terms") {
    const double base = dc_from_moments(3.0, 10.0, kC);
    CHECK(dc_from_moments(3.0, 10.0, kC, {1.0, 1.0}) == base);
    CHECK(dc_from_moments(3.0, 10.0, kC, {1.0, 2.0}) == doctest::Approx(3.0 * kC.rho1 + 20.0 * kC.rho2));
}

TEST_CASE("saturation warning") {
    CHECK_FALSE(saturation_warning(1.0, 1.0, kC));
    CHECK(saturation_warning(1.0, 1000.0, kC));
}

TEST_CASE("closed-form DC of the stable Lorenz system") {
    const LorenzParams p{10.0, 12.0, 8.0 / 3.0};
    CHECK(eta_ideal_lorenz(p, kC) == doctest::Approx(6.33409027777778e-5).epsilon(1e-13));
    CHECK(eta_scaled_lorenz(p, ScalingFactors::uniform(6.0), kC) == doctest::Approx(8.90566540209191e-7).epsilon(1e-13));
    const auto m = lorenz_steady_moments(p, {});
    CHECK(m.m2 == doctest::Approx(29.3333333333333).epsilon(1e-14));
    CHECK(m.m4 == doctest::Approx(860.444444444444).epsilon(1e-14));
    CHECK_THROWS_AS((void)eta_ideal_lorenz({10.0, 28.0, 8.0 / 3.0}, kC), UnstableRegimeError);
}

TEST_CASE("closed-form DC is monotone in r and in eps") {
    testgen::Gen g(2);
    for (int i = 0; i < 200; ++i) {
        const LorenzParams p = g.stable_lorenz();
        LorenzParams q = p;
        q.r = 1.0 + 0.5 * (p.r - 1.0);
        CHECK(eta_ideal_lorenz(q, kC) < eta_ideal_lorenz(p, kC));
        const double eps = g.uniform(1.0, 10.0);
        CHECK(eta_scaled_lorenz(p, ScalingFactors::uniform(eps * 1.5), kC) <
              eta_scaled_lorenz(p, ScalingFactors::uniform(eps), kC));
    }
}

TEST_CASE("closed-form DC of the Henon map") {
    CHECK(eta_henon({0.2, 0.1}, kC) == doctest::Approx(9.30535566520e-7).epsilon(1e-11));
    CHECK_THROWS_AS((void)eta_henon({1.4, 0.3}, kC), UnstableRegimeError);
}

TEST_CASE("comparison predicate agrees with the DC values") {
    testgen::Gen g(3);
    for (int i = 0; i < 1000; ++i) {
        const LorenzParams pl = g.stable_lorenz();
        const HenonParams ph = g.stable_henon();
        CHECK(lorenz_beats_henon(pl, ph) == (eta_ideal_lorenz(pl, kC) > eta_henon(ph, kC)));
    }
    CHECK(lorenz_beats_henon({10.0, 12.0, 8.0 / 3.0}, {0.2, 0.1}));
    CHECK_FALSE(lorenz_beats_henon({10.0, 1.01, 8.0 / 3.0}, {0.001, 0.9}));
}

TEST_CASE("papr of simple signals") {
    const std::vector<double> flat(100, 3.0);
    CHECK(papr_db(flat) == doctest::Approx(0.0).epsilon(1e-15));
    std::vector<double> sine(10000);
    for (std::size_t k = 0; k < sine.size(); ++k) sine[k] = std::cos(2.0 * std::numbers::pi * k / 10000.0);
    CHECK(papr_db(sine) == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-10));
    CHECK_THROWS_AS((void)papr_db(std::vector<double>(10, 0.0)), DegenerateSignalError);
    CHECK_THROWS_AS((void)papr_db(std::vector<double>{1.0}), DegenerateSignalError);
}

TEST_CASE("papr is scale invariant and nonnegative") {
    testgen::Gen g(4);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> v(50);
        for (auto& x : v) x = g.uniform(-3.0, 3.0);
        const double ref = papr_db(v);
        CHECK(ref >= 0.0);
        const double k = g.uniform(0.01, 100.0);
        for (auto& x : v) x *= k;
        CHECK(papr_db(v) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("papr of a trajectory uses the post-transient window") {
    const auto tr = integrate_lorenz({1.0, -5.0, 20.0}, {10.0, 12.0, 8.0 / 3.0}, {});
    CHECK(papr(tr, Axis::x) < 1e-3);
    CHECK(papr_window_start(1000, 500, true) == 500);
    CHECK(papr_window_start(1000, 500, false) == 100);
}

TEST_CASE("sample moments") {
    const std::vector<double> v{1.0, -1.0, 2.0, -2.0};
    const auto m = sample_moments(v);
    CHECK(m.m2 == doctest::Approx(2.5));
    CHECK(m.m4 == doctest::Approx(8.5));
    const std::vector<State2> h{{1.0, 3.0}, {-1.0, 3.0}};
    CHECK(sample_moments(h, Axis::y).m2 == doctest::Approx(9.0));
}

TEST_CASE("multisine moments match the combinatorial count") {
    const auto one = multisine_moments(1);
    CHECK(one.m2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.m4 == doctest::Approx(1.5).epsilon(1e-12));
    for (int n : {2, 3, 4, 8, 16}) {
        const auto m = multisine_moments(n);
        CHECK(m.m2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.m4 == doctest::Approx(4.0 / (n * n) * cos_sum_fourth_moment(n)).epsilon(1e-12));
    }
}

TEST_CASE("multisine fourth moment grows with the tone count") {
    double prev = 0.0;
    for (std::size_t n : {1, 2, 4, 8}) {
        const double m4 = multisine_moments(n).m4;
        CHECK(m4 > prev);
        prev = m4;
    }
    CHECK_THROWS_AS((void)multisine_samples(0), InvalidArgument);
}

TEST_CASE("report csv") {
    HarvestReport r;
    r.system = "lorenz";
    r.r_or_gamma = 12.0;
    r.eps = 1.0;
    r.pt_dbm = 30.0;
    r.eta_analytic = 0.25;
    r.stable = true;
    CHECK(report_csv_header() == "system,r_or_gamma,delta,eps,pt_dbm,eta_analytic,eta_empirical,papr_db,stable");
    CHECK(report_csv_row(r) == "lorenz,12,,1,30,0.25,,,true");
}
