#include <cmath>
#include <sstream>

#include "chaoswpt/dynamics.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace chaoswpt;

namespace {

const LorenzParams kR12{10.0, 12.0, 8.0 / 3.0};
const double kXStar12 = 5.41602560309064;  // sqrt(8/3 * 11)

double dist(const State3& a, const State3& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("lorenz derivative at a reference point") {
    const State3 d = lorenz_derivative({1.0, -5.0, 20.0}, kR12, {});
    CHECK(d.x == doctest::Approx(-60.0).epsilon(1e-15));
    CHECK(d.y == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(d.z == doctest::Approx(-175.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("lorenz derivative with unequal scaling") {
    const ScalingFactors e{2.0, 3.0, 5.0};
    const State3 s{0.7, -1.1, 2.3};
    const State3 d = lorenz_derivative(s, kR12, e);
    CHECK(d.x == doctest::Approx(10.0 * (1.5 * -1.1 - 0.7)));
    CHECK(d.y == doctest::Approx((2.0 / 3.0) * 0.7 * (12.0 - 5.0 * 2.3) + 1.1));
    CHECK(d.z == doctest::Approx(1.2 * 0.7 * -1.1 - (8.0 / 3.0) * 2.3));
}

TEST_CASE("derivative vanishes at the nontrivial equilibria for any scaling") {
    testgen::Gen g(11);
    for (int i = 0; i < 100; ++i) {
        const LorenzParams p{g.uniform(0.5, 20.0), g.uniform(1.1, 40.0), g.uniform(0.2, 5.0)};
        const ScalingFactors e = g.scaling(10.0);
        const double a = std::sqrt(p.beta * (p.r - 1.0));
        for (double sign : {1.0, -1.0}) {
            const State3 eq{sign * a / e.eps_x, sign * a / e.eps_y, (p.r - 1.0) / e.eps_z};
            CHECK(lorenz_derivative(eq, p, e).max_abs() < 1e-12 * (1.0 + p.r * p.sigma));
        }
    }
}

TEST_CASE("stable r=12 trajectory converges to a nontrivial equilibrium") {
    IntegrationOptions o;
    o.horizon = 30.0;
    const auto tr = integrate_lorenz({1.0, -5.0, 20.0}, kR12, {}, o);
    CHECK(tr.size() == 30001);
    CHECK(std::abs(std::abs(tr.back().x) - kXStar12) < 1e-3);
    CHECK(tr.back().z == doctest::Approx(11.0).epsilon(1e-3));
}

TEST_CASE("steady state does not depend on the initial point") {
    // Initial points away from the origin's stable manifold settle on one of
    // the two equilibria, so the terminal |x| is the same.
    testgen::Gen g(23);
    IntegrationOptions o;
    o.horizon = 60.0;
    for (int i = 0; i < 15; ++i) {
        const State3 s0{g.uniform(-20.0, 20.0), g.uniform(-20.0, 20.0), g.uniform(0.0, 40.0)};
        const auto tr = integrate_lorenz(s0, kR12, {}, o);
        CHECK(std::abs(std::abs(tr.back().x) - kXStar12) < 1e-4);
    }
}

TEST_CASE("zero initial state stays at the origin") {
    const auto tr = integrate_lorenz({}, kR12, {});
    for (const auto& s : tr.samples()) REQUIRE(s == State3{});
}

TEST_CASE("scaled trajectory is the unscaled one divided by eps") {
    testgen::Gen g(5);
    IntegrationOptions o;
    o.horizon = 5.0;
    for (int i = 0; i < 5; ++i) {
        const ScalingFactors e = g.scaling(8.0);
        const State3 s0{g.uniform(-10, 10), g.uniform(-10, 10), g.uniform(0, 30)};
        const auto base = integrate_lorenz(s0, kR12, {}, o);
        const auto scaled = integrate_lorenz(scale_state(s0, e), kR12, e, o);
        for (std::size_t k = 0; k < base.size(); k += 500) {
            const State3 expect = scale_state(base[k], e);
            CHECK(dist(scaled[k], expect) < 1e-8 * (1.0 + base[k].max_abs()));
        }
    }
}

TEST_CASE("scale_state divides componentwise") {
    const State3 s = scale_state({6.0, 6.0, 6.0}, {2.0, 3.0, 6.0});
    CHECK(s == State3{3.0, 2.0, 1.0});
}

TEST_CASE("rk4 global error is fourth order") {
    const State3 s0{1.0, -5.0, 20.0};
    IntegrationOptions ref;
    ref.horizon = 1.0;
    ref.dt = 1e-4 / 8.0;
    const State3 exact = integrate_lorenz(s0, kR12, {}, ref).back();
    IntegrationOptions coarse = ref;
    coarse.dt = 4e-3;
    IntegrationOptions fine = ref;
    fine.dt = 2e-3;
    const double e1 = dist(integrate_lorenz(s0, kR12, {}, coarse).back(), exact);
    const double e2 = dist(integrate_lorenz(s0, kR12, {}, fine).back(), exact);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("integration is deterministic") {
    IntegrationOptions o;
    o.horizon = 5.0;
    const LorenzParams p{10.0, 28.0, 8.0 / 3.0};
    CHECK(integrate_lorenz({0.1, 10.0, 0.1}, p, {}, o) == integrate_lorenz({0.1, 10.0, 0.1}, p, {}, o));
}

TEST_CASE("divergence is reported with the offending step") {
    IntegrationOptions o;
    o.horizon = 10.0;
    const LorenzParams p{10.0, 28.0, 8.0 / 3.0};
    const auto free_run = integrate_lorenz({1.0, 1.0, 1.0}, p, {}, o);
    std::size_t first_exit = 0;
    while (free_run[first_exit].max_abs() <= 10.0) ++first_exit;
    o.divergence_bound = 10.0;
    try {
        (void)integrate_lorenz({1.0, 1.0, 1.0}, p, {}, o);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.step() == first_exit);
    }
    o.divergence_bound = 1e6;
    o.dt = 0.5;
    CHECK_THROWS_AS((void)integrate_lorenz({1.0, 1.0, 1.0}, {10.0, 28.0, 8.0 / 3.0}, {}, o), DivergenceError);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS((void)integrate_lorenz({}, {-1.0, 12.0, 1.0}, {}), InvalidArgument);
    CHECK_THROWS_AS((void)integrate_lorenz({}, {10.0, 12.0, 0.0}, {}), InvalidArgument);
    CHECK_THROWS_AS((void)integrate_lorenz({}, kR12, {0.5, 1.0, 1.0}), InvalidArgument);
    IntegrationOptions o;
    o.dt = 0.0;
    CHECK_THROWS_AS((void)integrate_lorenz({}, kR12, {}, o), InvalidArgument);
    CHECK_THROWS_AS((void)iterate_henon({}, {0.0, 0.5}, 10), InvalidArgument);
}

TEST_CASE("trajectory bookkeeping") {
    IntegrationOptions o;
    o.horizon = 2.0;
    const auto tr = integrate_lorenz({1.0, 1.0, 1.0}, kR12, {}, o);
    CHECK(tr.size() == 2001);
    CHECK(tr.time(2000) == doctest::Approx(2.0));
    CHECK(tr.transient_cutoff() == 1000);
    CHECK(tr.post_transient().size() == 1001);
    CHECK(tr.with_transient_cutoff(0).post_transient().size() == 2001);
    CHECK_THROWS_AS(LorenzTrajectory(1e-3, {}, 0), InvalidArgument);
    CHECK_THROWS_AS(LorenzTrajectory(1e-3, {State3{}}, 1), InvalidArgument);
}

TEST_CASE("henon step reference values") {
    const State2 s = henon_step({1.0, 0.0}, {1.4, 0.3});
    CHECK(s.x == doctest::Approx(-0.4).epsilon(1e-15));
    CHECK(s.y == doctest::Approx(0.3).epsilon(1e-15));
    static_assert(henon_step({0.0, 0.0}, {1.0, 0.5}) == State2{1.0, 0.0});
}

TEST_CASE("henon iteration near the stability edge") {
    const double delta = 0.4;
    const double edge = 0.75 * (1.0 - delta) * (1.0 - delta);
    const auto phi = [&](double g) { return (delta - 1.0 + std::sqrt((1.0 - delta) * (1.0 - delta) + 4.0 * g)) / (2.0 * g); };

    const HenonParams inside{0.9 * edge, delta};
    const auto tr = iterate_henon({phi(inside.gamma) + 0.01, delta * phi(inside.gamma)}, inside, 5000);
    CHECK(std::abs(tr.back().x - phi(inside.gamma)) < 1e-6);

    // Past the flip boundary the fixed point repels and a period-2 orbit takes over.
    const HenonParams outside{1.1 * edge, delta};
    const auto tr2 = iterate_henon({phi(outside.gamma) + 0.01, delta * phi(outside.gamma)}, outside, 5000);
    CHECK(std::abs(tr2.back().x - phi(outside.gamma)) > 1e-3);
}

TEST_CASE("henon trajectory uses unit time steps") {
    const auto tr = iterate_henon({0.0, 0.0}, {0.2, 0.1}, 10);
    CHECK(tr.size() == 11);
    CHECK(tr.dt() == 1.0);
    CHECK(tr[1] == State2{1.0, 0.0});
    CHECK_THROWS_AS((void)component(tr[0], Axis::z), InvalidArgument);
}

TEST_CASE("trajectory csv layout") {
    IntegrationOptions o;
    o.horizon = 2e-3;
    std::ostringstream os;
    write_trajectory_csv(os, integrate_lorenz({1.0, -5.0, 20.0}, kR12, {}, o));
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x,y,z");
    std::getline(in, line);
    CHECK(line == "0,1,-5,20");
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);

    std::ostringstream hs;
    write_trajectory_csv(hs, iterate_henon({0.0, 0.0}, {0.2, 0.1}, 1));
    CHECK(hs.str() == "n,x,y\n0,0,0\n1,1,0\n");
}
