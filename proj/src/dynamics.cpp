#include "chaoswpt/dynamics.hpp"

#include <ostream>
#include <string>

#include "chaoswpt/csv.hpp"

namespace chaoswpt {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidArgument(what);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void LorenzParams::validate() const {
    require(positive_finite(sigma), "lorenz sigma must be positive and finite");
    require(positive_finite(r), "lorenz r must be positive and finite");
    require(positive_finite(beta), "lorenz beta must be positive and finite");
}

void ScalingFactors::validate() const {
    require(std::isfinite(eps_x) && eps_x >= 1.0, "eps_x must lie in [1, inf)");
    require(std::isfinite(eps_y) && eps_y >= 1.0, "eps_y must lie in [1, inf)");
    require(std::isfinite(eps_z) && eps_z >= 1.0, "eps_z must lie in [1, inf)");
}

void HenonParams::validate() const {
    require(std::isfinite(gamma) && gamma != 0.0, "henon gamma must be finite and nonzero");
    require(std::isfinite(delta), "henon delta must be finite");
}

double component(const State2& s, Axis a) {
    switch (a) {
        case Axis::x: return s.x;
        case Axis::y: return s.y;
        case Axis::z: break;
    }
    throw InvalidArgument("henon state has no z component");
}

void IntegrationOptions::validate() const {
    require(positive_finite(dt), "integration dt must be positive");
    require(std::isfinite(horizon) && horizon >= dt, "integration horizon must be at least dt");
    require(positive_finite(divergence_bound), "divergence bound must be positive");
    require(transient_fraction >= 0.0 && transient_fraction < 1.0, "transient fraction must lie in [0, 1)");
}

std::size_t IntegrationOptions::sample_count() const {
    // The small relative slack keeps e.g. 30 / 1e-3 from rounding down to 29999.
    const double steps = std::floor(horizon / dt * (1.0 + 1e-12));
    return static_cast<std::size_t>(steps) + 1;
}

std::size_t transient_cutoff_for(std::size_t n_samples, double fraction) {
    if (n_samples == 0) return 0;
    auto cutoff = static_cast<std::size_t>(std::floor(static_cast<double>(n_samples) * fraction));
    return cutoff >= n_samples ? n_samples - 1 : cutoff;
}

State3 lorenz_derivative(const State3& s, const LorenzParams& p, const ScalingFactors& e) {
    return LorenzField(p, e)(s);
}

void integrate_lorenz_into(std::vector<State3>& out, const State3& s0, const LorenzParams& p,
                           const ScalingFactors& e, const IntegrationOptions& opts) {
    p.validate();
    e.validate();
    opts.validate();
    const std::size_t n = opts.sample_count();
    const LorenzField field(p, e);
    const double bound = opts.divergence_bound;

    out.clear();
    out.reserve(n);
    if (!s0.is_finite() || s0.max_abs() > bound) throw DivergenceError(0, bound);
    out.push_back(s0);
    State3 s = s0;
    for (std::size_t i = 1; i < n; ++i) {
        s = field.rk4_step(s, opts.dt);
        // NaN compares false, so a non-finite state also fails this test.
        if (!(s.max_abs() <= bound) || !s.is_finite()) throw DivergenceError(i, bound);
        out.push_back(s);
    }
}

LorenzTrajectory integrate_lorenz(const State3& s0, const LorenzParams& p, const ScalingFactors& e,
                                  const IntegrationOptions& opts) {
    std::vector<State3> samples;
    integrate_lorenz_into(samples, s0, p, e, opts);
    const std::size_t cutoff = transient_cutoff_for(samples.size(), opts.transient_fraction);
    return LorenzTrajectory(opts.dt, std::move(samples), cutoff);
}

void iterate_henon_into(std::vector<State2>& out, const State2& s0, const HenonParams& p, std::size_t n_steps,
                        double divergence_bound) {
    p.validate();
    require(n_steps >= 1, "henon iteration needs at least one step");
    require(positive_finite(divergence_bound), "divergence bound must be positive");

    out.clear();
    out.reserve(n_steps + 1);
    if (!s0.is_finite() || s0.max_abs() > divergence_bound) throw DivergenceError(0, divergence_bound);
    out.push_back(s0);
    State2 s = s0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        s = henon_step(s, p);
        if (!(s.max_abs() <= divergence_bound) || !s.is_finite()) throw DivergenceError(i, divergence_bound);
        out.push_back(s);
    }
}

HenonTrajectory iterate_henon(const State2& s0, const HenonParams& p, std::size_t n_steps, double divergence_bound,
                              double transient_fraction) {
    require(transient_fraction >= 0.0 && transient_fraction < 1.0, "transient fraction must lie in [0, 1)");
    std::vector<State2> samples;
    iterate_henon_into(samples, s0, p, n_steps, divergence_bound);
    const std::size_t cutoff = transient_cutoff_for(samples.size(), transient_fraction);
    return HenonTrajectory(1.0, std::move(samples), cutoff);
}

State3 scale_state(const State3& s, const ScalingFactors& e) {
    e.validate();
    return {s.x / e.eps_x, s.y / e.eps_y, s.z / e.eps_z};
}

void write_trajectory_csv(std::ostream& os, const LorenzTrajectory& tr) {
    os << "t,x,y,z\n";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto& s = tr[i];
        os << csv::format_double(tr.time(i)) << ',' << csv::format_double(s.x) << ',' << csv::format_double(s.y)
           << ',' << csv::format_double(s.z) << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const HenonTrajectory& tr) {
    os << "n,x,y\n";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto& s = tr[i];
        os << i << ',' << csv::format_double(s.x) << ',' << csv::format_double(s.y) << '\n';
    }
}

}  // namespace chaoswpt
