#pragma once

// Scaled Lorenz flow and Henon map trajectories.
//
// The Lorenz state is integrated directly in scaled coordinates
//   x_sc = x / eps_x, y_sc = y / eps_y, z_sc = z / eps_z
// so a trajectory sample is the transmitted baseband amplitude.

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "chaoswpt/error.hpp"

namespace chaoswpt {

struct LorenzParams {
    double sigma = 10.0;
    double r = 12.0;
    double beta = 8.0 / 3.0;

    /// Throws InvalidArgument unless sigma, r, beta are finite and positive.
    void validate() const;
};

/// Per-axis amplitude compression, each factor in [1, inf).
struct ScalingFactors {
    double eps_x = 1.0;
    double eps_y = 1.0;
    double eps_z = 1.0;

    static constexpr ScalingFactors uniform(double eps) noexcept { return {eps, eps, eps}; }

    void validate() const;
};

struct HenonParams {
    double gamma = 0.2;
    double delta = 0.1;

    /// Throws InvalidArgument when gamma is zero or either value is non-finite.
    void validate() const;
};

struct State3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] bool is_finite() const noexcept {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
    [[nodiscard]] double max_abs() const noexcept {
        return std::fmax(std::fabs(x), std::fmax(std::fabs(y), std::fabs(z)));
    }

    friend constexpr State3 operator+(const State3& a, const State3& b) noexcept {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr State3 operator-(const State3& a, const State3& b) noexcept {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr State3 operator*(double k, const State3& a) noexcept {
        return {k * a.x, k * a.y, k * a.z};
    }
    friend constexpr bool operator==(const State3&, const State3&) = default;
};

struct State2 {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] bool is_finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }
    [[nodiscard]] double max_abs() const noexcept { return std::fmax(std::fabs(x), std::fabs(y)); }

    friend constexpr bool operator==(const State2&, const State2&) = default;
};

enum class Axis { x, y, z };

[[nodiscard]] constexpr double component(const State3& s, Axis a) noexcept {
    switch (a) {
        case Axis::x: return s.x;
        case Axis::y: return s.y;
        case Axis::z: return s.z;
    }
    return s.x;
}

/// Throws InvalidArgument for Axis::z, which a planar state does not have.
[[nodiscard]] double component(const State2& s, Axis a);

/// Uniformly sampled state sequence. Sample i sits at time i * dt; statistics
/// use the samples from transient_cutoff() onward.
template <class State>
class Trajectory {
public:
    Trajectory(double dt, std::vector<State> samples, std::size_t transient_cutoff)
        : dt_(dt), samples_(std::move(samples)), cutoff_(transient_cutoff) {
        if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw InvalidArgument("trajectory dt must be positive");
        if (samples_.empty()) throw InvalidArgument("trajectory must hold at least one sample");
        if (cutoff_ >= samples_.size()) throw InvalidArgument("transient cutoff must precede the last sample");
    }

    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] double time(std::size_t i) const noexcept { return static_cast<double>(i) * dt_; }
    [[nodiscard]] std::size_t transient_cutoff() const noexcept { return cutoff_; }

    [[nodiscard]] const State& operator[](std::size_t i) const { return samples_[i]; }
    [[nodiscard]] const State& front() const { return samples_.front(); }
    [[nodiscard]] const State& back() const { return samples_.back(); }
    [[nodiscard]] std::span<const State> samples() const noexcept { return samples_; }
    [[nodiscard]] std::span<const State> post_transient() const noexcept {
        return std::span<const State>(samples_).subspan(cutoff_);
    }

    [[nodiscard]] Trajectory with_transient_cutoff(std::size_t cutoff) const& {
        return Trajectory(dt_, samples_, cutoff);
    }
    [[nodiscard]] Trajectory with_transient_cutoff(std::size_t cutoff) && {
        return Trajectory(dt_, std::move(samples_), cutoff);
    }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    double dt_;
    std::vector<State> samples_;
    std::size_t cutoff_;
};

using LorenzTrajectory = Trajectory<State3>;
using HenonTrajectory = Trajectory<State2>;

inline constexpr double kDefaultDivergenceBound = 1e6;
inline constexpr double kDefaultTransientFraction = 0.5;

struct IntegrationOptions {
    double dt = 1e-3;
    double horizon = 50.0;
    double divergence_bound = kDefaultDivergenceBound;
    /// Fraction of leading samples excluded from statistics.
    double transient_fraction = kDefaultTransientFraction;

    void validate() const;
    /// floor(horizon / dt) + 1.
    [[nodiscard]] std::size_t sample_count() const;
};

/// Right-hand side of the scaled Lorenz system with the scaling ratios
/// folded into constants once.
class LorenzField {
public:
    LorenzField(const LorenzParams& p, const ScalingFactors& e) noexcept
        : sigma_(p.sigma),
          r_(p.r),
          beta_(p.beta),
          eps_z_(e.eps_z),
          y_over_x_(e.eps_y / e.eps_x),
          x_over_y_(e.eps_x / e.eps_y),
          xy_over_z_(e.eps_x * e.eps_y / e.eps_z) {}

    [[nodiscard]] State3 operator()(const State3& s) const noexcept {
        return {sigma_ * (y_over_x_ * s.y - s.x),
                x_over_y_ * s.x * (r_ - eps_z_ * s.z) - s.y,
                xy_over_z_ * s.x * s.y - beta_ * s.z};
    }

    /// One classical fourth-order Runge-Kutta step.
    [[nodiscard]] State3 rk4_step(const State3& s, double dt) const noexcept {
        const double h = 0.5 * dt;
        const State3 k1 = (*this)(s);
        const State3 k2 = (*this)(s + h * k1);
        const State3 k3 = (*this)(s + h * k2);
        const State3 k4 = (*this)(s + dt * k3);
        return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

private:
    double sigma_, r_, beta_, eps_z_;
    double y_over_x_, x_over_y_, xy_over_z_;
};

[[nodiscard]] State3 lorenz_derivative(const State3& s, const LorenzParams& p, const ScalingFactors& e);

/// Fixed-step RK4 over [0, horizon] from s0. Throws DivergenceError when a
/// component exceeds the bound or stops being finite.
[[nodiscard]] LorenzTrajectory integrate_lorenz(const State3& s0, const LorenzParams& p, const ScalingFactors& e,
                                                const IntegrationOptions& opts = {});

/// Same as integrate_lorenz but fills a caller-owned buffer, reusing its
/// capacity. Used by ensemble workers.
void integrate_lorenz_into(std::vector<State3>& out, const State3& s0, const LorenzParams& p,
                           const ScalingFactors& e, const IntegrationOptions& opts);

[[nodiscard]] constexpr State2 henon_step(const State2& s, const HenonParams& p) noexcept {
    return {s.y + 1.0 - p.gamma * s.x * s.x, p.delta * s.x};
}

/// n_steps + 1 states starting at s0, dt = 1. Throws DivergenceError when |x|
/// or |y| exceeds the bound.
[[nodiscard]] HenonTrajectory iterate_henon(const State2& s0, const HenonParams& p, std::size_t n_steps,
                                            double divergence_bound = kDefaultDivergenceBound,
                                            double transient_fraction = kDefaultTransientFraction);

void iterate_henon_into(std::vector<State2>& out, const State2& s0, const HenonParams& p, std::size_t n_steps,
                        double divergence_bound);

[[nodiscard]] State3 scale_state(const State3& s, const ScalingFactors& e);

[[nodiscard]] std::size_t transient_cutoff_for(std::size_t n_samples, double fraction);

/// CSV with header `t,x,y,z`, values in shortest round-trip form.
void write_trajectory_csv(std::ostream& os, const LorenzTrajectory& tr);
/// CSV with header `n,x,y`.
void write_trajectory_csv(std::ostream& os, const HenonTrajectory& tr);

}  // namespace chaoswpt
