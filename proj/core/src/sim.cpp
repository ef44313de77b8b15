#include "esclab/sim.hpp"

#include <cmath>
#include <string>

namespace esclab {

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

Rk4Stepper::Rk4Stepper(std::size_t dim)
    : k1_(dim), k2_(dim), k3_(dim), k4_(dim), work_(dim) {}

void Rk4Stepper::step(const SystemFn& sys, double t, double dt, std::span<double> state,
                      std::size_t step_index) {
    const std::size_t n = state.size();
    if (dt <= 0.0) throw DomainError("rk4_step: dt must be > 0");
    if (k1_.size() != n) throw DomainError("rk4_step: state length does not match stepper");

    const double half = 0.5 * dt;

    sys(t, state, k1_);
    for (std::size_t i = 0; i < n; ++i) work_[i] = state[i] + half * k1_[i];
    sys(t + half, work_, k2_);
    for (std::size_t i = 0; i < n; ++i) work_[i] = state[i] + half * k2_[i];
    sys(t + half, work_, k3_);
    for (std::size_t i = 0; i < n; ++i) work_[i] = state[i] + dt * k3_[i];
    sys(t + dt, work_, k4_);

    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        state[i] += w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    if (!all_finite(k1_) || !all_finite(k4_) || !all_finite(state)) {
        throw NonFiniteState("non-finite state or derivative", step_index);
    }
}

StateVector rk4_step(const SystemFn& sys, double t, const StateVector& state, double dt) {
    StateVector out = state;
    Rk4Stepper stepper(out.size());
    stepper.step(sys, t, dt, out);
    return out;
}

StateTrajectory simulate(const SystemFn& sys, const StateVector& x0, double t0, double t_end,
                         double dt, std::size_t sample_every) {
    if (dt <= 0.0) throw DomainError("simulate: dt must be > 0");
    if (t_end <= t0) throw DomainError("simulate: t_end must exceed t0");
    if (sample_every < 1) throw DomainError("simulate: sample_every must be >= 1");
    if (!all_finite(x0)) throw NonFiniteState("simulate: non-finite initial state", 0);

    const auto steps = static_cast<std::size_t>(std::llround((t_end - t0) / dt));
    const std::size_t n_steps = steps == 0 ? 1 : steps;

    StateTrajectory traj;
    traj.times.reserve(n_steps / sample_every + 2);
    traj.states.reserve(n_steps / sample_every + 2);

    StateVector state = x0;
    Rk4Stepper stepper(state.size());
    SimClock clock{t0, dt, 0};

    traj.times.push_back(clock.time());
    traj.states.push_back(state);

    for (std::size_t k = 0; k < n_steps; ++k) {
        clock.step_index = k;
        stepper.step(sys, clock.time(), dt, state, k);
        clock.step_index = k + 1;
        if ((k + 1) % sample_every == 0 || k + 1 == n_steps) {
            traj.times.push_back(clock.time());
            traj.states.push_back(state);
        }
    }
    return traj;
}

}  // namespace esclab
