#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "esclab/errors.hpp"

namespace esclab {

/// Flat state vector of a continuous-time system. Length is fixed for the
/// lifetime of a run; every entry must stay finite (the engine aborts on
/// NaN/Inf rather than clamping).
using StateVector = std::vector<double>;

/// Right-hand side contract: writes d/dt state into `dxdt` (same length as
/// `x`). Must be deterministic given (t, x).
using SystemFn = std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;

/// Step bookkeeping for fixed-step integration. Time is always computed from
/// the step index so that t carries no accumulated rounding drift:
/// t = t0 + step_index * dt exactly as written.
struct SimClock {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t step_index = 0;

    double time() const { return t0 + static_cast<double>(step_index) * dt; }
};

/// Time-stamped record of sampled states from one run.
struct StateTrajectory {
    std::vector<double> times;
    std::vector<StateVector> states;

    std::size_t size() const { return times.size(); }
    const StateVector& front() const { return states.front(); }
    const StateVector& back() const { return states.back(); }
};

/// Reusable classical 4th-order Runge-Kutta stepper. Scratch buffers are
/// members, so a long run does not allocate per step. One instance per run;
/// instances share no state, so concurrent runs are safe.
class Rk4Stepper {
public:
    explicit Rk4Stepper(std::size_t dim);

    /// Advances `state` in place from t to t + dt. Throws NonFiniteState
    /// (tagged with `step_index`) if any stage derivative or the result is
    /// non-finite.
    void step(const SystemFn& sys, double t, double dt, std::span<double> state,
              std::size_t step_index = 0);

private:
    std::vector<double> k1_, k2_, k3_, k4_, work_;
};

/// Single RK4 update, by value. Convenience wrapper over Rk4Stepper for
/// callers that do not manage a run loop.
StateVector rk4_step(const SystemFn& sys, double t, const StateVector& state, double dt);

/// Integrates `sys` from t0 to t_end with fixed step dt, recording the state
/// every `sample_every` steps (first and last samples always included).
/// The number of steps is round((t_end - t0) / dt), so callers should pick
/// spans that are whole multiples of dt.
///
/// Sampled time stamps satisfy times[j] = t0 + k_j * dt with k_j the step
/// index, computed in index arithmetic.
StateTrajectory simulate(const SystemFn& sys, const StateVector& x0, double t0, double t_end,
                         double dt, std::size_t sample_every = 1);

}  // namespace esclab
