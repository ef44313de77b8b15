#pragma once

#include <span>
#include <vector>

#include "esclab/objective.hpp"
#include "esclab/trajectory.hpp"

namespace esclab {

/// Convergence, oscillation, and estimation-error summaries for one run.
/// converge_time is +infinity when theta_hat never settles into the band.
struct RunMetrics {
    double converge_time = 0.0;
    double final_theta_error_pct = 0.0;
    double ss_osc_amplitude_theta_hat = 0.0;
    double ss_osc_amplitude_y = 0.0;
    double final_amplitude = 0.0;
    double grad_error_settle_time = 0.0;  // scheme1 only; 0 otherwise
};

/// Smallest t* such that |theta_hat(t) - theta_star| <= band for every
/// sample with t >= t*. Returns the first sample time when the whole
/// trajectory qualifies, +infinity when the last sample is outside the band.
double convergence_time(const Trajectory& traj, double theta_star, double band);

/// Half of (max - min) of `column` over the trailing `window` seconds.
/// Callers should size the window to cover at least a few dither periods.
/// Throws WindowTooLong when the window exceeds the sampled span.
double oscillation_amplitude(std::span<const double> t, std::span<const double> column,
                             double window);

/// Pointwise | |J'(theta_hat)| - |J'hat| | against the analytic gradient,
/// plus the first time the error permanently stays below `threshold`.
/// Requires a trajectory with gradient-estimate columns (scheme1).
struct GradientErrorSeries {
    std::vector<double> t;
    std::vector<double> error;
    double settle_time = 0.0;
};
GradientErrorSeries gradient_error_series(const Trajectory& traj, const ObjectivePoly& objective,
                                          double threshold = 0.2);

/// Assembles RunMetrics. The steady-state window is the larger of the last
/// 10% of the run and 20 dither periods.
RunMetrics compute_metrics(const Trajectory& traj, const ObjectivePoly& objective,
                           double theta_star, double band = 0.05, double grad_threshold = 0.2);

/// Trailing-window length used by compute_metrics.
double steady_state_window(const Trajectory& traj);

}  // namespace esclab
