#include "esclab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "esclab/errors.hpp"

namespace esclab {

namespace {

/// First sample time from which |series - center| <= band holds to the end;
/// +inf if the final sample violates, the first time stamp if none does.
double settle_time(std::span<const double> t, std::span<const double> series, double center,
                   double band) {
    std::size_t last_violation = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (std::abs(series[k] - center) > band) last_violation = k;
    }
    if (last_violation == std::numeric_limits<std::size_t>::max()) return t.front();
    if (last_violation + 1 >= t.size()) return std::numeric_limits<double>::infinity();
    return t[last_violation + 1];
}

std::size_t window_start_index(std::span<const double> t, double window) {
    const double span = t.back() - t.front();
    if (window > span + 1e-12) {
        throw WindowTooLong("oscillation window exceeds trajectory span");
    }
    const double cut = t.back() - window;
    auto it = std::lower_bound(t.begin(), t.end(), cut - 1e-12);
    return static_cast<std::size_t>(it - t.begin());
}

}  // namespace

double convergence_time(const Trajectory& traj, double theta_star, double band) {
    if (band <= 0.0) throw DomainError("convergence_time: band must be > 0");
    return settle_time(traj.t, traj.theta_hat, theta_star, band);
}

double oscillation_amplitude(std::span<const double> t, std::span<const double> column,
                             double window) {
    const std::size_t start = window_start_index(t, window);
    double lo = column[start], hi = column[start];
    for (std::size_t k = start; k < column.size(); ++k) {
        lo = std::min(lo, column[k]);
        hi = std::max(hi, column[k]);
    }
    return 0.5 * (hi - lo);
}

GradientErrorSeries gradient_error_series(const Trajectory& traj, const ObjectivePoly& objective,
                                          double threshold) {
    if (!traj.has_gradient_estimates()) {
        throw MissingColumns("gradient_error_series: trajectory has no gradient-estimate columns");
    }
    GradientErrorSeries series;
    series.t = traj.t;
    series.error.resize(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double true_mag = std::abs(objective.derivative(traj.theta_hat[k]));
        series.error[k] = std::abs(true_mag - traj.grad_mag[k]);
    }
    series.settle_time = settle_time(series.t, series.error, 0.0, threshold);
    return series;
}

double steady_state_window(const Trajectory& traj) {
    const double span = traj.t.back() - traj.t.front();
    const double periods = traj.omega > 0.0 ? 20.0 * 2.0 * M_PI / traj.omega : 0.0;
    return std::min(span, std::max(0.1 * span, periods));
}

RunMetrics compute_metrics(const Trajectory& traj, const ObjectivePoly& objective,
                           double theta_star, double band, double grad_threshold) {
    RunMetrics m;
    m.converge_time = convergence_time(traj, theta_star, band);
    m.final_theta_error_pct =
        100.0 * std::abs(traj.theta_hat.back() - theta_star) / std::max(std::abs(theta_star), 1e-300);
    const double window = steady_state_window(traj);
    m.ss_osc_amplitude_theta_hat = oscillation_amplitude(traj.t, traj.theta_hat, window);
    m.ss_osc_amplitude_y = oscillation_amplitude(traj.t, traj.y, window);
    m.final_amplitude = traj.a.back();
    if (traj.has_gradient_estimates()) {
        m.grad_error_settle_time = gradient_error_series(traj, objective, grad_threshold).settle_time;
    }
    return m;
}

}  // namespace esclab
