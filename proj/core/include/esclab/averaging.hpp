#pragma once

#include <span>
#include <vector>

#include "esclab/loop.hpp"
#include "esclab/objective.hpp"

namespace esclab {

/// State of the averaged (reduced) slow system in the slow time tau = w*t,
/// in coordinates shifted to the extremum: theta_tilde = theta_hat - theta*,
/// eta_tilde = eta - J(theta*). tau doubles as the phase state of the
/// periodic forcing.
struct AveragedState {
    double theta_tilde = 0.0;
    double xi = 0.0;
    double eta_tilde = 0.0;
    double tau = 0.0;
};

/// One (2*pi/omega)-periodic solution of the averaged system: per-period
/// means of the state and the periodicity defect of the converged orbit.
struct PeriodicSolution {
    double theta_p_mean = 0.0;
    double xi_p_mean = 0.0;
    double eta_p_mean = 0.0;
    double period = 0.0;    // seconds, 2*pi/omega
    double residual = 0.0;  // max-abs state difference across the last period
    int periods = 0;        // periods simulated until convergence
};

/// Objective shifted to a stationary point: nu(s) = J(s + theta*) - J(theta*),
/// so nu(0) = 0, nu'(0) = 0, and nu''(0) < 0 at a maximum. Throws
/// NotStationary when |J'(theta*)| > 1e-6.
double nu(const ObjectivePoly& objective, double theta_star, double s);

/// Right-hand side of the averaged system in slow time (d tau = 1):
///   theta_tilde' = delta K' xi
///   xi'        = -delta wL' xi + delta wL' (nu(theta_tilde + a0 sin tau) - eta_tilde) sin tau
///   eta_tilde' = -delta wH' eta_tilde + delta wH' nu(theta_tilde + a0 sin tau)
/// The plant is frozen at its equilibrium and the amplitude at a0.
AveragedState averaged_derivative(const AveragedState& state, const SchemeConfig& cfg, double a0,
                                  const ObjectivePoly& objective, double theta_star);

struct PeriodicSearchOptions {
    double tol = 1e-9;           // successive-period max-abs difference
    int max_periods = 20000;
    int steps_per_period = 1024;  // RK4 steps per 2*pi of tau
    std::vector<double>* residual_log = nullptr;  // per-period residuals, when wanted
};

/// Settles the averaged system onto its periodic solution by brute-force
/// simulation from the origin: integrate period by period until the state at
/// period boundaries changes by at most `tol`, then average one more period.
/// Throws NoConvergence when the period budget runs out.
PeriodicSolution find_periodic_solution(const SchemeConfig& cfg, double a0,
                                        const ObjectivePoly& objective, double theta_star,
                                        double tol = 1e-9,
                                        const PeriodicSearchOptions& options = {});

struct Prop1Row {
    double a0 = 0.0;
    double theta_mean = 0.0;
    double eta_mean = 0.0;
    double xi_mean = 0.0;
    double residual = 0.0;
};

/// Periodic-solution offsets across a list of amplitudes, with the leading
/// a0^2 coefficients of the theta and eta mean offsets fitted by least
/// squares (intercept absorbed) and compared against the analytic values
/// -nu'''(0) / (8 nu''(0)) and nu''(0) / 4.
struct Prop1Report {
    std::vector<Prop1Row> rows;
    double fitted_theta_coeff = 0.0;
    double fitted_eta_coeff = 0.0;
    double expected_theta_coeff = 0.0;
    double expected_eta_coeff = 0.0;
    double fit_tolerance = 0.15;  // relative
    bool theta_ok = false;
    bool eta_ok = false;
    bool xi_ok = false;  // |xi mean| within the delta + a0^3 budget for every a0
    bool pass = false;
};

Prop1Report proposition1_check(const SchemeConfig& cfg, std::span<const double> a0_list,
                               const ObjectivePoly& objective, double theta_star,
                               const PeriodicSearchOptions& options = {});

}  // namespace esclab
