#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "esclab/adaptation.hpp"
#include "esclab/kalman.hpp"
#include "esclab/plant.hpp"
#include "esclab/trajectory.hpp"

namespace esclab {

/// Controller variables advanced alongside the plant state.
struct ControllerState {
    double theta_hat = 0.0;  // nominal reference / current extremum estimate
    double xi = 0.0;         // low-pass filtered demodulated signal
    double eta = 0.0;        // washout (high-pass) filter state
    double amplitude = 0.0;  // excitation amplitude a
};

/// All gains in the scaled representation: omega, delta, epsilon are small
/// positive constants; the primed constants are O(1). Physical gains derive
/// as
///   omega_h = omega * delta * omega_h_prime,
///   omega_l = omega * delta * omega_l_prime,
///   k       = omega * delta * k_prime,
///   lambda  = omega * delta * epsilon * lambda_prime.
struct SchemeConfig {
    Variant variant = Variant::scheme2;

    double omega = 0.1;
    double delta = 0.02;
    double epsilon = 0.1;
    double omega_h_prime = 15.0;
    double omega_l_prime = 5.0;
    double k_prime = 15.0;
    double lambda_prime = 1.0;  // >= 0; zero freezes the amplitude
    double gamma = 1.0;         // gate scaling, scheme1/scheme2 only

    double a0 = 1.0;
    double theta_hat0 = 0.0;

    std::string g_name = "identity";
    std::function<double(double)> g;  // optional custom shape, g(0)=0, g>0 otherwise

    double kf_q = 0.01;  // scheme1: Q = q I
    double kf_r = 0.01;  // scheme1: measurement variance
    std::optional<KalmanConfig> kf_override;  // full-matrix Q / P0 / psi0 override

    double omega_h() const { return omega * delta * omega_h_prime; }
    double omega_l() const { return omega * delta * omega_l_prime; }
    double k() const { return omega * delta * k_prime; }
    double lambda() const { return omega * delta * epsilon * lambda_prime; }

    /// The dither period 2*pi/omega in seconds.
    double dither_period() const;
};

/// Stacked state layout of a runnable scheme: plant states first, then
/// (theta_hat, xi, eta, a). The scheme1 gradient estimator advances as a
/// discrete per-step update outside the ODE state.
struct StateLayout {
    int plant_dim = 0;
    int theta_hat = 0;
    int xi = 0;
    int eta = 0;
    int amplitude = 0;
    int size = 0;
};

/// A validated, runnable composition of plant + controller.
struct Scheme {
    PlantModel plant;
    SchemeConfig config;
    StateLayout layout;
    AdaptationLaw law;
};

/// Excitation signal amplitude * sin(omega * t).
double dither(double t, double amplitude, double omega);

/// Full stacked derivative of (x, theta_hat, xi, eta, a) at time t.
///
///   etadot = -omega_h * eta + omega_h * y
///   xidot  = -omega_l * xi  + omega_l * (y - eta) * d(t)
///   theta_hatdot = k * xi
///
/// with d(t) = sin(wt) for the proposed schemes and a*sin(wt) for the
/// classical variant. The loop runs in unshifted coordinates; the extremum
/// location never enters the controller. For tan2009 the filters are unused
/// (xidot = etadot = 0) and theta_hatdot = omega*delta*y*sin(wt).
///
/// `grad_measure` is |J'hat| for scheme1 (held constant across a step by the
/// caller) and |xi| for scheme2; it is ignored by the other variants.
void loop_derivatives(const Scheme& scheme, double t, std::span<const double> x,
                      const ControllerState& ctrl, double grad_measure, std::span<double> dxdt);

/// Validates the configuration (throws ConfigError naming the violated
/// invariant) and assembles the runnable scheme.
Scheme build_scheme(const PlantModel& plant, const SchemeConfig& config);

struct SimSpec {
    double t0 = 0.0;
    double t_end = 0.0;
    double dt = 0.0;  // <= 0 selects the default min(0.01, 2*pi/(omega*200))
    std::size_t sample_every = 1;
};

/// Measurement-noise injection for the scheme1 estimator (off by default so
/// runs reproduce deterministically). When enabled, v ~ N(0, kf_r) is added
/// to the measurement fed to the filter, drawn from a generator seeded with
/// `seed`.
struct NoiseSpec {
    bool enabled = false;
    std::uint64_t seed = 0;
};

/// Advances plant + controller from x0 with fixed-step RK4, interleaving the
/// scheme1 gradient estimator as a discrete predict/update per step, and
/// records every sample_every-th step (first and last always included).
/// Controller initialization: theta_hat = config.theta_hat0, xi = eta = 0,
/// a = config.a0; estimator psi0 = (0, 0, y(t0)), P0 = I unless overridden.
Trajectory simulate_scheme(const Scheme& scheme, const SimSpec& sim, std::span<const double> x0,
                           const NoiseSpec& noise = {});

}  // namespace esclab
