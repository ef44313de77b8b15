#include "esclab/loop.hpp"

#include <cmath>
#include <random>

namespace esclab {

double SchemeConfig::dither_period() const { return 2.0 * M_PI / omega; }

double dither(double t, double amplitude, double omega) {
    return amplitude * std::sin(omega * t);
}

void loop_derivatives(const Scheme& scheme, double t, std::span<const double> x,
                      const ControllerState& ctrl, double grad_measure, std::span<double> dxdt) {
    const SchemeConfig& cfg = scheme.config;
    const StateLayout& lay = scheme.layout;

    const double s = std::sin(cfg.omega * t);
    const double theta = ctrl.theta_hat + ctrl.amplitude * s;

    scheme.plant.deriv(x, theta, dxdt.first(static_cast<std::size_t>(lay.plant_dim)));
    const double y = scheme.plant.output(x, theta);

    if (cfg.variant == Variant::tan2009) {
        dxdt[static_cast<std::size_t>(lay.theta_hat)] = cfg.omega * cfg.delta * y * s;
        dxdt[static_cast<std::size_t>(lay.xi)] = 0.0;
        dxdt[static_cast<std::size_t>(lay.eta)] = 0.0;
        dxdt[static_cast<std::size_t>(lay.amplitude)] =
            amplitude_derivative(scheme.law, std::max(ctrl.amplitude, 0.0), 0.0);
        return;
    }

    // Washout rejects the DC component of y; the residue is demodulated and
    // low-pass filtered into xi, the scaled-gradient signal that drives
    // theta_hat. The classical variant carries the amplitude on the
    // demodulation signal instead of adapting it.
    const double demod = (cfg.variant == Variant::classical) ? ctrl.amplitude * s : s;
    const double washed = y - ctrl.eta;

    dxdt[static_cast<std::size_t>(lay.theta_hat)] = cfg.k() * ctrl.xi;
    dxdt[static_cast<std::size_t>(lay.xi)] = cfg.omega_l() * (-ctrl.xi + washed * demod);
    dxdt[static_cast<std::size_t>(lay.eta)] = cfg.omega_h() * washed;
    dxdt[static_cast<std::size_t>(lay.amplitude)] =
        amplitude_derivative(scheme.law, std::max(ctrl.amplitude, 0.0), grad_measure);
}

namespace {

AdaptationLaw make_law(const SchemeConfig& cfg) {
    AdaptationLaw law;
    switch (cfg.variant) {
        case Variant::scheme1:
            law.kind = AdaptationLaw::Kind::scheme1;
            break;
        case Variant::scheme2:
            law.kind = AdaptationLaw::Kind::scheme2;
            break;
        case Variant::tan2009:
            law.kind = AdaptationLaw::Kind::tan2009;
            break;
        case Variant::classical:
            law.kind = AdaptationLaw::Kind::constant;
            break;
    }
    law.lambda = cfg.lambda();
    law.gamma = cfg.gamma;
    law.g = cfg.g;
    return law;
}

void require(bool ok, const char* message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

Scheme build_scheme(const PlantModel& plant, const SchemeConfig& config) {
    require(static_cast<bool>(plant.deriv), "plant: derivative function missing");
    require(static_cast<bool>(plant.output), "plant: output function missing");
    require(plant.state_dim >= 0, "plant: state_dim must be >= 0");

    require(config.omega > 0.0, "scheme.omega must be > 0");
    require(config.delta > 0.0, "scheme.delta must be > 0");
    require(config.epsilon > 0.0, "scheme.epsilon must be > 0");
    require(config.omega_h_prime > 0.0, "scheme.omega_h_prime must be > 0");
    require(config.omega_l_prime > 0.0, "scheme.omega_l_prime must be > 0");
    require(config.k_prime > 0.0, "scheme.k_prime must be > 0");
    require(config.lambda_prime >= 0.0, "scheme.lambda_prime must be >= 0");
    require(config.a0 >= 0.0, "scheme.a0 must be >= 0");
    require(std::isfinite(config.theta_hat0), "scheme.theta_hat0 must be finite");

    if (config.variant == Variant::scheme1 || config.variant == Variant::scheme2) {
        require(config.gamma > 0.0, "scheme.gamma must be > 0");
    }
    if (config.g) {
        require(std::abs(config.g(0.0)) < 1e-12, "scheme.g must satisfy g(0) = 0");
        require(config.g(1.0) > 0.0, "scheme.g must be positive for a > 0");
    } else {
        require(config.g_name == "identity", "scheme.g: unknown amplitude shape");
    }
    if (config.variant == Variant::scheme1) {
        require(config.kf_q >= 0.0, "noise.q must be >= 0");
        require(config.kf_r > 0.0, "noise.r must be > 0");
        if (config.kf_override) config.kf_override->validate();
    }

    Scheme scheme;
    scheme.plant = plant;
    scheme.config = config;
    scheme.law = make_law(config);

    StateLayout lay;
    lay.plant_dim = plant.state_dim;
    lay.theta_hat = plant.state_dim;
    lay.xi = plant.state_dim + 1;
    lay.eta = plant.state_dim + 2;
    lay.amplitude = plant.state_dim + 3;
    lay.size = plant.state_dim + 4;
    scheme.layout = lay;
    return scheme;
}

namespace {

ControllerState unpack(const StateLayout& lay, std::span<const double> state) {
    ControllerState ctrl;
    ctrl.theta_hat = state[static_cast<std::size_t>(lay.theta_hat)];
    ctrl.xi = state[static_cast<std::size_t>(lay.xi)];
    ctrl.eta = state[static_cast<std::size_t>(lay.eta)];
    ctrl.amplitude = state[static_cast<std::size_t>(lay.amplitude)];
    return ctrl;
}

}  // namespace

Trajectory simulate_scheme(const Scheme& scheme, const SimSpec& sim, std::span<const double> x0,
                           const NoiseSpec& noise) {
    const SchemeConfig& cfg = scheme.config;
    const StateLayout& lay = scheme.layout;
    const auto n = static_cast<std::size_t>(lay.plant_dim);

    if (x0.size() != n) throw ConfigError("plant.x0: length must match the plant state dimension");
    if (!(sim.t_end > sim.t0)) throw ConfigError("sim.t_end must exceed sim.t0");
    if (sim.sample_every < 1) throw ConfigError("sim.sample_every must be >= 1");

    const double dt =
        sim.dt > 0.0 ? sim.dt : std::min(0.01, 2.0 * M_PI / (cfg.omega * 200.0));
    const auto n_steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround((sim.t_end - sim.t0) / dt)));

    // Stacked state: plant, then controller.
    StateVector state(static_cast<std::size_t>(lay.size));
    std::copy(x0.begin(), x0.end(), state.begin());
    state[static_cast<std::size_t>(lay.theta_hat)] = cfg.theta_hat0;
    state[static_cast<std::size_t>(lay.xi)] = 0.0;
    state[static_cast<std::size_t>(lay.amplitude)] = cfg.a0;

    const double theta_at = cfg.theta_hat0 + dither(sim.t0, cfg.a0, cfg.omega);
    const double y0 = scheme.plant.output(x0, theta_at);
    // Filter states start at zero. Seeding eta at the first measurement looks
    // harmless but strengthens the early demodulated signal enough to tip the
    // marginally damped transient of the quartic examples into ring-up; with
    // eta(t0) = 0 the amplitude gate opens during the washout transient and
    // the decaying excitation damps the ringing.
    state[static_cast<std::size_t>(lay.eta)] = 0.0;

    const bool with_kf = cfg.variant == Variant::scheme1;
    KalmanConfig kf_cfg =
        cfg.kf_override ? *cfg.kf_override : KalmanConfig::from_scalars(cfg.kf_q, cfg.kf_r);
    if (!cfg.kf_override) kf_cfg.psi0 = Vec3{0.0, 0.0, y0};
    KalmanState kf{kf_cfg.psi0, kf_cfg.P0, sim.t0};

    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gaussian(0.0, std::sqrt(std::max(kf_cfg.r, 0.0)));

    double grad_hold = with_kf ? gradient_magnitude(kf) : 0.0;

    const SystemFn rhs = [&](double t, std::span<const double> s, std::span<double> dsdt) {
        const ControllerState ctrl = unpack(lay, s);
        double measure = 0.0;
        if (cfg.variant == Variant::scheme1) {
            measure = grad_hold;
        } else if (cfg.variant == Variant::scheme2) {
            measure = std::abs(ctrl.xi);
        }
        loop_derivatives(scheme, t, s.first(n), ctrl, measure, dsdt);
    };

    Trajectory traj;
    traj.variant = cfg.variant;
    traj.state_dim = lay.plant_dim;
    traj.omega = cfg.omega;
    const std::size_t reserve = n_steps / sim.sample_every + 2;
    traj.t.reserve(reserve);
    traj.x.resize(n);

    auto record = [&](double t) {
        const ControllerState ctrl = unpack(lay, state);
        const double th = ctrl.theta_hat + dither(t, ctrl.amplitude, cfg.omega);
        traj.t.push_back(t);
        for (std::size_t i = 0; i < n; ++i) traj.x[i].push_back(state[i]);
        traj.y.push_back(scheme.plant.output(std::span<const double>(state).first(n), th));
        traj.theta_hat.push_back(ctrl.theta_hat);
        traj.theta.push_back(th);
        traj.xi.push_back(ctrl.xi);
        traj.eta.push_back(ctrl.eta);
        traj.a.push_back(ctrl.amplitude);
        if (with_kf) {
            traj.psi1.push_back(kf.psi_hat[0]);
            traj.psi2.push_back(kf.psi_hat[1]);
            traj.psi3.push_back(kf.psi_hat[2]);
            traj.grad_mag.push_back(gradient_magnitude(kf));
        }
    };

    Rk4Stepper stepper(state.size());
    SimClock clock{sim.t0, dt, 0};
    record(clock.time());

    for (std::size_t kstep = 0; kstep < n_steps; ++kstep) {
        if (with_kf) grad_hold = gradient_magnitude(kf);

        clock.step_index = kstep;
        stepper.step(rhs, clock.time(), dt, state, kstep);
        clock.step_index = kstep + 1;
        const double t_now = clock.time();

        // The amplitude law cannot cross zero, but a huge dt*lambda could
        // overshoot by rounding; truncate at zero and reject real crossings.
        double& amp = state[static_cast<std::size_t>(lay.amplitude)];
        if (amp < 0.0) {
            if (amp < -1e-12) {
                throw NonFiniteState("amplitude crossed zero (dt too large for lambda)", kstep);
            }
            amp = 0.0;
        }

        if (with_kf) {
            kf = kf_predict(kf, cfg.omega, dt, kf_cfg.Q);
            const ControllerState ctrl = unpack(lay, state);
            const double th = ctrl.theta_hat + dither(t_now, ctrl.amplitude, cfg.omega);
            double y_meas =
                scheme.plant.output(std::span<const double>(state).first(n), th);
            if (noise.enabled) y_meas += gaussian(rng);
            kf = kf_update(kf, y_meas, ctrl.amplitude, kf_cfg.r);
        }

        if ((kstep + 1) % sim.sample_every == 0 || kstep + 1 == n_steps) {
            record(t_now);
        }
    }
    return traj;
}

}  // namespace esclab
