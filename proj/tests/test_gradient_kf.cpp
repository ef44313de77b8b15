#include <doctest.h>

#include <cmath>
#include <random>

#include "esclab/kalman.hpp"
#include "esclab/objective.hpp"

using namespace esclab;

namespace {

// Filter run against synthetic measurements of J(theta) = 10 - theta^2 at a
// frozen nominal reference theta_hat = 1 with dither 0.1 sin(0.1 t). The true
// gradient there is J'(1) = -2.
struct SyntheticRun {
    double omega = 0.1;
    double amplitude = 0.1;
    double theta_hat = 1.0;
    double dt = 0.05;
    double r = 0.01;
    Mat3 Q = Mat3::scaled_identity(0.01);
    KalmanState state;

    SyntheticRun() {
        state.psi_hat = {0.0, 0.0, measure(0.0)};
        state.P = Mat3::identity();
    }

    double measure(double t) const {
        const double theta = theta_hat + amplitude * std::sin(omega * t);
        return 10.0 - theta * theta;
    }

    void advance(int steps) {
        for (int k = 0; k < steps; ++k) {
            state = kf_predict(state, omega, dt, Q);
            state = kf_update(state, measure(state.t), amplitude, r);
        }
    }
};

}  // namespace

TEST_SUITE("gradient_kf") {

TEST_CASE("predict keeps the zero state at zero") {
    KalmanState s;
    s.psi_hat = {0.0, 0.0, 0.0};
    const KalmanState out = kf_predict(s, 0.1, 0.5, Mat3::zero());
    for (double v : out.psi_hat) CHECK(v == 0.0);
}

TEST_CASE("predict rotates (psi1, psi2) by omega*dt with the model's sign") {
    KalmanState s;
    s.psi_hat = {1.0, 0.0, 0.0};
    const KalmanState out = kf_predict(s, M_PI / 2.0, 1.0, Mat3::zero());
    CHECK(std::abs(out.psi_hat[0] - 0.0) <= 1e-12);
    CHECK(std::abs(out.psi_hat[1] - (-1.0)) <= 1e-12);
    CHECK(out.psi_hat[2] == 0.0);
}

TEST_CASE("gradient magnitude ignores the objective-value channel") {
    KalmanState s;
    s.psi_hat = {0.0, 0.0, 5.0};
    CHECK(gradient_magnitude(s) == 0.0);
    s.psi_hat = {3.0, 4.0, 0.0};
    CHECK(gradient_magnitude(s) == 5.0);
}

TEST_CASE("gradient magnitude is invariant under noise-free prediction") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        KalmanState s;
        s.psi_hat = {u(rng), u(rng), u(rng)};
        const double before = gradient_magnitude(s);
        const KalmanState out = kf_predict(s, u(rng) + 2.5, std::abs(u(rng)) + 0.01, Mat3::zero());
        CHECK(gradient_magnitude(out) == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("vanishing covariance freezes the estimate") {
    KalmanState s;
    s.psi_hat = {0.3, -0.4, 5.0};
    s.P = Mat3::scaled_identity(1e-30);
    const KalmanState out = kf_update(s, 100.0, 1.0, 0.01);
    CHECK(out.psi_hat[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(out.psi_hat[1] == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(out.psi_hat[2] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("zero amplitude corrects only the objective-value channel") {
    KalmanState s;
    s.psi_hat = {0.5, -0.2, 1.0};
    s.P = Mat3::identity();  // diagonal: no cross-coupling into psi1/psi2
    const KalmanState out = kf_update(s, 3.0, 0.0, 0.01);
    CHECK(out.psi_hat[0] == 0.5);
    CHECK(out.psi_hat[1] == -0.2);
    CHECK(out.psi_hat[2] > 1.0);
}

TEST_CASE("five dither periods recover the gradient magnitude") {
    SyntheticRun run;
    const int steps_per_period = static_cast<int>(std::llround(2.0 * M_PI / 0.1 / run.dt));
    run.advance(5 * steps_per_period);
    const double mag = gradient_magnitude(run.state);
    CHECK(mag >= 1.6);
    CHECK(mag <= 2.4);
}

TEST_CASE("noise-free estimate stays consistent from 10 periods on") {
    SyntheticRun run;
    const int steps_per_period = static_cast<int>(std::llround(2.0 * M_PI / 0.1 / run.dt));
    run.advance(10 * steps_per_period);
    const double true_mag = 2.0;  // |J'(1)| of 10 - theta^2
    const double budget = 0.25 * true_mag + 0.05;
    double worst = 0.0;
    for (int period = 0; period < 10; ++period) {
        run.advance(steps_per_period);
        worst = std::max(worst, std::abs(true_mag - gradient_magnitude(run.state)));
    }
    CHECK(worst <= budget);
}

TEST_CASE("estimates stay bounded with bounded measurements") {
    SyntheticRun run;
    const int steps_per_period = static_cast<int>(std::llround(2.0 * M_PI / 0.1 / run.dt));
    double peak = 0.0;
    for (int period = 0; period < 20; ++period) {
        run.advance(steps_per_period);
        peak = std::max(peak, gradient_magnitude(run.state));
    }
    CHECK(peak <= 10.0);
}

TEST_CASE("covariance stays symmetric to 1e-12 through a long run") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> noise(0.0, 1.0);
    KalmanState s;
    s.psi_hat = {0.0, 0.0, 0.0};
    s.P = Mat3::identity();
    const Mat3 Q = Mat3::scaled_identity(0.01);
    for (int k = 0; k < 10000; ++k) {
        s = kf_predict(s, 0.1, 0.05, Q);
        s = kf_update(s, noise(rng), 0.5 + 0.5 * std::sin(0.01 * k), 0.01);
        CHECK(s.P.max_asymmetry() <= 1e-12);
    }
}

TEST_CASE("corrupted covariance raises SingularInnovation") {
    KalmanState s;
    s.psi_hat = {0.0, 0.0, 0.0};
    s.P = Mat3::scaled_identity(-2.0);
    CHECK_THROWS_AS(kf_update(s, 1.0, 1.0, 0.01), SingularInnovation);
}

TEST_CASE("config validation") {
    KalmanConfig bad_r = KalmanConfig::from_scalars(0.01, 0.0);
    CHECK_THROWS_AS(bad_r.validate(), ConfigError);

    KalmanConfig asym;
    asym.Q(0, 1) = 1.0;  // not symmetric
    CHECK_THROWS_AS(asym.validate(), ConfigError);

    KalmanConfig semidefinite_p0;
    semidefinite_p0.P0 = Mat3::zero();
    CHECK_THROWS_AS(semidefinite_p0.validate(), ConfigError);

    KalmanConfig ok = KalmanConfig::from_scalars(0.0, 0.01);  // Q = 0 is PSD
    CHECK_NOTHROW(ok.validate());
}

}  // TEST_SUITE
