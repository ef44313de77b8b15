#include <doctest.h>

#include <cmath>
#include <cstring>
#include <thread>

#include "esclab/sim.hpp"

using namespace esclab;

namespace {

const SystemFn zero_rhs = [](double, std::span<const double>, std::span<double> d) {
    for (double& v : d) v = 0.0;
};

const SystemFn decay_rhs = [](double, std::span<const double> x, std::span<double> d) {
    d[0] = -x[0];
};

const SystemFn oscillator_rhs = [](double, std::span<const double> x, std::span<double> d) {
    d[0] = x[1];
    d[1] = -x[0];
};

}  // namespace

TEST_SUITE("sim_core") {

TEST_CASE("zero derivative leaves the state untouched") {
    const StateVector out = rk4_step(zero_rhs, 0.0, {3.7}, 0.01);
    CHECK(out[0] == 3.7);
}

TEST_CASE("one step of exponential decay matches exp(-dt) to 1e-10") {
    const StateVector out = rk4_step(decay_rhs, 0.0, {1.0}, 0.01);
    CHECK(std::abs(out[0] - std::exp(-0.01)) <= 1e-10);
}

TEST_CASE("harmonic oscillator energy is conserved to 1e-6 over one step") {
    const StateVector out = rk4_step(oscillator_rhs, 0.0, {1.0, 0.0}, 0.1);
    const double energy = out[0] * out[0] + out[1] * out[1];
    CHECK(std::abs(energy - 1.0) <= 1e-6);
}

TEST_CASE("constant system sampling: 11 samples over 10 steps") {
    const StateTrajectory traj = simulate(zero_rhs, {1.0}, 0.0, 1.0, 0.1, 1);
    REQUIRE(traj.size() == 11);
    for (const auto& s : traj.states) CHECK(s[0] == 1.0);
}

TEST_CASE("exponential decay over [0,5] lands within 1e-9 of exp(-5)") {
    const StateTrajectory traj = simulate(decay_rhs, {1.0}, 0.0, 5.0, 0.001, 1000);
    CHECK(std::abs(traj.back()[0] - std::exp(-5.0)) <= 1e-9);
}

TEST_CASE("sample_every=10 over 100 steps records 11 states") {
    const StateTrajectory traj = simulate(zero_rhs, {1.0}, 0.0, 10.0, 0.1, 10);
    CHECK(traj.size() == 11);
}

TEST_CASE("time stamps follow index arithmetic exactly") {
    const double t0 = 0.25, dt = 0.1;
    const StateTrajectory traj = simulate(zero_rhs, {0.0}, t0, t0 + 1.0, dt, 2);
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double expected = t0 + static_cast<double>(2 * j) * dt;
        CHECK(traj.times[j] == expected);
    }
}

TEST_CASE("halving dt cuts the global error by at least 12x") {
    auto final_error = [](double dt) {
        const StateTrajectory traj =
            simulate(decay_rhs, {1.0}, 0.0, 1.0, dt, 100000);
        return std::abs(traj.back()[0] - std::exp(-1.0));
    };
    const double e1 = final_error(0.02);
    const double e2 = final_error(0.01);
    const double e3 = final_error(0.005);
    CHECK(e1 / e2 >= 12.0);
    CHECK(e2 / e3 >= 12.0);
}

TEST_CASE("identical inputs give bit-identical trajectories") {
    const SystemFn rhs = [](double t, std::span<const double> x, std::span<double> d) {
        d[0] = std::sin(t) - 0.3 * x[0];
        d[1] = x[0] * x[0] - x[1];
    };
    const StateTrajectory a = simulate(rhs, {1.0, -0.5}, 0.0, 20.0, 0.01, 7);
    const StateTrajectory b = simulate(rhs, {1.0, -0.5}, 0.0, 20.0, 0.01, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(std::memcmp(a.states[j].data(), b.states[j].data(), 2 * sizeof(double)) == 0);
        CHECK(a.times[j] == b.times[j]);
    }
}

TEST_CASE("concurrent runs match a serial run bit for bit") {
    const SystemFn rhs = [](double t, std::span<const double> x, std::span<double> d) {
        d[0] = -x[0] + 0.1 * std::sin(t);
    };
    const StateTrajectory serial = simulate(rhs, {2.0}, 0.0, 50.0, 0.01, 10);
    StateTrajectory from_thread_a, from_thread_b;
    std::thread ta([&] { from_thread_a = simulate(rhs, {2.0}, 0.0, 50.0, 0.01, 10); });
    std::thread tb([&] { from_thread_b = simulate(rhs, {2.0}, 0.0, 50.0, 0.01, 10); });
    ta.join();
    tb.join();
    for (std::size_t j = 0; j < serial.size(); ++j) {
        CHECK(from_thread_a.states[j][0] == serial.states[j][0]);
        CHECK(from_thread_b.states[j][0] == serial.states[j][0]);
    }
}

TEST_CASE("non-finite derivatives abort with the failing step index") {
    const SystemFn rhs = [](double t, std::span<const double>, std::span<double> d) {
        d[0] = t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    };
    try {
        simulate(rhs, {0.0}, 0.0, 1.0, 0.1, 1);
        FAIL("expected NonFiniteState");
    } catch (const NonFiniteState& e) {
        CHECK(e.step_index >= 4);
        CHECK(e.step_index <= 6);
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(simulate(zero_rhs, {1.0}, 0.0, 1.0, -0.1, 1), DomainError);
    CHECK_THROWS_AS(simulate(zero_rhs, {1.0}, 1.0, 1.0, 0.1, 1), DomainError);
    CHECK_THROWS_AS(simulate(zero_rhs, {1.0}, 0.0, 1.0, 0.1, 0), DomainError);
    CHECK_THROWS_AS(rk4_step(zero_rhs, 0.0, {1.0}, 0.0), DomainError);
}

}  // TEST_SUITE
