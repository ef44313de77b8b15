#include <benchmark/benchmark.h>

#include <cmath>

#include "esclab/experiment.hpp"
#include "esclab/kalman.hpp"
#include "esclab/loop.hpp"
#include "esclab/sim.hpp"

using namespace esclab;

namespace {

Scheme example1_scheme(Variant variant) {
    ExperimentConfig cfg = preset_config(variant == Variant::scheme1 ? "ex1-scheme1"
                                                                     : "ex1-scheme2");
    return build_scheme(make_plant(cfg.plant), cfg.scheme);
}

void BM_Rk4StepPlant(benchmark::State& state) {
    const PlantModel plant = example_plant(ObjectivePoly::example1());
    const SystemFn rhs = [&](double t, std::span<const double> x, std::span<double> d) {
        plant.deriv(x, -1.0 + std::sin(0.1 * t), d);
    };
    StateVector x{0.0, 0.0};
    Rk4Stepper stepper(2);
    double t = 0.0;
    for (auto _ : state) {
        stepper.step(rhs, t, 0.05, x);
        t += 0.05;
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_Rk4StepPlant);

void BM_KalmanPredictUpdate(benchmark::State& state) {
    KalmanState kf;
    kf.psi_hat = {0.0, 0.0, 10.0};
    const Mat3 Q = Mat3::scaled_identity(0.01);
    double t = 0.0;
    for (auto _ : state) {
        kf = kf_predict(kf, 0.1, 0.05, Q);
        kf = kf_update(kf, 10.0 + std::sin(t), 1.0, 0.01);
        t += 0.05;
        benchmark::DoNotOptimize(kf.psi_hat.data());
    }
}
BENCHMARK(BM_KalmanPredictUpdate);

void BM_AmplitudeDerivative(benchmark::State& state) {
    AdaptationLaw law;
    law.kind = AdaptationLaw::Kind::scheme2;
    law.lambda = 0.001;
    law.gamma = 8.0;
    double a = 1.0, m = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(amplitude_derivative(law, a, m));
        m = m < 4.0 ? m + 1e-3 : 0.0;
    }
}
BENCHMARK(BM_AmplitudeDerivative);

void BM_SchemeSecond(benchmark::State& state) {
    // One simulated second (20 steps at dt = 0.05) of the full scheme-1 loop
    // including the interleaved estimator.
    const Scheme scheme = example1_scheme(Variant::scheme1);
    const StateVector x0{0.0, 0.0};
    for (auto _ : state) {
        const Trajectory traj = simulate_scheme(scheme, {0.0, 1.0, 0.05, 20}, x0);
        benchmark::DoNotOptimize(traj.theta_hat.data());
    }
}
BENCHMARK(BM_SchemeSecond);

void BM_PresetEx1Scheme2(benchmark::State& state) {
    const ExperimentConfig cfg = preset_config("ex1-scheme2");
    for (auto _ : state) {
        const RunResult result = run_experiment(cfg, /*write_files=*/false);
        benchmark::DoNotOptimize(result.metrics.converge_time);
    }
}
BENCHMARK(BM_PresetEx1Scheme2)->Unit(benchmark::kMillisecond);

void BM_FindPeriodicSolution(benchmark::State& state) {
    SchemeConfig cfg;
    cfg.delta = 1e-3;
    for (auto _ : state) {
        const PeriodicSolution sol =
            find_periodic_solution(cfg, 0.15, ObjectivePoly::example1(), 0.87577116442377645,
                                   1e-8);
        benchmark::DoNotOptimize(sol.theta_p_mean);
    }
}
BENCHMARK(BM_FindPeriodicSolution)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
