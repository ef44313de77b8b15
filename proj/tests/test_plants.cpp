#include <doctest.h>

#include <cmath>

#include "esclab/plant.hpp"
#include "esclab/sim.hpp"

using namespace esclab;

TEST_SUITE("plants") {

TEST_CASE("example plant is at equilibrium at the origin for theta = 0") {
    const PlantModel plant = example_plant(ObjectivePoly::example1());
    StateVector d(2);
    plant.deriv(StateVector{0.0, 0.0}, 0.0, d);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
}

TEST_CASE("equilibrium map satisfies the dynamics over a theta sweep") {
    const PlantModel plant = example_plant(ObjectivePoly::example1());
    StateVector d(2);
    for (double theta = -5.0; theta <= 5.0; theta += 0.25) {
        const StateVector eq = plant.equilibrium(theta);
        CHECK(eq[0] == doctest::Approx(theta / 4.0).epsilon(1e-12));
        plant.deriv(eq, theta, d);
        CHECK(std::abs(d[0]) <= 1e-9);
        CHECK(std::abs(d[1]) <= 1e-9);
    }
}

TEST_CASE("steady-state output at the example-1 maximizer") {
    const PlantModel plant = example_plant(ObjectivePoly::example1());
    const StateVector eq = plant.equilibrium(0.87577);
    CHECK(std::abs(plant.output(eq, 0.87577) - 10.409132266) <= 1e-6);
}

TEST_CASE("static plant evaluates the objective directly") {
    const PlantModel p1 = static_plant(ObjectivePoly::example1());
    CHECK(p1.output(StateVector{}, 0.0) == 10.0);
    CHECK(std::abs(p1.output(StateVector{}, 0.87577) - 10.409132266) <= 1e-6);

    const PlantModel p2 = static_plant(ObjectivePoly::example2());
    CHECK(std::abs(p2.output(StateVector{}, -3.59205) - 144.6974) <= 1e-3);
}

TEST_CASE("analytic gradient values") {
    const ObjectivePoly obj = ObjectivePoly::example1();
    CHECK(objective_gradient(obj, 0.0) == 0.0);
    CHECK(std::abs(objective_gradient(obj, 0.87577)) <= 1e-3);
    CHECK(std::abs(objective_gradient(obj, 1.0) - (-11.0 / 15.0)) <= 1e-9);
}

TEST_CASE("second and third derivatives at the example-1 maximizer") {
    const ObjectivePoly obj = ObjectivePoly::example1();
    const Curvature c = objective_second_third_derivative(obj, 0.87577);
    CHECK(std::abs(c.second - (-4.7346)) <= 1e-3);
    CHECK(std::abs(c.third - (-17.8185)) <= 1e-3);
    CHECK(obj.second_derivative(0.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("third derivative is linear in theta: 24 c4 theta + 6 c3") {
    const ObjectivePoly obj({2.0, -1.0, 0.5, 0.3, -0.7});
    for (double theta = -3.0; theta <= 3.0; theta += 0.5) {
        CHECK(obj.third_derivative(theta) ==
              doctest::Approx(24.0 * -0.7 * theta + 6.0 * 0.3).epsilon(1e-13));
    }
}

TEST_CASE("gradient matches central differences to 1e-6 over [-5, 5]") {
    const ObjectivePoly obj = ObjectivePoly::example1();
    const double h = 1e-5;
    for (int i = 0; i <= 100; ++i) {
        const double theta = -5.0 + 0.1 * i;
        const double fd = (obj.value(theta + h) - obj.value(theta - h)) / (2.0 * h);
        CHECK(std::abs(obj.derivative(theta) - fd) <= 1e-6);
    }
}

TEST_CASE("oracle equivalence: h(l(theta)) equals J(theta) to 1e-10") {
    for (const ObjectivePoly& obj : {ObjectivePoly::example1(), ObjectivePoly::example2()}) {
        const PlantModel plant = example_plant(obj);
        for (int i = 0; i < 100; ++i) {
            const double theta = -5.0 + 10.0 * i / 99.0;
            const double y = plant.output(plant.equilibrium(theta), theta);
            CHECK(std::abs(y - obj.value(theta)) <= 1e-10);
        }
    }
}

TEST_CASE("example-1 stationary points") {
    const auto points = stationary_points(ObjectivePoly::example1());
    REQUIRE(points.size() == 3);
    CHECK(std::abs(points[0].theta - (-0.47577)) <= 1e-4);
    CHECK(points[0].kind == StationaryPoint::Kind::maximum);
    CHECK(std::abs(points[1].theta) <= 1e-4);
    CHECK(points[1].kind == StationaryPoint::Kind::minimum);
    CHECK(std::abs(points[2].theta - 0.87577) <= 1e-4);
    CHECK(points[2].kind == StationaryPoint::Kind::maximum);
    CHECK(std::abs(global_maximum(ObjectivePoly::example1()).theta - 0.87577) <= 1e-4);
}

TEST_CASE("example-2 stationary points") {
    const auto points = stationary_points(ObjectivePoly::example2());
    REQUIRE(points.size() == 3);
    CHECK(std::abs(points[0].theta - (-3.59205)) <= 1e-4);
    CHECK(points[0].kind == StationaryPoint::Kind::maximum);
    CHECK(std::abs(points[1].theta - 0.07547) <= 1e-4);
    CHECK(points[1].kind == StationaryPoint::Kind::minimum);
    CHECK(std::abs(points[2].theta - 2.76658) <= 1e-4);
    CHECK(points[2].kind == StationaryPoint::Kind::maximum);
    CHECK(std::abs(global_maximum(ObjectivePoly::example2()).theta - (-3.59205)) <= 1e-4);
}

TEST_CASE("pure quartic has one degenerate stationary point") {
    const auto points = stationary_points(ObjectivePoly({0.0, 0.0, 0.0, 0.0, -1.0}));
    REQUIRE(points.size() == 1);
    CHECK(points[0].theta == doctest::Approx(0.0));
    CHECK(points[0].kind == StationaryPoint::Kind::degenerate);
}

TEST_CASE("stationary points require a negative leading coefficient") {
    CHECK_THROWS_AS(stationary_points(ObjectivePoly({10.0, 0.0, -1.0, 0.0, 0.0})), DomainError);
}

TEST_CASE("plant settles to the equilibrium map within 10 s") {
    const PlantModel plant = example_plant(ObjectivePoly::example1());
    const double theta = 1.3;
    const SystemFn rhs = [&](double, std::span<const double> x, std::span<double> d) {
        plant.deriv(x, theta, d);
    };
    const StateTrajectory traj = simulate(rhs, {0.0, 0.0}, 0.0, 10.0, 0.001, 10000);
    const StateVector eq = plant.equilibrium(theta);
    CHECK(std::abs(traj.back()[0] - eq[0]) <= 1e-6);
    CHECK(std::abs(traj.back()[1] - eq[1]) <= 1e-6);
}

}  // TEST_SUITE
