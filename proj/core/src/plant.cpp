#include "esclab/plant.hpp"

namespace esclab {

PlantModel example_plant(const ObjectivePoly& objective) {
    PlantModel plant;
    plant.name = "example";
    plant.state_dim = 2;
    plant.objective = objective;
    plant.deriv = [](std::span<const double> x, double theta, std::span<double> dxdt) {
        // u = -x1 - 4 x2 + theta folded into x2dot.
        dxdt[0] = -x[0] + x[1];
        dxdt[1] = -x[0] - 3.0 * x[1] + theta;
    };
    plant.output = [objective](std::span<const double> x, double /*theta*/) {
        return objective.value(x[0] + 3.0 * x[1]);
    };
    plant.equilibrium = [](double theta) {
        return StateVector{theta / 4.0, theta / 4.0};
    };
    return plant;
}

PlantModel static_plant(const ObjectivePoly& objective) {
    PlantModel plant;
    plant.name = "static";
    plant.state_dim = 0;
    plant.objective = objective;
    plant.deriv = [](std::span<const double>, double, std::span<double>) {};
    plant.output = [objective](std::span<const double>, double theta) {
        return objective.value(theta);
    };
    plant.equilibrium = [](double) { return StateVector{}; };
    return plant;
}

double objective_gradient(const ObjectivePoly& objective, double theta) {
    return objective.derivative(theta);
}

Curvature objective_second_third_derivative(const ObjectivePoly& objective, double theta) {
    return {objective.second_derivative(theta), objective.third_derivative(theta)};
}

}  // namespace esclab
