#pragma once

#include <functional>
#include <span>
#include <string>

#include "esclab/objective.hpp"
#include "esclab/sim.hpp"

namespace esclab {

/// Closed-loop SISO plant under a theta-parameterized feedback law:
/// xdot = f(x, alpha(x, theta)), y = h(x). The equilibrium map l(theta)
/// (xdot = 0 iff x = l(theta)) is carried when known analytically, and the
/// composed steady-state objective J(theta) = h(l(theta)) rides along as the
/// oracle for tests and metrics. Zero-state plants pass y through the
/// objective directly, which is why the output closure also receives theta.
///
/// Instances are immutable after construction and safe to share across
/// concurrent runs.
struct PlantModel {
    std::string name;
    int state_dim = 0;
    std::function<void(std::span<const double> x, double theta, std::span<double> dxdt)> deriv;
    std::function<double(std::span<const double> x, double theta)> output;
    std::function<StateVector(double theta)> equilibrium;  // l(theta); empty if unknown
    ObjectivePoly objective;
};

/// Two-state example plant
///   x1dot = -x1 + x2,   x2dot = x2 + u,   u = -x1 - 4 x2 + theta,
/// with y = objective(x1 + 3 x2). The closed-loop Jacobian [[-1,1],[-1,-3]]
/// has the double eigenvalue -2, and l(theta) = (theta/4, theta/4), so the
/// steady-state output map is exactly objective(theta).
PlantModel example_plant(const ObjectivePoly& objective);

/// Zero-state plant with y = objective(theta): the reference-to-output map
/// with no settling dynamics. Used for fast unit-scale runs.
PlantModel static_plant(const ObjectivePoly& objective);

/// Analytic first derivative of the objective.
double objective_gradient(const ObjectivePoly& objective, double theta);

/// Analytic second and third derivatives of the objective.
struct Curvature {
    double second = 0.0;
    double third = 0.0;
};
Curvature objective_second_third_derivative(const ObjectivePoly& objective, double theta);

}  // namespace esclab
