#pragma once

#include <functional>

#include "esclab/errors.hpp"

namespace esclab {

/// Excitation-amplitude adaptation laws, as pure derivative functions.
///
///   scheme1:   adot = -lambda * g(a) * exp(-gamma * |J'hat|)
///   scheme2:   adot = -lambda * g(a) * exp(-gamma * |xi|)
///   tan2009:   adot = -lambda * g(a)            (ungated slow decay)
///   constant:  adot = 0                          (classical fixed amplitude)
///
/// `lambda` is the physical gain omega*delta*epsilon*lambda'. g must satisfy
/// g(0) = 0 and g(a) > 0 for a > 0 (identity by default), which keeps the
/// amplitude nonnegative: it decays toward zero and never crosses it.
struct AdaptationLaw {
    enum class Kind { scheme1, scheme2, tan2009, constant };

    Kind kind = Kind::constant;
    double lambda = 0.0;  // 1/s, >= 0
    double gamma = 0.0;   // dimensionless, > 0 for the gated kinds
    std::function<double(double)> g;  // defaults to identity when empty

    bool gated() const { return kind == Kind::scheme1 || kind == Kind::scheme2; }
};

/// d/dt of the excitation amplitude. `grad_measure` is |J'hat| for scheme1
/// and |xi| for scheme2 (callers take the absolute value; negative inputs are
/// rejected to surface caller bugs). Always <= 0; zero iff a = 0, lambda = 0,
/// or the law is `constant`.
double amplitude_derivative(const AdaptationLaw& law, double a, double grad_measure);

}  // namespace esclab
