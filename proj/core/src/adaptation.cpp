#include "esclab/adaptation.hpp"

#include <cmath>

namespace esclab {

double amplitude_derivative(const AdaptationLaw& law, double a, double grad_measure) {
    if (a < 0.0) throw DomainError("amplitude_derivative: amplitude must be >= 0");
    if (law.gated() && grad_measure < 0.0) {
        throw DomainError("amplitude_derivative: gradient measure must be >= 0");
    }
    if (law.kind == AdaptationLaw::Kind::constant || law.lambda == 0.0 || a == 0.0) {
        return 0.0;
    }
    const double ga = law.g ? law.g(a) : a;
    const double gate = law.gated() ? std::exp(-law.gamma * grad_measure) : 1.0;
    return -law.lambda * ga * gate;
}

}  // namespace esclab
