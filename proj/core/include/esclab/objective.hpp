#pragma once

#include <array>
#include <vector>

#include "esclab/errors.hpp"

namespace esclab {

/// Quartic objective map J(theta) stored as coefficients [c0..c4] with
/// J(theta) = c0 + c1*theta + c2*theta^2 + c3*theta^3 + c4*theta^4.
/// Evaluation uses Horner form. For extremum-seeking runs the leading
/// coefficient must be negative so a global maximum exists; that is enforced
/// where a maximum is actually required (stationary_points, experiment
/// validation), not at construction, so test maps like 10 - theta^2 remain
/// expressible.
class ObjectivePoly {
public:
    ObjectivePoly() = default;
    explicit ObjectivePoly(const std::array<double, 5>& coeffs) : c_(coeffs) {}

    double value(double theta) const {
        return c_[0] + theta * (c_[1] + theta * (c_[2] + theta * (c_[3] + theta * c_[4])));
    }
    double derivative(double theta) const {
        return c_[1] + theta * (2.0 * c_[2] + theta * (3.0 * c_[3] + theta * 4.0 * c_[4]));
    }
    double second_derivative(double theta) const {
        return 2.0 * c_[2] + theta * (6.0 * c_[3] + theta * 12.0 * c_[4]);
    }
    double third_derivative(double theta) const { return 6.0 * c_[3] + theta * 24.0 * c_[4]; }

    const std::array<double, 5>& coefficients() const { return c_; }
    bool has_negative_leading_coefficient() const { return c_[4] < 0.0; }

    /// -theta^4 + (8/15) theta^3 + (5/6) theta^2 + 10. Global maximum
    /// 10.409132266 at theta = 0.87577, local maximum at -0.47577, local
    /// minimum at 0.
    static ObjectivePoly example1() {
        return ObjectivePoly({10.0, 0.0, 5.0 / 6.0, 8.0 / 15.0, -1.0});
    }

    /// -theta^4 - theta^3 + 20 theta^2 - 3 theta - 4. Global maximum
    /// 144.6974 at theta = -3.59205, local maximum at 2.76658, local minimum
    /// at 0.07547.
    static ObjectivePoly example2() {
        return ObjectivePoly({-4.0, -3.0, 20.0, -1.0, -1.0});
    }

private:
    std::array<double, 5> c_{};
};

struct StationaryPoint {
    enum class Kind { maximum, minimum, degenerate };
    double theta = 0.0;
    Kind kind = Kind::degenerate;
};

/// Real roots of J' classified by the sign of J''. Roots are found by closed
/// form on the cubic followed by Newton polish (|J'| <= 1e-10 at accepted
/// roots); multiple roots are merged and reported once with Kind::degenerate
/// when J'' vanishes there. Requires c4 < 0. Results sorted by theta.
std::vector<StationaryPoint> stationary_points(const ObjectivePoly& objective);

/// The maximum with the largest J value. Throws DomainError when the
/// objective has no classified maximum.
StationaryPoint global_maximum(const ObjectivePoly& objective);

}  // namespace esclab
