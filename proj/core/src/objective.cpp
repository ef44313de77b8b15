#include "esclab/objective.hpp"

#include <algorithm>
#include <cmath>

namespace esclab {

namespace {

// Real roots of t^3 + p t^2 + q t + r via the depressed-cubic closed form.
std::vector<double> cubic_roots(double p, double q, double r) {
    // t = u - p/3 gives u^3 + a u + b.
    const double a = q - p * p / 3.0;
    const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    const double shift = -p / 3.0;

    std::vector<double> roots;
    const double disc = b * b / 4.0 + a * a * a / 27.0;
    if (disc > 0.0) {
        // One real root.
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-b / 2.0 + s) + std::cbrt(-b / 2.0 - s);
        roots.push_back(u + shift);
    } else if (a == 0.0 && b == 0.0) {
        roots.push_back(shift);  // triple root
    } else {
        // Three real roots (possibly repeated): trigonometric form.
        const double m = 2.0 * std::sqrt(-a / 3.0);
        const double arg = std::clamp(3.0 * b / (a * m), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots.push_back(m * std::cos(phi - 2.0 * M_PI * k / 3.0) + shift);
        }
    }
    return roots;
}

}  // namespace

std::vector<StationaryPoint> stationary_points(const ObjectivePoly& objective) {
    const auto& c = objective.coefficients();
    if (!(c[4] < 0.0)) {
        throw DomainError("stationary_points: leading coefficient c4 must be negative");
    }

    // J'(theta) = c1 + 2 c2 theta + 3 c3 theta^2 + 4 c4 theta^3.
    const double lead = 4.0 * c[4];
    auto raw = cubic_roots(3.0 * c[3] / lead, 2.0 * c[2] / lead, c[1] / lead);

    // Newton polish on J' itself; a vanishing J'' (multiple root) stops the
    // polish early and the point is classified degenerate below.
    for (double& theta : raw) {
        for (int it = 0; it < 50; ++it) {
            const double g = objective.derivative(theta);
            const double h = objective.second_derivative(theta);
            if (std::abs(g) <= 1e-10 || std::abs(h) < 1e-14) break;
            theta -= g / h;
        }
    }
    std::sort(raw.begin(), raw.end());

    const double scale = std::max({1.0, std::abs(raw.front()), std::abs(raw.back())});
    std::vector<StationaryPoint> points;
    for (double theta : raw) {
        if (!points.empty() && std::abs(theta - points.back().theta) < 1e-7 * scale) continue;
        const double h = objective.second_derivative(theta);
        StationaryPoint pt;
        pt.theta = theta;
        if (h < -1e-6) {
            pt.kind = StationaryPoint::Kind::maximum;
        } else if (h > 1e-6) {
            pt.kind = StationaryPoint::Kind::minimum;
        } else {
            pt.kind = StationaryPoint::Kind::degenerate;
        }
        points.push_back(pt);
    }
    return points;
}

StationaryPoint global_maximum(const ObjectivePoly& objective) {
    const auto points = stationary_points(objective);
    const StationaryPoint* best = nullptr;
    for (const auto& pt : points) {
        if (pt.kind != StationaryPoint::Kind::maximum) continue;
        if (!best || objective.value(pt.theta) > objective.value(best->theta)) best = &pt;
    }
    if (!best) throw DomainError("global_maximum: objective has no classified maximum");
    return *best;
}

}  // namespace esclab
