#include "esclab/trajectory.hpp"

#include <cstdio>
#include <ostream>

#include "esclab/errors.hpp"

namespace esclab {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::scheme1: return "scheme1";
        case Variant::scheme2: return "scheme2";
        case Variant::classical: return "classical";
        case Variant::tan2009: return "tan2009";
    }
    return "unknown";
}

Variant variant_from_string(const std::string& s) {
    if (s == "scheme1") return Variant::scheme1;
    if (s == "scheme2") return Variant::scheme2;
    if (s == "classical") return Variant::classical;
    if (s == "tan2009") return Variant::tan2009;
    throw ConfigError("scheme.variant: unknown value '" + s + "'");
}

namespace {

void append_number(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    line += buf;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    std::string header = "t";
    for (int i = 0; i < traj.state_dim; ++i) header += ",x" + std::to_string(i + 1);
    header += ",y,theta_hat,theta,xi,eta,a";
    if (traj.has_gradient_estimates()) header += ",psi1,psi2,psi3,grad_mag";
    out << header << '\n';

    std::string line;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        line.clear();
        append_number(line, traj.t[k]);
        for (int i = 0; i < traj.state_dim; ++i) {
            line += ',';
            append_number(line, traj.x[static_cast<std::size_t>(i)][k]);
        }
        for (const auto* col : {&traj.y, &traj.theta_hat, &traj.theta, &traj.xi, &traj.eta, &traj.a}) {
            line += ',';
            append_number(line, (*col)[k]);
        }
        if (traj.has_gradient_estimates()) {
            for (const auto* col : {&traj.psi1, &traj.psi2, &traj.psi3, &traj.grad_mag}) {
                line += ',';
                append_number(line, (*col)[k]);
            }
        }
        out << line << '\n';
    }
}

}  // namespace esclab
