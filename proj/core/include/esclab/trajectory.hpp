#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace esclab {

enum class Variant { scheme1, scheme2, classical, tan2009 };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Uniformly sampled time series of every loop signal from one run.
/// theta = theta_hat + a sin(w t) is the full reference seen by the plant.
/// The psi/grad columns are populated only for scheme1 (gradient estimator
/// in the loop).
struct Trajectory {
    Variant variant = Variant::classical;
    int state_dim = 0;
    double omega = 0.0;  // dither frequency, for window sizing

    std::vector<double> t;
    std::vector<std::vector<double>> x;  // state_dim columns
    std::vector<double> y;
    std::vector<double> theta_hat;
    std::vector<double> theta;
    std::vector<double> xi;
    std::vector<double> eta;
    std::vector<double> a;
    std::vector<double> psi1, psi2, psi3, grad_mag;

    std::size_t size() const { return t.size(); }
    bool has_gradient_estimates() const { return !grad_mag.empty(); }
};

/// Writes the trajectory as CSV: header row, comma separated, time column
/// first, full double precision (17 significant digits).
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace esclab
