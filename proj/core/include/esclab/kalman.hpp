#pragma once

#include <array>

#include "esclab/errors.hpp"

namespace esclab {

using Vec3 = std::array<double, 3>;

/// Dense 3x3 matrix, row major. Just enough linear algebra for the filter.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }
    double operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }

    static Mat3 identity();
    static Mat3 scaled_identity(double s);
    static Mat3 zero() { return Mat3{}; }

    Mat3 transpose() const;
    bool is_symmetric(double tol = 1e-12) const;
    double max_asymmetry() const;
};

Mat3 operator*(const Mat3& a, const Mat3& b);
Mat3 operator+(const Mat3& a, const Mat3& b);
Mat3 operator*(double s, const Mat3& a);
Vec3 operator*(const Mat3& a, const Vec3& v);

/// True when the matrix is symmetric positive semidefinite (strict > 0 on
/// all pivots when `strict`). Used to validate Q and P0.
bool is_positive_semidefinite(const Mat3& a, bool strict = false);

/// Filter parameters for the gradient-estimator truth model
///
///   psidot = [[0, w, 0], [-w, 0, 0], [0, 0, 0]] psi + w_noise,
///   ymeas  = [a, 0, 1] psi + v,
///
/// where psi = (J' sin wt, J' cos wt, J) evaluated at the current nominal
/// reference. Q and r are the assumed process/measurement noise covariances;
/// P0 and psi0 initialize the estimate. Defaults: Q = 0.01 I, r = 0.01,
/// P0 = I, psi0 = 0 (callers typically seed psi0[2] with the first
/// measurement to avoid a large initial innovation).
struct KalmanConfig {
    Mat3 Q = Mat3::scaled_identity(0.01);
    double r = 0.01;
    Mat3 P0 = Mat3::identity();
    Vec3 psi0{0.0, 0.0, 0.0};

    static KalmanConfig from_scalars(double q, double r);

    /// Throws ConfigError when Q is not PSD, P0 not PD, or r <= 0.
    void validate() const;
};

struct KalmanState {
    Vec3 psi_hat{0.0, 0.0, 0.0};
    Mat3 P = Mat3::identity();
    double t = 0.0;
};

/// Time update over dt: exact rotation of (psi1, psi2) by w*dt (the rotation
/// block admits a closed-form transition matrix, so prediction carries no
/// truncation error), psi3 unchanged, P <- Phi P Phi^T + Q dt.
KalmanState kf_predict(const KalmanState& state, double omega, double dt, const Mat3& Q);

/// Measurement update with the time-varying row H = [amplitude, 0, 1].
/// Joseph-form covariance update plus explicit symmetrization. Throws
/// SingularInnovation if the innovation covariance is not positive.
KalmanState kf_update(const KalmanState& state, double measurement, double amplitude, double r);

/// |J'hat| = sqrt(psi1^2 + psi2^2).
double gradient_magnitude(const KalmanState& state);

}  // namespace esclab
