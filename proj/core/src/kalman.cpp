#include "esclab/kalman.hpp"

#include <cmath>

namespace esclab {

Mat3 Mat3::identity() { return scaled_identity(1.0); }

Mat3 Mat3::scaled_identity(double s) {
    Mat3 a;
    a(0, 0) = a(1, 1) = a(2, 2) = s;
    return a;
}

Mat3 Mat3::transpose() const {
    Mat3 a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = (*this)(j, i);
    return a;
}

double Mat3::max_asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
}

bool Mat3::is_symmetric(double tol) const { return max_asymmetry() <= tol; }

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (std::size_t i = 0; i < 9; ++i) c.m[i] = a.m[i] + b.m[i];
    return c;
}

Mat3 operator*(double s, const Mat3& a) {
    Mat3 c;
    for (std::size_t i = 0; i < 9; ++i) c.m[i] = s * a.m[i];
    return c;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
    Vec3 out{};
    for (int i = 0; i < 3; ++i) {
        out[static_cast<std::size_t>(i)] = a(i, 0) * v[0] + a(i, 1) * v[1] + a(i, 2) * v[2];
    }
    return out;
}

bool is_positive_semidefinite(const Mat3& a, bool strict) {
    if (!a.is_symmetric(1e-9)) return false;
    // LDL^T pivots; tolerance scaled by the diagonal magnitude.
    const double scale = std::max({std::abs(a(0, 0)), std::abs(a(1, 1)), std::abs(a(2, 2)), 1.0});
    const double tol = 1e-12 * scale;
    Mat3 w = a;
    for (int k = 0; k < 3; ++k) {
        const double pivot = w(k, k);
        if (strict ? pivot <= tol : pivot < -tol) return false;
        if (std::abs(pivot) <= tol) continue;  // semidefinite direction
        for (int i = k + 1; i < 3; ++i) {
            const double f = w(i, k) / pivot;
            for (int j = k; j < 3; ++j) w(i, j) -= f * w(k, j);
        }
    }
    return true;
}

KalmanConfig KalmanConfig::from_scalars(double q, double r) {
    KalmanConfig cfg;
    cfg.Q = Mat3::scaled_identity(q);
    cfg.r = r;
    return cfg;
}

void KalmanConfig::validate() const {
    if (!(r > 0.0)) throw ConfigError("kalman: measurement variance r must be > 0");
    if (!is_positive_semidefinite(Q, false)) {
        throw ConfigError("kalman: Q must be symmetric positive semidefinite");
    }
    if (!is_positive_semidefinite(P0, true)) {
        throw ConfigError("kalman: P0 must be symmetric positive definite");
    }
}

namespace {

Mat3 symmetrized(const Mat3& a) {
    Mat3 s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    return s;
}

}  // namespace

KalmanState kf_predict(const KalmanState& state, double omega, double dt, const Mat3& Q) {
    if (!(dt > 0.0)) throw DomainError("kf_predict: dt must be > 0");
    const double c = std::cos(omega * dt);
    const double s = std::sin(omega * dt);

    // psidot1 = +w psi2, psidot2 = -w psi1 -> planar rotation by -w*dt in the
    // usual orientation; psi3 is a random-walk constant.
    Mat3 phi;
    phi(0, 0) = c;
    phi(0, 1) = s;
    phi(1, 0) = -s;
    phi(1, 1) = c;
    phi(2, 2) = 1.0;

    KalmanState out;
    out.psi_hat = phi * state.psi_hat;
    out.P = symmetrized(phi * state.P * phi.transpose() + dt * Q);
    out.t = state.t + dt;
    return out;
}

KalmanState kf_update(const KalmanState& state, double measurement, double amplitude, double r) {
    const double a = amplitude;
    const Mat3& P = state.P;

    // H = [a, 0, 1]
    const Vec3 ph{a * P(0, 0) + P(0, 2), a * P(1, 0) + P(1, 2), a * P(2, 0) + P(2, 2)};
    const double innovation_var = a * ph[0] + ph[2] + r;
    if (!(innovation_var > 0.0)) {
        throw SingularInnovation("kf_update: innovation covariance is not positive");
    }

    const Vec3 gain{ph[0] / innovation_var, ph[1] / innovation_var, ph[2] / innovation_var};
    const double innovation = measurement - (a * state.psi_hat[0] + state.psi_hat[2]);

    KalmanState out;
    out.t = state.t;
    for (std::size_t i = 0; i < 3; ++i) out.psi_hat[i] = state.psi_hat[i] + gain[i] * innovation;

    // Joseph form: (I - K H) P (I - K H)^T + K r K^T.
    Mat3 ikh = Mat3::identity();
    for (int i = 0; i < 3; ++i) {
        ikh(i, 0) -= gain[static_cast<std::size_t>(i)] * a;
        ikh(i, 2) -= gain[static_cast<std::size_t>(i)];
    }
    Mat3 joseph = ikh * P * ikh.transpose();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            joseph(i, j) += gain[static_cast<std::size_t>(i)] * r * gain[static_cast<std::size_t>(j)];
    out.P = symmetrized(joseph);
    return out;
}

double gradient_magnitude(const KalmanState& state) {
    return std::hypot(state.psi_hat[0], state.psi_hat[1]);
}

}  // namespace esclab
