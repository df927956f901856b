#pragma once

// Steady-state intracavity covariance from the time-domain Lyapunov equation
//   A_q V + V A_q^T + D_q = 0
// in the real quadrature representation of the Langevin dynamics.

#include <Eigen/LU>

#include "usc/core.hpp"
#include "usc/quadrature.hpp"
#include "usc/spectra.hpp"

namespace usc {

struct QuadratureDynamics {
    Mat4 drift;      // A_q
    Mat4 diffusion;  // D_q
};

inline QuadratureDynamics quadrature_dynamics(const SimParams& p) {
    const DriftMatrix d = drift_matrix(p);
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    CMat4 q = CMat4::Zero();
    q(0, 0) = q(0, 2) = s;
    q(1, 0) = -i * s;
    q(1, 2) = i * s;
    q(2, 1) = q(2, 3) = s;
    q(3, 1) = -i * s;
    q(3, 3) = i * s;
    const CMat4 q_inv = q.inverse();
    QuadratureDynamics qd;
    qd.drift = (q * d.A * q_inv).real();
    const CMat48 bq = q * d.B.cast<cplx>();
    qd.diffusion = (bq * input_noise(p) * bq.transpose()).real();
    return qd;
}

/// Solves A X + X A^T + D = 0 by vectorization (16x16 dense system).
inline Mat4 solve_lyapunov(const Mat4& a, const Mat4& d) {
    using Mat16 = Eigen::Matrix<double, 16, 16>;
    using Vec16 = Eigen::Matrix<double, 16, 1>;
    Mat16 op = Mat16::Zero();
    // column-major vec: vec(A X) = (I kron A) vec X, vec(X A^T) = (A kron I) vec X
    for (int c = 0; c < 4; ++c) {
        op.block<4, 4>(4 * c, 4 * c) += a;
        for (int r = 0; r < 4; ++r) op.block<4, 4>(4 * r, 4 * c) += a(r, c) * Mat4::Identity();
    }
    const Vec16 rhs = -Eigen::Map<const Vec16>(d.data());
    const Vec16 x = op.fullPivLu().solve(rhs);
    return Eigen::Map<const Mat4>(x.data());
}

inline CovarianceMatrix lyapunov_steady_state(const SimParams& p) {
    require_stable(p);
    const QuadratureDynamics qd = quadrature_dynamics(p);
    return CovarianceMatrix(solve_lyapunov(qd.drift, qd.diffusion));
}

}  // namespace usc
