#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace usc {

using cplx = std::complex<double>;

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using CMat4 = Eigen::Matrix4cd;
using CVec4 = Eigen::Vector4cd;
using CMat48 = Eigen::Matrix<cplx, 4, 8>;
using Mat48 = Eigen::Matrix<double, 4, 8>;
using CMat8 = Eigen::Matrix<cplx, 8, 8>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Vacuum variance of a single quadrature, (X, Y) with [X, Y] = i.
inline constexpr double vacuum_variance = 0.5;
/// Vacuum variance of X_a +- X_b (or Y_a +- Y_b).
inline constexpr double two_mode_vacuum_variance = 1.0;
/// Vacuum value of the EPR variance Var(X_a -+ X_b) + Var(Y_a +- Y_b).
inline constexpr double epr_vacuum = 2.0;

// Error hierarchy. Everything the library throws derives from usc::error.

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-positive argument to a logarithmic scale and similar.
struct domain_error : error {
    using error::error;
};

/// V + (i/2) Omega is not positive semidefinite.
struct unphysical_state : error {
    unphysical_state(const std::string& what, double nu) : error(what), symplectic_eigenvalue(nu) {}
    double symplectic_eigenvalue;
};

/// Closed Hamiltonian outside its validity region (imaginary or vanishing polariton frequency).
struct model_invalid : error {
    model_invalid(const std::string& what, cplx eig) : error(what), eigenvalue(eig) {}
    cplx eigenvalue;
};

/// Operation only defined for the degenerate case omega_alpha == omega_beta.
struct unsupported_case : error {
    using error::error;
};

/// Langevin drift matrix with an eigenvalue in the closed right half plane.
struct unstable_system : error {
    unstable_system(const std::string& what, double m) : error(what), margin(m) {}
    double margin;
};

/// (-i w I - A) is numerically singular.
struct numerical_singularity : error {
    using error::error;
};

/// Pump parameters violate the rotating-wave regime.
struct regime_error : error {
    using error::error;
};

/// Adaptive time stepping failed at the requested tolerance.
struct integration_error : error {
    integration_error(const std::string& what, double t) : error(what), suggested_duration(t) {}
    double suggested_duration;
};

}  // namespace usc
