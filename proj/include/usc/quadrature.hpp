#pragma once

// Gaussian two-mode quadrature algebra.
//
// Quadrature ordering is fixed everywhere to (X_a, Y_a, X_b, Y_b) with
// X = (a + a^dag)/sqrt2 and Y = -i (a - a^dag)/sqrt2, so [X, Y] = i and the
// vacuum variance of each quadrature is 1/2.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

#include "usc/core.hpp"

namespace usc {

enum class Quadrature : int { Xa = 0, Ya = 1, Xb = 2, Yb = 3 };

/// Commutator matrix: [x_i, x_j] = i * Omega_ij.
inline Mat4 symplectic_form() {
    Mat4 omega = Mat4::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    return omega;
}

/// Real symmetric 4x4 covariance V_ij = <x_i x_j + x_j x_i>/2 - <x_i><x_j>.
///
/// Construction symmetrizes the input; an input whose antisymmetric part is
/// larger than round-off is rejected.
class CovarianceMatrix {
public:
    CovarianceMatrix() : m_(Mat4::Identity() * vacuum_variance) {}

    explicit CovarianceMatrix(const Mat4& m) {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
            throw domain_error("covariance matrix is not symmetric");
        }
        m_ = 0.5 * (m + m.transpose());
    }

    static CovarianceMatrix vacuum() { return CovarianceMatrix(); }
    static CovarianceMatrix scaled_identity(double v) { return CovarianceMatrix(Mat4::Identity() * v); }

    const Mat4& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }
    double operator()(Quadrature i, Quadrature j) const {
        return m_(static_cast<int>(i), static_cast<int>(j));
    }

    /// Variance of sum_i c_i x_i.
    double variance(const Vec4& c) const { return c.dot(m_ * c); }

    /// 2x2 block of one mode (0 = a, 1 = b).
    Mat2 mode_block(int mode) const { return m_.block<2, 2>(2 * mode, 2 * mode); }

private:
    Mat4 m_;
};

inline double squeezing_db(double variance, double vacuum_reference) {
    if (!(variance > 0.0) || !(vacuum_reference > 0.0)) {
        std::ostringstream os;
        os << "squeezing_db: arguments must be positive (variance=" << variance
           << ", vacuum_reference=" << vacuum_reference << ")";
        throw domain_error(os.str());
    }
    return 10.0 * std::log10(variance / vacuum_reference);
}

/// The two symplectic eigenvalues, ascending. Pure two-mode states give (1/2, 1/2).
inline std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix& v) {
    const CMat4 m = cplx(0.0, 1.0) * (symplectic_form() * v.matrix()).cast<cplx>();
    Eigen::ComplexEigenSolver<CMat4> solver(m, false);
    std::array<double, 4> nu{};
    for (int i = 0; i < 4; ++i) nu[i] = std::abs(solver.eigenvalues()(i));
    std::sort(nu.begin(), nu.end());
    return {0.5 * (nu[0] + nu[1]), 0.5 * (nu[2] + nu[3])};
}

/// Throws unphysical_state unless V + (i/2) Omega >= 0 (within 1e-9).
inline void require_physical(const CovarianceMatrix& v) {
    const CMat4 h = v.matrix().cast<cplx>() + cplx(0.0, 0.5) * symplectic_form().cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMat4> solver(h, Eigen::EigenvaluesOnly);
    const double lowest = solver.eigenvalues()(0);
    if (lowest < -1e-9) {
        const double nu = symplectic_eigenvalues(v).first;
        std::ostringstream os;
        os << "unphysical covariance matrix: V + (i/2)Omega has eigenvalue " << lowest
           << ", smallest symplectic eigenvalue " << nu << " < 1/2";
        throw unphysical_state(os.str(), nu);
    }
}

inline bool is_physical(const CovarianceMatrix& v) {
    try {
        require_physical(v);
        return true;
    } catch (const unphysical_state&) {
        return false;
    }
}

/// minus_plus: Var(X_a - X_b) + Var(Y_a + Y_b); plus_minus: Var(X_a + X_b) + Var(Y_a - Y_b).
enum class EprSign { minus_plus, plus_minus };

namespace detail {

inline double two_mode_var(const Mat4& m, int qa, int qb, double sign) {
    return m(qa, qa) + m(qb, qb) + 2.0 * sign * m(qa, qb);
}

inline double epr_unchecked(const Mat4& m, EprSign s) {
    const double sx = s == EprSign::minus_plus ? -1.0 : 1.0;
    return two_mode_var(m, 0, 2, sx) + two_mode_var(m, 1, 3, -sx);
}

}  // namespace detail

inline double epr_variance(const CovarianceMatrix& v, EprSign sign) {
    require_physical(v);
    return detail::epr_unchecked(v.matrix(), sign);
}

/// Rotates the state of each mode counter-clockwise in its (X, Y) plane:
/// V -> R V R^T with R = diag(R(theta_a), R(theta_b)).
inline CovarianceMatrix rotate_quadrature(const CovarianceMatrix& v, double theta_a, double theta_b) {
    Mat4 r = Mat4::Zero();
    const auto put = [&r](int k, double th) {
        const double c = std::cos(th), s = std::sin(th);
        r(2 * k, 2 * k) = c;
        r(2 * k, 2 * k + 1) = -s;
        r(2 * k + 1, 2 * k) = s;
        r(2 * k + 1, 2 * k + 1) = c;
    };
    put(0, theta_a);
    put(1, theta_b);
    return CovarianceMatrix(r * v.matrix() * r.transpose());
}

struct SqueezingReport {
    double var_Xa = 0, var_Ya = 0, var_Xb = 0, var_Yb = 0;
    double var_Xminus = 0, var_Xplus = 0, var_Yplus = 0, var_Yminus = 0;
    double epr_minus_plus = 0, epr_plus_minus = 0;

    double db_Xa() const { return squeezing_db(var_Xa, vacuum_variance); }
    double db_Ya() const { return squeezing_db(var_Ya, vacuum_variance); }
    double db_Xb() const { return squeezing_db(var_Xb, vacuum_variance); }
    double db_Yb() const { return squeezing_db(var_Yb, vacuum_variance); }
    double db_Xminus() const { return squeezing_db(var_Xminus, two_mode_vacuum_variance); }
    double db_Xplus() const { return squeezing_db(var_Xplus, two_mode_vacuum_variance); }
    double db_Yplus() const { return squeezing_db(var_Yplus, two_mode_vacuum_variance); }
    double db_Yminus() const { return squeezing_db(var_Yminus, two_mode_vacuum_variance); }
    double db_epr_minus_plus() const { return squeezing_db(epr_minus_plus, epr_vacuum); }
    double db_epr_plus_minus() const { return squeezing_db(epr_plus_minus, epr_vacuum); }

    double epr_min() const { return std::min(epr_minus_plus, epr_plus_minus); }
};

/// All single- and two-mode variances of a physical V.
inline SqueezingReport squeezing_report(const CovarianceMatrix& v) {
    require_physical(v);
    const Mat4& m = v.matrix();
    SqueezingReport r;
    r.var_Xa = m(0, 0);
    r.var_Ya = m(1, 1);
    r.var_Xb = m(2, 2);
    r.var_Yb = m(3, 3);
    r.var_Xminus = detail::two_mode_var(m, 0, 2, -1.0);
    r.var_Xplus = detail::two_mode_var(m, 0, 2, 1.0);
    r.var_Yplus = detail::two_mode_var(m, 1, 3, 1.0);
    r.var_Yminus = detail::two_mode_var(m, 1, 3, -1.0);
    r.epr_minus_plus = r.var_Xminus + r.var_Yplus;
    r.epr_plus_minus = r.var_Xplus + r.var_Yminus;
    return r;
}

}  // namespace usc
