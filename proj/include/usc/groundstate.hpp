#pragma once

// Closed-system analysis of
//   H = w_alpha a^dag a + w_beta b^dag b + G (a + a^dag)(b + b^dag)
// by Hopfield diagonalization. The ground state is the vacuum of the two
// polariton annihilators p_1, p_2.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "usc/core.hpp"
#include "usc/parallel.hpp"
#include "usc/quadrature.hpp"

namespace usc {

struct GroundStateParams {
    double omega_alpha = 1.0;
    double omega_beta = 1.0;
    /// Coupling. The sign is a gauge choice (b -> -b), so negative values are accepted.
    double G = 0.0;

    static GroundStateParams degenerate(double delta, double g) { return {delta, delta, g}; }

    bool is_degenerate() const {
        return std::abs(omega_alpha - omega_beta) <= 1e-12 * std::max(omega_alpha, omega_beta);
    }

    void validate() const {
        if (!(omega_alpha > 0.0) || !(omega_beta > 0.0) || !std::isfinite(G)) {
            std::ostringstream os;
            os << "ground-state parameters out of range: omega_alpha=" << omega_alpha
               << ", omega_beta=" << omega_beta << ", G=" << G;
            throw domain_error(os.str());
        }
    }

    /// Squared lower polariton frequency from the characteristic polynomial
    /// w^4 - (wa^2 + wb^2) w^2 + wa wb (wa wb - 4 G^2) = 0.
    double lower_frequency_squared() const {
        const double wa2 = omega_alpha * omega_alpha, wb2 = omega_beta * omega_beta;
        const double disc = (wa2 - wb2) * (wa2 - wb2) + 16.0 * G * G * omega_alpha * omega_beta;
        return 0.5 * (wa2 + wb2 - std::sqrt(disc));
    }

    /// Valid iff both polariton frequencies are real and bounded away from zero.
    /// The margin 2e-6 wa wb rejects G within 1e-6 delta of delta/2 in the degenerate case.
    bool valid() const { return lower_frequency_squared() >= 2e-6 * omega_alpha * omega_beta; }
};

/// Dynamical matrix M with i d/dt (a, b, a^dag, b^dag) = M (a, b, a^dag, b^dag).
inline Mat4 hopfield_matrix(const GroundStateParams& p) {
    const double wa = p.omega_alpha, wb = p.omega_beta, g = p.G;
    Mat4 m;
    // clang-format off
    m <<  wa,   g,   0,   g,
           g,  wb,   g,   0,
           0,  -g, -wa,  -g,
          -g,   0,  -g, -wb;
    // clang-format on
    return m;
}

/// Bogoliubov metric diag(1, 1, -1, -1).
inline Mat4 bose_metric() { return Vec4(1.0, 1.0, -1.0, -1.0).asDiagonal(); }

/// p = t a + u b + v a^dag + w b^dag with [p, H] = frequency * p.
struct Polariton {
    CVec4 coeffs;  // (t, u, v, w)
    double frequency = 0.0;

    cplx t() const { return coeffs(0); }
    cplx u() const { return coeffs(1); }
    cplx v() const { return coeffs(2); }
    cplx w() const { return coeffs(3); }

    double bose_norm() const {
        return std::norm(t()) + std::norm(u()) - std::norm(v()) - std::norm(w());
    }
};

/// The two eigenmodes, lower frequency first.
struct PolaritonBasis {
    std::array<Polariton, 2> modes;

    /// Rows are the coefficient vectors of (p1, p2, p1^dag, p2^dag).
    CMat4 transformation() const {
        CMat4 t;
        for (int k = 0; k < 2; ++k) {
            const CVec4& c = modes[k].coeffs;
            t.row(k) = c.transpose();
            t.row(k + 2) << std::conj(c(2)), std::conj(c(3)), std::conj(c(0)), std::conj(c(1));
        }
        return t;
    }
};

namespace detail {

inline CVec4 fix_phase(CVec4 c) {
    const double scale = c.cwiseAbs().maxCoeff();
    for (int i = 0; i < 4; ++i) {
        if (std::abs(c(i)) > 1e-12 * scale) {
            c *= std::conj(c(i)) / std::abs(c(i));
            break;
        }
    }
    return c;
}

inline cplx bose_inner(const CVec4& x, const CVec4& y) {
    return x.dot(bose_metric().cast<cplx>() * y);  // x^dag K y
}

}  // namespace detail

inline PolaritonBasis diagonalize_polaritons(const GroundStateParams& p) {
    p.validate();

    // Coefficient vectors of eigen-operators are right eigenvectors of M^T.
    Eigen::EigenSolver<Mat4> solver(hopfield_matrix(p).transpose());
    const CVec4 eigenvalues = solver.eigenvalues();
    const CMat4 vectors = solver.eigenvectors();

    if (!p.valid()) {
        int worst = 0;
        for (int i = 1; i < 4; ++i) {
            if (std::abs(eigenvalues(i)) < std::abs(eigenvalues(worst))) worst = i;
        }
        std::ostringstream os;
        os << "model invalid: polariton eigenvalue " << eigenvalues(worst) << " (omega_alpha="
           << p.omega_alpha << ", omega_beta=" << p.omega_beta << ", G=" << p.G << ")";
        throw model_invalid(os.str(), eigenvalues(worst));
    }

    std::vector<Polariton> found;
    for (int i = 0; i < 4; ++i) {
        CVec4 c = vectors.col(i);
        const double norm = detail::bose_inner(c, c).real();
        if (norm <= 0.0) continue;
        found.push_back({c / std::sqrt(norm), eigenvalues(i).real()});
    }
    if (found.size() != 2) {
        throw model_invalid("model invalid: expected two positive-norm eigenmodes", eigenvalues(0));
    }
    std::sort(found.begin(), found.end(),
              [](const Polariton& a, const Polariton& b) { return a.frequency < b.frequency; });

    // Degenerate frequencies (G = 0, w_alpha = w_beta): orthogonalize in the Bose metric.
    if (std::abs(found[1].frequency - found[0].frequency) <= 1e-10 * found[1].frequency) {
        CVec4 second = found[1].coeffs - detail::bose_inner(found[0].coeffs, found[1].coeffs) * found[0].coeffs;
        found[1].coeffs = second / std::sqrt(detail::bose_inner(second, second).real());
    }

    PolaritonBasis basis;
    for (int k = 0; k < 2; ++k) {
        basis.modes[k] = {detail::fix_phase(found[k].coeffs), found[k].frequency};
    }
    return basis;
}

/// Polariton frequencies (w1, w2), ascending.
inline std::pair<double, double> polariton_frequencies(const GroundStateParams& p) {
    const PolaritonBasis b = diagonalize_polaritons(p);
    return {b.modes[0].frequency, b.modes[1].frequency};
}

/// Maps the ladder-operator second moments C_ij = <{z_i, z_j}>/2 over
/// z = (a, b, a^dag, b^dag) to the real quadrature covariance.
inline CovarianceMatrix ladder_to_quadrature(const CMat4& c) {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    CMat4 q = CMat4::Zero();
    q(0, 0) = s;
    q(0, 2) = s;
    q(1, 0) = -i * s;
    q(1, 2) = i * s;
    q(2, 1) = s;
    q(2, 3) = s;
    q(3, 1) = -i * s;
    q(3, 3) = i * s;
    const CMat4 v = q * c * q.transpose();
    return CovarianceMatrix(v.real());
}

inline CovarianceMatrix ground_state_covariance(const GroundStateParams& p) {
    const CMat4 t = diagonalize_polaritons(p).transformation();
    const CMat4 k = bose_metric().cast<cplx>();
    const CMat4 inverse = k * t.adjoint() * k;

    // Polariton vacuum: <{p_k, p_k^dag}>/2 = 1/2, all other symmetrized moments vanish.
    CMat4 vac = CMat4::Zero();
    vac(0, 2) = vac(2, 0) = vac(1, 3) = vac(3, 1) = 0.5;

    return ladder_to_quadrature(inverse * vac * inverse.transpose());
}

/// Single-mode squeezing Hamiltonian Omega n^dag n + (lambda/2)(n^2 + n^dag^2).
struct CollectiveMode {
    double Omega = 0.0;
    double lambda = 0.0;

    double var_X() const { return 0.5 * std::sqrt((Omega - lambda) / (Omega + lambda)); }
    double var_P() const { return 0.5 * std::sqrt((Omega + lambda) / (Omega - lambda)); }
    double eigenfrequency() const { return std::sqrt(Omega * Omega - lambda * lambda); }
};

/// m = (a + b)/sqrt2 and n = (a - b)/sqrt2 in the degenerate case.
struct CollectiveDecomposition {
    CollectiveMode m;
    CollectiveMode n;

    /// Reassembles the (a, b) covariance from the independent m and n ground states.
    CovarianceMatrix covariance() const {
        const double s = 1.0 / std::sqrt(2.0);
        // rows: X_a, Y_a, X_b, Y_b in terms of (X_m, Y_m, X_n, Y_n)
        Mat4 t;
        // clang-format off
        t << s, 0,  s,  0,
             0, s,  0,  s,
             s, 0, -s,  0,
             0, s,  0, -s;
        // clang-format on
        const Mat4 mn = Vec4(m.var_X(), m.var_P(), n.var_X(), n.var_P()).asDiagonal();
        return CovarianceMatrix(t * mn * t.transpose());
    }
};

inline CollectiveDecomposition collective_decomposition(const GroundStateParams& p) {
    p.validate();
    if (!p.is_degenerate()) {
        throw unsupported_case("collective decomposition requires omega_alpha == omega_beta");
    }
    if (!p.valid()) {
        const cplx eig = std::sqrt(cplx(p.lower_frequency_squared(), 0.0));
        throw model_invalid("model invalid: collective mode spectrum unbounded below", eig);
    }
    const double w = p.omega_alpha;
    return {{w + p.G, p.G}, {w - p.G, -p.G}};
}

struct GroundStateRow {
    double G = 0.0;
    bool valid = false;
    SqueezingReport report;
    double omega1 = 0.0;
    double omega2 = 0.0;
    std::string diagnostic;
};

inline GroundStateRow ground_state_row(const GroundStateParams& p) {
    GroundStateRow row;
    row.G = p.G;
    try {
        const auto [w1, w2] = polariton_frequencies(p);
        row.report = squeezing_report(ground_state_covariance(p));
        row.omega1 = w1;
        row.omega2 = w2;
        row.valid = true;
    } catch (const model_invalid& e) {
        row.diagnostic = e.what();
    }
    return row;
}

/// One row per coupling value; invalid couplings produce flagged rows.
inline std::vector<GroundStateRow> ground_state_sweep(const GroundStateParams& tmpl,
                                                      const std::vector<double>& couplings,
                                                      unsigned workers = 0) {
    return parallel_map(
        couplings.size(),
        [&](std::size_t i) {
            GroundStateParams p = tmpl;
            p.G = couplings[i];
            return ground_state_row(p);
        },
        workers);
}

}  // namespace usc
