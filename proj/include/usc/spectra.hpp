#pragma once

// Open-system model: quantum Langevin equations for the rotating-frame
// Hamiltonian
//   H = delta (a^dag a + b^dag b) + G_B (a^dag b^dag + a b) + G_R (a^dag b + a b^dag)
// with line couplings gamma_a, gamma_b and internal loss gamma_L, solved in
// the frequency domain with input-output relations a_out = a_in + sqrt(gamma_a) a.
//
// Vectors are ordered z = (a, b, a^dag, b^dag) for intracavity fields and
// u = (a_in, b_in, a_in^dag, b_in^dag, f_a, f_b, f_a^dag, f_b^dag) for inputs.
// Fourier convention: a(t) = (2 pi)^(-1/2) int a[w] exp(-i w t) dw.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "usc/core.hpp"
#include "usc/groundstate.hpp"
#include "usc/parallel.hpp"
#include "usc/quadrature.hpp"

namespace usc {

struct SimParams {
    double delta = 1.0;
    double G_B = 0.0;
    double G_R = 0.0;
    double gamma_a = 0.5;
    double gamma_b = 0.5;
    double gamma_L = 0.0;
    /// Occupancy of the internal-loss baths f_a, f_b.
    double thermal_occupancy = 0.0;
    /// Lab-frame anchors, only used to relabel frequencies.
    std::optional<double> omega_a;
    std::optional<double> omega_b;

    double kappa_a() const { return gamma_a + gamma_L; }
    double kappa_b() const { return gamma_b + gamma_L; }

    /// G_B == G_R reproduces the two-mode ultrastrong-coupling form.
    bool simulates_usc() const { return G_B == G_R; }

    void validate() const {
        const auto bad = [](double x) { return !std::isfinite(x) || x < 0.0; };
        if (!std::isfinite(delta) || !std::isfinite(G_B) || !std::isfinite(G_R) || bad(gamma_a) ||
            bad(gamma_b) || bad(gamma_L) || bad(thermal_occupancy) || !(kappa_a() > 0.0) ||
            !(kappa_b() > 0.0)) {
            std::ostringstream os;
            os << "simulation parameters out of range: delta=" << delta << ", G_B=" << G_B
               << ", G_R=" << G_R << ", gamma_a=" << gamma_a << ", gamma_b=" << gamma_b
               << ", gamma_L=" << gamma_L << ", thermal_occupancy=" << thermal_occupancy;
            throw domain_error(os.str());
        }
    }

    static SimParams symmetric(double delta, double g, double gamma, double gamma_l) {
        SimParams p;
        p.delta = delta;
        p.G_B = p.G_R = g;
        p.gamma_a = p.gamma_b = gamma;
        p.gamma_L = gamma_l;
        return p;
    }
};

/// dz/dt = A z + B u.
struct DriftMatrix {
    CMat4 A;
    Mat48 B;
};

inline DriftMatrix drift_matrix(const SimParams& p) {
    p.validate();
    const cplx i(0.0, 1.0);
    const double ka = p.kappa_a(), kb = p.kappa_b();
    DriftMatrix d;
    d.A = CMat4::Zero();
    d.A(0, 0) = -i * p.delta - ka / 2.0;
    d.A(0, 1) = -i * p.G_R;
    d.A(0, 3) = -i * p.G_B;
    d.A(1, 1) = -i * p.delta - kb / 2.0;
    d.A(1, 0) = -i * p.G_R;
    d.A(1, 2) = -i * p.G_B;
    // conjugate rows
    d.A.block<2, 2>(2, 2) = d.A.block<2, 2>(0, 0).conjugate();
    d.A.block<2, 2>(2, 0) = d.A.block<2, 2>(0, 2).conjugate();

    d.B = Mat48::Zero();
    const double sa = std::sqrt(p.gamma_a), sb = std::sqrt(p.gamma_b), sl = std::sqrt(p.gamma_L);
    d.B(0, 0) = d.B(2, 2) = -sa;
    d.B(1, 1) = d.B(3, 3) = -sb;
    for (int k = 0; k < 4; ++k) d.B(k, 4 + k) = -sl;
    return d;
}

struct StabilityReport {
    CVec4 eigenvalues;
    double margin = 0.0;
    bool stable = false;
};

inline StabilityReport stability_check(const SimParams& p) {
    const DriftMatrix d = drift_matrix(p);
    Eigen::ComplexEigenSolver<CMat4> solver(d.A, false);
    StabilityReport r;
    r.eigenvalues = solver.eigenvalues();
    r.margin = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) r.margin = std::max(r.margin, r.eigenvalues(k).real());
    r.stable = r.margin < 0.0;
    return r;
}

inline void require_stable(const SimParams& p) {
    const StabilityReport r = stability_check(p);
    if (!r.stable) {
        std::ostringstream os;
        os << "unstable system: drift matrix eigenvalue with real part " << r.margin
           << " >= 0 (G_B=" << p.G_B << ", G_R=" << p.G_R << ", delta=" << p.delta << ")";
        throw unstable_system(os.str(), r.margin);
    }
}

/// Coupling g (with G_B = G_R = g) at which the stability margin of `tmpl`
/// crosses zero, by bisection on [lo, hi]. Requires a sign change on the bracket.
inline double stability_threshold(const SimParams& tmpl, double lo, double hi, double tol = 1e-12) {
    const auto margin = [&tmpl](double g) {
        SimParams p = tmpl;
        p.G_B = p.G_R = g;
        return stability_check(p).margin;
    };
    double m_lo = margin(lo);
    if (!(m_lo < 0.0) || !(margin(hi) >= 0.0)) {
        throw domain_error("stability threshold not bracketed by the coupling interval");
    }
    while (hi - lo > tol * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (margin(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Symmetrized input correlations <{u_i[w], u_j[w']}>/2 = N_ij delta(w + w').
inline CMat8 input_noise(const SimParams& p) {
    CMat8 n = CMat8::Zero();
    // line channels are vacuum
    for (int k : {0, 1}) n(k, k + 2) = n(k + 2, k) = 0.5;
    const double nth = p.thermal_occupancy;
    for (int k : {4, 5}) n(k, k + 2) = n(k + 2, k) = nth + 0.5;
    return n;
}

namespace detail {

/// (-i w I - A)^{-1} B, the intracavity response to inputs.
inline CMat48 intracavity_response(const DriftMatrix& d, double omega) {
    const cplx i(0.0, 1.0);
    const CMat4 m = -i * omega * CMat4::Identity() - d.A;
    Eigen::FullPivLU<CMat4> lu(m);
    if (!lu.isInvertible() || lu.rcond() < 1e-13) {
        std::ostringstream os;
        os << "numerical singularity: (-i w I - A) not invertible at w=" << omega;
        throw numerical_singularity(os.str());
    }
    return lu.solve(d.B.cast<cplx>());
}

inline CovarianceMatrix symmetrized_spectrum(const CMat48& plus, const CMat48& minus, const CMat8& noise) {
    return ladder_to_quadrature(plus * noise * minus.transpose());
}

}  // namespace detail

/// S(w): input channels -> (a_out, b_out, a_out^dag, b_out^dag).
struct ScatteringMatrix {
    double omega = 0.0;
    CMat48 S;
};

inline ScatteringMatrix scattering_matrix(const SimParams& p, double omega) {
    require_stable(p);
    const DriftMatrix d = drift_matrix(p);
    Mat48 selector = Mat48::Zero();
    selector.block<4, 4>(0, 0).setIdentity();
    const Vec4 coupling(std::sqrt(p.gamma_a), std::sqrt(p.gamma_b), std::sqrt(p.gamma_a),
                        std::sqrt(p.gamma_b));
    ScatteringMatrix s;
    s.omega = omega;
    s.S = selector.cast<cplx>() + coupling.cast<cplx>().asDiagonal() * detail::intracavity_response(d, omega);
    return s;
}

/// Symmetrized output spectral covariance sigma(w) in the (X_a, Y_a, X_b, Y_b) basis.
/// Vacuum inputs and G_B = G_R = 0 give identity/2.
inline CovarianceMatrix output_spectral_covariance(const SimParams& p, double omega) {
    const CMat48 plus = scattering_matrix(p, omega).S;
    const CMat48 minus = scattering_matrix(p, -omega).S;
    return detail::symmetrized_spectrum(plus, minus, input_noise(p));
}

/// Intracavity spectral density; (1/2pi) times its integral over w is the
/// steady-state intracavity covariance.
inline Mat4 intracavity_spectral_density(const SimParams& p, double omega) {
    require_stable(p);
    const DriftMatrix d = drift_matrix(p);
    const CMat48 plus = detail::intracavity_response(d, omega);
    const CMat48 minus = detail::intracavity_response(d, -omega);
    return detail::symmetrized_spectrum(plus, minus, input_noise(p)).matrix();
}

/// Reporting floor for dB values of numerically vanishing spectra.
inline constexpr double db_floor = -140.0;

inline double db_floored(double value, double vacuum_reference) {
    const double floor_value = vacuum_reference * std::pow(10.0, db_floor / 10.0);
    return squeezing_db(std::max(value, floor_value), vacuum_reference);
}

inline std::vector<double> linear_grid(double min, double max, std::size_t points) {
    if (points < 2) {
        if (points == 1) return {min};
        throw domain_error("grid needs at least one point");
    }
    std::vector<double> g(points);
    const double step = (max - min) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) g[k] = min + step * static_cast<double>(k);
    g.back() = max;
    return g;
}

/// 2001 points over [-3 delta, 3 delta].
inline std::vector<double> default_omega_grid(double delta) {
    return linear_grid(-3.0 * delta, 3.0 * delta, 2001);
}

struct SpectralSweep {
    SimParams params;
    std::vector<double> omega;
    std::vector<CovarianceMatrix> sigma;
    std::vector<SqueezingReport> reports;

    std::size_t size() const { return omega.size(); }

    double epr_min(std::size_t k) const { return reports[k].epr_min(); }
    double epr_min_over_vacuum(std::size_t k) const { return reports[k].epr_min() / epr_vacuum; }

    /// Lab-frame frequencies (mode a, mode b) for a rotating-frame frequency.
    std::pair<double, double> lab_frame(double w) const {
        if (!params.omega_a || !params.omega_b) {
            throw domain_error("lab-frame anchors omega_a, omega_b not set");
        }
        return {*params.omega_a + params.delta + w, *params.omega_b + params.delta + w};
    }
};

inline SpectralSweep spectra_sweep(const SimParams& p, const std::vector<double>& grid, unsigned workers = 0) {
    require_stable(p);
    SpectralSweep s;
    s.params = p;
    s.omega = grid;
    s.sigma = parallel_map(
        grid.size(), [&](std::size_t k) { return output_spectral_covariance(p, grid[k]); }, workers);
    s.reports.reserve(grid.size());
    for (const auto& v : s.sigma) s.reports.push_back(squeezing_report(v));
    return s;
}

namespace detail {

/// Abscissa of the vertex of the parabola through three points.
inline double parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d1 = (y1 - y0) / (x1 - x0);
    const double d2 = (y2 - y1) / (x2 - x1);
    const double curvature = (d2 - d1) / (x2 - x0);
    if (!(curvature > 0.0)) return x1;
    const double x = 0.5 * (x0 + x1) - d1 / (2.0 * curvature);
    return std::clamp(x, x0, x2);
}

}  // namespace detail

/// Local minima of the minimum-sign EPR spectrum, refined by parabolic interpolation.
inline std::vector<double> dip_positions(const SpectralSweep& s) {
    std::vector<double> dips;
    const std::size_t n = s.size();
    if (n < 3) return dips;
    std::vector<double> e(n);
    for (std::size_t k = 0; k < n; ++k) e[k] = s.epr_min(k);
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    if (*hi - *lo < 1e-9 * epr_vacuum) return dips;  // flat

    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (e[k] < e[k - 1] && e[k] <= e[k + 1]) {
            dips.push_back(detail::parabolic_vertex(s.omega[k - 1], e[k - 1], s.omega[k], e[k],
                                                    s.omega[k + 1], e[k + 1]));
        }
    }
    return dips;
}

}  // namespace usc
