#pragma once

// Brute-force truncated Fock-space oracle.
//
// Ground states of the two-mode Hamiltonian and of the single-mode squeezing
// Hamiltonian are found by dense diagonalization; the rotating-wave
// approximation is checked by integrating the Schrodinger equation with the
// full interaction-picture three-wave-mixing Hamiltonian and with the
// effective time-independent one.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <boost/numeric/odeint.hpp>

#include "usc/core.hpp"
#include "usc/groundstate.hpp"
#include "usc/quadrature.hpp"

namespace usc {

struct FockConfig {
    int n_max = 30;
    int convergence_pad = 5;

    void validate() const {
        if (n_max < 2 || convergence_pad < 0) {
            std::ostringstream os;
            os << "fock config out of range: n_max=" << n_max << " (>= 2), convergence_pad=" << convergence_pad;
            throw domain_error(os.str());
        }
    }
};

/// Largest tail population accepted before a result is flagged unconverged.
inline constexpr double tail_population_limit = 1e-6;

using SparseC = Eigen::SparseMatrix<cplx>;
using StateVector = Eigen::VectorXcd;

/// Truncated product space with basis index n_a * (n_max + 1) + n_b.
class TwoModeSpace {
public:
    explicit TwoModeSpace(int n_max) : levels_(n_max + 1) {
        const int n = levels_;
        SparseC lower(n, n);
        for (int k = 1; k < n; ++k) lower.insert(k - 1, k) = std::sqrt(static_cast<double>(k));
        SparseC id(n, n);
        id.setIdentity();
        a_ = kron(lower, id);
        b_ = kron(id, lower);
        ad_ = SparseC(a_.adjoint());
        bd_ = SparseC(b_.adjoint());
    }

    int levels() const { return levels_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(levels_) * levels_; }

    const SparseC& a() const { return a_; }
    const SparseC& b() const { return b_; }
    const SparseC& ad() const { return ad_; }
    const SparseC& bd() const { return bd_; }

    /// Quadrature operators (X_a, Y_a, X_b, Y_b).
    std::array<SparseC, 4> quadratures() const {
        const double s = 1.0 / std::sqrt(2.0);
        const cplx i(0.0, 1.0);
        return {SparseC(s * (a_ + ad_)), SparseC(-i * s * (a_ - ad_)), SparseC(s * (b_ + bd_)),
                SparseC(-i * s * (b_ - bd_))};
    }

    StateVector basis_state(int na, int nb) const {
        StateVector psi = StateVector::Zero(dim());
        psi(static_cast<Eigen::Index>(na) * levels_ + nb) = 1.0;
        return psi;
    }

    StateVector vacuum() const { return basis_state(0, 0); }

    /// Population of levels above n_max - pad in either mode.
    double tail_population(const StateVector& psi, int pad) const {
        const int cut = std::max(0, levels_ - pad);
        double p = 0.0;
        for (int na = 0; na < levels_; ++na) {
            for (int nb = 0; nb < levels_; ++nb) {
                if (na >= cut || nb >= cut) p += std::norm(psi(static_cast<Eigen::Index>(na) * levels_ + nb));
            }
        }
        return p;
    }

private:
    static SparseC kron(const SparseC& x, const SparseC& y) {
        SparseC out(x.rows() * y.rows(), x.cols() * y.cols());
        std::vector<Eigen::Triplet<cplx>> triplets;
        for (int kx = 0; kx < x.outerSize(); ++kx) {
            for (SparseC::InnerIterator ix(x, kx); ix; ++ix) {
                for (int ky = 0; ky < y.outerSize(); ++ky) {
                    for (SparseC::InnerIterator iy(y, ky); iy; ++iy) {
                        triplets.emplace_back(ix.row() * y.rows() + iy.row(), ix.col() * y.cols() + iy.col(),
                                              ix.value() * iy.value());
                    }
                }
            }
        }
        out.setFromTriplets(triplets.begin(), triplets.end());
        return out;
    }

    int levels_;
    SparseC a_, b_, ad_, bd_;
};

/// Covariance of a normalized state from quadrature expectation values.
inline CovarianceMatrix fock_covariance(const TwoModeSpace& space, const StateVector& psi) {
    const auto x = space.quadratures();
    std::array<StateVector, 4> xpsi;
    Vec4 mean;
    for (int i = 0; i < 4; ++i) {
        xpsi[i] = x[i] * psi;
        mean(i) = psi.dot(xpsi[i]).real();
    }
    Mat4 v;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) v(i, j) = xpsi[i].dot(xpsi[j]).real() - mean(i) * mean(j);
    }
    return CovarianceMatrix(0.5 * (v + v.transpose()));
}

struct FockGroundState {
    StateVector state;
    double energy = 0.0;
    CovarianceMatrix covariance;
    double tail_population = 0.0;
    bool converged = false;
};

inline SparseC fock_hamiltonian(const TwoModeSpace& s, const GroundStateParams& p) {
    return SparseC(p.omega_alpha * (s.ad() * s.a()) + p.omega_beta * (s.bd() * s.b()) +
                   p.G * ((s.a() + s.ad()) * (s.b() + s.bd())));
}

inline FockGroundState fock_ground_state(const GroundStateParams& p, const FockConfig& cfg = {}) {
    p.validate();
    cfg.validate();
    if (!p.valid()) {
        throw model_invalid("model invalid: truncated spectrum has no converged ground state",
                            std::sqrt(cplx(p.lower_frequency_squared(), 0.0)));
    }
    const TwoModeSpace space(cfg.n_max);
    const Eigen::MatrixXd h = Eigen::MatrixXcd(fock_hamiltonian(space, p)).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);

    FockGroundState gs;
    gs.energy = solver.eigenvalues()(0);
    gs.state = solver.eigenvectors().col(0).cast<cplx>();
    gs.covariance = fock_covariance(space, gs.state);
    gs.tail_population = space.tail_population(gs.state, cfg.convergence_pad);
    gs.converged = gs.tail_population < tail_population_limit;
    return gs;
}

struct SingleModeVariances {
    double var_X = 0.0;
    double var_P = 0.0;
    double tail_population = 0.0;
    bool converged = false;
};

/// Ground state of Omega n^dag n + (lambda/2)(n^2 + n^dag^2).
inline SingleModeVariances fock_collective_ground_state(double Omega, double lambda, const FockConfig& cfg = {}) {
    cfg.validate();
    if (!(std::abs(lambda) < Omega)) {
        std::ostringstream os;
        os << "model invalid: |lambda| >= Omega (Omega=" << Omega << ", lambda=" << lambda
           << "), spectrum unbounded below";
        throw model_invalid(os.str(), cplx(Omega * Omega - lambda * lambda, 0.0));
    }
    const int n = cfg.n_max + 1;
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) lower(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Eigen::MatrixXd raise = lower.transpose();
    const Eigen::MatrixXd h = Omega * raise * lower + 0.5 * lambda * (lower * lower + raise * raise);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    const Eigen::VectorXd psi = solver.eigenvectors().col(0);

    const double s = 1.0 / std::sqrt(2.0);
    const Eigen::MatrixXd x = s * (lower + raise);
    // P = -i (n - n^dag)/sqrt2; for a real state <P> = 0 and <P^2> = -<(n - n^dag)^2>/2
    const Eigen::MatrixXd d = lower - raise;
    const double mean_x = psi.dot(x * psi);
    SingleModeVariances r;
    r.var_X = (x * psi).squaredNorm() - mean_x * mean_x;
    r.var_P = 0.5 * (d * psi).squaredNorm();
    const int cut = std::max(0, n - cfg.convergence_pad);
    r.tail_population = psi.tail(n - cut).squaredNorm();
    r.converged = r.tail_population < tail_population_limit;
    return r;
}

enum class Frame { interaction_picture_full, effective };

struct TimeDependentSpec {
    double omega_a = 40.0;
    double omega_b = 27.0;
    double delta = 1.0;
    double G_B = 0.2;
    double G_R = 0.2;
    double duration = two_pi;
    double tolerance = 1e-10;
    /// Number of equally spaced output times including t = 0 and t = duration.
    int samples = 101;
    Frame frame = Frame::effective;

    double omega_blue() const { return omega_a + omega_b + 2.0 * delta; }
    double omega_red() const { return omega_a - omega_b; }
    /// Fastest oscillation of the full interaction-picture Hamiltonian.
    double fastest_frequency() const { return 2.0 * (omega_a + omega_b + std::abs(delta)); }

    void validate() const {
        if (!(omega_a > 0.0) || !(omega_b > 0.0) || !std::isfinite(delta) || !std::isfinite(G_B) ||
            !std::isfinite(G_R) || !(duration > 0.0) || !(tolerance > 0.0) || samples < 2) {
            throw domain_error("time-dependent spec out of range");
        }
    }
};

struct Trajectory {
    Frame frame = Frame::effective;
    std::vector<double> times;
    std::vector<CovarianceMatrix> covariances;
    std::vector<double> norms;
    /// <H> at each sample (time-dependent in the full frame).
    std::vector<double> energies;
    double max_tail_population = 0.0;
    bool converged = true;
};

/// Effective rotating-frame Hamiltonian. In the frame rotating at w_a + delta,
/// w_b + delta with w_B = w_a + w_b + 2 delta the number operators carry -delta.
inline SparseC effective_hamiltonian(const TwoModeSpace& s, double delta, double g_blue, double g_red) {
    return SparseC(-delta * (s.ad() * s.a() + s.bd() * s.b()) + g_blue * (s.ad() * s.bd() + s.a() * s.b()) +
                   g_red * (s.ad() * s.b() + s.a() * s.bd()));
}

namespace detail {

/// H(t) = f(t) (a e^{-i w_a t} + h.c.)(b e^{-i w_b t} + h.c.) + h.c.,
/// f(t) = G_B e^{-i w_B t} + G_R e^{-i w_R t}.
class FullFrameHamiltonian {
public:
    FullFrameHamiltonian(const TwoModeSpace& s, const TimeDependentSpec& spec) : spec_(spec) {
        ops_ = {SparseC(s.a() * s.b()), SparseC(s.a() * s.bd()), SparseC(s.ad() * s.b()), SparseC(s.ad() * s.bd())};
        for (const auto& o : ops_) adj_.emplace_back(o.adjoint());
        const double sum = spec.omega_a + spec.omega_b, diff = spec.omega_a - spec.omega_b;
        phases_ = {-sum, -diff, diff, sum};
    }

    std::array<cplx, 4> coefficients(double t) const {
        const cplx i(0.0, 1.0);
        const cplx f = spec_.G_B * std::exp(-i * spec_.omega_blue() * t) + spec_.G_R * std::exp(-i * spec_.omega_red() * t);
        std::array<cplx, 4> c{};
        for (int k = 0; k < 4; ++k) c[k] = f * std::exp(i * phases_[k] * t);
        return c;
    }

    void apply(double t, const StateVector& psi, StateVector& out) const {
        const auto c = coefficients(t);
        out.setZero(psi.size());
        for (int k = 0; k < 4; ++k) {
            out += c[k] * (ops_[k] * psi);
            out += std::conj(c[k]) * (adj_[k] * psi);
        }
    }

private:
    TimeDependentSpec spec_;
    std::vector<SparseC> ops_;
    std::vector<SparseC> adj_;
    std::array<double, 4> phases_{};
};

}  // namespace detail

/// Unitary evolution of `initial` in the selected frame, sampled on a uniform time grid.
inline Trajectory integrate_dynamics(const TimeDependentSpec& spec, const FockConfig& cfg, const StateVector& initial) {
    namespace odeint = boost::numeric::odeint;
    spec.validate();
    cfg.validate();
    const TwoModeSpace space(cfg.n_max);
    if (initial.size() != space.dim()) throw domain_error("initial state has wrong dimension");
    if (std::abs(initial.norm() - 1.0) > 1e-10) throw domain_error("initial state is not normalized");

    const cplx minus_i(0.0, -1.0);
    const SparseC h_eff = effective_hamiltonian(space, spec.delta, spec.G_B, spec.G_R);
    const detail::FullFrameHamiltonian h_full(space, spec);

    using state_type = std::vector<cplx>;
    const Eigen::Index dim = space.dim();
    StateVector scratch(dim);
    auto rhs = [&](const state_type& x, state_type& dxdt, double t) {
        Eigen::Map<const StateVector> psi(x.data(), dim);
        Eigen::Map<StateVector> out(dxdt.data(), dim);
        if (spec.frame == Frame::effective) {
            out = minus_i * (h_eff * psi);
        } else {
            h_full.apply(t, psi, scratch);
            out = minus_i * scratch;
        }
    };

    std::vector<double> times(static_cast<std::size_t>(spec.samples));
    for (int k = 0; k < spec.samples; ++k) times[k] = spec.duration * k / (spec.samples - 1);

    Trajectory traj;
    traj.frame = spec.frame;
    auto observe = [&](const state_type& x, double t) {
        Eigen::Map<const StateVector> psi(x.data(), dim);
        const StateVector normalized = psi / psi.norm();
        traj.times.push_back(t);
        traj.norms.push_back(psi.norm());
        traj.covariances.push_back(fock_covariance(space, normalized));
        StateVector hpsi(dim);
        if (spec.frame == Frame::effective) {
            hpsi = h_eff * psi;
        } else {
            h_full.apply(t, psi, hpsi);
        }
        traj.energies.push_back(psi.dot(hpsi).real());
        const double tail = space.tail_population(normalized, cfg.convergence_pad);
        traj.max_tail_population = std::max(traj.max_tail_population, tail);
    };

    state_type x(initial.data(), initial.data() + dim);
    auto stepper = odeint::make_controlled(spec.tolerance, spec.tolerance, odeint::runge_kutta_dopri5<state_type>());
    const double dt0 = std::min(spec.duration / (spec.samples - 1), 0.05 / spec.fastest_frequency());
    // Step budget between two samples: ~ 400 steps per fast period is far beyond what dopri5 needs.
    const double periods_per_sample = spec.duration / (spec.samples - 1) * spec.fastest_frequency() / two_pi;
    const int max_steps = static_cast<int>(std::max(1000.0, 400.0 * periods_per_sample));
    try {
        odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), dt0, observe,
                                odeint::max_step_checker(max_steps));
    } catch (const std::exception& e) {
        std::ostringstream os;
        os << "integration failed at tolerance " << spec.tolerance << ": " << e.what()
           << "; try a duration <= " << spec.duration / 4;
        throw integration_error(os.str(), spec.duration / 4);
    }
    traj.converged = traj.max_tail_population < tail_population_limit;
    return traj;
}

struct RwaComparison {
    Trajectory full;       // covariances mapped into the effective frame
    Trajectory effective;
    /// max over samples and quadratures of |V_full,ii - V_eff,ii| / V_eff,ii
    double max_relative_deviation = 0.0;
};

/// Runs both frames from the same initial state and compares the quadrature
/// variances. Full-frame covariances are rotated by +delta t per mode, the
/// phase-space map from the interaction picture to the effective frame.
inline RwaComparison compare_rwa(TimeDependentSpec spec, const FockConfig& cfg, const StateVector& initial) {
    RwaComparison cmp;
    spec.frame = Frame::interaction_picture_full;
    cmp.full = integrate_dynamics(spec, cfg, initial);
    spec.frame = Frame::effective;
    cmp.effective = integrate_dynamics(spec, cfg, initial);
    for (std::size_t k = 0; k < cmp.full.times.size(); ++k) {
        const double phase = spec.delta * cmp.full.times[k];
        cmp.full.covariances[k] = rotate_quadrature(cmp.full.covariances[k], phase, phase);
        const Mat4& vf = cmp.full.covariances[k].matrix();
        const Mat4& ve = cmp.effective.covariances[k].matrix();
        for (int i = 0; i < 4; ++i) {
            cmp.max_relative_deviation = std::max(cmp.max_relative_deviation, std::abs(vf(i, i) - ve(i, i)) / ve(i, i));
        }
    }
    return cmp;
}

}  // namespace usc
