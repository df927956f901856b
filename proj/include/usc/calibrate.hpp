#pragma once

// Drive parameters of a doubly pumped three-wave mixer -> effective rotating-frame
// parameters, plus the participation-ratio feasibility bounds.

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "usc/core.hpp"
#include "usc/spectra.hpp"

namespace usc {

struct PumpConfig {
    double chi = 0.0;       // three-wave mixing rate
    cplx c_B{0.0, 0.0};     // blue pump amplitude
    cplx c_R{0.0, 0.0};     // red pump amplitude
    double omega_a = 0.0;
    double omega_b = 0.0;
    double delta = 0.0;

    double omega_blue() const { return omega_a + omega_b + 2.0 * delta; }
    double omega_red() const { return omega_a - omega_b; }

    void validate() const {
        if (!std::isfinite(chi) || !(omega_a > 0.0) || !(omega_b > 0.0) || !std::isfinite(delta) ||
            !std::isfinite(std::abs(c_B)) || !std::isfinite(std::abs(c_R))) {
            std::ostringstream os;
            os << "pump configuration out of range: chi=" << chi << ", omega_a=" << omega_a
               << ", omega_b=" << omega_b << ", delta=" << delta;
            throw domain_error(os.str());
        }
    }
};

struct RwaThresholds {
    double frequency_ratio = 1.0 / 20.0;  // |G| / {w_a, w_b, |w_a - w_b|}
    double detuning_ratio = 1.0;          // |G| / |delta|
};

struct RwaRatio {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool ok() const { return value <= threshold; }
};

struct RwaReport {
    std::vector<RwaRatio> ratios;

    bool ok() const {
        for (const auto& r : ratios) {
            if (!r.ok()) return false;
        }
        return true;
    }

    std::string failures() const {
        std::ostringstream os;
        for (const auto& r : ratios) {
            if (!r.ok()) os << ' ' << r.name << '=' << r.value << " > " << r.threshold;
        }
        return os.str();
    }
};

inline RwaReport rwa_report(const PumpConfig& pc, const RwaThresholds& th = {}) {
    const double g = pc.chi * std::max(std::abs(pc.c_B), std::abs(pc.c_R));
    const auto ratio = [g](double ref) {
        if (ref == 0.0) return g == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return std::abs(g) / std::abs(ref);
    };
    RwaReport r;
    r.ratios = {
        {"G/omega_a", ratio(pc.omega_a), th.frequency_ratio},
        {"G/omega_b", ratio(pc.omega_b), th.frequency_ratio},
        {"G/|omega_a-omega_b|", ratio(pc.omega_a - pc.omega_b), th.frequency_ratio},
        {"G/|delta|", ratio(pc.delta), th.detuning_ratio},
    };
    return r;
}

struct EffectiveParams {
    SimParams sim;
    double phase_B = 0.0;
    double phase_R = 0.0;
    /// Local quadrature rotations that make G_B and G_R real and positive:
    /// a -> a exp(-i theta_a), b -> b exp(-i theta_b).
    double theta_a = 0.0;
    double theta_b = 0.0;
    double omega_blue = 0.0;
    double omega_red = 0.0;
    RwaReport rwa;
};

/// G_{B,R} = chi |c_{B,R}|. Throws regime_error when the RWA ratios fail unless `force`.
inline EffectiveParams effective_params(const PumpConfig& pc, double gamma_a, double gamma_b, double gamma_L,
                                        bool force = false, const RwaThresholds& th = {}) {
    pc.validate();
    EffectiveParams e;
    e.rwa = rwa_report(pc, th);
    if (!force && !e.rwa.ok()) {
        throw regime_error("rotating-wave regime violated:" + e.rwa.failures());
    }
    e.sim.delta = pc.delta;
    e.sim.G_B = pc.chi * std::abs(pc.c_B);
    e.sim.G_R = pc.chi * std::abs(pc.c_R);
    e.sim.gamma_a = gamma_a;
    e.sim.gamma_b = gamma_b;
    e.sim.gamma_L = gamma_L;
    e.sim.omega_a = pc.omega_a;
    e.sim.omega_b = pc.omega_b;
    e.sim.validate();

    e.phase_B = std::abs(pc.c_B) > 0.0 ? std::arg(pc.c_B) : 0.0;
    e.phase_R = std::abs(pc.c_R) > 0.0 ? std::arg(pc.c_R) : 0.0;
    e.theta_a = -0.5 * (e.phase_B + e.phase_R);
    e.theta_b = -0.5 * (e.phase_B - e.phase_R);
    e.omega_blue = pc.omega_blue();
    e.omega_red = pc.omega_red();
    return e;
}

struct FeasibilityInput {
    double xi_a = 0.0;
    double xi_b = 0.0;
    double Q_a = 0.0;
    double Q_b = 0.0;
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    double delta = 0.0;

    void validate() const {
        const auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
        if (!in_unit(xi_a) || !in_unit(xi_b) || !(Q_a > 0.0) || !(Q_b > 0.0) || !(gamma_a > 0.0) ||
            !(gamma_b > 0.0) || !(delta > 0.0)) {
            std::ostringstream os;
            os << "feasibility input out of range: xi_a=" << xi_a << ", xi_b=" << xi_b << ", Q_a=" << Q_a
               << ", Q_b=" << Q_b << ", gamma_a=" << gamma_a << ", gamma_b=" << gamma_b << ", delta=" << delta;
            throw domain_error(os.str());
        }
    }
};

struct FeasibilityReport {
    /// (1/4) sqrt(xi_a xi_b Q_a Q_b)
    double bound = 0.0;
    /// Largest coupling allowed by 2G / sqrt(gamma_a gamma_b) <= bound.
    double max_coupling = 0.0;
    double coupling_ratio = 0.0;  // 2 G_target / sqrt(gamma_a gamma_b)
    double delta_over_gamma_a = 0.0;
    double delta_over_gamma_b = 0.0;
    bool coupling_ok = false;
    bool detuning_ok = false;  // 1 < delta/gamma_{a,b} <= bound
    bool feasible = false;
};

inline FeasibilityReport feasibility_check(const FeasibilityInput& f, double target_G) {
    f.validate();
    FeasibilityReport r;
    const double line = std::sqrt(f.gamma_a * f.gamma_b);
    r.bound = 0.25 * std::sqrt(f.xi_a * f.xi_b * f.Q_a * f.Q_b);
    r.max_coupling = 0.5 * r.bound * line;
    r.coupling_ratio = 2.0 * target_G / line;
    r.delta_over_gamma_a = f.delta / f.gamma_a;
    r.delta_over_gamma_b = f.delta / f.gamma_b;
    r.coupling_ok = r.coupling_ratio <= r.bound;
    const auto chain = [&](double x) { return 1.0 < x && x <= r.bound; };
    r.detuning_ok = chain(r.delta_over_gamma_a) && chain(r.delta_over_gamma_b);
    r.feasible = r.coupling_ok && r.detuning_ok;
    return r;
}

}  // namespace usc
