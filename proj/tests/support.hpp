#pragma once

// Random Gaussian states for property tests.

#include <cmath>
#include <random>

#include "usc/core.hpp"
#include "usc/quadrature.hpp"
#include "usc/spectra.hpp"

namespace usc::fixtures {

inline Mat4 local_rotation(double ta, double tb) {
    Mat4 r = Mat4::Zero();
    r.block<2, 2>(0, 0) << std::cos(ta), -std::sin(ta), std::sin(ta), std::cos(ta);
    r.block<2, 2>(2, 2) << std::cos(tb), -std::sin(tb), std::sin(tb), std::cos(tb);
    return r;
}

inline Mat4 local_squeeze(double ra, double rb) {
    return Vec4(std::exp(-ra), std::exp(ra), std::exp(-rb), std::exp(rb)).asDiagonal();
}

inline Mat4 beam_splitter(double t) {
    const double c = std::cos(t), s = std::sin(t);
    Mat4 m;
    // clang-format off
    m <<  c, 0, s, 0,
          0, c, 0, s,
         -s, 0, c, 0,
          0,-s, 0, c;
    // clang-format on
    return m;
}

inline Mat4 two_mode_squeeze(double r) {
    const double c = std::cosh(r), s = std::sinh(r);
    Mat4 m;
    // clang-format off
    m << c, 0, s, 0,
         0, c, 0,-s,
         s, 0, c, 0,
         0,-s, 0, c;
    // clang-format on
    return m;
}

class StateGenerator {
public:
    explicit StateGenerator(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    Mat4 symplectic() {
        return local_rotation(uniform(0, two_pi), uniform(0, two_pi)) * two_mode_squeeze(uniform(-1, 1)) *
               beam_splitter(uniform(0, two_pi)) * local_squeeze(uniform(-1, 1), uniform(-1, 1)) *
               local_rotation(uniform(0, two_pi), uniform(0, two_pi));
    }

    /// S diag(nu1, nu1, nu2, nu2) S^T with nu >= 1/2.
    CovarianceMatrix physical(double max_excess = 1.0) {
        const double n1 = 0.5 + uniform(0, max_excess), n2 = 0.5 + uniform(0, max_excess);
        const Mat4 s = symplectic();
        const Mat4 m = s * Vec4(n1, n1, n2, n2).asDiagonal() * s.transpose();
        return CovarianceMatrix(0.5 * (m + m.transpose()));
    }

    CovarianceMatrix pure() { return physical(0.0); }

private:
    std::mt19937_64 rng_;
};

/// (1/2pi) * integral of the intracavity spectral density over |w| <= cutoff by
/// the trapezoid rule, plus the 1/w^2 tails beyond the cutoff.
inline Mat4 integrated_intracavity(const SimParams& p, double cutoff, int intervals) {
    const double h = 2.0 * cutoff / intervals;
    Mat4 sum = Mat4::Zero();
    for (int k = 0; k <= intervals; ++k) {
        const double w = -cutoff + h * k;
        const double weight = (k == 0 || k == intervals) ? 0.5 : 1.0;
        sum += weight * intracavity_spectral_density(p, w);
    }
    const Mat4 tails = (intracavity_spectral_density(p, cutoff) + intracavity_spectral_density(p, -cutoff)) * cutoff;
    return (sum * h + tails) / two_pi;
}

}  // namespace usc::fixtures
