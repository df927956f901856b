#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "usc/calibrate.hpp"

using namespace usc;

namespace {

constexpr double mhz = two_pi * 1e6;
constexpr double ghz = two_pi * 1e9;

PumpConfig device_pump(double g_over_delta) {
    PumpConfig pc;
    pc.chi = 1.0 * mhz;
    pc.omega_a = 9.0 * ghz;
    pc.omega_b = 6.0 * ghz;
    pc.delta = 50.0 * mhz;
    pc.c_B = pc.c_R = g_over_delta * pc.delta / pc.chi;
    return pc;
}

}  // namespace

TEST(Effective, NoPumpsNoCoupling) {
    PumpConfig pc = device_pump(0.0);
    const auto e = effective_params(pc, 25 * mhz, 25 * mhz, 0.5 * mhz);
    EXPECT_EQ(e.sim.G_B, 0.0);
    EXPECT_EQ(e.sim.G_R, 0.0);
}

TEST(Effective, DeviceOperatingPoint) {
    const auto e = effective_params(device_pump(0.3), 25 * mhz, 25 * mhz, 0.5 * mhz);
    EXPECT_NEAR(e.sim.G_B / e.sim.delta, 0.3, 1e-12);
    EXPECT_NEAR(e.sim.G_R / e.sim.delta, 0.3, 1e-12);
    EXPECT_TRUE(e.sim.simulates_usc());
    EXPECT_NEAR(e.sim.kappa_a(), 25.5 * mhz, 1e-3);
    EXPECT_TRUE(e.rwa.ok());
    EXPECT_EQ(e.theta_a, 0.0);
    EXPECT_EQ(e.theta_b, 0.0);
}

TEST(Effective, PumpFrequencies) {
    const PumpConfig pc = device_pump(0.3);
    EXPECT_NEAR(pc.omega_blue() / ghz, 15.1, 1e-12);
    EXPECT_NEAR(pc.omega_red() / ghz, 3.0, 1e-12);
}

TEST(Effective, PumpFrequencyIdentities) {
    fixtures::StateGenerator gen(21);
    for (int k = 0; k < 100; ++k) {
        PumpConfig pc;
        pc.omega_a = gen.uniform(1, 20);
        pc.omega_b = gen.uniform(1, 20);
        pc.delta = gen.uniform(-1, 1);
        EXPECT_NEAR(pc.omega_blue() - pc.omega_red(), 2 * (pc.omega_b + pc.delta), 1e-12);
        EXPECT_NEAR(pc.omega_blue() + pc.omega_red(), 2 * pc.omega_a + 2 * pc.delta, 1e-12);
    }
}

TEST(Effective, LinearInAmplitude) {
    PumpConfig pc = device_pump(0.2);
    const double g1 = effective_params(pc, 1, 1, 0).sim.G_B;
    pc.c_B *= 2.0;
    const double g2 = effective_params(pc, 1, 1, 0).sim.G_B;
    EXPECT_EQ(g2, 2.0 * g1);
}

TEST(Effective, PhasesBecomeQuadratureRotations) {
    PumpConfig pc = device_pump(0.3);
    pc.c_B = std::polar(std::abs(pc.c_B), 0.8);
    pc.c_R = std::polar(std::abs(pc.c_R), -0.2);
    const auto e = effective_params(pc, 1, 1, 0);
    EXPECT_NEAR(e.sim.G_B / e.sim.delta, 0.3, 1e-12);
    EXPECT_NEAR(e.theta_a + e.theta_b, -0.8, 1e-12);
    EXPECT_NEAR(e.theta_a - e.theta_b, 0.2, 1e-12);
}

TEST(Effective, RwaViolationRequiresForce) {
    PumpConfig pc = device_pump(1.5);  // G > delta
    try {
        effective_params(pc, 1, 1, 0);
        FAIL() << "expected regime_error";
    } catch (const regime_error& e) {
        EXPECT_NE(std::string(e.what()).find("G/|delta|"), std::string::npos);
    }
    const auto forced = effective_params(pc, 1, 1, 0, true);
    EXPECT_FALSE(forced.rwa.ok());
    EXPECT_NEAR(forced.sim.G_B / forced.sim.delta, 1.5, 1e-12);
}

TEST(Effective, ThresholdsAreConfigurable) {
    PumpConfig pc = device_pump(0.3);
    EXPECT_TRUE(rwa_report(pc).ok());
    EXPECT_FALSE(rwa_report(pc, {1e-4, 1.0}).ok());
}

TEST(Feasibility, BoundaryCaseIsInfeasible) {
    // sqrt(xi_a xi_b Q_a Q_b) = 4 -> bound 1 -> 1 < delta/gamma <= 1 has no solution
    const FeasibilityInput f{0.01, 0.01, 400, 400, 1.0, 1.0, 2.0};
    const auto r = feasibility_check(f, 0.5);
    EXPECT_NEAR(4.0 * r.bound, 4.0, 1e-12);
    EXPECT_FALSE(r.detuning_ok);
    EXPECT_FALSE(r.feasible);
    for (double d : {0.5, 1.0, 1.5, 3.0}) {
        EXPECT_FALSE(feasibility_check({0.01, 0.01, 400, 400, 1.0, 1.0, d}, 0.0).detuning_ok);
    }
}

TEST(Feasibility, StrongerParticipationBound) {
    const auto r = feasibility_check({0.04, 0.04, 400, 400, 1.0, 1.0, 2.0}, 0.5 * 2.0);
    EXPECT_NEAR(r.bound, 4.0, 1e-12);
    EXPECT_TRUE(r.feasible);
}

TEST(Feasibility, DeviceRatesNeedBoundTwo) {
    // delta / gamma = 2 at 50 MHz / 25 MHz
    const auto at = feasibility_check({0.02, 0.02, 400, 400, 25 * mhz, 25 * mhz, 50 * mhz}, 0.0);
    EXPECT_NEAR(at.bound, 2.0, 1e-12);
    EXPECT_NEAR(at.delta_over_gamma_a, 2.0, 1e-12);
    EXPECT_TRUE(at.detuning_ok);
    const auto below = feasibility_check({0.019, 0.02, 400, 400, 25 * mhz, 25 * mhz, 50 * mhz}, 0.0);
    EXPECT_FALSE(below.detuning_ok);
}

TEST(Feasibility, CouplingCondition) {
    const auto r = feasibility_check({0.04, 0.04, 400, 400, 1.0, 1.0, 2.0}, 1.0);
    EXPECT_NEAR(r.coupling_ratio, 2.0, 1e-12);
    EXPECT_NEAR(r.max_coupling, 2.0, 1e-12);
    EXPECT_TRUE(r.coupling_ok);
    EXPECT_FALSE(feasibility_check({0.04, 0.04, 400, 400, 1.0, 1.0, 2.0}, 2.5).coupling_ok);
}

TEST(Feasibility, MonotoneInParticipationAndQuality) {
    fixtures::StateGenerator gen(22);
    for (int k = 0; k < 200; ++k) {
        FeasibilityInput f{gen.uniform(0.005, 0.2), gen.uniform(0.005, 0.2), gen.uniform(50, 2000),
                           gen.uniform(50, 2000), gen.uniform(0.2, 1.0), gen.uniform(0.2, 1.0), gen.uniform(0.5, 4)};
        const double g = gen.uniform(0.0, 1.0);
        const bool before = feasibility_check(f, g).feasible;
        FeasibilityInput up = f;
        up.xi_a = std::min(0.99, f.xi_a * gen.uniform(1.0, 3.0));
        up.Q_b *= gen.uniform(1.0, 3.0);
        if (before) EXPECT_TRUE(feasibility_check(up, g).feasible);
    }
}

TEST(Feasibility, RejectsOutOfRangeInput) {
    EXPECT_THROW(feasibility_check({1.2, 0.1, 400, 400, 1, 1, 2}, 0.1), domain_error);
    EXPECT_THROW(feasibility_check({0.1, 0.1, 400, 400, 0, 1, 2}, 0.1), domain_error);
}
