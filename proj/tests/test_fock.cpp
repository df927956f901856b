#include <gtest/gtest.h>

#include <cmath>

#include "usc/fock.hpp"
#include "usc/groundstate.hpp"

using namespace usc;

TEST(FockGround, UncoupledIsVacuum) {
    const auto gs = fock_ground_state({1.0, 1.0, 0.0}, {10, 3});
    EXPECT_NEAR(gs.energy, 0.0, 1e-12);
    EXPECT_LT((gs.covariance.matrix() - 0.5 * Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(gs.converged);
}

TEST(FockGround, ModerateCoupling) {
    const auto gs = fock_ground_state({1.0, 1.0, 0.3});
    EXPECT_NEAR(gs.covariance(Quadrature::Ya, Quadrature::Ya), 0.47434, 1e-4);
    // zero-point shift (w1 + w2)/2 - d
    const double e0 = 0.5 * (std::sqrt(0.4) + std::sqrt(1.6)) - 1.0;
    EXPECT_NEAR(gs.energy, -0.05132, 1e-4);
    EXPECT_NEAR(gs.energy, e0, 1e-8);
    EXPECT_TRUE(gs.converged);
}

TEST(FockGround, AgreesWithGaussianSolver) {
    for (double g : {0.1, 0.3, 0.45}) {
        const GroundStateParams p{1.0, 1.0, g};
        const auto gs = fock_ground_state(p);
        const double diff = (gs.covariance.matrix() - ground_state_covariance(p).matrix()).cwiseAbs().maxCoeff();
        EXPECT_LT(diff, 1e-3) << "g=" << g;
    }
}

TEST(FockGround, AgreesForNondegenerateModes) {
    const GroundStateParams p{1.0, 1.4, 0.35};
    const auto gs = fock_ground_state(p);
    const double diff = (gs.covariance.matrix() - ground_state_covariance(p).matrix()).cwiseAbs().maxCoeff();
    EXPECT_LT(diff, 1e-6);
}

TEST(FockGround, TruncationConverges) {
    const GroundStateParams p{1.0, 1.0, 0.3};
    const auto small = fock_ground_state(p, {15, 5});
    const auto large = fock_ground_state(p, {30, 5});
    EXPECT_LT((small.covariance.matrix() - large.covariance.matrix()).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(FockGround, FlagsInsufficientTruncation) {
    const auto gs = fock_ground_state({1.0, 1.0, 0.45}, {3, 2});
    EXPECT_FALSE(gs.converged);
    EXPECT_GT(gs.tail_population, tail_population_limit);
}

TEST(FockGround, RejectsInvalidCoupling) {
    EXPECT_THROW(fock_ground_state({1.0, 1.0, 0.6}), model_invalid);
    EXPECT_THROW(fock_ground_state({1.0, 1.0, 0.3}, {1, 0}), domain_error);
}

TEST(FockCollective, SingleModeSqueezing) {
    const auto m = fock_collective_ground_state(1.3, 0.3);
    EXPECT_NEAR(m.var_X, 0.39528, 1e-5);
    const auto n = fock_collective_ground_state(0.7, -0.3);
    EXPECT_NEAR(n.var_P, 0.31623, 1e-5);
    const auto free = fock_collective_ground_state(1.0, 0.0);
    EXPECT_NEAR(free.var_X, 0.5, 1e-12);
    EXPECT_NEAR(free.var_P, 0.5, 1e-12);
}

TEST(FockCollective, MatchesClosedForm) {
    for (double lam : {-0.6, -0.2, 0.1, 0.5}) {
        const auto f = fock_collective_ground_state(1.0, lam);
        const CollectiveMode cm{1.0, lam};
        EXPECT_NEAR(f.var_X, cm.var_X(), 1e-6);
        EXPECT_NEAR(f.var_P, cm.var_P(), 1e-6);
    }
}

TEST(FockCollective, RejectsUnboundedSpectrum) {
    EXPECT_THROW(fock_collective_ground_state(1.0, 1.0), model_invalid);
    EXPECT_THROW(fock_collective_ground_state(1.0, -1.5), model_invalid);
}

namespace {

TimeDependentSpec short_spec(Frame frame) {
    TimeDependentSpec s;
    s.frame = frame;
    s.duration = 1.0;
    s.samples = 11;
    s.tolerance = 1e-9;
    return s;
}

}  // namespace

TEST(Dynamics, UncoupledVacuumIsStationary) {
    TimeDependentSpec s = short_spec(Frame::interaction_picture_full);
    s.G_B = s.G_R = 0.0;
    const TwoModeSpace space(5);
    const auto traj = integrate_dynamics(s, {5, 2}, space.vacuum());
    for (const auto& v : traj.covariances) {
        EXPECT_LT((v.matrix() - 0.5 * Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Dynamics, NormPreserved) {
    for (Frame f : {Frame::effective, Frame::interaction_picture_full}) {
        const TwoModeSpace space(6);
        const auto traj = integrate_dynamics(short_spec(f), {6, 2}, space.vacuum());
        for (double n : traj.norms) EXPECT_NEAR(n, 1.0, 1e-8);
    }
}

TEST(Dynamics, EffectiveEnergyConserved) {
    TimeDependentSpec s = short_spec(Frame::effective);
    s.duration = 5.0;
    const TwoModeSpace space(10);
    StateVector psi = (space.basis_state(1, 0) + space.basis_state(0, 2)) / std::sqrt(2.0);
    const auto traj = integrate_dynamics(s, {10, 2}, psi);
    for (double e : traj.energies) EXPECT_NEAR(e, traj.energies.front(), 1e-7);
}

TEST(Dynamics, RejectsBadInitialState) {
    const TwoModeSpace space(4);
    EXPECT_THROW(integrate_dynamics(short_spec(Frame::effective), {4, 1}, 2.0 * space.vacuum()), domain_error);
    EXPECT_THROW(integrate_dynamics(short_spec(Frame::effective), {5, 1}, space.vacuum()), domain_error);
}

TEST(Dynamics, RwaHoldsOverShortWindow) {
    TimeDependentSpec s;
    s.duration = 2.0;
    s.samples = 21;
    const auto cmp = compare_rwa(s, {8, 3}, TwoModeSpace(8).vacuum());
    EXPECT_LT(cmp.max_relative_deviation, 0.05);
}

TEST(Dynamics, WrongFrameMappingIsDetected) {
    // without the +delta t rotation the frames disagree strongly
    TimeDependentSpec s;
    s.duration = 2.0;
    s.samples = 21;
    const auto cmp = compare_rwa(s, {8, 3}, TwoModeSpace(8).vacuum());
    double worst = 0.0;
    for (std::size_t k = 0; k < cmp.full.times.size(); ++k) {
        const double t = cmp.full.times[k];
        const Mat4 unrotated = rotate_quadrature(cmp.full.covariances[k], -2 * t, -2 * t).matrix();
        const Mat4& e = cmp.effective.covariances[k].matrix();
        for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(unrotated(i, i) - e(i, i)) / e(i, i));
    }
    EXPECT_GT(worst, 0.1);
}
