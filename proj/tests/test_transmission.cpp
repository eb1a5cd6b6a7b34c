#include <gtest/gtest.h>

#include <cmath>

#include "diracbc/transmission.hpp"
#include "support.hpp"

using namespace diracbc;
using namespace diracbc::testing;

namespace {

struct Fixture {
    BoundaryFrame frame = canonical_frame(make_rep(3, 4));
    ChiralStructure cs = chirality(frame.rep());
};

DeltaShellParams params(double eta, double tau, double omega, double lambda) { return {eta, tau, omega, lambda}; }

} // namespace

TEST(TransSymmetric, Examples)
{
    const Fixture fx;
    const Matrix id = identity(4);
    EXPECT_TRUE(trans_symmetric({fx.frame, id, id}));
    EXPECT_FALSE(trans_symmetric({fx.frame, id, 2.0 * id}));
    EXPECT_THROW(TransmissionPair(fx.frame, identity(2), id), Error);
}

TEST(TransSelfAdjoint, Examples)
{
    const Fixture fx;
    EXPECT_TRUE(trans_self_adjoint({fx.frame, identity(4), identity(4)}));
    EXPECT_FALSE(trans_self_adjoint({fx.frame, Matrix::Zero(4, 4), Matrix::Zero(4, 4)}));
    // B2 = -B1 with B1 singular: symmetric, but the kernels meet
    Matrix p = Matrix::Zero(4, 4);
    p(0, 0) = 1.0;
    EXPECT_FALSE(trans_self_adjoint({fx.frame, p, -p}));
}

TEST(TransCheck, StandardConditionIsRegular)
{
    const Fixture fx;
    const auto v = trans_sl_check({fx.frame, identity(4), identity(4)});
    EXPECT_EQ(v.regular(), Regularity::regular);
    EXPECT_TRUE(v.full_rank);
    ASSERT_TRUE(v.alt_kernel && v.alt_subspace);
    EXPECT_TRUE(v.forms_agree);
}

TEST(TransCheck, ConstructedFailingPair)
{
    const Fixture fx;
    const RealVector k = RealVector::Unit(3, 0);
    const TransmissionPair tp(fx.frame, failing_b1(fx.frame, k), identity(4));
    EXPECT_NEAR(std::abs(tp.b1.determinant()), 1.0, 1e-12);
    const auto v = trans_sl_check(tp);
    EXPECT_EQ(v.regular(), Regularity::not_regular);
    EXPECT_TRUE(v.forms_agree);
    ASSERT_TRUE(v.image.witness);
    EXPECT_NEAR(std::abs(v.image.witness->direction.dot(k)), 1.0, 1e-6);
}

TEST(TransCheck, DeltaShellOnSurfaceFails)
{
    const Fixture fx;
    const auto ds = delta_shell_pair(params(2, 0, 0, 0), fx.cs, fx.frame);
    EXPECT_EQ(trans_sl_check(ds.pair).regular(), Regularity::not_regular);
    EXPECT_FALSE(delta_shell_regular(params(2, 0, 0, 0)));
    EXPECT_TRUE(delta_shell_regular(params(1, 0, 0, 0)));
    EXPECT_TRUE(delta_shell_regular(params(0, 0, 0, 0)));
    EXPECT_EQ(trans_sl_check(delta_shell_pair(params(1, 0, 0, 0), fx.cs, fx.frame).pair).regular(),
              Regularity::regular);
}

TEST(DeltaShell, ZeroPotential)
{
    const Fixture fx;
    const auto ds = delta_shell_pair(params(0, 0, 0, 0), fx.cs, fx.frame);
    EXPECT_TRUE(ds.invertible);
    const Matrix icnu = I_unit * fx.frame.c_nu();
    // -(i c_nu)^{-1} = i c_nu and (-i c_nu)^{-1} = i c_nu
    EXPECT_LT((ds.pair.b1 - icnu).norm(), 1e-14);
    EXPECT_LT((ds.pair.b2 - icnu).norm(), 1e-14);
    EXPECT_TRUE(trans_self_adjoint(ds.pair));
}

TEST(DeltaShell, InverseFormulaAndAdjointRelation)
{
    const Fixture fx;
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = params(uniform(-3, 3, rng), uniform(-3, 3, rng), uniform(-3, 3, rng), uniform(-3, 3, rng));
        const auto ds = delta_shell_pair(p, fx.cs, fx.frame);
        if (!ds.invertible)
            continue;
        const Matrix v = delta_potential(p, fx.cs, fx.frame);
        const Matrix ap = I_unit * fx.frame.c_nu() - v / 2.0, am = -I_unit * fx.frame.c_nu() - v / 2.0;
        EXPECT_LT((ds.pair.b1 + ap.inverse()).norm(), 1e-9 * (1.0 + ds.pair.b1.norm()));
        EXPECT_LT((ds.pair.b2 - am.inverse()).norm(), 1e-9 * (1.0 + ds.pair.b2.norm()));
        EXPECT_LT((ds.pair.b1.adjoint() + ds.pair.b2).norm(), 1e-9 * (1.0 + ds.pair.b2.norm()));
        EXPECT_TRUE(trans_self_adjoint(ds.pair));
    }
}

TEST(DeltaShell, SingularBranch)
{
    const Fixture fx;
    // omega = 0, eta^2 + 4 = tau^2 + lambda^2
    for (const auto& p : {params(0, 2, 0, 0), params(1, 2, 0, 1), params(2, std::sqrt(5.0), 0, std::sqrt(3.0))}) {
        const auto ds = delta_shell_pair(p, fx.cs, fx.frame);
        EXPECT_FALSE(ds.invertible);
        EXPECT_NEAR(std::abs(ds.d_plus), 0.0, 1e-12);
        EXPECT_EQ(null_space(ds.pair.b1).cols(), 2);
        EXPECT_EQ(null_space(ds.pair.b2).cols(), 2);
        EXPECT_TRUE(trans_self_adjoint(ds.pair));
        EXPECT_NEAR(std::abs(ds.mit_plus), 1.0, 1e-12);
        EXPECT_NEAR(std::abs(ds.mit_minus), 1.0, 1e-12);
    }
}

TEST(DeltaShell, NeedsChirality)
{
    const auto frame = canonical_frame(make_rep(3, 2));
    EXPECT_EQ(code_of([&] { delta_shell_pair({}, chirality(frame.rep()), frame); }), ErrorCode::no_chirality);
}

TEST(DeltaShell, ClosedFormMatchesOracleOnRandomDraws)
{
    const Fixture fx;
    Rng rng(32);
    TransmissionOptions opt;
    opt.alternatives = false;
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto p = params(uniform(-3, 3, rng), uniform(-3, 3, rng), uniform(-3, 3, rng), uniform(-3, 3, rng));
        if (trial % 4 == 0) {
            // land on the surface eta^2 = tau^2 + omega^2 + (lambda + 2)^2
            p.eta = std::sqrt(p.tau * p.tau + p.omega * p.omega + (p.lambda + 2) * (p.lambda + 2));
        }
        const double dist = delta_shell_surface_distance(p);
        if (dist > 1e-12 && dist < 1e-4)
            continue;
        const auto v = trans_sl_check(delta_shell_pair(p, fx.cs, fx.frame).pair, opt);
        if (v.regular() == Regularity::boundary)
            continue;
        EXPECT_EQ(v.regular() == Regularity::regular, delta_shell_regular(p)) << "trial " << trial;
        ++checked;
    }
    EXPECT_GT(checked, 250);
}

TEST(Formulations, AgreeOnRandomFullRankPairs)
{
    Rng rng(33);
    const std::vector<std::pair<int, int>> reps{{2, 2}, {3, 4}, {4, 4}};
    for (int trial = 0; trial < 90; ++trial) {
        const auto& [d, n] = reps[static_cast<std::size_t>(trial) % reps.size()];
        const auto frame = random_frame(d, n, rng);
        const Matrix b1 = trial % 3 == 0 ? failing_b1(frame, random_tangent(frame, rng)) : random_full_rank(n, rng);
        const auto v = trans_sl_check({frame, b1, trial % 3 == 0 ? identity(n) : random_full_rank(n, rng)});
        EXPECT_TRUE(v.full_rank);
        EXPECT_TRUE(v.forms_agree) << "trial " << trial;
        if (trial % 3 == 0) {
            EXPECT_EQ(v.regular(), Regularity::not_regular);
        }
    }
}

TEST(Doubled, FrameIsAValidRepresentation)
{
    Rng rng(34);
    const auto frame = random_frame(3, 4, rng);
    const auto big = doubled_frame(frame);
    EXPECT_EQ(big.rank(), 8);
    EXPECT_TRUE(verify_rep(big.rep()).passes);
    Matrix expect = Matrix::Zero(8, 8);
    expect.topLeftCorner(4, 4) = frame.c_nu();
    expect.bottomRightCorner(4, 4) = -frame.c_nu();
    EXPECT_LT((big.c_nu() - expect).norm(), 1e-12);
}

TEST(Doubled, ReductionMatchesTransmissionCheck)
{
    Rng rng(35);
    for (int trial = 0; trial < 60; ++trial) {
        const auto frame = random_frame(3, 4, rng);
        const Matrix b1 = trial % 2 ? failing_b1(frame, random_tangent(frame, rng)) : random_full_rank(4, rng);
        const TransmissionPair tp(frame, b1, trial % 2 ? identity(4) : random_full_rank(4, rng));
        TransmissionOptions opt;
        opt.alternatives = false;
        const auto a = trans_sl_check(tp, opt).regular(), b = sl_check_sampled(doubled_condition(tp)).regular;
        EXPECT_EQ(a, b) << "trial " << trial;
    }
}
