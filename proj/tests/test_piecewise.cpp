#include <gtest/gtest.h>

#include <random>

#include "ddeq/piecewise.hpp"
#include "test_support.hpp"

using namespace ddeq;
using ddeq::test::global;
using ddeq::test::P;
using ddeq::test::R;

namespace {

const Stencil kSwap = Stencil::from_ints({1, 0, 1});
const Stencil kIdentity = Stencil::from_ints({0, 1, 0});
const Stencil kIndep = Stencil::from_ints({0, 1, 1, 1, 2});

Piecewise pieces_global(std::vector<Rational> breaks, std::vector<RationalPolynomial> global_polys)
{
    return Piecewise::from_global_pieces(std::move(breaks), global_polys);
}

} // namespace

TEST(PiecewisePoly, RejectsMalformedLayouts)
{
    EXPECT_THROW(Piecewise({R(0)}, {}), DomainMismatch);
    EXPECT_THROW(Piecewise({R(0), R(1)}, {P({1}), P({2})}), DomainMismatch);
    EXPECT_THROW(Piecewise({R(1), R(0)}, {P({1})}), DomainMismatch);
}

TEST(PiecewisePoly, OneSidedLimitsAndRefinement)
{
    const auto f = pieces_global({R(0), R(1), R(2)}, {P({0, 1}), P({5})});
    EXPECT_EQ(*f.limit(R(1), 0, Side::Left), 1);
    EXPECT_EQ(*f.limit(R(1), 0, Side::Right), 5);
    EXPECT_FALSE(f.limit(R(0), 0, Side::Left).has_value());
    EXPECT_EQ(f.value(R(2)), 5);
    const auto g = f.refined({R(1, 3), R(3, 2), R(7)});
    EXPECT_EQ(g.piece_count(), 4u);
    EXPECT_TRUE(same_function(f, g));
}

TEST(Vectorize, LinearOnTwoUnits)
{
    const auto c = vectorize(global(0, 2, P({0, 1})), 1);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_TRUE(same_function(c[0], global(0, 1, P({0, 1}))));
    EXPECT_TRUE(same_function(c[1], global(0, 1, P({1, 1}))));
}

TEST(Vectorize, ZeroFunction)
{
    for (const auto& c : vectorize(Piecewise::zero(R(0), R(3)), 2))
        EXPECT_TRUE(same_function(c, Piecewise::zero(R(0), R(1))));
}

TEST(Vectorize, SquareOnThreeUnits)
{
    const auto c = vectorize(global(0, 3, P({0, 0, 1})), 2);
    EXPECT_TRUE(same_function(c[0], global(0, 1, P({0, 0, 1}))));
    EXPECT_TRUE(same_function(c[1], global(0, 1, P({1, 2, 1}))));
    EXPECT_TRUE(same_function(c[2], global(0, 1, P({4, 4, 1}))));
}

TEST(Vectorize, RequiresUnitDomain)
{
    EXPECT_THROW(vectorize(global(0, 3, P({1})), 1), DomainMismatch);
}

TEST(Vectorize, DevectorizeInvertsOnRandomInputs)
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 3;
        const auto f = gen::piecewise(rng, 0, n + 1, 3).refined({R(1, 3), R(5, 2)});
        EXPECT_TRUE(same_function(devectorize(vectorize(f, n)), f));
    }
}

TEST(ApplyRQ, SwapStencil)
{
    const auto w = apply_RQ(kSwap, global(0, 2, P({0, 1})));
    EXPECT_TRUE(same_function(w, pieces_global({R(0), R(1), R(2)}, {P({1, 1}), P({-1, 1})})));
}

TEST(ApplyRQ, IdentityStencil)
{
    std::mt19937 rng(1);
    const auto f = gen::piecewise(rng, 0, 2, 3);
    EXPECT_TRUE(same_function(apply_RQ(kIdentity, f), f));
}

TEST(ApplyRQ, RowSumsOnConstant)
{
    const auto w = apply_RQ(kIndep, global(0, 3, P({1})));
    EXPECT_TRUE(same_function(
        w, pieces_global({R(0), R(1), R(2), R(3)}, {P({4}), P({3}), P({2})})));
}

TEST(ApplyRQInverse, UndoesSwap)
{
    const auto w = pieces_global({R(0), R(1), R(2)}, {P({1, 1}), P({-1, 1})});
    EXPECT_TRUE(same_function(apply_RQ_inverse(kSwap, w), global(0, 2, P({0, 1}))));
    EXPECT_TRUE(same_function(apply_RQ_inverse(kIdentity, w), w));
}

TEST(ApplyRQInverse, RejectsSingularStencil)
{
    EXPECT_THROW(apply_RQ_inverse(Stencil::from_ints({1, 1, 1}), global(0, 2, P({1}))),
                 SingularShiftMatrix);
}

TEST(ApplyRQInverse, RoundTripOnRandomCubics)
{
    std::mt19937 rng(17);
    for (const auto& s : random_singular_r2_stencils(10, 3, 3, 23)) {
        auto f = gen::piecewise(rng, 0, s.N + 1, 3);
        f = f.refined({R(1, 3)});
        EXPECT_TRUE(same_function(apply_RQ(s, apply_RQ_inverse(s, f)), f));
        EXPECT_TRUE(same_function(apply_RQ_inverse(s, apply_RQ(s, f)), f));
    }
}

TEST(ApplyRExtended, AgreesWithRQOnZeroExtension)
{
    std::mt19937 rng(5);
    for (const auto& s : random_singular_r2_stencils(10, 3, 3, 29)) {
        const auto f = gen::piecewise(rng, 0, s.N + 1, 3).refined({R(2, 5)});
        EXPECT_TRUE(same_function(apply_R_extended(s, zero_extend(f, s.N)), apply_RQ(s, f)));
    }
}

TEST(ApplyRExtended, SwapOnLinear)
{
    const auto y = global(-1, 3, P({0, 1}));
    EXPECT_TRUE(same_function(apply_R_extended(kSwap, y), global(0, 2, P({0, 2}))));
}

TEST(ApplyRExtended, FarRightSupportIsInvisible)
{
    // b_{-N} = 1: (Ry)(t) = y(t - N), and y vanishes on (-N, N+1).
    const Stencil s = Stencil::from_ints({1, 0, 0, 0, 0});
    const auto y = concat<Rational>({Piecewise::zero(R(-2), R(3)), global(3, 5, P({1, 2, 3}))});
    EXPECT_TRUE(same_function(apply_R_extended(s, y), Piecewise::zero(R(0), R(3))));
}

TEST(ApplyRExtended, RequiresExtendedDomain)
{
    EXPECT_THROW(apply_R_extended(kSwap, global(0, 2, P({1}))), DomainMismatch);
}

TEST(NodeTraces, WorkedSolutionKink)
{
    const Piecewise v({R(0), R(1), R(2)}, {P({R(0), R(0), R(-1, 2)}), P({R(-1, 2), R(1), R(-1, 2)})});
    const auto tr = node_traces(v, 1);
    const auto& v0 = tr.at(R(1), 0);
    EXPECT_EQ(*v0.left, R(-1, 2));
    EXPECT_EQ(*v0.right, R(-1, 2));
    EXPECT_EQ(*v0.jump, 0);
    const auto& v1 = tr.at(R(1), 1);
    EXPECT_EQ(*v1.left, -1);
    EXPECT_EQ(*v1.right, 1);
    EXPECT_EQ(*v1.jump, 2);
    EXPECT_FALSE(tr.at(R(0), 0).left.has_value());
    EXPECT_FALSE(tr.at(R(0), 0).jump.has_value());
}

TEST(NodeTraces, SinglePieceEndpoints)
{
    const auto f = global(0, 2, P({1, 2, 3}));
    const auto tr = node_traces(f, 2);
    EXPECT_EQ(*tr.at(R(0), 1).right, 2);
    EXPECT_EQ(*tr.at(R(2), 1).left, 14);
    EXPECT_EQ(*tr.at(R(2), 2).left, 6);
    EXPECT_TRUE(in_wk_class(f, 5));
}

TEST(NodeTraces, HermiteJoinedPiecesHaveNoJumps)
{
    std::mt19937 rng(9);
    const auto f = gen::wk0_function(rng, 3, 2);
    for (const auto& e : node_traces(f, 1).entries)
        if (e.jump) { EXPECT_EQ(*e.jump, 0); }
    EXPECT_TRUE(in_wk0_class(f, 2));
}

TEST(Calculus, MomentPhi)
{
    EXPECT_EQ(moment_Phi(global(0, 2, P({1})), 2), 2);
    EXPECT_EQ(moment_Phi(Piecewise::zero(R(0), R(3)), 2), 0);
    // integral_0^1 (1 - tau) tau dtau = 1/6
    EXPECT_EQ(moment_Phi(global(0, 2, P({0, 1})), 1), R(1, 6));
    EXPECT_THROW(moment_Phi(global(0, 2, P({1})), 3), DomainMismatch);
}

TEST(Calculus, FundamentalTheorem)
{
    std::mt19937 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = gen::piecewise(rng, 0, 3, 4).refined({R(1, 2)});
        const auto F = f.antiderivative(R(3));
        EXPECT_TRUE(same_function(F.derivative(), f));
        EXPECT_EQ(F.value(R(0)), 3);
        EXPECT_EQ(F.value(R(3)) - F.value(R(0)), definite_integral(f, R(0), R(3)));
        EXPECT_TRUE(in_wk_class(F, 1));
    }
}

TEST(Calculus, InnerProduct)
{
    EXPECT_EQ(inner_product_L2(global(0, 1, P({0, 1})), global(0, 1, P({0, 1}))), R(1, 3));
}

TEST(Calculus, DegreeCap)
{
    const auto f = global(0, 1, RationalPolynomial::monomial(10));
    EXPECT_NO_THROW(f.antiderivative(R(0), 11));
    EXPECT_THROW(f.antiderivative(R(0), 10), DegreeCapExceeded);
}

TEST(DerivativeCommutation, DerivativeCommutesWithRQOnW0kFunctions)
{
    std::mt19937 rng(21);
    for (const auto& s : random_singular_r2_stencils(10, 3, 3, 31))
        for (int k = 1; k <= 3; ++k) {
            const auto v = gen::wk0_function(rng, s.N, k);
            auto dv = v;
            auto w = apply_RQ(s, v);
            for (int j = 1; j <= k; ++j) {
                dv = dv.derivative();
                w = w.derivative();
                EXPECT_TRUE(same_function(w, apply_RQ(s, dv)));
            }
            EXPECT_TRUE(in_wk_class(apply_RQ(s, v), k));
        }
}

TEST(Sample, GridAndEndpoint)
{
    const auto pts = sample(global(0, 1, P({0, 0, 1})), 0.25);
    ASSERT_EQ(pts.size(), 5u);
    EXPECT_DOUBLE_EQ(pts[2].second, 0.25);
    EXPECT_DOUBLE_EQ(pts[4].first, 1.0);
    EXPECT_DOUBLE_EQ(pts[4].second, 1.0);
}
