#include <gtest/gtest.h>

#include <random>

#include "ddeq/sobolev_conditions.hpp"
#include "test_support.hpp"

using namespace ddeq;
using ddeq::test::global;
using ddeq::test::P;
using ddeq::test::R;

namespace {

const Stencil kSwap = Stencil::from_ints({1, 0, 1});
const Stencil kIndep = Stencil::from_ints({0, 1, 1, 1, 2});
const Stencil kDep = Stencil::from_ints({1, 1, 2, 4, 4});

NodeFunctional fn(std::initializer_list<NodeFunctional::Term> terms)
{
    NodeFunctional f;
    for (const auto& t : terms) f.add(t.node, t.order, t.weight);
    return f;
}

// Same functional up to term order.
bool same_functional(const NodeFunctional& a, const NodeFunctional& b)
{
    NodeFunctional d = a;
    d.add(b, R(-1));
    return d.terms.empty();
}

} // namespace

TEST(WGammaFunctionals, SwapStencil)
{
    const auto core = analyze_structure(kSwap);
    const auto f = wgamma_functionals(core, 1);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_TRUE(same_functional(f[0], fn({{R(2), 0, R(1)}, {R(0), 0, R(-1)}})));
    EXPECT_TRUE(same_functional(f[1], fn({{R(1), 0, R(1)}})));
}

TEST(WGammaFunctionals, IndependentStencil)
{
    const auto core = analyze_structure(kIndep);
    const auto f = wgamma_functionals(core, 1);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_TRUE(same_functional(f[0], fn({{R(3), 0, R(1)}, {R(0), 0, R(-1)}, {R(2), 0, R(1)}})));
    EXPECT_TRUE(same_functional(f[1], fn({{R(1), 0, R(1)}, {R(2), 0, R(-1)}})));
}

TEST(WGammaFunctionals, OrderTwoReplicatesOnDerivative)
{
    const auto core = analyze_structure(kIndep);
    const auto f1 = wgamma_functionals(core, 1);
    const auto f2 = wgamma_functionals(core, 2);
    ASSERT_EQ(f2.size(), 4u);
    EXPECT_TRUE(same_functional(f2[0], f1[0]));
    EXPECT_TRUE(same_functional(f2[1], f1[1]));
    for (std::size_t j = 0; j < 2; ++j) {
        NodeFunctional shifted;
        for (const auto& t : f1[j].terms) shifted.add(t.node, 1, t.weight);
        EXPECT_TRUE(same_functional(f2[2 + j], shifted));
    }
}

TEST(WGammaFunctionals, RefusesOtherRegimes)
{
    EXPECT_THROW(analyze_structure(Stencil::from_ints({0, 1, 0})), UnsupportedRegime);
}

TEST(ImageFunctionalsRQk, Counts)
{
    EXPECT_EQ(image_functionals_RQk(analyze_structure(kIndep), 0).size(), 4u);
    const auto dep = image_functionals_RQk(analyze_structure(kDep), 0);
    ASSERT_EQ(dep.size(), 3u);
    // The order-one node-l condition carries -B_{3,1} = -8 on w'(3).
    Rational weight(0);
    for (const auto& t : dep[2].terms)
        if (t.node == 3 && t.order == 1) weight = t.weight;
    EXPECT_EQ(weight, -8);
}

TEST(ImageFunctionalsRQk, NodeLFunctionalCofactorIdentity)
{
    // On v = R_Q^{-1} w with w in W_gamma^1 smooth, the node-l functional
    // measures det R1 times the jump of (Uv)^{(mu)} across node l.
    std::mt19937 rng(41);
    int checked = 0;
    for (const auto& s : random_singular_r2_stencils(60, 3, 3, 43)) {
        const auto core = analyze_structure(s);
        if (!core.ends.dependent) continue;
        const int l = *core.ends.l;
        for (int trial = 0; trial < 3; ++trial) {
            const auto w = gen::constrained_polynomial(rng, wgamma_functionals(core, 1), s.N, 8);
            const auto v = apply_RQ_inverse(s, w);
            for (int mu = 1; mu <= 3; ++mu) {
                const auto jump = *v.limit(R(l), mu, Side::Right) - *v.limit(R(l), mu, Side::Left);
                EXPECT_EQ(evaluate(node_l_functional(core, mu), w), core.shift.det_R1 * jump);
            }
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Evaluate, Examples)
{
    const auto f = fn({{R(2), 0, R(1)}, {R(0), 0, R(-1)}});
    EXPECT_EQ(evaluate(f, global(0, 2, P({0, 0, 1}))), 4);
    EXPECT_EQ(evaluate(f, Piecewise::zero(R(0), R(2))), 0);
    EXPECT_THROW(evaluate(fn({{R(5), 0, R(1)}}), global(0, 2, P({1}))), DomainMismatch);
}

TEST(Evaluate, Linearity)
{
    std::mt19937 rng(2);
    const auto core = analyze_structure(kIndep);
    const auto fns = wgamma_functionals(core, 3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto w1 = global(0, 3, gen::polynomial(rng, 6));
        const auto w2 = global(0, 3, gen::polynomial(rng, 6));
        const Rational a = gen::rational(rng), b = gen::rational(rng);
        for (const auto& f : fns)
            EXPECT_EQ(evaluate(f, a * w1 + b * w2), a * evaluate(f, w1) + b * evaluate(f, w2));
    }
}

TEST(Evaluate, RejectsJumpAtInteriorNode)
{
    const Piecewise w({R(0), R(1), R(2)}, {P({0}), P({1})});
    EXPECT_THROW(evaluate(fn({{R(1), 0, R(1)}}), w), DomainMismatch);
}

TEST(RankOfFunctionals, Examples)
{
    EXPECT_EQ(rank_of_functionals(image_functionals_RQk(analyze_structure(kIndep), 0), 8), 4u);
    EXPECT_EQ(rank_of_functionals(image_functionals_RQk(analyze_structure(kDep), 1), 10), 4u);
    auto dup = wgamma_functionals(analyze_structure(kIndep), 2);
    const auto base = rank_of_functionals(dup);
    dup.insert(dup.end(), dup.begin(), dup.end());
    EXPECT_EQ(rank_of_functionals(dup), base);
    EXPECT_THROW(rank_of_functionals(image_functionals_RQk(analyze_structure(kIndep), 0), 4),
                 ProbeTooSmall);
}

TEST(RankOfFunctionals, MatchesCodimensionTableOnRandomStencils)
{
    for (const auto& s : random_singular_r2_stencils(25, 3, 3, 47)) {
        const auto core = analyze_structure(s);
        for (int k = 0; k <= 3; ++k)
            EXPECT_EQ(static_cast<int>(rank_of_functionals(image_functionals_RQk(core, k))),
                      index_table(core.ends, k).codim_RQk)
                << "N=" << s.N << " k=" << k;
    }
}

TEST(EliminateIntegrationConstants, ExampleCounts)
{
    EXPECT_EQ(image_functionals_ARk(analyze_structure(kIndep), 0).residual_count, 2u);
    EXPECT_EQ(image_functionals_ARk(analyze_structure(kDep), 0).residual_count, 1u);
    EXPECT_EQ(image_functionals_BRk(analyze_structure(kDep), 0).residual_count, 2u);
}

TEST(EliminateIntegrationConstants, ResidualsVanishOnImageElements)
{
    // f = -(R_Q v)'' for v in W-ring^{k+2} satisfies every B-residual condition.
    std::mt19937 rng(53);
    for (const auto& s : random_singular_r2_stencils(8, 3, 3, 59)) {
        const auto core = analyze_structure(s);
        for (int k = 0; k <= 1; ++k) {
            const auto cons = image_functionals_BRk(core, k);
            const auto v = gen::wk0_function(rng, s.N, k + 2);
            const auto f = -apply_RQ(s, v).derivative(2);
            for (const auto& r : cons.residual) EXPECT_EQ(evaluate_on_rhs(r, f), 0);
        }
    }
}

TEST(ImageCharacterization, ForwardImageSatisfiesNodeRelations)
{
    std::mt19937 rng(61);
    for (const auto& s : random_singular_r2_stencils(20, 3, 3, 67)) {
        const auto core = analyze_structure(s);
        for (int k = 1; k <= 3; ++k) {
            const auto v = gen::wk0_function(rng, s.N, k);
            ASSERT_TRUE(in_wk0_class(v, k));
            const auto w = apply_RQ(s, v);
            for (const auto& f : wgamma_functionals(core, k)) EXPECT_EQ(evaluate(f, w), 0);
        }
    }
}

TEST(ImageCharacterization, InverseMapsIntoW0k)
{
    std::mt19937 rng(71);
    for (const auto& s : random_singular_r2_stencils(20, 3, 3, 73)) {
        const auto core = analyze_structure(s);
        for (int k = 1; k <= 3; ++k) {
            const auto w = gen::constrained_polynomial(rng, wgamma_functionals(core, k), s.N, 2 * k + 4);
            const auto v = apply_RQ_inverse(s, w);
            EXPECT_TRUE(trace_defects(v, k).empty()) << "N=" << s.N << " k=" << k;
        }
    }
}

TEST(AlternativeStructure, AlternativeCharacterisationSpansSameConditions)
{
    const std::vector<Stencil> named{kSwap, kIndep, kDep};
    auto pool = random_singular_r2_stencils(20, 3, 3, 79);
    pool.insert(pool.end(), named.begin(), named.end());
    for (const auto& s : pool) {
        const auto core = analyze_structure(s);
        for (int k = 1; k <= 2; ++k) {
            const auto a = wgamma_functionals(core, k);
            const auto b = alt_wgamma_functionals(core.alt, k);
            auto both = a;
            both.insert(both.end(), b.begin(), b.end());
            const int D = default_probe_degree(both);
            EXPECT_EQ(rank_of_functionals(a, D), rank_of_functionals(both, D));
            EXPECT_EQ(rank_of_functionals(b, D), rank_of_functionals(both, D));
        }
    }
}

TEST(AlternativeStructure, SwapStencilConstraintSpace)
{
    const auto core = analyze_structure(kSwap);
    const auto alt = alt_wgamma_functionals(core.alt, 1);
    // {u(0) - u(2), u(1)}
    EXPECT_TRUE(same_functional(alt[0], fn({{R(0), 0, R(1)}, {R(2), 0, R(-1)}})));
    EXPECT_TRUE(same_functional(alt[1], fn({{R(1), 0, R(1)}})));
}
