#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>

#include "ddeq/difference_core.hpp"
#include "test_support.hpp"

using namespace ddeq;
using ddeq::test::R;

namespace {

// Leibniz expansion over all permutations; independent of the elimination path.
Rational leibniz_det(const RationalMatrix& a)
{
    const std::size_t n = a.rows();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    Rational total(0);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (p[i] > p[j]) ++inversions;
        Rational term(inversions % 2 ? -1 : 1);
        for (std::size_t i = 0; i < n; ++i) term *= a(i, p[i]);
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

const RationalMatrix kSwap{{R(0), R(1)}, {R(1), R(0)}};
const RationalMatrix kIndep{{R(1), R(1), R(2)}, {R(1), R(1), R(1)}, {R(0), R(1), R(1)}};
const RationalMatrix kDep{{R(2), R(4), R(4)}, {R(1), R(2), R(4)}, {R(1), R(1), R(2)}};

} // namespace

TEST(BuildShiftMatrix, SwapStencil)
{
    const auto m = build_shift_matrix(Stencil::from_ints({1, 0, 1}));
    EXPECT_EQ(m.entries, kSwap);
    EXPECT_EQ(m.det_R1, R(-1));
    EXPECT_EQ(m.det_R2, R(0));
}

TEST(BuildShiftMatrix, IndependentStencil)
{
    const auto m = build_shift_matrix(Stencil::from_ints({0, 1, 1, 1, 2}));
    EXPECT_EQ(m.entries, kIndep);
    EXPECT_EQ(m.det_R1, R(1));
    EXPECT_EQ(m.det_R1, leibniz_det(m.entries));
    EXPECT_EQ(m.det_R2, R(0));
}

TEST(BuildShiftMatrix, IdentityStencil)
{
    const auto m = build_shift_matrix(Stencil::from_ints({0, 1, 0}));
    EXPECT_EQ(m.entries, RationalMatrix::identity(2));
    EXPECT_EQ(m.det_R1, R(1));
    EXPECT_EQ(m.det_R2, R(1));
}

TEST(BuildShiftMatrix, RejectsBadStencil)
{
    EXPECT_THROW(Stencil(1, {R(1), R(2)}), InvalidStencil);
    EXPECT_THROW(Stencil(0, {R(1)}), InvalidStencil);
}

TEST(BuildShiftMatrix, ToeplitzAndStencilRoundTripOnRandomInputs)
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> coef(-5, 5);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 4;
        std::vector<long> b(static_cast<std::size_t>(2 * n + 1));
        for (auto& x : b) x = coef(rng);
        const auto s = Stencil::from_ints(b);
        const auto m = build_shift_matrix(s);
        EXPECT_TRUE(m.is_toeplitz());
        EXPECT_EQ(m.stencil(), s);
        EXPECT_EQ(m.det_R1, leibniz_det(m.entries));
        EXPECT_EQ(m.det_R2, leibniz_det(m.R2()));
    }
}

TEST(ClassifyRegime, Examples)
{
    EXPECT_EQ(classify_regime(shift_matrix_from_entries(kSwap)).regime, Regime::SingularR2);
    EXPECT_EQ(classify_regime(shift_matrix_from_entries(RationalMatrix::identity(2))).regime,
              Regime::NonsingularBoth);
    EXPECT_EQ(classify_regime(shift_matrix_from_entries(RationalMatrix(2, 2))).regime,
              Regime::Degenerate);
}

TEST(FindStructure, SwapMatrix)
{
    const auto g = find_structure(shift_matrix_from_entries(kSwap));
    EXPECT_EQ(g.m, 1);
    EXPECT_TRUE(g.gamma2.empty());
    ASSERT_EQ(g.gamma1.size(), 1u);
    EXPECT_EQ(g.gamma1.at(1), R(1));
}

TEST(FindStructure, IndependentMatrix)
{
    const auto g = find_structure(shift_matrix_from_entries(kIndep));
    EXPECT_EQ(g.m, 1);
    EXPECT_EQ(g.gamma2, (std::map<int, Rational>{{2, R(1)}}));
    EXPECT_EQ(g.gamma1, (std::map<int, Rational>{{1, R(1)}, {3, R(-1)}}));
}

TEST(FindStructure, DependentMatrix)
{
    const auto g = find_structure(shift_matrix_from_entries(kDep));
    EXPECT_EQ(g.m, 1);
    EXPECT_EQ(g.gamma2, (std::map<int, Rational>{{2, R(2)}}));
    EXPECT_EQ(g.gamma1, (std::map<int, Rational>{{1, R(1, 4)}, {3, R(0)}}));
}

TEST(FindStructure, RefusesOtherRegimes)
{
    EXPECT_THROW(find_structure(shift_matrix_from_entries(RationalMatrix::identity(3))),
                 UnsupportedRegime);
    EXPECT_THROW(find_structure(shift_matrix_from_entries(RationalMatrix(3, 3))), UnsupportedRegime);
}

TEST(FindStructure, RelationsHoldExactlyOnRandomSingularR2Stencils)
{
    for (const auto& s : ddeq::test::random_singular_r2_stencils(30, 3, 3, 11)) {
        const auto m = build_shift_matrix(s);
        const auto g = find_structure(m);
        const auto [r7, r13] = gamma_relation_residuals(m, g);
        for (const auto& x : r7) EXPECT_EQ(x, 0);
        for (const auto& x : r13) EXPECT_EQ(x, 0);
        EXPECT_EQ(rank(m.R2()), static_cast<std::size_t>(s.N - 1));
    }
}

TEST(FindAltStructure, SwapMatrix)
{
    const auto a = find_alt_structure(shift_matrix_from_entries(kSwap));
    EXPECT_EQ(a.m_prime, 1);
    EXPECT_EQ(a.gamma1, (std::map<int, Rational>{{2, R(1)}}));
    EXPECT_TRUE(a.gamma2.empty());
}

TEST(FindAltStructure, RefusesIdentity)
{
    EXPECT_THROW(find_alt_structure(build_shift_matrix(Stencil::from_ints({0, 1, 0}))),
                 UnsupportedRegime);
}

TEST(EndColumns, IndependentMatrix)
{
    const auto m = shift_matrix_from_entries(kIndep);
    const auto e = end_columns(m, find_structure(m));
    EXPECT_EQ(e.G1_first, (RationalVector{R(1), R(0)}));
    EXPECT_EQ(e.G2_last, (RationalVector{R(2), R(1)}));
    EXPECT_FALSE(e.dependent);
    EXPECT_FALSE(e.alpha.has_value());
}

TEST(EndColumns, DependentMatrix)
{
    const auto m = shift_matrix_from_entries(kDep);
    const auto e = end_columns(m, find_structure(m));
    EXPECT_EQ(e.G1_first, (RationalVector{R(1), R(1)}));
    EXPECT_EQ(e.G2_last, (RationalVector{R(4), R(4)}));
    ASSERT_TRUE(e.dependent);
    EXPECT_EQ(e.alpha->first, R(1));
    EXPECT_EQ(e.alpha->second, R(-1, 4));
    EXPECT_EQ(e.l, 1);
}

TEST(EndColumns, SwapMatrixUsesEmptyMinorConvention)
{
    const auto m = shift_matrix_from_entries(kSwap);
    const auto e = end_columns(m, find_structure(m));
    EXPECT_EQ(e.G1_first, (RationalVector{R(1)}));
    EXPECT_EQ(e.G2_last, (RationalVector{R(1)}));
    ASSERT_TRUE(e.dependent);
    EXPECT_EQ(e.alpha->first, R(1));
    EXPECT_EQ(e.alpha->second, R(-1));
    EXPECT_EQ(e.l, 1);
}

TEST(EndColumns, CofactorIdentityWhenDependent)
{
    int dependent_seen = 0;
    for (const auto& s : ddeq::test::random_singular_r2_stencils(40, 3, 3, 5)) {
        const auto m = build_shift_matrix(s);
        const auto e = end_columns(m, find_structure(m));
        EXPECT_FALSE(std::all_of(e.G1_first.begin(), e.G1_first.end(), [](auto& x) { return x == 0; }));
        EXPECT_FALSE(std::all_of(e.G2_last.begin(), e.G2_last.end(), [](auto& x) { return x == 0; }));
        if (!e.dependent) continue;
        ++dependent_seen;
        const auto [a1, a2] = *e.alpha;
        for (int i = 1; i <= s.N; ++i)
            EXPECT_EQ(a1 * cofactor(m, i, s.N + 1) + a2 * cofactor(m, i + 1, 1), 0);
    }
    EXPECT_GT(dependent_seen, 0);
}

TEST(Cofactor, Examples)
{
    const auto m = shift_matrix_from_entries(kDep);
    EXPECT_EQ(cofactor(m, 1, 1), 0);
    EXPECT_EQ(cofactor(m, 3, 3), 0);
    EXPECT_EQ(cofactor(m, 3, 1), 8);
    EXPECT_EQ(cofactor(shift_matrix_from_entries(RationalMatrix::identity(2)), 1, 2), 0);
    EXPECT_THROW(cofactor(m, 0, 1), IndexOutOfRange);
    EXPECT_THROW(cofactor(m, 1, 4), IndexOutOfRange);
}

TEST(Cofactor, AdjugateIdentityAgainstLeibniz)
{
    const auto m = shift_matrix_from_entries(kDep);
    for (int i = 1; i <= 3; ++i)
        for (int k = 1; k <= 3; ++k) {
            const Rational minor = leibniz_det(m.entries.minor(static_cast<std::size_t>(i - 1),
                                                               static_cast<std::size_t>(k - 1)));
            EXPECT_EQ(cofactor(m, i, k), ((i + k) % 2 ? -minor : minor));
        }
    // sum_k r_ik B_jk = delta_ij det R1
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            Rational s(0);
            for (int k = 1; k <= 3; ++k) s += m.r(i, k) * cofactor(m, j, k);
            EXPECT_EQ(s, i == j ? m.det_R1 : Rational(0));
        }
}

TEST(Spectrum, Examples)
{
    const auto swap = spectrum(shift_matrix_from_entries(kSwap));
    ASSERT_EQ(swap.size(), 2u);
    EXPECT_NEAR(swap[0].real(), -1.0, 1e-12);
    EXPECT_NEAR(swap[1].real(), 1.0, 1e-12);

    const auto id = spectrum(shift_matrix_from_entries(RationalMatrix::identity(2)));
    EXPECT_NEAR(id[0].real(), 1.0, 1e-12);
    EXPECT_NEAR(id[1].real(), 1.0, 1e-12);
}

TEST(Spectrum, MatchesCompanionMatrixOfCharacteristicPolynomial)
{
    // det(lambda I - R1) = lambda^3 - 3 lambda^2 + lambda - 1 for the independent example.
    Eigen::Matrix3d companion;
    companion << 0, 0, 1, 1, 0, -1, 0, 1, 3;
    Eigen::EigenSolver<Eigen::Matrix3d> es(companion, false);
    std::vector<std::complex<double>> want(es.eigenvalues().data(), es.eigenvalues().data() + 3);
    const auto got = spectrum(shift_matrix_from_entries(kIndep));
    ASSERT_EQ(got.size(), 3u);
    for (const auto& w : want) {
        double best = 1e300;
        for (const auto& g : got) best = std::min(best, std::abs(g - w));
        EXPECT_LT(best, 1e-10);
    }
}

TEST(IndexTable, Formulas)
{
    EXPECT_EQ(index_table(false, 0), (IndexTable{0, 4, 2, 2, -2, -2}));
    EXPECT_EQ(index_table(true, 0), (IndexTable{0, 3, 1, 2, -2, -1}));
    const auto t2 = index_table(true, 2);
    EXPECT_EQ(t2.codim_RQk, 5);
    EXPECT_EQ(t2.codim_ARk, 3);
    EXPECT_EQ(index_table(false, 1), index_table(false, 1));
}
