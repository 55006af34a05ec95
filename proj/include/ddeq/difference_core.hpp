#pragma once

// Shift matrix of a difference stencil, regime classification and the finite
// structural constants (anchor m, gamma coefficients, end columns, alpha, l,
// cofactors, codimension/index table), all in exact arithmetic.

#include <algorithm>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ddeq/error.hpp"
#include "ddeq/linalg.hpp"
#include "ddeq/rational.hpp"

namespace ddeq {

/// Coefficients b_{-N}..b_N of (Ry)(t) = sum_j b_j y(t + j).
struct Stencil {
    int N = 0;
    RationalVector coeffs;

    Stencil() = default;
    Stencil(int n, RationalVector c) : N(n), coeffs(std::move(c)) { validate(); }

    /// b_j for j in [-N, N].
    const Rational& b(int j) const
    {
        if (j < -N || j > N) throw IndexOutOfRange("stencil offset out of range");
        return coeffs[static_cast<std::size_t>(j + N)];
    }

    void validate() const
    {
        if (N < 1) throw InvalidStencil("stencil order N must be >= 1");
        if (coeffs.size() != static_cast<std::size_t>(2 * N + 1))
            throw InvalidStencil("stencil needs 2N+1 = " + std::to_string(2 * N + 1) +
                                 " coefficients, got " + std::to_string(coeffs.size()));
    }

    static Stencil from_ints(const std::vector<long>& c)
    {
        RationalVector r;
        for (long x : c) r.emplace_back(x);
        return Stencil(static_cast<int>((c.size() - 1) / 2), std::move(r));
    }

    friend bool operator==(const Stencil&, const Stencil&) = default;
};

/// R1 with r_ik = b_{k-i} (i, k = 1..N+1) and the determinants of R1 and of
/// its leading N x N block R2.
struct ShiftMatrix {
    RationalMatrix entries;
    Rational det_R1;
    Rational det_R2;

    int N() const { return static_cast<int>(entries.rows()) - 1; }

    /// 1-based access r_ik.
    const Rational& r(int i, int k) const
    {
        return entries(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(k - 1));
    }

    RationalMatrix R2() const
    {
        const auto n = entries.rows() - 1;
        return entries.select(Matrix<Rational>::all_but(n + 1, n),
                              Matrix<Rational>::all_but(n + 1, n));
    }

    /// Reads the stencil back from the first row (b_0..b_N) and first column (b_0..b_{-N}).
    Stencil stencil() const
    {
        const int n = N();
        RationalVector c(static_cast<std::size_t>(2 * n + 1));
        for (int j = 0; j <= n; ++j) {
            c[static_cast<std::size_t>(n + j)] = r(1, 1 + j);
            c[static_cast<std::size_t>(n - j)] = r(1 + j, 1);
        }
        return Stencil(n, std::move(c));
    }

    bool is_toeplitz() const
    {
        const auto n = entries.rows();
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t k = 0; k + 1 < n; ++k)
                if (entries(i + 1, k + 1) != entries(i, k)) return false;
        return true;
    }
};

inline ShiftMatrix build_shift_matrix(const Stencil& s)
{
    s.validate();
    const auto n = static_cast<std::size_t>(s.N + 1);
    ShiftMatrix m;
    m.entries = RationalMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            m.entries(i, k) = s.b(static_cast<int>(k) - static_cast<int>(i));
    m.det_R1 = determinant(m.entries);
    m.det_R2 = determinant(m.R2());
    return m;
}

/// Wraps an explicit matrix; it must be square, at least 2x2 and Toeplitz.
inline ShiftMatrix shift_matrix_from_entries(const RationalMatrix& entries)
{
    if (entries.rows() != entries.cols() || entries.rows() < 2)
        throw InvalidStencil("shift matrix must be square of order >= 2");
    ShiftMatrix m;
    m.entries = entries;
    if (!m.is_toeplitz()) throw InvalidStencil("shift matrix is not Toeplitz");
    m.det_R1 = determinant(m.entries);
    m.det_R2 = determinant(m.R2());
    return m;
}

enum class Regime { SingularR2, NonsingularBoth, Degenerate };

inline std::string to_string(Regime r)
{
    switch (r) {
    case Regime::SingularR2: return "SingularR2";
    case Regime::NonsingularBoth: return "NonsingularBoth";
    case Regime::Degenerate: return "Degenerate";
    }
    return "?";
}

struct RegimeReport {
    Rational det_R1;
    Rational det_R2;
    Regime regime = Regime::Degenerate;
};

inline RegimeReport classify_regime(const ShiftMatrix& m)
{
    RegimeReport rep{m.det_R1, m.det_R2, Regime::Degenerate};
    if (is_zero(m.det_R1))
        rep.regime = Regime::Degenerate;
    else if (is_zero(m.det_R2))
        rep.regime = Regime::SingularR2;
    else
        rep.regime = Regime::NonsingularBoth;
    return rep;
}

inline constexpr const char* kOtherRegimeNotice =
    "only det R1 != 0, det R2 == 0 is handled; the regimes det R2 != 0 and "
    "det R1 == 0 are treated in A. L. Skubachevskii, Elliptic Functional "
    "Differential Equations and Applications, Chapter I";

inline void require_singular_r2(const ShiftMatrix& m)
{
    const auto rep = classify_regime(m);
    if (rep.regime != Regime::SingularR2)
        throw UnsupportedRegime("regime " + to_string(rep.regime) + " (det R1 = " +
                             to_string(rep.det_R1) + ", det R2 = " + to_string(rep.det_R2) +
                             "): " + kOtherRegimeNotice);
}

/// Anchor m and the coefficients of the two node relations
///   g_m = sum_{i != m} gamma2_i g_i                (rows of R1 without last column)
///   row_{N+1}(R1)[1..N] = sum_{i != m+1} gamma1_i row_i(R1)[2..N+1].
/// Indices are 1-based.
struct GammaData {
    int m = 0;
    std::map<int, Rational> gamma2; ///< i in 1..N, i != m
    std::map<int, Rational> gamma1; ///< i in 1..N+1, i != m+1
};

namespace detail {

// Row i (1-based) of R1 with its last column removed.
inline RationalVector row_without_last(const ShiftMatrix& sm, int i)
{
    auto r = sm.entries.row(static_cast<std::size_t>(i - 1));
    r.pop_back();
    return r;
}

// Row i (1-based) of R1 with its first column removed.
inline RationalVector row_without_first(const ShiftMatrix& sm, int i)
{
    auto r = sm.entries.row(static_cast<std::size_t>(i - 1));
    r.erase(r.begin());
    return r;
}

} // namespace detail

inline GammaData find_structure(const ShiftMatrix& sm)
{
    require_singular_r2(sm);
    const int n = sm.N();
    // Dependencies c with sum_i c_i g_i = 0 are the left null space of R2.
    const auto deps = left_null_space(sm.R2());
    if (deps.size() != 1)
        throw InternalRankError("dependency space of g_1..g_N has dimension " +
                                std::to_string(deps.size()) + ", expected 1");
    const auto& c = deps.front();
    GammaData g;
    for (int i = 1; i <= n; ++i)
        if (!is_zero(c[static_cast<std::size_t>(i - 1)])) {
            g.m = i;
            break;
        }
    const Rational cm = c[static_cast<std::size_t>(g.m - 1)];
    for (int i = 1; i <= n; ++i)
        if (i != g.m) g.gamma2[i] = -c[static_cast<std::size_t>(i - 1)] / cm;

    // Rows {g_j : j != m} must be a basis of R^N.
    {
        std::vector<RationalVector> rows;
        for (int j = 1; j <= n + 1; ++j)
            if (j != g.m) rows.push_back(detail::row_without_last(sm, j));
        if (rank(RationalMatrix::from_rows(rows, static_cast<std::size_t>(n))) !=
            static_cast<std::size_t>(n))
            throw InternalRankError("rows g_j (j != m) are not a basis");
    }

    // gamma1: express row N+1 (without last column) in the basis e_i, i != m+1.
    std::vector<int> idx;
    std::vector<RationalVector> basis;
    for (int i = 1; i <= n + 1; ++i)
        if (i != g.m + 1) {
            idx.push_back(i);
            basis.push_back(detail::row_without_first(sm, i));
        }
    const auto e = RationalMatrix::from_rows(basis, static_cast<std::size_t>(n));
    const auto coef = solve_unique(e.transpose(), detail::row_without_last(sm, n + 1));
    if (!coef) throw InternalRankError("rows e_i (i != m+1) are not a basis");
    for (std::size_t t = 0; t < idx.size(); ++t) g.gamma1[idx[t]] = (*coef)[t];
    return g;
}

/// Residual vectors of the two defining relations; both are zero for valid data.
inline std::pair<RationalVector, RationalVector> gamma_relation_residuals(const ShiftMatrix& sm,
                                                                          const GammaData& g)
{
    const int n = sm.N();
    RationalVector r7 = detail::row_without_last(sm, g.m);
    for (const auto& [i, c] : g.gamma2) {
        const auto gi = detail::row_without_last(sm, i);
        for (std::size_t j = 0; j < r7.size(); ++j) r7[j] -= c * gi[j];
    }
    RationalVector r13 = detail::row_without_last(sm, n + 1);
    for (const auto& [i, c] : g.gamma1) {
        const auto ei = detail::row_without_first(sm, i);
        for (std::size_t j = 0; j < r13.size(); ++j) r13[j] -= c * ei[j];
    }
    return {r7, r13};
}

/// Mirrored description of the same subspace, anchored at the left end:
///   u(0)  = sum_{i in 1..N+1, i != m'} gamma1'_i u(i)
///   u(m') = sum_{i in 1..N,   i != m'} gamma2'_i u(i).
struct AltGammaData {
    int m_prime = 0;
    std::map<int, Rational> gamma1; ///< i in 1..N+1, i != m'
    std::map<int, Rational> gamma2; ///< i in 1..N, i != m'
};

/// Reflection t -> N+1-t turns the stencil b_j into b_{-j}, i.e. R1 into R1^T,
/// and swaps the roles of the two ends.
inline AltGammaData find_alt_structure(const ShiftMatrix& sm)
{
    require_singular_r2(sm);
    const int n = sm.N();
    const auto mirrored = shift_matrix_from_entries(sm.entries.transpose());
    const auto g = find_structure(mirrored);
    AltGammaData a;
    a.m_prime = n + 1 - g.m;
    for (const auto& [i, c] : g.gamma1) a.gamma1[n + 2 - i] = c;
    for (const auto& [i, c] : g.gamma2) a.gamma2[n + 1 - i] = c;
    return a;
}

/// B_ik = (-1)^{i+k} det(R1 without row i and column k), 1-based.
inline Rational cofactor(const ShiftMatrix& sm, int i, int k)
{
    const int n1 = sm.N() + 1;
    if (i < 1 || i > n1 || k < 1 || k > n1)
        throw IndexOutOfRange("cofactor index (" + std::to_string(i) + ", " + std::to_string(k) +
                              ") outside 1.." + std::to_string(n1));
    const Rational d = determinant(
        sm.entries.minor(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(k - 1)));
    return ((i + k) % 2 == 0) ? d : Rational(-d);
}

struct EndColumnData {
    RationalVector G1_first; ///< first column of R1 without its first row
    RationalVector G2_last;  ///< last column of R1 without its last row
    bool dependent = false;
    std::optional<std::pair<Rational, Rational>> alpha;
    std::optional<int> l;
};

inline EndColumnData end_columns(const ShiftMatrix& sm, const GammaData& g)
{
    require_singular_r2(sm);
    const int n = sm.N();
    EndColumnData e;
    for (int i = 2; i <= n + 1; ++i) e.G1_first.push_back(sm.r(i, 1));
    for (int i = 1; i <= n; ++i) e.G2_last.push_back(sm.r(i, n + 1));

    RationalMatrix pair(static_cast<std::size_t>(n), 2);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        pair(i, 0) = e.G1_first[i];
        pair(i, 1) = e.G2_last[i];
    }
    e.dependent = rank(pair) < 2;
    if (!e.dependent) return e;

    const auto ns = null_space(pair);
    if (ns.size() != 1) throw InternalRankError("end columns vanish in the det R2 = 0 regime");
    Rational a1 = ns[0][0], a2 = ns[0][1];
    const Rational lead = !is_zero(a1) ? a1 : a2;
    a1 /= lead;
    a2 /= lead;
    e.alpha = std::make_pair(a1, a2);

    // Smallest l with det(r_ij : i, j in 1..N, i != m, j != l) != 0; the empty
    // matrix (N = 1) counts as nonsingular.
    const auto rows = Matrix<Rational>::all_but(static_cast<std::size_t>(n),
                                                static_cast<std::size_t>(g.m - 1));
    for (int l = 1; l <= n; ++l) {
        const auto cols = Matrix<Rational>::all_but(static_cast<std::size_t>(n),
                                                    static_cast<std::size_t>(l - 1));
        if (!is_zero(determinant(sm.entries.select(rows, cols)))) {
            e.l = l;
            break;
        }
    }
    if (!e.l) throw NoValidL("no l in 1..N gives a nonsingular reduced system");
    return e;
}

/// Eigenvalues of R1 in double precision, sorted by (real, imag). Diagnostic only.
inline std::vector<std::complex<double>> spectrum(const ShiftMatrix& sm)
{
    const auto n = static_cast<Eigen::Index>(sm.entries.rows());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = to_double(sm.entries(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                         es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return ev;
}

/// Codimension and index counts as functions of end-column dependence and k.
struct IndexTable {
    int k = 0;
    int codim_RQk = 0;
    int codim_ARk = 0;
    int codim_BRk = 0;
    int ind_LB = 0;
    int ind_LA = 0;

    friend bool operator==(const IndexTable&, const IndexTable&) = default;
};

inline IndexTable index_table(bool dependent, int k)
{
    if (k < 0) throw IndexOutOfRange("smoothness order k must be >= 0");
    IndexTable t;
    t.k = k;
    t.codim_RQk = dependent ? k + 3 : 2 * (k + 2);
    t.codim_ARk = dependent ? k + 1 : 2 * (k + 1);
    t.codim_BRk = 2 * (k + 1);
    t.ind_LB = -2 * (k + 1);
    t.ind_LA = dependent ? -(k + 1) : -2 * (k + 1);
    return t;
}

inline IndexTable index_table(const EndColumnData& e, int k) { return index_table(e.dependent, k); }

/// Everything downstream modules need about one stencil.
struct StructureReport {
    Stencil stencil;
    ShiftMatrix shift;
    RegimeReport regime;
    GammaData gamma;
    AltGammaData alt;
    EndColumnData ends;
    RationalMatrix R1_inverse;

    int N() const { return stencil.N; }
    Rational B(int i, int k) const { return cofactor(shift, i, k); }
};

inline StructureReport analyze_structure(const Stencil& s)
{
    StructureReport rep;
    rep.stencil = s;
    rep.shift = build_shift_matrix(s);
    rep.regime = classify_regime(rep.shift);
    require_singular_r2(rep.shift);
    rep.gamma = find_structure(rep.shift);
    rep.alt = find_alt_structure(rep.shift);
    rep.ends = end_columns(rep.shift, rep.gamma);
    rep.R1_inverse = *inverse(rep.shift.entries);
    return rep;
}

} // namespace ddeq
