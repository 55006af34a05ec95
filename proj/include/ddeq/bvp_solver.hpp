#pragma once

// Semi-analytic generalized solutions of
//     -(R y)''(t) = f0(t),  t in (0, N+1),
//     y = f1 on [-N, 0],  y = f2 on [N+1, 2N+1],
// in exact arithmetic, with kernel/cokernel accounting and smoothness reports.
//
// Reduction: y = z + psi, where psi is a W^{k+2} extension of the boundary
// data and z vanishes outside (0, N+1). Then w = R_Q z solves
//     -w'' = f0 + (R psi)'' =: g,   w = d1 t + d2 - J,   J = int_0^t (t - s) g(s) ds,
// and z = R_Q^{-1} w belongs to W-ring^1 iff w satisfies the two order-zero
// node relations, a 2x2 system M (d1, d2) = rhs.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddeq/difference_core.hpp"
#include "ddeq/linalg.hpp"
#include "ddeq/piecewise.hpp"
#include "ddeq/sobolev_conditions.hpp"

namespace ddeq {

struct BVPProblem {
    Stencil stencil;
    int k = 0;                 ///< requested smoothness order
    Piecewise f0;              ///< right-hand side on (0, N+1)
    RationalPolynomial f1;     ///< boundary data on [-N, 0], global variable
    RationalPolynomial f2;     ///< boundary data on [N+1, 2N+1], global variable
    int degree_cap = kDefaultDegreeCap;

    bool homogeneous() const { return f1.is_zero() && f2.is_zero(); }

    void validate() const
    {
        stencil.validate();
        if (k < 0) throw IndexOutOfRange("smoothness order k must be >= 0");
        const int N = stencil.N;
        if (f0.start() != 0 || f0.end() != Rational(N + 1))
            throw DomainMismatch("f0 must be given on (0, " + std::to_string(N + 1) + ")");
    }
};

enum class SolutionStatus { Unique, Affine, Infeasible };

inline std::string to_string(SolutionStatus s)
{
    switch (s) {
    case SolutionStatus::Unique: return "Unique";
    case SolutionStatus::Affine: return "Affine";
    case SolutionStatus::Infeasible: return "Infeasible";
    }
    return "?";
}

struct ConstraintResidual {
    std::string label;
    Rational value;
};

struct NodeJump {
    Rational node;
    int order = 0;
    Rational jump;
};

struct SmoothnessReport {
    int k = 0;
    /// Jumps of y^{(mu)} at interior integers 1..N, mu = 1..k+1 (mu = 0 is always continuous).
    std::vector<NodeJump> interior_jumps;
    /// Every piece is a polynomial, hence W^{k+2} on each unit interval.
    bool pieces_in_Wk2 = true;
    /// Jumps at 0 and N+1 against the derivatives of f1, f2, mu = 0..k+1.
    std::vector<NodeJump> end_mismatches;
    bool image_in_Wk2 = false;       ///< P_Q R y in W^{k+2}(0, N+1)
    bool global_on_Q = false;        ///< P_Q y in W^{k+2}(0, N+1)
    bool global_on_extended = false; ///< y in W^{k+2}(-N, 2N+1)
};

/// One smoothness question: is there a solution in the target class?
struct TargetAnalysis {
    std::string name;
    bool rhs_regular = false; ///< reduced right-hand side lies in W^k
    std::size_t constraints = 0;
    std::size_t d_rank = 0;
    std::size_t residual_count = 0; ///< independent conditions on the data
    bool feasible = false;
    std::vector<ConstraintResidual> residuals;
};

struct SolutionFamily {
    SolutionStatus status = SolutionStatus::Infeasible;
    int affine_dim = 0;
    RationalMatrix M;          ///< rows: right-end relation, anchor relation
    std::size_t M_rank = 0;
    RationalVector rhs;        ///< (F1, F2) moments of the reduced data
    RationalVector d;          ///< (d1, d2) when feasible (least-norm if not unique)
    std::optional<Piecewise> particular; ///< P_Q y on (0, N+1)
    std::optional<Piecewise> extended;   ///< y on (-N, 2N+1)
    std::optional<Piecewise> w;          ///< P_Q R y on (0, N+1)
    std::vector<Piecewise> kernel_basis;
    std::vector<RationalVector> kernel_coefficients; ///< (c1, c2) of each kernel element
    std::vector<ConstraintResidual> residuals;
    SmoothnessReport smoothness;
    std::vector<TargetAnalysis> targets; ///< [0]: L_B question, [1]: L_A question
    Piecewise psi;         ///< boundary-data extension on (-N, 2N+1)
    Piecewise reduced_rhs; ///< f0 + (R psi)'' on (0, N+1)
};

/// W^{k+2} extension of the boundary data: f1 on [-N, 0], f2 on [N+1, 2N+1],
/// two-point Hermite polynomials of degree 2k+3 on (0, 1) and (N, N+1) that
/// match the data to order k+1 and vanish to order k+1 at the inner end, zero between.
inline Piecewise boundary_extension(int N, int k, const RationalPolynomial& f1,
                                    const RationalPolynomial& f2,
                                    int degree_cap = kDefaultDegreeCap)
{
    if (f1.degree() > degree_cap || f2.degree() > degree_cap || 2 * k + 3 > degree_cap)
        throw DegreeCapExceeded("boundary data or extension degree exceeds cap " +
                                std::to_string(degree_cap));
    const auto order = static_cast<std::size_t>(k + 2);
    RationalVector at0, at1;
    for (std::size_t i = 0; i < order; ++i) {
        at0.push_back(f1.derivative(static_cast<int>(i))(Rational(0)));
        at1.push_back(f2.derivative(static_cast<int>(i))(Rational(N + 1)));
    }
    const RationalVector zeros(order, Rational(0));
    std::vector<Piecewise> parts{Piecewise::from_global(Rational(-N), Rational(0), f1),
                                 Piecewise({Rational(0), Rational(1)}, {hermite_two_point(at0, zeros)})};
    if (N > 1) parts.push_back(Piecewise::zero(Rational(1), Rational(N)));
    parts.push_back(Piecewise({Rational(N), Rational(N + 1)}, {hermite_two_point(zeros, at1)}));
    parts.push_back(Piecewise::from_global(Rational(N + 1), Rational(2 * N + 1), f2));
    return concat(parts);
}

namespace detail {

inline Piecewise linear_on(int N, const Rational& c1, const Rational& c0)
{
    return Piecewise::from_global(Rational(0), Rational(N + 1), RationalPolynomial{c0, c1});
}

inline Piecewise with_integer_nodes(const Piecewise& f, int N)
{
    std::vector<Rational> ints;
    for (int i = 1; i <= N; ++i) ints.emplace_back(i);
    return f.refined(ints);
}

inline std::vector<ConstraintResidual> compatibility_residuals(
    const std::vector<RationalVector>& left_null, const RationalVector& rhs,
    const std::vector<NodeFunctional>& fns)
{
    std::vector<ConstraintResidual> out;
    for (const auto& u : left_null) {
        Rational v(0);
        std::string label;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (is_zero(u[i])) continue;
            v += u[i] * rhs[i];
            label += (label.empty() ? "" : " + ") + ("(" + to_string(u[i]) + ")*[" + fns[i].label + "]");
        }
        if (!is_zero(v)) out.push_back({label, v});
    }
    return out;
}

inline TargetAnalysis analyze_target(std::string name, const std::vector<NodeFunctional>& fns,
                                     const Piecewise& reduced_rhs, const Piecewise& J, int k)
{
    TargetAnalysis t;
    t.name = std::move(name);
    const auto cons = eliminate_integration_constants(fns);
    t.constraints = fns.size();
    t.d_rank = cons.d_rank;
    t.residual_count = cons.residual_count;
    t.rhs_regular = in_wk_class(reduced_rhs, k);
    if (!t.rhs_regular) return t;
    RationalVector values;
    for (const auto& f : fns) values.push_back(evaluate(f, J));
    const auto sol = solve_least_norm(cons.d_part, values);
    t.feasible = sol.consistent;
    t.residuals = compatibility_residuals(sol.left_null, values, fns);
    return t;
}

inline SmoothnessReport smoothness_report(const Piecewise& y_on_Q, const Piecewise& w,
                                          const Piecewise& y_ext, int N, int k)
{
    SmoothnessReport rep;
    rep.k = k;
    for (int s = 1; s <= N; ++s)
        for (int mu = 1; mu <= k + 1; ++mu) {
            const Rational x(s);
            rep.interior_jumps.push_back(
                {x, mu, *y_on_Q.limit(x, mu, Side::Right) - *y_on_Q.limit(x, mu, Side::Left)});
        }
    for (const Rational& x : {Rational(0), Rational(N + 1)})
        for (int mu = 0; mu <= k + 1; ++mu)
            rep.end_mismatches.push_back(
                {x, mu, *y_ext.limit(x, mu, Side::Right) - *y_ext.limit(x, mu, Side::Left)});
    rep.image_in_Wk2 = in_wk_class(w, k + 2);
    rep.global_on_Q = in_wk_class(y_on_Q, k + 2);
    rep.global_on_extended = in_wk_class(y_ext, k + 2);
    return rep;
}

} // namespace detail

/// Generalized solution family plus the two smoothness questions (membership
/// in W^{k+2}(-N, 2N+1), and smoothness of P_Q y and P_Q R y on (0, N+1)).
inline SolutionFamily solve_nonhomogeneous(const BVPProblem& p)
{
    p.validate();
    const auto core = analyze_structure(p.stencil);
    const int N = core.N();
    const int k = p.k;
    SolutionFamily out;

    out.psi = boundary_extension(N, k, p.f1, p.f2, p.degree_cap);
    out.reduced_rhs = detail::with_integer_nodes(
        p.f0 + apply_R_extended(p.stencil, out.psi).derivative(2), N);
    const Piecewise J = double_integral(out.reduced_rhs, p.degree_cap);

    const auto base = wgamma_functionals(core, 1);
    const auto cons = eliminate_integration_constants(base);
    out.M = cons.d_part;
    for (const auto& f : base) out.rhs.push_back(evaluate(f, J));
    const auto sol = solve_least_norm(out.M, out.rhs);
    out.M_rank = sol.rank;

    for (const auto& c : null_space(out.M)) {
        out.kernel_coefficients.push_back(c);
        out.kernel_basis.push_back(apply_RQ_inverse(p.stencil, detail::linear_on(N, c[0], c[1])));
    }
    out.affine_dim = static_cast<int>(out.kernel_basis.size());

    if (!sol.consistent) {
        out.status = SolutionStatus::Infeasible;
        out.residuals = detail::compatibility_residuals(sol.left_null, out.rhs, base);
    } else {
        out.status = out.affine_dim == 0 ? SolutionStatus::Unique : SolutionStatus::Affine;
        out.d = sol.x;
        const Piecewise w = detail::linear_on(N, out.d[0], out.d[1]) - J;
        const Piecewise z = apply_RQ_inverse(p.stencil, w);
        const Piecewise y = z + out.psi.restricted(Rational(0), Rational(N + 1));
        const Piecewise y_ext = concat<Rational>(
            {out.psi.restricted(Rational(-N), Rational(0)), y,
             out.psi.restricted(Rational(N + 1), Rational(2 * N + 1))});
        out.w = apply_R_extended(p.stencil, y_ext);
        out.particular = y;
        out.extended = y_ext;
        out.smoothness = detail::smoothness_report(y, *out.w, y_ext, N, k);
    }

    out.targets.push_back(detail::analyze_target(
        "L_B: y in W^" + std::to_string(k + 2) + "(-N, 2N+1)", wgamma_functionals(core, k + 2),
        out.reduced_rhs, J, k));
    out.targets.push_back(detail::analyze_target(
        "L_A: P_Q y, P_Q R y in W^" + std::to_string(k + 2) + "(0, N+1)",
        image_functionals_RQk(core, k), out.reduced_rhs, J, k));
    return out;
}

/// Homogeneous boundary conditions; identical reduction with psi = 0.
inline SolutionFamily solve_homogeneous(const BVPProblem& p)
{
    if (!p.homogeneous()) throw DomainMismatch("solve_homogeneous needs f1 = f2 = 0");
    return solve_nonhomogeneous(p);
}

/// Linear system in (c1, c2) expressing that v = R_Q^{-1}(c1 + c2 t) has zero
/// endpoint values and no jumps of order 0 or 1 at interior integers (v in
/// W-ring^1 and W^2, the smallest class inside every domain M_k). Rank 2 means
/// the kernel of A_R^k is trivial.
struct KernelCertificate {
    RationalMatrix system;
    std::vector<std::string> row_labels;
    std::size_t rank = 0;
    bool certified = false;
    std::vector<Piecewise> counterexamples;
};

inline KernelCertificate kernel_of_ARk(const StructureReport& core)
{
    require_singular_r2(core.shift);
    const int N = core.N();
    const Piecewise v1 = apply_RQ_inverse(core.stencil, detail::linear_on(N, Rational(0), Rational(1)));
    const Piecewise vt = apply_RQ_inverse(core.stencil, detail::linear_on(N, Rational(1), Rational(0)));
    std::vector<RationalVector> rows;
    KernelCertificate cert;
    rows.push_back({v1.value(Rational(0)), vt.value(Rational(0))});
    cert.row_labels.push_back("v(0)");
    rows.push_back({v1.value(Rational(N + 1)), vt.value(Rational(N + 1))});
    cert.row_labels.push_back("v(N+1)");
    for (int s = 1; s <= N; ++s)
        for (int mu = 0; mu <= 1; ++mu) {
            const Rational x(s);
            auto jump = [&](const Piecewise& f) {
                return *f.limit(x, mu, Side::Right) - *f.limit(x, mu, Side::Left);
            };
            rows.push_back({jump(v1), jump(vt)});
            cert.row_labels.push_back("jump of v^(" + std::to_string(mu) + ") at " + std::to_string(s));
        }
    cert.system = RationalMatrix::from_rows(rows, 2);
    cert.rank = rank(cert.system);
    cert.certified = cert.rank == 2;
    for (const auto& c : null_space(cert.system)) cert.counterexamples.push_back(c[1] * v1 + c[0] * vt);
    return cert;
}

/// Rank case of the order-zero system: dim ker A_R = 2 - rank(M) and the
/// number of independent solvability conditions on f0.
struct RankCase {
    RationalMatrix M;
    std::size_t rank = 0;
    int kernel_dim = 0;
    std::size_t condition_count = 0;
    std::vector<NodeFunctional> conditions; ///< on J = int int f0
};

inline RankCase anchor_rank_case(const StructureReport& core)
{
    const auto cons = eliminate_integration_constants(wgamma_functionals(core, 1));
    RankCase rc;
    rc.M = cons.d_part;
    rc.rank = cons.d_rank;
    rc.kernel_dim = 2 - static_cast<int>(cons.d_rank);
    rc.condition_count = cons.residual_count;
    rc.conditions = cons.residual;
    return rc;
}

/// Explicit evidence for a rank case: the kernel basis elements are checked to
/// be generalized solutions with zero data, and monomial data f_j = t^p are
/// chosen so that the matrix [condition_i(f_j)] is nonsingular, each f_j
/// making the problem infeasible.
struct RankCaseCertificate {
    RankCase rank_case;
    std::vector<Piecewise> kernel_basis;
    bool kernel_verified = false;
    std::vector<Piecewise> violating_data;
    RationalMatrix condition_values;
    bool constraints_verified = false;

    bool verified() const { return kernel_verified && constraints_verified; }
};

inline RankCaseCertificate certify_rank_case(const StructureReport& core, int max_power = 12)
{
    const int N = core.N();
    RankCaseCertificate cert;
    cert.rank_case = anchor_rank_case(core);
    const auto& rc = cert.rank_case;

    BVPProblem zero;
    zero.stencil = core.stencil;
    zero.f0 = Piecewise::zero(Rational(0), Rational(N + 1));
    const auto fam = solve_homogeneous(zero);
    cert.kernel_basis = fam.kernel_basis;
    cert.kernel_verified = static_cast<int>(fam.kernel_basis.size()) == rc.kernel_dim;
    for (const auto& v : fam.kernel_basis)
        cert.kernel_verified = cert.kernel_verified && in_wk0_class(v, 1) &&
                               in_wk_class(apply_RQ(core.stencil, v), 2) &&
                               same_function(apply_RQ(core.stencil, v).derivative(2), zero.f0);
    if (rc.kernel_dim > 0)
        cert.kernel_verified = cert.kernel_verified &&
                               rank(RationalMatrix::from_rows(fam.kernel_coefficients, 2)) ==
                                   fam.kernel_basis.size();

    std::vector<RationalVector> rows;
    std::vector<Piecewise> chosen;
    for (int p = 0; p <= max_power && chosen.size() < rc.condition_count; ++p) {
        const auto f = detail::with_integer_nodes(
            Piecewise::from_global(Rational(0), Rational(N + 1),
                                   RationalPolynomial::monomial(static_cast<std::size_t>(p))),
            N);
        RationalVector col;
        for (const auto& c : rc.conditions) col.push_back(evaluate_on_rhs(c, f));
        auto trial = rows;
        trial.push_back(col);
        if (rank(RationalMatrix::from_rows(trial, col.size())) == trial.size()) {
            rows = std::move(trial);
            chosen.push_back(f);
        }
    }
    cert.violating_data = chosen;
    cert.condition_values = RationalMatrix::from_rows(rows, rc.conditions.size());
    cert.constraints_verified = chosen.size() == rc.condition_count;
    for (const auto& f : chosen) {
        BVPProblem p = zero;
        p.f0 = f;
        cert.constraints_verified =
            cert.constraints_verified && solve_homogeneous(p).status == SolutionStatus::Infeasible;
    }
    return cert;
}

struct ClaimCheck {
    std::string claim;
    long expected = 0;
    long observed = 0;
    bool confirmed() const { return expected == observed; }
};

struct IndexReport {
    IndexTable table;
    bool dependent = false;
    KernelCertificate kernel;
    RankCase rank_case;
    std::vector<ClaimCheck> checks;

    bool all_confirmed() const
    {
        for (const auto& c : checks)
            if (!c.confirmed()) return false;
        return true;
    }
};

/// Computes every kernel dimension, codimension and index for the problem's
/// stencil and k, and compares each with the closed-form table.
inline IndexReport index_report(const Stencil& stencil, int k)
{
    const auto core = analyze_structure(stencil);
    IndexReport rep;
    rep.dependent = core.ends.dependent;
    rep.table = index_table(core.ends, k);
    rep.kernel = kernel_of_ARk(core);
    rep.rank_case = anchor_rank_case(core);

    const long ker = rep.kernel.certified ? 0 : static_cast<long>(2 - rep.kernel.rank);
    const auto rq = static_cast<long>(rank_of_functionals(image_functionals_RQk(core, k)));
    const auto ar = static_cast<long>(image_functionals_ARk(core, k).residual_count);
    const auto br = static_cast<long>(image_functionals_BRk(core, k).residual_count);
    const long ind_A = rep.rank_case.kernel_dim - static_cast<long>(rep.rank_case.condition_count);

    rep.checks = {
        {"ind A_R", 0, ind_A},
        {"codim Im R_Q^k", rep.table.codim_RQk, rq},
        {"dim ker A_R^k", 0, ker},
        {"codim Im A_R^k", rep.table.codim_ARk, ar},
        {"dim ker B_R^k", 0, ker},
        {"codim Im B_R^k", rep.table.codim_BRk, br},
        {"ind L_B", rep.table.ind_LB, -ker - br},
        {"ind L_A", rep.table.ind_LA, -ker - ar},
    };
    return rep;
}

inline IndexReport index_report(const BVPProblem& p) { return index_report(p.stencil, p.k); }

} // namespace ddeq
