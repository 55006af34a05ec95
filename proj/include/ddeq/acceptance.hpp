#pragma once

// The acceptance battery shared by `ddeq verify` and the acceptance test
// binary. Each criterion returns a verdict and detail lines.

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ddeq/bvp_solver.hpp"
#include "ddeq/discrete_oracle.hpp"
#include "ddeq/generators.hpp"
#include "ddeq/stencil_search.hpp"

namespace ddeq::acceptance {

enum class Level { Fast, Full };

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::vector<std::string> details;
    double seconds = 0;
};

inline const Stencil& swap_stencil()
{
    static const Stencil s = Stencil::from_ints({1, 0, 1});
    return s;
}
inline const Stencil& independent_stencil()
{
    static const Stencil s = Stencil::from_ints({0, 1, 1, 1, 2});
    return s;
}
inline const Stencil& dependent_stencil()
{
    static const Stencil s = Stencil::from_ints({1, 1, 2, 4, 4});
    return s;
}

inline std::vector<Stencil> named_stencils() { return {swap_stencil(), independent_stencil(), dependent_stencil()}; }

inline std::string describe(const Stencil& s)
{
    std::string out = "(";
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) out += (i ? "," : "") + to_string(s.coeffs[i]);
    return out + ")";
}

/// Named stencils, plus (full level) `random_count` random SingularR2
/// stencils with N <= 3 and integer |b_j| <= 3.
inline std::vector<Stencil> pool(Level level, std::size_t random_count = 24, unsigned seed = 2024)
{
    auto out = named_stencils();
    if (level == Level::Full) {
        const auto r = random_singular_r2_stencils(random_count, 3, 3, seed);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

namespace detail {

inline std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

} // namespace detail

inline CriterionResult image_characterization(Level level)
{
    CriterionResult r{1, "R_Q maps W-ring^k onto W_gamma^k exactly", true, {}, 0};
    std::mt19937 rng(1);
    const auto stencils = pool(level);
    std::size_t forward = 0, inverse = 0;
    for (const auto& s : stencils) {
        const auto core = analyze_structure(s);
        for (int k = 1; k <= 3; ++k) {
            const auto fns = wgamma_functionals(core, k);
            for (int trial = 0; trial < 2; ++trial) {
                const auto v = gen::wk0_function(rng, s.N, k);
                const auto w = apply_RQ(s, v);
                for (const auto& f : fns)
                    if (!is_zero(evaluate(f, w))) {
                        r.passed = false;
                        r.details.push_back("nonzero node relation for " + describe(s) + " k=" + std::to_string(k));
                    }
                ++forward;
                const auto w2 = gen::constrained_polynomial(rng, fns, s.N, 2 * k + 4);
                if (!trace_defects(apply_RQ_inverse(s, w2), k).empty()) {
                    r.passed = false;
                    r.details.push_back("trace defect after R_Q^-1 for " + describe(s) + " k=" + std::to_string(k));
                }
                ++inverse;
            }
        }
    }
    r.details.push_back(std::to_string(stencils.size()) + " stencils (" +
                        std::to_string(stencils.size() - 3) + " random), k = 1..3: " + std::to_string(forward) +
                        " forward and " + std::to_string(inverse) + " inverse checks, all exact");
    if (level == Level::Full && stencils.size() < 23) {
        r.passed = false;
        r.details.push_back("fewer than 20 random stencils found");
    }
    return r;
}

inline CriterionResult image_codimension(Level)
{
    CriterionResult r{2, "codim of the image of R_Q^k", true, {}, 0};
    for (const auto& s : named_stencils()) {
        const auto core = analyze_structure(s);
        std::string line = describe(s) + (core.ends.dependent ? " dependent:" : " independent:");
        for (int k = 0; k <= 2; ++k) {
            const int expected = core.ends.dependent ? k + 3 : 2 * (k + 2);
            const auto got = static_cast<int>(rank_of_functionals(image_functionals_RQk(core, k)));
            line += " k=" + std::to_string(k) + " rank " + std::to_string(got) + "/" + std::to_string(expected);
            r.passed = r.passed && got == expected;
        }
        r.details.push_back(line);
    }
    return r;
}

inline CriterionResult solvability_conditions(Level level)
{
    CriterionResult r{3, "Solvability conditions for A_R^k and B_R^k", true, {}, 0};
    std::size_t checked = 0;
    for (const auto& s : pool(level)) {
        const auto core = analyze_structure(s);
        for (int k = 0; k <= 1; ++k) {
            const int ea = core.ends.dependent ? k + 1 : 2 * (k + 1);
            const int eb = 2 * (k + 1);
            const auto a = static_cast<int>(image_functionals_ARk(core, k).residual_count);
            const auto b = static_cast<int>(image_functionals_BRk(core, k).residual_count);
            if (a != ea || b != eb) {
                r.passed = false;
                r.details.push_back(describe(s) + " k=" + std::to_string(k) + ": A " + std::to_string(a) + "/" +
                                    std::to_string(ea) + ", B " + std::to_string(b) + "/" + std::to_string(eb));
            }
            ++checked;
        }
    }
    for (const auto& s : named_stencils()) {
        const auto core = analyze_structure(s);
        r.details.push_back(describe(s) + " k=0: A " + std::to_string(image_functionals_ARk(core, 0).residual_count) +
                            ", B " + std::to_string(image_functionals_BRk(core, 0).residual_count) + "; k=1: A " +
                            std::to_string(image_functionals_ARk(core, 1).residual_count) + ", B " +
                            std::to_string(image_functionals_BRk(core, 1).residual_count));
    }
    r.details.push_back(std::to_string(checked) + " (stencil, k) pairs checked");
    return r;
}

inline CriterionResult trivial_kernel(Level level)
{
    CriterionResult r{4, "Trivial kernel of A_R^k", true, {}, 0};
    const auto stencils = pool(level, 40, 4);
    for (const auto& s : stencils) {
        const auto cert = kernel_of_ARk(analyze_structure(s));
        if (!cert.certified) {
            r.passed = false;
            r.details.push_back(describe(s) + ": rank " + std::to_string(cert.rank));
        }
    }
    r.details.push_back(std::to_string(stencils.size()) + " stencils certified with rank-2 systems");
    return r;
}

inline CriterionResult worked_solution(Level)
{
    CriterionResult r{5, "Worked solution for stencil (1,0,1), f0 = 1", true, {}, 0};
    BVPProblem p;
    p.stencil = swap_stencil();
    p.f0 = Piecewise::from_global(Rational(0), Rational(2), RationalPolynomial{Rational(1)});
    const auto fam = solve_homogeneous(p);
    const Piecewise expected({Rational(0), Rational(1), Rational(2)},
                             {RationalPolynomial{Rational(0), Rational(0), Rational(-1, 2)},
                              RationalPolynomial{Rational(-1, 2), Rational(1), Rational(-1, 2)}});
    r.passed = fam.status == SolutionStatus::Unique && fam.particular && same_function(*fam.particular, expected);
    if (fam.particular) {
        const auto& v = *fam.particular;
        const Rational jump = *v.limit(Rational(1), 1, Side::Right) - *v.limit(Rational(1), 1, Side::Left);
        r.passed = r.passed && jump == 2 && v.value(Rational(1)) == Rational(-1, 2);
        r.details.push_back("v = (-t^2/2; (t-1) - 1/2 - (t-1)^2/2), v(1) = " + to_string(v.value(Rational(1))) +
                            ", jump of v' at 1 = " + to_string(jump));
        r.details.push_back("d1 = " + to_string(fam.d[0]) + ", d2 = " + to_string(fam.d[1]) +
                            ", rank M = " + std::to_string(fam.M_rank));
    }
    return r;
}

inline CriterionResult rank_cases(Level level)
{
    CriterionResult r{6, "Rank cases of the order-zero system M", true, {}, 0};
    const int max_n = level == Level::Full ? 3 : 2;
    const long max_abs = level == Level::Full ? 2 : 1;
    std::map<std::size_t, std::size_t> found, verified;
    std::map<std::size_t, std::string> example;
    for (int N = 1; N <= max_n; ++N)
        for_each_singular_r2_stencil(N, max_abs, [&](const std::vector<long>& b) {
            const auto s = Stencil::from_ints(b);
            const auto core = analyze_structure(s);
            const auto rc = anchor_rank_case(core);
            ++found[rc.rank];
            // certify a bounded number of instances per rank
            if (verified[rc.rank] < 25) {
                const auto cert = certify_rank_case(core);
                const bool ok = cert.verified() && rc.kernel_dim == 2 - static_cast<int>(rc.rank) &&
                                static_cast<int>(rc.condition_count) == rc.kernel_dim;
                if (!ok) {
                    r.passed = false;
                    r.details.push_back("failed certificate for " + describe(s));
                }
                ++verified[rc.rank];
                if (!example.count(rc.rank)) example[rc.rank] = describe(s);
            }
            return true;
        });
    r.details.push_back("search box N <= " + std::to_string(max_n) + ", |b_j| <= " + std::to_string(max_abs));
    for (std::size_t rank = 0; rank <= 2; ++rank) {
        if (!found.count(rank)) {
            r.details.push_back("rank " + std::to_string(rank) + ": no instances in the search box");
            continue;
        }
        r.details.push_back("rank " + std::to_string(rank) + ": " + std::to_string(found[rank]) + " instances, " +
                            std::to_string(verified[rank]) + " certified (dim ker, #conditions) = (" +
                            std::to_string(2 - rank) + ", " + std::to_string(2 - rank) + "), e.g. " + example[rank]);
    }
    if (!found.count(2)) {
        r.passed = false;
        r.details.push_back("no full-rank instance found");
    }
    return r;
}

inline CriterionResult spectrum_match(Level level)
{
    CriterionResult r{7, "Spectrum of the discrete R_Q", true, {}, 0};
    double worst_mean = 0, worst_member = 0;
    const auto stencils = pool(level);
    for (const auto& s : stencils) {
        const auto sm = build_shift_matrix(s);
        for (const int n : {8, 16}) {
            const auto c = compare_spectrum(sm, assemble(s, n));
            worst_mean = std::max(worst_mean, c.max_mean_error);
            worst_member = std::max(worst_member, c.max_member_error);
            if (!c.agrees(1e-8)) {
                r.passed = false;
                r.details.push_back(describe(s) + " n=" + std::to_string(n) + ": mismatch " +
                                    detail::fmt(c.max_mean_error));
            }
        }
    }
    r.details.push_back(std::to_string(stencils.size()) +
                        " stencils, n = 8, 16: multiplicities (n-1) x spec R1 + spec R2 match, "
                        "max cluster-mean deviation " + detail::fmt(worst_mean) +
                        ", max single-eigenvalue scatter " + detail::fmt(worst_member));
    return r;
}

inline CriterionResult oracle_convergence(Level)
{
    CriterionResult r{8, "Finite-difference convergence on the worked example", true, {}, 0};
    const auto& s = swap_stencil();
    auto exact = [&](const Piecewise& f0) {
        BVPProblem p;
        p.stencil = s;
        p.f0 = f0;
        return *solve_homogeneous(p).particular;
    };
    const auto f0 = Piecewise::from_global(Rational(0), Rational(2), RationalPolynomial{Rational(1)});
    const auto rows = convergence_study(s, f0, exact(f0), {32, 64, 128});
    std::string line = "f0 = 1:";
    for (const auto& row : rows) line += " n=" + std::to_string(row.n) + " err " + detail::fmt(row.error);
    r.details.push_back(line);
    const bool roundoff = std::all_of(rows.begin(), rows.end(), [](const auto& x) { return x.error < 1e-10; });
    bool order_ok = roundoff;
    if (!roundoff)
        for (std::size_t i = 1; i < rows.size(); ++i) order_ok = order_ok || (rows[i].order && *rows[i].order >= 1.8);
    if (roundoff)
        r.details.push_back("the scheme is exact on this quadratic solution (errors at roundoff), "
                            "so the order is measured on f0 = t^2 with the same stencil");
    const auto g0 = Piecewise::from_global(Rational(0), Rational(2), RationalPolynomial{Rational(0), Rational(0), Rational(1)})
                        .refined({Rational(1)});
    const auto rows2 = convergence_study(s, g0, exact(g0), {32, 64, 128});
    line = "f0 = t^2:";
    double min_order = 1e9;
    for (const auto& row : rows2) {
        line += " n=" + std::to_string(row.n) + " err " + detail::fmt(row.error);
        if (row.order) {
            line += " (order " + detail::fmt(*row.order) + ")";
            min_order = std::min(min_order, *row.order);
        }
    }
    r.details.push_back(line);
    r.passed = rows.back().error < 1e-3 && order_ok && min_order >= 1.8 && rows2.back().error < 1e-3;
    return r;
}

inline CriterionResult numerical_index(Level level)
{
    CriterionResult r{9, "Numerical index of A_R^h is zero", true, {}, 0};
    auto stencils = pool(level, 8, 9);
    stencils.push_back(Stencil::from_ints({1, 0, -1}));
    std::size_t nonzero_kernel = 0;
    for (const auto& s : stencils)
        for (int which = 0; which < 3; ++which) {
            std::optional<Piecewise> a;
            const Rational end(s.N + 1);
            if (which == 1) a = Piecewise::from_global(Rational(0), end, RationalPolynomial{Rational(1)});
            if (which == 2) a = Piecewise::from_global(Rational(0), end, RationalPolynomial{Rational(0), Rational(1)});
            const auto e = estimate_index(assemble(s, 64, a).A);
            if (e.kernel_dim) ++nonzero_kernel;
            if (e.kernel_dim != e.cokernel_dim) {
                r.passed = false;
                r.details.push_back(describe(s) + " a#" + std::to_string(which) + ": ker " +
                                    std::to_string(e.kernel_dim) + ", coker " + std::to_string(e.cokernel_dim));
            }
        }
    r.details.push_back(std::to_string(stencils.size()) + " stencils x a in {0, 1, t}, n = 64: kernel and "
                        "cokernel estimates agree; " + std::to_string(nonzero_kernel) +
                        " cases with a nontrivial kernel");
    return r;
}

inline CriterionResult alternative_structure(Level level)
{
    CriterionResult r{10, "Both node-relation descriptions span the same conditions", true, {}, 0};
    const auto stencils = pool(level);
    for (const auto& s : stencils) {
        const auto core = analyze_structure(s);
        for (int k = 1; k <= 2; ++k) {
            const auto a = wgamma_functionals(core, k);
            const auto b = alt_wgamma_functionals(core.alt, k);
            auto both = a;
            both.insert(both.end(), b.begin(), b.end());
            const int D = default_probe_degree(both);
            const auto ra = rank_of_functionals(a, D), rb = rank_of_functionals(b, D), rab = rank_of_functionals(both, D);
            if (ra != rab || rb != rab) {
                r.passed = false;
                r.details.push_back(describe(s) + " k=" + std::to_string(k) + ": ranks " + std::to_string(ra) +
                                    ", " + std::to_string(rb) + ", stacked " + std::to_string(rab));
            }
        }
    }
    r.details.push_back(std::to_string(stencils.size()) + " stencils, k = 1, 2: equal ranks");
    return r;
}

inline std::vector<std::function<CriterionResult(Level)>> criteria()
{
    return {image_characterization,    image_codimension,        solvability_conditions,         trivial_kernel, worked_solution,
            rank_cases,      spectrum_match, oracle_convergence, numerical_index,  alternative_structure};
}

inline std::vector<CriterionResult> run(Level level)
{
    std::vector<CriterionResult> out;
    const auto all = criteria();
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& c = all[i];
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult res{static_cast<int>(i + 1), "criterion " + std::to_string(i + 1), false, {}, 0};
        try {
            res = c(level);
        } catch (const std::exception& e) {
            res.passed = false;
            res.details.push_back(std::string("exception: ") + e.what());
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(res));
    }
    return out;
}

} // namespace ddeq::acceptance
