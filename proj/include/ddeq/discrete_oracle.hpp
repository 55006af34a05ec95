#pragma once

// Finite-difference surrogate of R_Q and of A_R = -(R_Q .)'' + a(t) on the
// interior grid t_p = p h, h = 1/n, p = 1..n(N+1)-1. Double precision, used
// only to cross-check the exact solver and to estimate kernel/cokernel sizes.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ddeq/difference_core.hpp"
#include "ddeq/piecewise.hpp"

namespace ddeq {

struct GridOperator {
    std::string description;
    Eigen::MatrixXd matrix;
};

/// Operators on the interior grid.
///   RQ: R_Q^h, sum_j b_j times the (j n)-offset shift with zero fill (square).
///   R_ext: interior values -> R y on the closed grid p = 0..M+1, y zero outside.
///   D2: second difference / h^2 from the closed grid to interior points.
///   A: -D2 R_ext + diag(a(t_p)).
struct GridOperators {
    int N = 0;
    int n = 0;
    double h = 0;
    GridOperator RQ;
    GridOperator R_ext;
    GridOperator D2;
    GridOperator A;

    Eigen::Index size() const { return static_cast<Eigen::Index>(n * (N + 1) - 1); }
    double t(Eigen::Index p) const { return static_cast<double>(p) * h; }
};

/// Sample at a grid point; at a jump the mean of the one-sided limits is used.
inline double grid_value(const PiecewiseDouble& f, double t)
{
    const double eps = 1e-12;
    if (t <= f.start() + eps) return f.value(f.start(), 0, Side::Right);
    if (t >= f.end() - eps) return f.value(f.end(), 0, Side::Left);
    return 0.5 * (f.value(t, 0, Side::Left) + f.value(t, 0, Side::Right));
}

inline GridOperators assemble(const Stencil& s, int n, const std::optional<Piecewise>& a = std::nullopt)
{
    s.validate();
    if (n < 2) throw IndexOutOfRange("grid needs n >= 2 subdivisions per unit");
    GridOperators ops;
    ops.N = s.N;
    ops.n = n;
    ops.h = 1.0 / n;
    const Eigen::Index M = ops.size();
    const int N = s.N;

    ops.RQ.description = "R_Q^h";
    ops.RQ.matrix = Eigen::MatrixXd::Zero(M, M);
    for (Eigen::Index i = 0; i < M; ++i)
        for (int j = -N; j <= N; ++j) {
            const Eigen::Index c = i + static_cast<Eigen::Index>(j) * n;
            if (c >= 0 && c < M) ops.RQ.matrix(i, c) += to_double(s.b(j));
        }

    ops.R_ext.description = "R^h on the closed grid";
    ops.R_ext.matrix = Eigen::MatrixXd::Zero(M + 2, M);
    for (Eigen::Index q = 0; q <= M + 1; ++q)
        for (int j = -N; j <= N; ++j) {
            const Eigen::Index p = q + static_cast<Eigen::Index>(j) * n; // closed-grid index
            if (p >= 1 && p <= M) ops.R_ext.matrix(q, p - 1) += to_double(s.b(j));
        }

    ops.D2.description = "D2_h";
    ops.D2.matrix = Eigen::MatrixXd::Zero(M, M + 2);
    const double inv_h2 = static_cast<double>(n) * n;
    for (Eigen::Index i = 0; i < M; ++i) {
        ops.D2.matrix(i, i) = inv_h2;
        ops.D2.matrix(i, i + 1) = -2 * inv_h2;
        ops.D2.matrix(i, i + 2) = inv_h2;
    }

    ops.A.description = a ? "A_R^h = -D2_h R^h + diag(a)" : "A_R^h = -D2_h R^h";
    ops.A.matrix = -ops.D2.matrix * ops.R_ext.matrix;
    if (a) {
        if (a->start() != 0 || a->end() != Rational(N + 1))
            throw DomainMismatch("a(t) must be given on (0, N+1)");
        const auto ad = a->convert<double>();
        for (Eigen::Index i = 0; i < M; ++i) ops.A.matrix(i, i) += grid_value(ad, ops.t(i + 1));
    }
    return ops;
}

struct GridSolution {
    Eigen::VectorXd t;
    Eigen::VectorXd v;
    double condition = 0;
    bool ill_conditioned = false;
    bool least_squares = false;
};

/// Direct solve of A_R^h v = f0 samples, with exterior data y = f1 on [-N, 0]
/// and y = f2 on [N+1, 2N+1] moved to the right-hand side.
inline GridSolution solve_grid(const Stencil& s, const GridOperators& ops, const Piecewise& f0,
                               const RationalPolynomial& f1 = {}, const RationalPolynomial& f2 = {})
{
    const Eigen::Index M = ops.size();
    const int N = ops.N;
    const auto n = static_cast<Eigen::Index>(ops.n);
    const auto f0d = f0.convert<double>();
    const auto f1d = f1.convert<double>();
    const auto f2d = f2.convert<double>();

    // exterior contribution to R y on the closed grid
    Eigen::VectorXd g = Eigen::VectorXd::Zero(M + 2);
    for (Eigen::Index q = 0; q <= M + 1; ++q)
        for (int j = -N; j <= N; ++j) {
            const Eigen::Index p = q + static_cast<Eigen::Index>(j) * n;
            if (p >= 1 && p <= M) continue;
            const double tp = static_cast<double>(p) * ops.h;
            g(q) += to_double(s.b(j)) * (p <= 0 ? f1d(tp) : f2d(tp));
        }
    Eigen::VectorXd rhs(M);
    for (Eigen::Index i = 0; i < M; ++i) rhs(i) = grid_value(f0d, ops.t(i + 1));
    rhs += ops.D2.matrix * g;

    GridSolution out;
    out.t.resize(M);
    for (Eigen::Index i = 0; i < M; ++i) out.t(i) = ops.t(i + 1);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(ops.A.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0), smin = sv(sv.size() - 1);
    out.condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    out.ill_conditioned = out.condition > 1e12;
    if (out.ill_conditioned) {
        svd.setThreshold(1e-8);
        out.v = svd.solve(rhs);
        out.least_squares = true;
    } else {
        out.v = ops.A.matrix.partialPivLu().solve(rhs);
    }
    return out;
}

/// Numerical kernel and cokernel dimensions: singular values below
/// threshold * sigma_max of A and of A^T, computed separately.
struct IndexEstimate {
    Eigen::Index kernel_dim = 0;
    Eigen::Index cokernel_dim = 0;
    double sigma_max = 0;
    double sigma_min = 0;
    long index() const { return static_cast<long>(kernel_dim) - static_cast<long>(cokernel_dim); }
};

inline Eigen::Index near_null_count(const Eigen::MatrixXd& m, double rel, double* smax, double* smin)
{
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (smax) *smax = sv(0);
    if (smin) *smin = sv(sv.size() - 1);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) < rel * sv(0)) ++c;
    return c;
}

inline IndexEstimate estimate_index(const GridOperator& op, double rel_threshold = 1e-8)
{
    IndexEstimate e;
    e.kernel_dim = near_null_count(op.matrix, rel_threshold, &e.sigma_max, &e.sigma_min);
    const Eigen::MatrixXd at = op.matrix.transpose();
    e.cokernel_dim = near_null_count(at, rel_threshold, nullptr, nullptr);
    return e;
}

inline std::vector<std::complex<double>> grid_spectrum(const GridOperators& ops)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(ops.RQ.matrix, false);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

namespace detail {

inline std::vector<std::complex<double>> eigenvalues(const RationalMatrix& m)
{
    const auto n = static_cast<Eigen::Index>(m.rows());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = to_double(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

} // namespace detail

/// Spectrum of R_Q^h against spec(R1): the grid splits into n-1 residue
/// classes coupled through R1 and one class (the integer nodes) coupled
/// through the N x N block R2, so spec(R_Q^h) = (n-1) x spec(R1) + spec(R2).
/// Computed eigenvalues are assigned to the nearest distinct expected value;
/// each cluster must have the expected multiplicity, and its mean is compared
/// (individual members of a cluster from a Jordan block scatter by ~sqrt(eps)).
struct SpectrumComparison {
    struct Cluster {
        std::complex<double> expected;
        std::size_t multiplicity = 0;
        std::size_t found = 0;
        double mean_error = 0;
        double max_member_error = 0;
    };
    std::vector<std::complex<double>> grid;
    std::vector<Cluster> clusters;
    double max_mean_error = 0;
    double max_member_error = 0;
    bool counts_match = false;

    bool agrees(double tol = 1e-8) const { return counts_match && max_mean_error < tol; }
};

inline SpectrumComparison compare_spectrum(const ShiftMatrix& sm, const GridOperators& ops)
{
    SpectrumComparison c;
    c.grid = grid_spectrum(ops);
    const auto r1 = spectrum(sm);
    const auto r2 = detail::eigenvalues(sm.R2());
    // reference values closer than 1e-6 form one cluster located at their mean
    std::vector<std::pair<std::complex<double>, std::size_t>> refs;
    for (const auto& e : r1) refs.emplace_back(e, static_cast<std::size_t>(ops.n - 1));
    for (const auto& e : r2) refs.emplace_back(e, 1);
    std::vector<std::complex<double>> first, weighted;
    for (const auto& [e, mult] : refs) {
        std::size_t i = 0;
        while (i < first.size() && std::abs(first[i] - e) >= 1e-6) ++i;
        if (i == first.size()) {
            first.push_back(e);
            weighted.emplace_back(0.0);
            c.clusters.push_back({});
        }
        weighted[i] += e * static_cast<double>(mult);
        c.clusters[i].multiplicity += mult;
    }
    for (std::size_t i = 0; i < c.clusters.size(); ++i)
        c.clusters[i].expected = weighted[i] / static_cast<double>(c.clusters[i].multiplicity);

    std::vector<std::complex<double>> sums(c.clusters.size(), 0.0);
    for (const auto& g : c.grid) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < c.clusters.size(); ++i)
            if (std::abs(g - c.clusters[i].expected) < std::abs(g - c.clusters[best].expected)) best = i;
        auto& cl = c.clusters[best];
        ++cl.found;
        sums[best] += g;
        cl.max_member_error = std::max(cl.max_member_error, std::abs(g - cl.expected));
    }
    c.counts_match = true;
    for (std::size_t i = 0; i < c.clusters.size(); ++i) {
        auto& cl = c.clusters[i];
        c.counts_match = c.counts_match && cl.found == cl.multiplicity;
        cl.mean_error = cl.found ? std::abs(sums[i] / static_cast<double>(cl.found) - cl.expected)
                                 : std::numeric_limits<double>::infinity();
        c.max_mean_error = std::max(c.max_mean_error, cl.mean_error);
        c.max_member_error = std::max(c.max_member_error, cl.max_member_error);
    }
    return c;
}

/// Max-node error of a grid solution against an exact piecewise solution.
inline double max_node_error(const GridSolution& g, const Piecewise& exact)
{
    const auto ed = exact.convert<double>();
    double err = 0;
    for (Eigen::Index i = 0; i < g.v.size(); ++i) err = std::max(err, std::abs(g.v(i) - grid_value(ed, g.t(i))));
    return err;
}

struct ConvergenceRow {
    int n = 0;
    double error = 0;
    std::optional<double> order; ///< log2(e_{n/2} / e_n) against the previous row
};

/// Refinement study of solve_grid against an exact solution.
inline std::vector<ConvergenceRow> convergence_study(const Stencil& s, const Piecewise& f0,
                                                     const Piecewise& exact, const std::vector<int>& ns,
                                                     const RationalPolynomial& f1 = {},
                                                     const RationalPolynomial& f2 = {},
                                                     const std::optional<Piecewise>& a = std::nullopt)
{
    std::vector<ConvergenceRow> rows;
    for (const int n : ns) {
        const auto ops = assemble(s, n, a);
        ConvergenceRow r;
        r.n = n;
        r.error = max_node_error(solve_grid(s, ops, f0, f1, f2), exact);
        if (!rows.empty() && r.error > 0 && rows.back().error > 0)
            r.order = std::log(rows.back().error / r.error) / std::log(static_cast<double>(n) / rows.back().n);
        rows.push_back(r);
    }
    return rows;
}

} // namespace ddeq
