#pragma once

// Point/derivative functionals that cut out the image subspaces of R_Q and of
// the second-order operators built on it, their exact evaluation, and exact
// rank counts on polynomial probe spaces.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ddeq/difference_core.hpp"
#include "ddeq/linalg.hpp"
#include "ddeq/piecewise.hpp"

namespace ddeq {

/// sum_t weight_t * u^{(order_t)}(node_t)
struct NodeFunctional {
    struct Term {
        Rational node;
        int order = 0;
        Rational weight;
        friend bool operator==(const Term&, const Term&) = default;
    };

    std::vector<Term> terms;
    std::string label;

    /// Adds weight to the (node, order) slot, dropping slots that cancel.
    NodeFunctional& add(const Rational& node, int order, const Rational& weight)
    {
        auto it = std::find_if(terms.begin(), terms.end(), [&](const Term& t) {
            return t.node == node && t.order == order;
        });
        if (it == terms.end()) {
            if (!is_zero(weight)) terms.push_back({node, order, weight});
        } else {
            it->weight += weight;
            if (is_zero(it->weight)) terms.erase(it);
        }
        return *this;
    }

    NodeFunctional& add(const NodeFunctional& other, const Rational& scale)
    {
        for (const auto& t : other.terms) add(t.node, t.order, t.weight * scale);
        return *this;
    }

    int max_order() const
    {
        int m = 0;
        for (const auto& t : terms) m = std::max(m, t.order);
        return m;
    }

    /// Value on a polynomial given in the global variable.
    Rational on_polynomial(const RationalPolynomial& p) const
    {
        Rational s(0);
        for (const auto& t : terms) s += t.weight * p.derivative(t.order)(t.node);
        return s;
    }
};

/// Exact value of fn on w. Interior nodes must be points where the required
/// derivative is continuous; otherwise the value is ambiguous and DomainMismatch is thrown.
inline Rational evaluate(const NodeFunctional& fn, const Piecewise& w)
{
    Rational s(0);
    for (const auto& t : fn.terms) {
        if (!w.contains(t.node))
            throw DomainMismatch("functional node " + to_string(t.node) + " outside the domain");
        const auto l = w.limit(t.node, t.order, Side::Left);
        const auto r = w.limit(t.node, t.order, Side::Right);
        if (l && r && *l != *r)
            throw DomainMismatch("functional '" + fn.label + "' evaluated across a jump of order " +
                                 std::to_string(t.order) + " at " + to_string(t.node));
        s += t.weight * (l ? *l : *r);
    }
    return s;
}

/// Conditions u^{(mu)}(N+1) = sum gamma1_i u^{(mu)}(i-1) and
/// u^{(mu)}(m) = sum gamma2_i u^{(mu)}(i) for mu = 0..k-1, as 2k functionals
/// ordered (F0_0, F1_0, F0_1, F1_1, ...).
inline std::vector<NodeFunctional> wgamma_functionals(const GammaData& g, int N, int k)
{
    std::vector<NodeFunctional> out;
    for (int mu = 0; mu < k; ++mu) {
        NodeFunctional f0;
        f0.label = "F0[mu=" + std::to_string(mu) + "] right-end relation";
        f0.add(Rational(N + 1), mu, Rational(1));
        for (const auto& [i, c] : g.gamma1) f0.add(Rational(i - 1), mu, -c);
        NodeFunctional f1;
        f1.label = "F1[mu=" + std::to_string(mu) + "] anchor relation at m=" + std::to_string(g.m);
        f1.add(Rational(g.m), mu, Rational(1));
        for (const auto& [i, c] : g.gamma2) f1.add(Rational(i), mu, -c);
        out.push_back(std::move(f0));
        out.push_back(std::move(f1));
    }
    return out;
}

inline std::vector<NodeFunctional> wgamma_functionals(const StructureReport& core, int k)
{
    return wgamma_functionals(core.gamma, core.N(), k);
}

/// Left-anchored description of the same subspace.
inline std::vector<NodeFunctional> alt_wgamma_functionals(const AltGammaData& a, int k)
{
    std::vector<NodeFunctional> out;
    for (int mu = 0; mu < k; ++mu) {
        NodeFunctional f0;
        f0.label = "F0'[mu=" + std::to_string(mu) + "] left-end relation";
        f0.add(Rational(0), mu, Rational(1));
        for (const auto& [i, c] : a.gamma1) f0.add(Rational(i), mu, -c);
        NodeFunctional f1;
        f1.label = "F1'[mu=" + std::to_string(mu) + "] anchor relation at m'=" + std::to_string(a.m_prime);
        f1.add(Rational(a.m_prime), mu, Rational(1));
        for (const auto& [i, c] : a.gamma2) f1.add(Rational(i), mu, -c);
        out.push_back(std::move(f0));
        out.push_back(std::move(f1));
    }
    return out;
}

/// Continuity of (Uv)^{(mu)} across node l expressed through w = R_Q v:
///   B_{1,l+1} w(0) + sum_{i=1..N} (B_{i+1,l+1} - B_{i,l}) w(i) - B_{N+1,l} w(N+1).
/// Composed with R_Q it equals det R1 * ((Uv)_{l+1}(0+) - (Uv)_l(1-)).
inline NodeFunctional node_l_functional(const StructureReport& core, int mu)
{
    const int N = core.N();
    const int l = *core.ends.l;
    NodeFunctional f;
    f.label = "J[mu=" + std::to_string(mu) + "] derivative continuity of v at l=" + std::to_string(l);
    f.add(Rational(0), mu, core.B(1, l + 1));
    for (int i = 1; i <= N; ++i) f.add(Rational(i), mu, core.B(i + 1, l + 1) - core.B(i, l));
    f.add(Rational(N + 1), mu, -core.B(N + 1, l));
    return f;
}

/// Functionals whose common kernel is the image of R_Q on M_k (k >= 0):
/// 2(k+2) when the end columns are independent, k+3 otherwise.
inline std::vector<NodeFunctional> image_functionals_RQk(const StructureReport& core, int k)
{
    if (k < 0) throw IndexOutOfRange("k must be >= 0");
    require_singular_r2(core.shift);
    if (!core.ends.dependent) return wgamma_functionals(core, k + 2);
    const int N = core.N();
    const int l = *core.ends.l;
    if (is_zero(core.B(N + 1, l)))
        throw InternalRankError("cofactor B_{N+1,l} vanishes; node-l functionals are degenerate");
    auto out = wgamma_functionals(core, 1);
    for (int mu = 1; mu <= k + 1; ++mu) out.push_back(node_l_functional(core, mu));
    return out;
}

namespace detail {

inline int hermite_probe_bound(const std::vector<NodeFunctional>& fns)
{
    std::map<Rational, int> max_order;
    for (const auto& f : fns)
        for (const auto& t : f.terms) {
            auto [it, inserted] = max_order.emplace(t.node, t.order);
            if (!inserted) it->second = std::max(it->second, t.order);
        }
    int conditions = 0;
    for (const auto& [node, o] : max_order) conditions += o + 1;
    return conditions - 1;
}

inline int max_order_of(const std::vector<NodeFunctional>& fns)
{
    int m = 0;
    for (const auto& f : fns) m = std::max(m, f.max_order());
    return m;
}

} // namespace detail

/// Probe degree large enough for rank_of_functionals: at least the stated
/// minimum |fns| + max order, padded, and at least the Hermite bound that
/// makes every point-derivative evaluation involved independent on P_D.
inline int default_probe_degree(const std::vector<NodeFunctional>& fns, int min_power = 0)
{
    const int base = static_cast<int>(fns.size()) + detail::max_order_of(fns) + 4;
    return std::max(base, detail::hermite_probe_bound(fns) + min_power);
}

/// Matrix [fns x monomials t^min_power..t^D].
inline RationalMatrix probe_matrix(const std::vector<NodeFunctional>& fns, int D, int min_power = 0)
{
    RationalMatrix a(fns.size(), static_cast<std::size_t>(D - min_power + 1));
    for (int p = min_power; p <= D; ++p) {
        const auto mono = RationalPolynomial::monomial(static_cast<std::size_t>(p));
        for (std::size_t i = 0; i < fns.size(); ++i)
            a(i, static_cast<std::size_t>(p - min_power)) = fns[i].on_polynomial(mono);
    }
    return a;
}

/// Exact rank of the functionals on polynomials of degree <= D.
inline std::size_t rank_of_functionals(const std::vector<NodeFunctional>& fns, int D)
{
    const int need = static_cast<int>(fns.size()) + detail::max_order_of(fns);
    if (D < need)
        throw ProbeTooSmall("probe degree " + std::to_string(D) + " below required " +
                            std::to_string(need));
    if (fns.empty()) return 0;
    return rank(probe_matrix(fns, D));
}

inline std::size_t rank_of_functionals(const std::vector<NodeFunctional>& fns)
{
    return rank_of_functionals(fns, default_probe_degree(fns));
}

/// Solvability conditions on the right-hand side f of -(R_Q v)'' = f once the
/// integration constants of w = d1 t + d2 - J, J = integral_0^t (t - tau) f(tau) dtau,
/// are eliminated from a stack of conditions on w.
struct RhsConstraints {
    std::vector<NodeFunctional> on_w;     ///< the stacked conditions on w
    RationalMatrix d_part;                ///< row i: (F_i(t), F_i(1))
    std::size_t d_rank = 0;
    std::vector<NodeFunctional> residual; ///< conditions  R(J) = 0  on J
    std::size_t residual_count = 0;       ///< independent residual conditions on f
};

/// Row-reduces the (d1, d2) columns away. Residual conditions are counted on
/// the probe space J in span{t^2, t^3, ...}, i.e. J(0) = J'(0) = 0.
inline RhsConstraints eliminate_integration_constants(std::vector<NodeFunctional> on_w)
{
    RhsConstraints out;
    out.on_w = std::move(on_w);
    const RationalPolynomial t_poly{Rational(0), Rational(1)};
    const RationalPolynomial one = RationalPolynomial::constant(Rational(1));
    out.d_part = RationalMatrix(out.on_w.size(), 2);
    for (std::size_t i = 0; i < out.on_w.size(); ++i) {
        out.d_part(i, 0) = out.on_w[i].on_polynomial(t_poly);
        out.d_part(i, 1) = out.on_w[i].on_polynomial(one);
    }
    out.d_rank = rank(out.d_part);
    for (const auto& y : left_null_space(out.d_part)) {
        NodeFunctional r;
        r.label = "residual";
        for (std::size_t i = 0; i < y.size(); ++i)
            if (!is_zero(y[i])) {
                r.add(out.on_w[i], y[i]);
                r.label += (r.label == "residual" ? " of " : " + ") + out.on_w[i].label;
            }
        out.residual.push_back(std::move(r));
    }
    if (!out.residual.empty()) {
        const int D = default_probe_degree(out.residual, 2);
        out.residual_count = rank(probe_matrix(out.residual, D, 2));
    }
    return out;
}

/// Solvability conditions for -(R_Q v)'' = f with v in M_k.
inline RhsConstraints image_functionals_ARk(const StructureReport& core, int k)
{
    return eliminate_integration_constants(image_functionals_RQk(core, k));
}

/// Solvability conditions for -(R_Q v)'' = f with v in W-ring^{k+2}.
inline RhsConstraints image_functionals_BRk(const StructureReport& core, int k)
{
    if (k < 0) throw IndexOutOfRange("k must be >= 0");
    require_singular_r2(core.shift);
    return eliminate_integration_constants(wgamma_functionals(core, k + 2));
}

/// J = integral_0^t (t - tau) f(tau) dtau, i.e. J'' = f, J(0) = J'(0) = 0.
inline Piecewise double_integral(const Piecewise& f, int degree_cap = kDefaultDegreeCap)
{
    return f.antiderivative(Rational(0), degree_cap).antiderivative(Rational(0), degree_cap);
}

/// Value of a residual condition on a concrete right-hand side f.
inline Rational evaluate_on_rhs(const NodeFunctional& residual, const Piecewise& f)
{
    return evaluate(residual, double_integral(f));
}

} // namespace ddeq
