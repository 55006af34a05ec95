#pragma once

// Piecewise polynomial functions on an interval with rational breakpoints,
// plus the operations that realise the difference operator on them:
// unit-interval vectorisation, blockwise R1 application and inversion,
// application of R on the extended interval (-N, 2N+1), node traces and the
// exact trace tests that stand in for Sobolev-class membership.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ddeq/difference_core.hpp"
#include "ddeq/error.hpp"
#include "ddeq/linalg.hpp"
#include "ddeq/polynomial.hpp"
#include "ddeq/rational.hpp"

namespace ddeq {

inline constexpr int kDefaultDegreeCap = 64;

enum class Side { Left, Right };

/// f on [start, end]; piece i lives on [breaks[i], breaks[i+1]] and is stored
/// in the local coordinate t - breaks[i].
template <typename T>
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(std::vector<T> breaks, std::vector<Polynomial<T>> pieces)
        : breaks_(std::move(breaks)), pieces_(std::move(pieces))
    {
        if (breaks_.size() < 2 || pieces_.size() != breaks_.size() - 1)
            throw DomainMismatch("piecewise polynomial needs pieces = breakpoints - 1 >= 1");
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
            if (!(breaks_[i] < breaks_[i + 1]))
                throw DomainMismatch("breakpoints must be strictly increasing");
    }

    static PiecewisePoly zero(const T& a, const T& b) { return {{a, b}, {Polynomial<T>{}}}; }

    static PiecewisePoly constant(const T& a, const T& b, const T& c)
    {
        return {{a, b}, {Polynomial<T>::constant(c)}};
    }

    /// Single piece given by a polynomial in the global variable t.
    static PiecewisePoly from_global(const T& a, const T& b, const Polynomial<T>& p)
    {
        return {{a, b}, {p.shifted(a)}};
    }

    /// Pieces given by polynomials in the global variable t.
    static PiecewisePoly from_global_pieces(std::vector<T> breaks,
                                            const std::vector<Polynomial<T>>& global)
    {
        std::vector<Polynomial<T>> local;
        for (std::size_t i = 0; i < global.size(); ++i) local.push_back(global[i].shifted(breaks.at(i)));
        return {std::move(breaks), std::move(local)};
    }

    const std::vector<T>& breakpoints() const { return breaks_; }
    const std::vector<Polynomial<T>>& pieces() const { return pieces_; }
    std::size_t piece_count() const { return pieces_.size(); }
    const T& start() const { return breaks_.front(); }
    const T& end() const { return breaks_.back(); }

    int max_degree() const
    {
        int d = -1;
        for (const auto& p : pieces_) d = std::max(d, p.degree());
        return d;
    }

    bool contains(const T& t) const { return !(t < start()) && !(end() < t); }

    /// Piece used for the one-sided limit at t. Throws when the side leaves the domain.
    std::size_t locate(const T& t, Side side) const
    {
        if (!contains(t)) throw DomainMismatch("point outside the function's interval");
        if (side == Side::Left && t == start())
            throw DomainMismatch("no left limit at the left endpoint");
        if (side == Side::Right && t == end())
            throw DomainMismatch("no right limit at the right endpoint");
        // First breakpoint strictly greater than t (Right) or >= t (Left).
        auto it = side == Side::Right ? std::upper_bound(breaks_.begin(), breaks_.end(), t)
                                      : std::lower_bound(breaks_.begin(), breaks_.end(), t);
        return static_cast<std::size_t>(it - breaks_.begin()) - 1;
    }

    std::optional<T> limit(const T& t, int order, Side side) const
    {
        if (!contains(t)) return std::nullopt;
        if ((side == Side::Left && t == start()) || (side == Side::Right && t == end()))
            return std::nullopt;
        const auto i = locate(t, side);
        return pieces_[i].derivative(order)(t - breaks_[i]);
    }

    /// f^{(order)}(t) from the given side; endpoints fall back to the only side available.
    T value(const T& t, int order = 0, Side side = Side::Right) const
    {
        if (t == start()) side = Side::Right;
        if (t == end()) side = Side::Left;
        return *limit(t, order, side);
    }

    /// Same function with the extra breakpoints inserted (points outside (start, end) ignored).
    PiecewisePoly refined(const std::vector<T>& points) const
    {
        std::set<T> all(breaks_.begin(), breaks_.end());
        for (const auto& p : points)
            if (start() < p && p < end()) all.insert(p);
        if (all.size() == breaks_.size()) return *this;
        std::vector<T> nb(all.begin(), all.end());
        std::vector<Polynomial<T>> np;
        np.reserve(nb.size() - 1);
        std::size_t src = 0;
        for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
            while (!(nb[i] < breaks_[src + 1])) ++src;
            np.push_back(pieces_[src].shifted(nb[i] - breaks_[src]));
        }
        return {std::move(nb), std::move(np)};
    }

    PiecewisePoly restricted(const T& a, const T& b) const
    {
        if (!(a < b) || a < start() || end() < b) throw DomainMismatch("restriction outside domain");
        const auto r = refined({a, b});
        std::vector<T> nb;
        std::vector<Polynomial<T>> np;
        for (std::size_t i = 0; i < r.pieces_.size(); ++i) {
            if (r.breaks_[i] < a || b < r.breaks_[i + 1]) continue;
            if (nb.empty()) nb.push_back(r.breaks_[i]);
            nb.push_back(r.breaks_[i + 1]);
            np.push_back(r.pieces_[i]);
        }
        return {std::move(nb), std::move(np)};
    }

    /// g(t) = f(t - delta) on [start + delta, end + delta].
    PiecewisePoly translated(const T& delta) const
    {
        auto nb = breaks_;
        for (auto& x : nb) x += delta;
        return {std::move(nb), pieces_};
    }

    PiecewisePoly derivative(int order = 1) const
    {
        auto np = pieces_;
        for (auto& p : np) p = p.derivative(order);
        return {breaks_, std::move(np)};
    }

    /// Continuous antiderivative F with F(start) = c0.
    PiecewisePoly antiderivative(const T& c0 = T(0), int degree_cap = kDefaultDegreeCap) const
    {
        if (max_degree() + 1 > degree_cap)
            throw DegreeCapExceeded("antiderivative would exceed degree cap " +
                                    std::to_string(degree_cap));
        std::vector<Polynomial<T>> np;
        T acc = c0;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            np.push_back(pieces_[i].antiderivative(acc));
            acc = np.back()(breaks_[i + 1] - breaks_[i]);
        }
        return {breaks_, std::move(np)};
    }

    PiecewisePoly& operator*=(const T& s)
    {
        for (auto& p : pieces_) p *= s;
        return *this;
    }
    friend PiecewisePoly operator*(PiecewisePoly f, const T& s) { return f *= s; }
    friend PiecewisePoly operator*(const T& s, PiecewisePoly f) { return f *= s; }

    friend PiecewisePoly operator+(const PiecewisePoly& f, const PiecewisePoly& g)
    {
        return combine(f, g, [](Polynomial<T> a, const Polynomial<T>& b) { return a += b; });
    }
    friend PiecewisePoly operator-(const PiecewisePoly& f, const PiecewisePoly& g)
    {
        return combine(f, g, [](Polynomial<T> a, const Polynomial<T>& b) { return a -= b; });
    }
    friend PiecewisePoly operator-(PiecewisePoly f) { return f *= T(-1); }

    /// Pointwise product (exact).
    friend PiecewisePoly operator*(const PiecewisePoly& f, const PiecewisePoly& g)
    {
        return combine(f, g, [](const Polynomial<T>& a, const Polynomial<T>& b) { return a * b; });
    }

    /// Both refined to the union of breakpoints; domains must agree.
    static std::pair<PiecewisePoly, PiecewisePoly> align(const PiecewisePoly& f, const PiecewisePoly& g)
    {
        if (f.start() != g.start() || f.end() != g.end())
            throw DomainMismatch("functions live on different intervals");
        return {f.refined(g.breaks_), g.refined(f.breaks_)};
    }

    template <typename U>
    PiecewisePoly<U> convert() const
    {
        std::vector<U> nb;
        std::vector<Polynomial<U>> np;
        for (const auto& b : breaks_) {
            if constexpr (std::is_same_v<U, double>)
                nb.push_back(to_double(b));
            else
                nb.push_back(U(b));
        }
        for (const auto& p : pieces_) np.push_back(p.template convert<U>());
        return {std::move(nb), std::move(np)};
    }

private:
    template <typename Op>
    static PiecewisePoly combine(const PiecewisePoly& f, const PiecewisePoly& g, Op op)
    {
        auto [a, b] = align(f, g);
        std::vector<Polynomial<T>> np;
        np.reserve(a.pieces_.size());
        for (std::size_t i = 0; i < a.pieces_.size(); ++i) np.push_back(op(a.pieces_[i], b.pieces_[i]));
        return {a.breaks_, std::move(np)};
    }

    std::vector<T> breaks_;
    std::vector<Polynomial<T>> pieces_;
};

using Piecewise = PiecewisePoly<Rational>;
using PiecewiseDouble = PiecewisePoly<double>;

/// Exact equality as functions (breakpoint layout may differ).
template <typename T>
bool same_function(const PiecewisePoly<T>& f, const PiecewisePoly<T>& g)
{
    if (f.start() != g.start() || f.end() != g.end()) return false;
    auto [a, b] = PiecewisePoly<T>::align(f, g);
    return a.pieces() == b.pieces();
}

/// Joins functions on adjacent intervals.
template <typename T>
PiecewisePoly<T> concat(const std::vector<PiecewisePoly<T>>& parts)
{
    if (parts.empty()) throw DomainMismatch("concat of nothing");
    std::vector<T> nb{parts.front().start()};
    std::vector<Polynomial<T>> np;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].start() != nb.back()) throw DomainMismatch("concat of non-adjacent intervals");
        nb.insert(nb.end(), parts[k].breakpoints().begin() + 1, parts[k].breakpoints().end());
        np.insert(np.end(), parts[k].pieces().begin(), parts[k].pieces().end());
    }
    return {std::move(nb), std::move(np)};
}

template <typename T>
T definite_integral(const PiecewisePoly<T>& f, const T& a, const T& b)
{
    if (a == b) return T(0);
    if (b < a) return -definite_integral(f, b, a);
    const auto r = f.restricted(a, b);
    T s(0);
    for (std::size_t i = 0; i < r.piece_count(); ++i) {
        const auto F = r.pieces()[i].antiderivative();
        s += F(r.breakpoints()[i + 1] - r.breakpoints()[i]);
    }
    return s;
}

template <typename T>
T inner_product_L2(const PiecewisePoly<T>& f, const PiecewisePoly<T>& g)
{
    const auto h = f * g;
    return definite_integral(h, h.start(), h.end());
}

/// Phi_i(f) = integral_0^i (i - tau) f(tau) dtau for f on (0, N+1).
inline Rational moment_Phi(const Piecewise& f, int i)
{
    if (f.start() != 0 || Rational(i) > f.end() || i < 0)
        throw DomainMismatch("moment_Phi needs f on (0, N+1) and i in 0..N+1");
    if (i == 0) return Rational(0);
    const Piecewise kernel = Piecewise::from_global(Rational(0), Rational(i),
                                                    RationalPolynomial{Rational(i), Rational(-1)});
    return inner_product_L2(kernel, f.restricted(Rational(0), Rational(i)));
}

/// One-sided limits of f^{(mu)} at a breakpoint; an endpoint has only one side.
template <typename T>
struct NodeTrace {
    T node;
    int order = 0;
    std::optional<T> left;
    std::optional<T> right;
    std::optional<T> jump; ///< right - left, when both exist
};

template <typename T>
struct NodeTraces {
    int max_order = 0;
    std::vector<NodeTrace<T>> entries; ///< ordered by node, then order

    const NodeTrace<T>& at(const T& node, int order) const
    {
        for (const auto& e : entries)
            if (e.node == node && e.order == order) return e;
        throw DomainMismatch("no trace recorded at the requested node/order");
    }
};

template <typename T>
NodeTraces<T> node_traces(const PiecewisePoly<T>& f, int max_order)
{
    NodeTraces<T> out;
    out.max_order = max_order;
    for (const auto& x : f.breakpoints())
        for (int mu = 0; mu <= max_order; ++mu) {
            NodeTrace<T> e{x, mu, f.limit(x, mu, Side::Left), f.limit(x, mu, Side::Right), {}};
            if (e.left && e.right) e.jump = *e.right - *e.left;
            out.entries.push_back(std::move(e));
        }
    return out;
}

/// Nonzero interior jumps of orders 0..k-1 (global W^k test for piecewise polynomials).
template <typename T>
std::vector<NodeTrace<T>> interior_jump_defects(const PiecewisePoly<T>& f, int k)
{
    std::vector<NodeTrace<T>> bad;
    if (k <= 0) return bad;
    for (const auto& e : node_traces(f, k - 1).entries)
        if (e.jump && !is_zero(*e.jump)) bad.push_back(e);
    return bad;
}

/// Nonzero endpoint traces and interior jumps of orders 0..k-1 (the W-ring^k test).
template <typename T>
std::vector<NodeTrace<T>> trace_defects(const PiecewisePoly<T>& f, int k)
{
    std::vector<NodeTrace<T>> bad;
    if (k <= 0) return bad;
    for (const auto& e : node_traces(f, k - 1).entries) {
        const bool endpoint = !e.jump;
        const T v = endpoint ? (e.left ? *e.left : *e.right) : *e.jump;
        if (!is_zero(v)) bad.push_back(e);
    }
    return bad;
}

template <typename T>
bool in_wk_class(const PiecewisePoly<T>& f, int k)
{
    return interior_jump_defects(f, k).empty();
}

template <typename T>
bool in_wk0_class(const PiecewisePoly<T>& f, int k)
{
    return trace_defects(f, k).empty();
}

namespace detail {

inline void require_unit_domain(const Piecewise& f, int N)
{
    if (f.start() != 0 || f.end() != Rational(N + 1))
        throw DomainMismatch("expected a function on (0, " + std::to_string(N + 1) + ")");
}

} // namespace detail

/// Components (Uf)_k(t) = f(t + k - 1), k = 1..N+1, on (0, 1) with a shared
/// breakpoint layout (union of the shifted breakpoints).
inline std::vector<Piecewise> vectorize(const Piecewise& f, int N)
{
    detail::require_unit_domain(f, N);
    std::vector<Rational> local;
    for (const auto& b : f.breakpoints()) {
        const Rational fl(BigInt(boost::multiprecision::numerator(b) /
                                 boost::multiprecision::denominator(b)));
        local.push_back(b - fl);
    }
    const auto g = f.refined([N] {
        std::vector<Rational> ints;
        for (int i = 1; i <= N; ++i) ints.emplace_back(i);
        return ints;
    }());
    std::vector<Piecewise> comps;
    for (int k = 1; k <= N + 1; ++k)
        comps.push_back(
            g.restricted(Rational(k - 1), Rational(k)).translated(Rational(-(k - 1))).refined(local));
    return comps;
}

inline Piecewise devectorize(const std::vector<Piecewise>& comps)
{
    std::vector<Piecewise> parts;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        if (comps[k].start() != 0 || comps[k].end() != 1)
            throw DomainMismatch("vectorised components must live on (0, 1)");
        parts.push_back(comps[k].translated(Rational(static_cast<long>(k))));
    }
    return concat(parts);
}

/// U^{-1} M U f: multiplies the component vector by M on every sub-piece.
inline Piecewise apply_blockwise(const RationalMatrix& M, const Piecewise& f)
{
    const int N = static_cast<int>(M.rows()) - 1;
    const auto comps = vectorize(f, N);
    const auto& breaks = comps.front().breakpoints();
    std::vector<Piecewise> out;
    for (int k = 0; k <= N; ++k) {
        std::vector<RationalPolynomial> pieces(breaks.size() - 1);
        for (int s = 0; s <= N; ++s) {
            const Rational& c = M(static_cast<std::size_t>(k), static_cast<std::size_t>(s));
            if (is_zero(c)) continue;
            for (std::size_t p = 0; p < pieces.size(); ++p)
                pieces[p] += comps[static_cast<std::size_t>(s)].pieces()[p] * c;
        }
        out.emplace_back(breaks, std::move(pieces));
    }
    return devectorize(out);
}

/// R_Q f = P_Q R I_Q f for f on (0, N+1).
inline Piecewise apply_RQ(const Stencil& s, const Piecewise& f)
{
    return apply_blockwise(build_shift_matrix(s).entries, f);
}

inline Piecewise apply_RQ_inverse(const Stencil& s, const Piecewise& w)
{
    const auto inv = inverse(build_shift_matrix(s).entries);
    if (!inv) throw SingularShiftMatrix("det R1 = 0: R_Q has no inverse");
    return apply_blockwise(*inv, w);
}

/// I_Q f: zero on (-N, 0) and (N+1, 2N+1).
inline Piecewise zero_extend(const Piecewise& f, int N)
{
    detail::require_unit_domain(f, N);
    return concat<Rational>({Piecewise::zero(Rational(-N), Rational(0)), f,
                             Piecewise::zero(Rational(N + 1), Rational(2 * N + 1))});
}

/// (Ry)(t) = sum_j b_j y(t + j) for t in (0, N+1), y given on (-N, 2N+1).
inline Piecewise apply_R_extended(const Stencil& s, const Piecewise& y)
{
    const int N = s.N;
    if (y.start() != Rational(-N) || y.end() != Rational(2 * N + 1))
        throw DomainMismatch("apply_R_extended needs y on (-N, 2N+1)");
    std::set<Rational> cuts{Rational(0), Rational(N + 1)};
    for (const auto& b : y.breakpoints())
        for (int j = -N; j <= N; ++j) {
            const Rational x = b - Rational(j);
            if (Rational(0) < x && x < Rational(N + 1)) cuts.insert(x);
        }
    std::vector<Rational> nb(cuts.begin(), cuts.end());
    std::vector<RationalPolynomial> np;
    for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
        RationalPolynomial acc;
        for (int j = -N; j <= N; ++j) {
            if (is_zero(s.b(j))) continue;
            const Rational a = nb[i] + Rational(j);
            const auto p = y.locate(a, Side::Right);
            acc += y.pieces()[p].shifted(a - y.breakpoints()[p]) * s.b(j);
        }
        np.push_back(std::move(acc));
    }
    return {std::move(nb), std::move(np)};
}

/// Samples (t, f(t)) at start, start + step, ... <= end, in double precision.
template <typename T>
std::vector<std::pair<double, double>> sample(const PiecewisePoly<T>& f, double step, int order = 0)
{
    if (!(step > 0)) throw DomainMismatch("sample step must be positive");
    const auto fd = f.template convert<double>();
    std::vector<std::pair<double, double>> out;
    const double a = fd.start(), b = fd.end();
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
        const double t = std::min(a + static_cast<double>(i) * step, b);
        out.emplace_back(t, fd.value(t, order, Side::Right));
    }
    return out;
}

} // namespace ddeq
