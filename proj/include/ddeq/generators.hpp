#pragma once

// Seeded random generators of exact test data used by the property suites and
// by the `verify` battery.

#include <random>
#include <vector>

#include "ddeq/piecewise.hpp"
#include "ddeq/sobolev_conditions.hpp"

namespace ddeq::gen {

inline Rational rational(std::mt19937& rng, long span = 5, long max_den = 4)
{
    std::uniform_int_distribution<long> num(-span, span), den(1, max_den);
    return Rational(num(rng), den(rng));
}

inline RationalPolynomial polynomial(std::mt19937& rng, int degree)
{
    std::vector<Rational> c;
    for (int i = 0; i <= degree; ++i) c.push_back(rational(rng));
    return RationalPolynomial(std::move(c));
}

/// Random member of the W-ring^k class on (0, N+1): zero traces of orders
/// 0..k-1 at both ends, matching derivatives of orders 0..k-1 at interior
/// integers. Each unit piece is a two-point Hermite interpolant plus
/// t^k (1-t)^k r(t) with r of degree `extra`; an extra rational cut is inserted
/// in every piece so that breakpoint alignment is exercised.
inline Piecewise wk0_function(std::mt19937& rng, int N, int k, int extra = 2)
{
    std::vector<RationalVector> node_data(static_cast<std::size_t>(N + 2),
                                          RationalVector(static_cast<std::size_t>(k), Rational(0)));
    for (int s = 1; s <= N; ++s)
        for (auto& x : node_data[static_cast<std::size_t>(s)]) x = rational(rng);
    RationalPolynomial bump = RationalPolynomial::constant(Rational(1));
    const RationalPolynomial t_poly{Rational(0), Rational(1)};
    const RationalPolynomial one_minus_t{Rational(1), Rational(-1)};
    for (int i = 0; i < k; ++i) bump = bump * t_poly * one_minus_t;
    std::vector<Rational> breaks;
    std::vector<RationalPolynomial> pieces;
    for (int s = 1; s <= N + 1; ++s) {
        breaks.emplace_back(s - 1);
        pieces.push_back(hermite_two_point(node_data[static_cast<std::size_t>(s - 1)],
                                           node_data[static_cast<std::size_t>(s)]) +
                         bump * polynomial(rng, extra));
    }
    breaks.emplace_back(N + 1);
    Piecewise f(std::move(breaks), std::move(pieces));
    std::vector<Rational> cuts;
    std::uniform_int_distribution<long> q(1, 3);
    for (int s = 0; s <= N; ++s) cuts.push_back(Rational(s) + Rational(q(rng), 4));
    return f.refined(cuts);
}

/// Random piecewise polynomial on (a, b) with integer breakpoints, unconstrained.
inline Piecewise piecewise(std::mt19937& rng, int a, int b, int degree)
{
    std::vector<Rational> breaks;
    std::vector<RationalPolynomial> pieces;
    for (int i = a; i < b; ++i) {
        breaks.emplace_back(i);
        pieces.push_back(polynomial(rng, degree));
    }
    breaks.emplace_back(b);
    return {std::move(breaks), std::move(pieces)};
}

/// Random polynomial of degree <= `degree` on (0, N+1) annihilated by every
/// functional in `fns` (a random point of the null space of the probe matrix),
/// with breakpoints at the integers.
inline Piecewise constrained_polynomial(std::mt19937& rng, const std::vector<NodeFunctional>& fns,
                                        int N, int degree)
{
    const auto basis = null_space(probe_matrix(fns, degree));
    std::vector<Rational> c(static_cast<std::size_t>(degree + 1), Rational(0));
    for (const auto& b : basis) {
        const Rational a = rational(rng);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += a * b[i];
    }
    std::vector<Rational> ints;
    for (int i = 1; i <= N; ++i) ints.emplace_back(i);
    return Piecewise::from_global(Rational(0), Rational(N + 1), RationalPolynomial(std::move(c)))
        .refined(ints);
}

} // namespace ddeq::gen
