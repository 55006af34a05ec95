#pragma once

#include <vector>

#include "ddeq/generators.hpp"
#include "ddeq/piecewise.hpp"
#include "ddeq/stencil_search.hpp"

namespace ddeq::test {

inline Rational R(long p, long q = 1) { return Rational(p, q); }

using ddeq::random_singular_r2_stencils;

inline RationalPolynomial P(std::initializer_list<long> c)
{
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return RationalPolynomial(std::move(v));
}

inline RationalPolynomial P(std::initializer_list<Rational> c) { return RationalPolynomial(c); }

/// Single piece on (a, b) given in the global variable.
inline Piecewise global(long a, long b, const RationalPolynomial& p)
{
    return Piecewise::from_global(R(a), R(b), p);
}

} // namespace ddeq::test
