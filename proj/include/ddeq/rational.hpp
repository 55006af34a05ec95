#pragma once

// Exact rational scalar used by every structural computation in ddeq.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "ddeq/error.hpp"

namespace ddeq {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline bool is_zero(const Rational& x) { return x == 0; }
inline bool is_zero(double x) { return x == 0.0; }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Canonical text form: "p/q" with q > 0 and gcd(p, q) = 1, or "p" when q == 1.
inline std::string to_string(const Rational& x)
{
    const BigInt num = boost::multiprecision::numerator(x);
    const BigInt den = boost::multiprecision::denominator(x);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

/// Parses "p", "-p", "p/q". Whitespace and decimal points are rejected so that
/// no float ever leaks into the exact layer.
inline Rational parse_rational(std::string_view text)
{
    auto is_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    if (!is_int(num)) throw ParseError("not a rational: '" + std::string(text) + "'");
    std::string num_s(num);
    if (num_s.front() == '+') num_s.erase(0, 1);
    if (slash == std::string_view::npos) return Rational(BigInt(num_s));
    const std::string_view den = text.substr(slash + 1);
    if (!is_int(den) || den.front() == '-' || den.front() == '+')
        throw ParseError("not a rational: '" + std::string(text) + "'");
    const BigInt d(std::string{den});
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(BigInt(num_s), d);
}

} // namespace ddeq
