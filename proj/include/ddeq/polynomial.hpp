#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "ddeq/error.hpp"
#include "ddeq/linalg.hpp"
#include "ddeq/rational.hpp"

namespace ddeq {

/// Dense univariate polynomial, coefficients in ascending order. The zero
/// polynomial has no coefficients; trailing zeros are always trimmed.
template <typename T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> c) : c_(std::move(c)) { trim(); }
    Polynomial(std::initializer_list<T> c) : c_(c) { trim(); }

    static Polynomial constant(const T& a) { return Polynomial(std::vector<T>{a}); }
    static Polynomial monomial(std::size_t p, const T& a = T(1))
    {
        std::vector<T> c(p + 1, T(0));
        c[p] = a;
        return Polynomial(std::move(c));
    }

    const std::vector<T>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    T coeff(std::size_t p) const { return p < c_.size() ? c_[p] : T(0); }

    T operator()(const T& x) const
    {
        T y(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) y = y * x + *it;
        return y;
    }

    Polynomial derivative(int order = 1) const
    {
        if (order <= 0) return *this;
        if (static_cast<int>(c_.size()) <= order) return {};
        std::vector<T> d(c_.size() - static_cast<std::size_t>(order));
        for (std::size_t p = 0; p < d.size(); ++p) {
            T f(1);
            for (int q = 1; q <= order; ++q) f *= T(static_cast<long>(p) + q);
            d[p] = c_[p + static_cast<std::size_t>(order)] * f;
        }
        return Polynomial(std::move(d));
    }

    /// Antiderivative with value c0 at x = 0.
    Polynomial antiderivative(const T& c0 = T(0)) const
    {
        std::vector<T> a(c_.size() + 1, T(0));
        a[0] = c0;
        for (std::size_t p = 0; p < c_.size(); ++p) a[p + 1] = c_[p] / T(static_cast<long>(p) + 1);
        return Polynomial(std::move(a));
    }

    /// q(x) = p(x + delta).
    Polynomial shifted(const T& delta) const
    {
        if (c_.empty() || is_zero_scalar(delta)) return *this;
        // Horner on polynomials: q = (...((a_n)(x+d) + a_{n-1})(x+d) + ...).
        std::vector<T> q;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            std::vector<T> next(q.size() + 1, T(0));
            for (std::size_t i = 0; i < q.size(); ++i) {
                next[i + 1] += q[i];
                next[i] += q[i] * delta;
            }
            next[0] += *it;
            q = std::move(next);
        }
        return Polynomial(std::move(q));
    }

    /// q(x) = p(s * x).
    Polynomial scaled_argument(const T& s) const
    {
        std::vector<T> q(c_);
        T f(1);
        for (auto& x : q) {
            x *= f;
            f *= s;
        }
        return Polynomial(std::move(q));
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Polynomial& operator*=(const T& a)
    {
        for (auto& x : c_) x *= a;
        trim();
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
    friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }
    friend Polynomial operator-(Polynomial a) { return a *= T(-1); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    template <typename U>
    Polynomial<U> convert() const
    {
        std::vector<U> c;
        c.reserve(c_.size());
        for (const auto& x : c_) {
            if constexpr (std::is_same_v<U, double>)
                c.push_back(to_double(x));
            else
                c.push_back(U(x));
        }
        return Polynomial<U>(std::move(c));
    }

private:
    static bool is_zero_scalar(const T& x) { return x == T(0); }
    void trim()
    {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }

    std::vector<T> c_;
};

using RationalPolynomial = Polynomial<Rational>;

/// p^{(order)}(x) without materialising the derivative.
template <typename T>
T derivative_at(const Polynomial<T>& p, int order, const T& x)
{
    return p.derivative(order)(x);
}

/// Two-point Hermite interpolant on [0, length]: p^{(i)}(0) = left[i],
/// p^{(i)}(length) = right[i]; degree <= left.size() + right.size() - 1.
inline RationalPolynomial hermite_two_point(const RationalVector& left, const RationalVector& right,
                                            const Rational& length = Rational(1))
{
    const std::size_t n = left.size() + right.size();
    if (n == 0) return {};
    RationalMatrix a(n, n);
    RationalVector rhs;
    rhs.reserve(n);
    // Row for p^{(i)}(x): coefficient of t^p is p!/(p-i)! x^{p-i}.
    auto fill_row = [&](std::size_t row, std::size_t order, const Rational& x) {
        for (std::size_t p = order; p < n; ++p) {
            Rational f(1);
            for (std::size_t q = p - order + 1; q <= p; ++q) f *= Rational(static_cast<long>(q));
            Rational xp(1);
            for (std::size_t q = 0; q < p - order; ++q) xp *= x;
            a(row, p) = f * xp;
        }
    };
    std::size_t row = 0;
    for (std::size_t i = 0; i < left.size(); ++i, ++row) {
        fill_row(row, i, Rational(0));
        rhs.push_back(left[i]);
    }
    for (std::size_t i = 0; i < right.size(); ++i, ++row) {
        fill_row(row, i, length);
        rhs.push_back(right[i]);
    }
    const auto c = solve_unique(a, rhs);
    if (!c) throw InternalRankError("Hermite system is singular");
    return RationalPolynomial(*c);
}

} // namespace ddeq
