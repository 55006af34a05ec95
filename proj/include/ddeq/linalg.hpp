#pragma once

// Dense matrices over an exact field (Rational) with elimination-based
// determinant, rank, reduced row echelon form and null spaces.

#include <cstddef>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "ddeq/error.hpp"
#include "ddeq/rational.hpp"

namespace ddeq {

template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init)
    {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DomainMismatch("ragged matrix initializer");
            for (const auto& x : row) data_.push_back(x);
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const
    {
        return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_};
    }
    std::vector<T> col(std::size_t j) const
    {
        std::vector<T> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Submatrix keeping the listed rows and columns, in the given order.
    Matrix select(const std::vector<std::size_t>& keep_rows,
                  const std::vector<std::size_t>& keep_cols) const
    {
        Matrix s(keep_rows.size(), keep_cols.size());
        for (std::size_t i = 0; i < keep_rows.size(); ++i)
            for (std::size_t j = 0; j < keep_cols.size(); ++j)
                s(i, j) = (*this)(keep_rows[i], keep_cols[j]);
        return s;
    }

    /// Removes one row and one column (0-based).
    Matrix minor(std::size_t drop_row, std::size_t drop_col) const
    {
        return select(all_but(rows_, drop_row), all_but(cols_, drop_col));
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) throw DomainMismatch("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (is_zero(a(i, k))) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x)
    {
        if (a.cols_ != x.size()) throw DomainMismatch("matrix-vector shape mismatch");
        std::vector<T> y(a.rows_, T(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
        return y;
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols)
    {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw DomainMismatch("row length mismatch");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static std::vector<std::size_t> all_but(std::size_t n, std::size_t skip)
    {
        std::vector<std::size_t> idx;
        idx.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            if (i != skip) idx.push_back(i);
        return idx;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using RationalVector = std::vector<Rational>;

template <typename T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m)
{
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ", ";
            if constexpr (std::is_same_v<T, Rational>)
                os << to_string(m(i, j));
            else
                os << m(i, j);
        }
        os << ']';
    }
    return os << ']';
}

/// Reduced row echelon form with the list of pivot columns.
template <typename T>
struct Echelon {
    Matrix<T> reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank() const { return pivots.size(); }
};

/// Gauss-Jordan elimination. Exact for Rational; the first nonzero entry in a
/// column is used as pivot, so the result is only meaningful for exact fields.
template <typename T>
Echelon<T> rref(Matrix<T> a, std::size_t pivot_cols_limit = static_cast<std::size_t>(-1))
{
    Echelon<T> out;
    const std::size_t col_end = std::min(a.cols(), pivot_cols_limit);
    std::size_t r = 0;
    for (std::size_t c = 0; c < col_end && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && is_zero(a(p, c))) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
        const T inv = T(1) / a(r, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || is_zero(a(i, c))) continue;
            const T f = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.reduced = std::move(a);
    return out;
}

template <typename T>
std::size_t rank(const Matrix<T>& a)
{
    return rref(a).rank();
}

/// Determinant by exact elimination. A 0x0 matrix has determinant 1.
template <typename T>
T determinant(Matrix<T> a)
{
    if (a.rows() != a.cols()) throw DomainMismatch("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    T det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && is_zero(a(p, c))) ++p;
        if (p == n) return T(0);
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (is_zero(a(i, c))) continue;
            const T f = a(i, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

/// Basis of {x : a x = 0}, one vector per free column, free entry set to 1.
template <typename T>
std::vector<std::vector<T>> null_space(const Matrix<T>& a)
{
    const auto e = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> x(a.cols(), T(0));
        x[f] = T(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = -e.reduced(r, f);
        basis.push_back(std::move(x));
    }
    return basis;
}

/// Basis of {y : y^T a = 0}.
template <typename T>
std::vector<std::vector<T>> left_null_space(const Matrix<T>& a)
{
    return null_space(a.transpose());
}

/// Unique solution of a x = b for square nonsingular a, or nullopt.
template <typename T>
std::optional<std::vector<T>> solve_unique(const Matrix<T>& a, const std::vector<T>& b)
{
    if (a.rows() != a.cols() || b.size() != a.rows())
        throw DomainMismatch("solve_unique shape mismatch");
    const std::size_t n = a.rows();
    Matrix<T> aug(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n) = b[i];
    }
    const auto e = rref(aug, n);
    if (e.rank() < n) return std::nullopt;
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = e.reduced(i, n);
    return x;
}

template <typename T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a)
{
    if (a.rows() != a.cols()) throw DomainMismatch("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    Matrix<T> aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = T(1);
    }
    const auto e = rref(aug, n);
    if (e.rank() < n) return std::nullopt;
    Matrix<T> inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

/// Consistency and minimum-norm solution of a possibly rank-deficient system.
template <typename T>
struct LeastNormSolution {
    bool consistent = false;
    std::vector<T> x;                      ///< minimal ||x||_2 when consistent
    std::vector<std::vector<T>> left_null; ///< basis of the compatibility conditions y^T b = 0
    std::size_t rank = 0;
};

/// Exact minimum-norm solution: x = A_r^T y with (A_r A_r^T) y = b_r, where A_r
/// are the independent rows. Consistency is checked against every left null vector.
template <typename T>
LeastNormSolution<T> solve_least_norm(const Matrix<T>& a, const std::vector<T>& b)
{
    if (b.size() != a.rows()) throw DomainMismatch("solve_least_norm shape mismatch");
    LeastNormSolution<T> out;
    out.left_null = left_null_space(a);
    out.consistent = true;
    for (const auto& y : out.left_null) {
        T s(0);
        for (std::size_t i = 0; i < b.size(); ++i) s += y[i] * b[i];
        if (!is_zero(s)) out.consistent = false;
    }
    const auto et = rref(a.transpose());
    out.rank = et.rank();
    out.x.assign(a.cols(), T(0));
    if (!out.consistent || out.rank == 0) return out;
    // Pivot columns of A^T are a maximal set of independent rows of A.
    const auto& rows = et.pivots;
    std::vector<std::size_t> all_cols(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) all_cols[j] = j;
    const Matrix<T> ar = a.select(rows, all_cols);
    std::vector<T> br;
    for (auto r : rows) br.push_back(b[r]);
    const auto y = solve_unique(ar * ar.transpose(), br);
    if (!y) throw InternalRankError("Gram matrix of independent rows is singular");
    out.x = ar.transpose() * *y;
    return out;
}

} // namespace ddeq
