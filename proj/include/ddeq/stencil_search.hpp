#pragma once

// Enumeration and random sampling of integer stencils in the regime
// det R1 != 0, det R2 == 0.

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "ddeq/difference_core.hpp"

namespace ddeq {

namespace detail {

// Fraction-free (Bareiss) determinant of the leading n x n block of the
// integer Toeplitz matrix r_ik = b_{k-i}. Exact for the small entries used here.
inline std::int64_t toeplitz_det_int(const std::vector<long>& b, int N, int n)
{
    std::int64_t a[8][8];
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) a[i][k] = b[static_cast<std::size_t>(k - i + N)];
    std::int64_t prev = 1;
    int sign = 1;
    for (int c = 0; c < n - 1; ++c) {
        if (a[c][c] == 0) {
            int p = c + 1;
            while (p < n && a[p][c] == 0) ++p;
            if (p == n) return 0;
            for (int j = 0; j < n; ++j) std::swap(a[p][j], a[c][j]);
            sign = -sign;
        }
        for (int i = c + 1; i < n; ++i)
            for (int j = c + 1; j < n; ++j) a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) / prev;
        prev = a[c][c];
    }
    return sign * a[n - 1][n - 1];
}

} // namespace detail

/// Fast exact screen for integer stencils (N <= 7).
inline bool is_singular_r2_int(const std::vector<long>& b)
{
    const int N = static_cast<int>(b.size() - 1) / 2;
    return detail::toeplitz_det_int(b, N, N) == 0 && detail::toeplitz_det_int(b, N, N + 1) != 0;
}

/// Distinct random integer stencils with 1 <= N <= max_n, |b_j| <= max_abs, in
/// the supported regime. Deterministic for a given seed; may return fewer than
/// `count` if the attempt budget runs out.
inline std::vector<Stencil> random_singular_r2_stencils(int count, int max_n, long max_abs,
                                                         unsigned seed, long attempts = 2000000)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> order(1, max_n);
    std::uniform_int_distribution<long> coef(-max_abs, max_abs);
    std::set<std::vector<long>> seen;
    std::vector<Stencil> out;
    for (long a = 0; a < attempts && static_cast<int>(out.size()) < count; ++a) {
        const int n = order(rng);
        std::vector<long> b(static_cast<std::size_t>(2 * n + 1));
        for (auto& x : b) x = coef(rng);
        if (!is_singular_r2_int(b) || !seen.insert(b).second) continue;
        out.push_back(Stencil::from_ints(b));
    }
    return out;
}

/// Visits every stencil of order N with integer entries in [-max_abs, max_abs]
/// that lies in the supported regime. The visitor returns false to stop early.
inline void for_each_singular_r2_stencil(int N, long max_abs,
                                          const std::function<bool(const std::vector<long>&)>& visit)
{
    std::vector<long> b(static_cast<std::size_t>(2 * N + 1), -max_abs);
    while (true) {
        if (is_singular_r2_int(b) && !visit(b)) return;
        std::size_t i = 0;
        while (i < b.size() && b[i] == max_abs) b[i++] = -max_abs;
        if (i == b.size()) return;
        ++b[i];
    }
}

} // namespace ddeq
