// simplex.hpp -- small dense primal simplex, used by the exact disagreement
// backend to decide linear feasibility over conv(V) at desk scale.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "cpex/types.hpp"

namespace cpex {

struct lp_solution {
    bool bounded = true;
    double value = 0.0;
    vecd x;    // primal solution
    vecd dual; // one multiplier per <= row
};

/// max c^T x  s.t.  A x <= b, x >= 0, with b >= 0 (slack basis is feasible).
/// Bland's rule, so termination is guaranteed.
inline lp_solution simplex_max(const std::vector<vecd>& A, const vecd& b, const vecd& c) {
    const std::size_t m = A.size(), n = c.size();
    constexpr double eps = 1e-9;
    // tableau rows: m constraint rows + objective row; columns: n vars,
    // m slacks, rhs
    std::vector<vecd> t(m + 1, vecd(n + m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
        t[i][n + i] = 1.0;
        t[i][n + m] = b[i];
    }
    for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    while (true) {
        // entering: smallest index with negative reduced cost
        std::size_t enter = n + m;
        for (std::size_t j = 0; j < n + m; ++j)
            if (t[m][j] < -eps) {
                enter = j;
                break;
            }
        if (enter == n + m) break;
        // leaving: min ratio, ties to smallest basis index
        std::size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > eps) {
                const double ratio = t[i][n + m] / t[i][enter];
                if (ratio < best - eps || (ratio < best + eps && (leave == m || basis[i] < basis[leave]))) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave == m) {
            lp_solution s;
            s.bounded = false;
            return s;
        }
        // pivot
        const double piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = t[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    lp_solution s;
    s.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) s.x[basis[i]] = t[i][n + m];
    s.dual.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) s.dual[i] = t[m][n + i];
    s.value = t[m][n + m];
    return s;
}

struct game_solution {
    double value = 0.0;
    vecd row_strategy; // a distribution over rows
};

/// Value of the zero-sum game max over row mixtures p of min_j (p^T G)_j.
inline game_solution solve_matrix_game(const std::vector<vecd>& G) {
    const std::size_t m = G.size(), n = G.front().size();
    game_solution out;
    if (m == 1) {
        out.value = *std::min_element(G[0].begin(), G[0].end());
        out.row_strategy = {1.0};
        return out;
    }
    // shift so all entries are >= 1
    double lo = G[0][0];
    for (const auto& row : G)
        for (double v : row) lo = std::min(lo, v);
    const double shift = 1.0 - lo;
    // column player's LP: max 1^T w  s.t.  G' w <= 1, w >= 0
    std::vector<vecd> A(m, vecd(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) A[i][j] = G[i][j] + shift;
    const vecd b(m, 1.0), c(n, 1.0);
    const auto lp = simplex_max(A, b, c);
    // total is >= n / max-entry > 0, so the division below is safe
    const double total = lp.value;
    out.value = 1.0 / total - shift;
    out.row_strategy.assign(m, 0.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        out.row_strategy[i] = std::max(0.0, lp.dual[i]);
        mass += out.row_strategy[i];
    }
    for (auto& p : out.row_strategy) p /= mass;
    return out;
}

} // namespace cpex
