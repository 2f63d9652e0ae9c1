// hungarian.hpp -- exact maximum-weight perfect matching on a complete
// bipartite graph, O(n^3) potential-based assignment.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "cpex/types.hpp"

namespace cpex {

struct assignment_result {
    double value = 0.0;
    // row_to_col[i] = column matched to row i
    std::vector<int> row_to_col;
};

/// Maximum-weight perfect matching for an n x n weight matrix.
/// weights[i][j] may be an arbitrary finite double; use a large negative
/// sentinel to forbid an edge.
inline assignment_result max_weight_assignment(const std::vector<vecd>& weights) {
    const int n = int(weights.size());
    assignment_result res;
    res.row_to_col.assign(n, -1);
    if (n == 0) return res;
    const double inf = std::numeric_limits<double>::infinity();

    // Classic shortest-augmenting-path assignment on costs = -weights,
    // 1-based with a virtual column 0.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -weights[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    for (int j = 1; j <= n; ++j)
        if (p[j] >= 1) res.row_to_col[p[j] - 1] = j - 1;
    for (int i = 0; i < n; ++i) res.value += weights[i][res.row_to_col[i]];
    return res;
}

} // namespace cpex
