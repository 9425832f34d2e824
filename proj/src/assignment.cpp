#include "cosep/assignment.hpp"

#include <limits>

#include "cosep/error.hpp"

namespace cosep {

std::vector<Index> solve_assignment(const Matrix& cost)
{
    const Index n = cost.rows();
    if (cost.cols() != n) throw DimensionError("solve_assignment: cost matrix must be square");
    constexpr double inf = std::numeric_limits<double>::infinity();

    // 1-based potentials u (rows), v (columns); way[] stores the augmenting tree.
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<Index> match(static_cast<std::size_t>(n + 1), 0);  // column -> row
    std::vector<Index> way(static_cast<std::size_t>(n + 1), 0);

    for (Index row = 1; row <= n; ++row) {
        match[0] = row;
        Index col0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
        std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
        do {
            used[static_cast<std::size_t>(col0)] = true;
            const Index r0 = match[static_cast<std::size_t>(col0)];
            double delta = inf;
            Index col1 = 0;
            for (Index c = 1; c <= n; ++c) {
                if (used[static_cast<std::size_t>(c)]) continue;
                const double cur = cost(r0 - 1, c - 1) - u[static_cast<std::size_t>(r0)] - v[static_cast<std::size_t>(c)];
                if (cur < minv[static_cast<std::size_t>(c)]) {
                    minv[static_cast<std::size_t>(c)] = cur;
                    way[static_cast<std::size_t>(c)] = col0;
                }
                if (minv[static_cast<std::size_t>(c)] < delta) {
                    delta = minv[static_cast<std::size_t>(c)];
                    col1 = c;
                }
            }
            for (Index c = 0; c <= n; ++c) {
                if (used[static_cast<std::size_t>(c)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(c)])] += delta;
                    v[static_cast<std::size_t>(c)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(c)] -= delta;
                }
            }
            col0 = col1;
        } while (match[static_cast<std::size_t>(col0)] != 0);
        do {
            const Index col1 = way[static_cast<std::size_t>(col0)];
            match[static_cast<std::size_t>(col0)] = match[static_cast<std::size_t>(col1)];
            col0 = col1;
        } while (col0 != 0);
    }

    std::vector<Index> assignment(static_cast<std::size_t>(n), 0);
    for (Index c = 1; c <= n; ++c) assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(c)] - 1)] = c - 1;
    return assignment;
}

double assignment_cost(const Matrix& cost, const std::vector<Index>& assignment)
{
    double total = 0.0;
    for (std::size_t r = 0; r < assignment.size(); ++r) total += cost(static_cast<Index>(r), assignment[r]);
    return total;
}

} // namespace cosep
