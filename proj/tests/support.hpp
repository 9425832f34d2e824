#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cosep/fgm.hpp"
#include "cosep/matrix.hpp"

namespace cosep::test {

inline Matrix uniform(std::mt19937_64& g, Index rows, Index cols, double lo = 0.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> d(lo, hi);
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) M(i, j) = d(g);
    return M;
}

inline double max_abs_diff(const Matrix& A, const Matrix& B)
{
    return (A - B).cwiseAbs().maxCoeff();
}

// Cost of the row-projection objective at diagonal value x, with the
// off-diagonals at their optimal clamp.
inline double row_cost(std::span<const double> z, Index t, const OmegaWeights& w, double x, std::vector<double>* y)
{
    double g = (x - z[t]) * (x - z[t]);
    if (y) (*y)[t] = x;
    for (Index l = 0; l < static_cast<Index>(z.size()); ++l) {
        if (l == t) continue;
        const double cap = std::min(1.0, w[l] / w[t] * x);
        const double v = std::clamp(z[l], 0.0, cap);
        g += (v - z[l]) * (v - z[l]);
        if (y) (*y)[l] = v;
    }
    return g;
}

// Dense grid over the diagonal value, step h on [0, 1].
inline std::vector<double> grid_projection(std::span<const double> z, Index t, const OmegaWeights& w, double h)
{
    const int steps = static_cast<int>(std::lround(1.0 / h));
    double best = INFINITY;
    double best_x = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double x = k * h;
        const double g = row_cost(z, t, w, x, nullptr);
        if (g < best) {
            best = g;
            best_x = x;
        }
    }
    std::vector<double> y(z.size());
    row_cost(z, t, w, best_x, &y);
    return y;
}

} // namespace cosep::test
