#pragma once

#include <vector>

#include "cosep/matrix.hpp"

namespace cosep {

struct SpaResult {
    std::vector<Index> selected;  // extraction order
    std::vector<double> residual_norms;
};

// Successive projection: r greedy picks of the largest-norm residual column,
// each followed by projection onto the orthogonal complement of the pick.
// Ties go to the lowest column index. Stops early once the largest residual
// norm is <= 1e-12 ||M||_F.
SpaResult spa(const Matrix& M, Index r);

// Baseline wrappers. SPAR selects rows (spa on M^T), SPAC selects columns, and
// SPA+ does both.
IndexSet spar(const Matrix& M, Index r1);
IndexSet spac(const Matrix& M, Index r2);

struct SpaPlusResult {
    IndexSet k1;
    IndexSet k2;
};
SpaPlusResult spa_plus(const Matrix& M, Index r1, Index r2);

} // namespace cosep
