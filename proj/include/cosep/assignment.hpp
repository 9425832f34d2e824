#pragma once

#include <vector>

#include "cosep/matrix.hpp"

namespace cosep {

// Minimum-cost perfect matching on a square cost matrix (Hungarian method with
// potentials, O(r^3)). Returns assignment[row] = column.
std::vector<Index> solve_assignment(const Matrix& cost);

double assignment_cost(const Matrix& cost, const std::vector<Index>& assignment);

} // namespace cosep
