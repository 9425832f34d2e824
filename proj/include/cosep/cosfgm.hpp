#pragma once

#include "cosep/factors.hpp"
#include "cosep/fgm.hpp"
#include "cosep/matrix.hpp"

namespace cosep {

struct CosSelectParams {
    Index r1 = 1;
    Index r2 = 1;
    double delta = 1e-6;
    int outer_max_iter = 50;
    FgmParams fgm{};
    Postprocess postprocess = Postprocess::Diag;
};

struct CosSelection {
    IndexSet k1;  // rows
    IndexSet k2;  // columns
    int outer_iterations = 0;
    bool converged = false;
};

// Alternating FGM co-selection. Each pass selects rows from the current
// column-restricted matrix M(:,k2) (via its transpose) and then columns from
// the row-restricted matrix M(k1,:). Stops when
//   ||M_X - M_X_prev||_F + ||M_Y - M_Y_prev||_F <= delta
// (only once consecutive shapes agree), when (k1, k2) repeats, or after
// outer_max_iter passes.
CosSelection cos_fgm(const Matrix& M, const CosSelectParams& params);

// Columns of A chosen by FGM + post-processing. Zero columns of A are never
// candidates; they are removed before the solve and the indices mapped back.
IndexSet fgm_select_columns(const Matrix& A, Index r, const FgmParams& fgm, Postprocess how);

struct CharacterizationReport {
    double row_residual = 0.0;    // min ||M - P1 M(k1,:)|| / ||M||
    double col_residual = 0.0;    // min ||M - M(:,k2) P2|| / ||M||
    double cosep_residual = 0.0;  // min ||M - P1 M(k1,k2) P2|| / ||M||
    double p1_identity_error = 0.0;  // max |P1(k1,:) - I|
    double p2_identity_error = 0.0;  // max |P2(:,k2) - I|
    bool rows_ok = false;
    bool cols_ok = false;
    bool cosep_ok = false;
    bool p1_identity_ok = false;
    bool p2_identity_ok = false;

    bool all_ok() const { return rows_ok && cols_ok && cosep_ok && p1_identity_ok && p2_identity_ok; }
};

// Checks the row-, column- and co-separable representations of M for a
// selection by nonnegative refits.
CharacterizationReport verify_characterizations(const Matrix& M, const IndexSet& k1, const IndexSet& k2, double tol,
                                                const FactorParams& fit = {});

} // namespace cosep
