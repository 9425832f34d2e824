#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cosep/matrix.hpp"

namespace cosep {

struct NnlsOptions {
    int inner_iters = 500;
    double tol = 1e-8;
};

// Approximately solves min_{V >= 0} ||A - W V||_F^2 by cyclic HALS row updates
//   V(k,:) <- max(0, V(k,:) + (C(k,:) - G(k,:) V) / G(k,k)),  G = W^T W, C = W^T A.
// Rows with G(k,k) <= 1e-16 max(diag G) are zeroed and skipped. Passes stop once
// ||V_new - V_old||_F <= tol ||V_new||_F. Starts from V0 when given, else from 0.
Matrix nnls_hals(const Matrix& A, const Matrix& W, const std::optional<Matrix>& V0 = std::nullopt,
                 const NnlsOptions& opts = {});

// Exact min_{V >= 0} ||A - W V||_F^2, column by column, with the Lawson-Hanson
// active-set method on the Gram matrix. Suited to the small W of a core fit.
Matrix nnls_active_set(const Matrix& A, const Matrix& W);

// P1 >= 0 minimizing ||M - P1 M(k1,:)||_F (m x r1). Row k1[k] is set to e_k,
// which attains zero residual on that row.
Matrix fit_row_representation(const Matrix& M, const IndexSet& k1);

// P2 >= 0 minimizing ||M - M(:,k2) P2||_F (r2 x n), with P2(:,k2) = I.
Matrix fit_col_representation(const Matrix& M, const IndexSet& k2);

struct CosFactors {
    Matrix P1;  // m x r1
    Matrix S;   // r1 x r2, the core M(k1, k2)
    Matrix P2;  // r2 x n
    double rel_residual = 0.0;           // ||M - P1 S P2||_F / ||M||_F
    std::vector<double> residual_trace;  // after the initial fit and every alternation
    int iterations = 0;
};

struct FactorParams {
    int max_iter = 200;
    double delta = 1e-8;
    NnlsOptions nnls{};
};

// Fits P1, P2 >= 0 with M ~ P1 M(k1,k2) P2: independent NNLS starts
// P1 = argmin ||M - U M(k1,:)||, P2 = argmin ||M - M(:,k2) V||, then
// alternating NNLS until ||dP1||_F + ||dP2||_F <= delta or max_iter passes.
CosFactors compute_factors(const Matrix& M, const IndexSet& k1, const IndexSet& k2, const FactorParams& params = {});

struct NmfResult {
    Matrix W;  // m x r
    Matrix H;  // r x n
    double rel_residual = 0.0;
    std::vector<double> residual_trace;  // after every outer iteration
};

// Accelerated HALS NMF (repeated inner W/H sweeps while they stay cheap
// relative to forming the products). Seeded uniform start scaled so that
// ||W H||_F = ||M||_F.
NmfResult ahals_nmf(const Matrix& M, Index r, int max_iter = 1000, std::uint64_t seed = 0);

} // namespace cosep
