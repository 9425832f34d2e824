#include "cosep/cosfgm.hpp"

#include <cmath>
#include <string>

#include "cosep/error.hpp"

namespace cosep {

IndexSet fgm_select_columns(const Matrix& A, Index r, const FgmParams& fgm, Postprocess how)
{
    std::vector<Index> nonzero;
    for (Index j = 0; j < A.cols(); ++j) {
        if (A.col(j).cwiseAbs().sum() > 0.0) nonzero.push_back(j);
    }
    if (static_cast<Index>(nonzero.size()) < r) {
        throw DegenerateSelectionError("only " + std::to_string(nonzero.size()) + " nonzero columns, " +
                                           std::to_string(r) + " requested",
                                       IndexSet(nonzero, A.cols()));
    }
    const bool compact = static_cast<Index>(nonzero.size()) < A.cols();
    const IndexSet kept(nonzero, A.cols());
    const Matrix sub = compact ? submatrix(A, kAll, kept) : A;

    const FgmOutput fit = fgm_snmf(sub, fgm);
    IndexSet local;
    try {
        local = postprocess(fit.Y, r, how);
    } catch (const DegenerateSelectionError& e) {
        std::vector<Index> mapped;
        for (Index i : e.partial()) mapped.push_back(nonzero[static_cast<std::size_t>(i)]);
        throw DegenerateSelectionError(e.what(), IndexSet(std::move(mapped), A.cols()));
    }
    if (!compact) return local;
    std::vector<Index> mapped;
    for (Index i : local) mapped.push_back(nonzero[static_cast<std::size_t>(i)]);
    return IndexSet(std::move(mapped), A.cols());
}

CosSelection cos_fgm(const Matrix& M, const CosSelectParams& params)
{
    const Index m = M.rows();
    const Index n = M.cols();
    if (params.r1 < 1 || params.r1 > m) throw DimensionError("cos_fgm: r1 out of range");
    if (params.r2 < 1 || params.r2 > n) throw DimensionError("cos_fgm: r2 out of range");
    if (!(params.delta > 0.0)) throw InvalidInputError("cos_fgm: delta must be positive");
    require_nonnegative(M, "cos_fgm input");
    for (Index i = 0; i < m; ++i) {
        if (!(M.row(i).sum() > 0.0)) throw InvalidInputError("cos_fgm: row " + std::to_string(i) + " is zero");
    }
    for (Index j = 0; j < n; ++j) {
        if (!(M.col(j).sum() > 0.0)) throw InvalidInputError("cos_fgm: column " + std::to_string(j) + " is zero");
    }

    Matrix MX = M;  // M(k1, :)
    Matrix MY = M;  // M(:, k2)
    CosSelection out;
    for (int pass = 0; pass < params.outer_max_iter; ++pass) {
        const Matrix MX_prev = MX;
        const Matrix MY_prev = MY;
        const IndexSet k1_prev = out.k1;
        const IndexSet k2_prev = out.k2;

        try {
            out.k1 = fgm_select_columns(MY.transpose(), params.r1, params.fgm, params.postprocess);
        } catch (const DegenerateSelectionError& e) {
            throw DegenerateSelectionError(std::string("cos_fgm pass ") + std::to_string(pass + 1) +
                                               ", row selection: " + e.what(),
                                           e.partial());
        }
        MX = submatrix(M, out.k1, kAll);
        try {
            out.k2 = fgm_select_columns(MX, params.r2, params.fgm, params.postprocess);
        } catch (const DegenerateSelectionError& e) {
            throw DegenerateSelectionError(std::string("cos_fgm pass ") + std::to_string(pass + 1) +
                                               ", column selection: " + e.what(),
                                           e.partial());
        }
        MY = submatrix(M, kAll, out.k2);
        out.outer_iterations = pass + 1;

        if (pass > 0 && out.k1 == k1_prev && out.k2 == k2_prev) {
            out.converged = true;
            break;
        }
        const bool comparable = MX.rows() == MX_prev.rows() && MX.cols() == MX_prev.cols() &&
                                MY.rows() == MY_prev.rows() && MY.cols() == MY_prev.cols();
        if (comparable) {
            const double e = (MX_prev - MX).norm() + (MY_prev - MY).norm();
            if (e <= params.delta) {
                out.converged = true;
                break;
            }
        }
    }
    return out;
}

CharacterizationReport verify_characterizations(const Matrix& M, const IndexSet& k1, const IndexSet& k2, double tol,
                                                const FactorParams& fit)
{
    CharacterizationReport rep;
    const double norm = M.norm();
    auto rel = [&](const Matrix& R) { return norm > 0.0 ? R.norm() / norm : 0.0; };

    const Matrix P1 = fit_row_representation(M, k1);
    rep.row_residual = rel(M - P1 * submatrix(M, k1, kAll));
    const Matrix P2 = fit_col_representation(M, k2);
    rep.col_residual = rel(M - submatrix(M, kAll, k2) * P2);

    const CosFactors f = compute_factors(M, k1, k2, fit);
    rep.cosep_residual = f.rel_residual;

    const Matrix I1 = submatrix(f.P1, k1, kAll);
    const Matrix I2 = submatrix(f.P2, kAll, k2);
    rep.p1_identity_error = (I1 - Matrix::Identity(I1.rows(), I1.cols())).cwiseAbs().maxCoeff();
    rep.p2_identity_error = (I2 - Matrix::Identity(I2.rows(), I2.cols())).cwiseAbs().maxCoeff();

    rep.rows_ok = rep.row_residual <= tol;
    rep.cols_ok = rep.col_residual <= tol;
    rep.cosep_ok = rep.cosep_residual <= tol;
    rep.p1_identity_ok = rep.p1_identity_error <= tol;
    rep.p2_identity_ok = rep.p2_identity_error <= tol;
    return rep;
}

} // namespace cosep
