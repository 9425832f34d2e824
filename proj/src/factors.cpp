#include "cosep/factors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cosep/error.hpp"
#include "cosep/rng.hpp"

namespace cosep {

namespace {

// One cyclic HALS pass over the rows of V. Returns ||V_new - V_old||_F^2.
double hals_pass(const Matrix& G, const Matrix& C, Matrix& V, double skip_below)
{
    const Index k = G.rows();
    double change = 0.0;
    Eigen::RowVectorXd next(V.cols());
    for (Index j = 0; j < k; ++j) {
        const double gjj = G(j, j);
        if (gjj <= skip_below) {
            change += V.row(j).squaredNorm();
            V.row(j).setZero();
            continue;
        }
        next.noalias() = C.row(j) - G.row(j) * V;
        next = (V.row(j) + next / gjj).cwiseMax(0.0);
        change += (next - V.row(j)).squaredNorm();
        V.row(j) = next;
    }
    return change;
}

double skip_threshold(const Matrix& G)
{
    return G.rows() > 0 ? 1e-16 * G.diagonal().maxCoeff() : 0.0;
}

} // namespace

Matrix nnls_hals(const Matrix& A, const Matrix& W, const std::optional<Matrix>& V0, const NnlsOptions& opts)
{
    if (W.rows() != A.rows()) throw DimensionError("nnls_hals: W and A must have the same number of rows");
    Matrix V = V0 ? *V0 : Matrix::Zero(W.cols(), A.cols());
    if (V.rows() != W.cols() || V.cols() != A.cols()) throw DimensionError("nnls_hals: V0 has the wrong shape");
    V = V.cwiseMax(0.0);

    const Matrix G = W.transpose() * W;
    const Matrix C = W.transpose() * A;
    const double skip = skip_threshold(G);
    for (int it = 0; it < opts.inner_iters; ++it) {
        const double change = hals_pass(G, C, V, skip);
        const double size = V.squaredNorm();
        if (change <= opts.tol * opts.tol * size) break;
    }
    return V;
}

namespace {

// Lawson-Hanson on the normal equations G x = b.
Vector nnls_column(const Matrix& G, const Vector& b)
{
    const Index k = G.rows();
    Vector x = Vector::Zero(k);
    std::vector<char> passive(static_cast<std::size_t>(k), 0);
    std::vector<char> banned(static_cast<std::size_t>(k), 0);
    const double tol = 1e-12 * std::max(b.cwiseAbs().maxCoeff(), G.diagonal().maxCoeff());
    if (!(tol > 0.0)) return x;

    auto solve_passive = [&](Vector& s) {
        std::vector<Index> P;
        for (Index i = 0; i < k; ++i)
            if (passive[static_cast<std::size_t>(i)]) P.push_back(i);
        const auto np = static_cast<Index>(P.size());
        Matrix Gp(np, np);
        Vector bp(np);
        for (Index a = 0; a < np; ++a) {
            bp(a) = b(P[static_cast<std::size_t>(a)]);
            for (Index c = 0; c < np; ++c) Gp(a, c) = G(P[static_cast<std::size_t>(a)], P[static_cast<std::size_t>(c)]);
        }
        const Vector sp = Gp.ldlt().solve(bp);
        s.setZero();
        for (Index a = 0; a < np; ++a) s(P[static_cast<std::size_t>(a)]) = sp(a);
        return sp.allFinite();
    };

    Vector s(k);
    for (int outer = 0; outer < 3 * static_cast<int>(k) + 10; ++outer) {
        const Vector w = b - G * x;
        Index j = -1;
        double best = tol;
        for (Index i = 0; i < k; ++i) {
            const auto u = static_cast<std::size_t>(i);
            if (!passive[u] && !banned[u] && w(i) > best) {
                best = w(i);
                j = i;
            }
        }
        if (j < 0) break;
        passive[static_cast<std::size_t>(j)] = 1;

        for (int inner = 0; inner <= static_cast<int>(k); ++inner) {
            if (!solve_passive(s)) {
                // numerically dependent on the passive columns
                passive[static_cast<std::size_t>(j)] = 0;
                banned[static_cast<std::size_t>(j)] = 1;
                break;
            }
            bool positive = true;
            double alpha = 1.0;
            for (Index i = 0; i < k; ++i) {
                if (passive[static_cast<std::size_t>(i)] && s(i) <= 0.0) {
                    positive = false;
                    alpha = std::min(alpha, x(i) / (x(i) - s(i)));
                }
            }
            if (positive) {
                x = s;
                break;
            }
            x += alpha * (s - x);
            for (Index i = 0; i < k; ++i) {
                if (passive[static_cast<std::size_t>(i)] && x(i) <= 1e-300) {
                    passive[static_cast<std::size_t>(i)] = 0;
                    x(i) = 0.0;
                }
            }
        }
    }
    return x.cwiseMax(0.0);
}

} // namespace

Matrix nnls_active_set(const Matrix& A, const Matrix& W)
{
    if (W.rows() != A.rows()) throw DimensionError("nnls_active_set: W and A must have the same number of rows");
    const Matrix G = W.transpose() * W;
    const Matrix C = W.transpose() * A;
    Matrix V(W.cols(), A.cols());
    for (Index j = 0; j < A.cols(); ++j) V.col(j) = nnls_column(G, C.col(j));
    return V;
}

Matrix fit_row_representation(const Matrix& M, const IndexSet& k1)
{
    return fit_col_representation(M.transpose(), k1).transpose();
}

Matrix fit_col_representation(const Matrix& M, const IndexSet& k2)
{
    Matrix P2 = nnls_active_set(M, submatrix(M, kAll, k2));
    for (Index k = 0; k < k2.size(); ++k) {
        P2.col(k2[static_cast<std::size_t>(k)]).setZero();
        P2(k, k2[static_cast<std::size_t>(k)]) = 1.0;
    }
    return P2;
}

CosFactors compute_factors(const Matrix& M, const IndexSet& k1, const IndexSet& k2, const FactorParams& params)
{
    CosFactors out;
    out.S = submatrix(M, k1, k2);
    if (!(out.S.cwiseAbs().maxCoeff() > 0.0)) throw DegenerateCoreError("compute_factors: core M(k1,k2) is all zero");

    const double norm = M.norm();
    auto residual = [&](const Matrix& P1, const Matrix& P2) {
        return norm > 0.0 ? (M - P1 * out.S * P2).norm() / norm : 0.0;
    };

    const Matrix Mt = M.transpose();
    Matrix P1t = fit_row_representation(M, k1).transpose();
    Matrix P2 = fit_col_representation(M, k2);
    out.residual_trace.push_back(residual(P1t.transpose(), P2));

    for (int it = 0; it < params.max_iter; ++it) {
        const Matrix P1t_prev = P1t;
        const Matrix P2_prev = P2;

        const Matrix W = P1t.transpose() * out.S;
        P2 = nnls_hals(M, W, P2, params.nnls);
        const Matrix Ht = (out.S * P2).transpose();
        P1t = nnls_hals(Mt, Ht, P1t, params.nnls);

        out.iterations = it + 1;
        out.residual_trace.push_back(residual(P1t.transpose(), P2));
        const double e = (P1t - P1t_prev).norm() + (P2 - P2_prev).norm();
        if (e <= params.delta) break;
    }

    out.P1 = P1t.transpose();
    out.P2 = std::move(P2);
    out.rel_residual = out.residual_trace.back();
    return out;
}

NmfResult ahals_nmf(const Matrix& M, Index r, int max_iter, std::uint64_t seed)
{
    const Index m = M.rows();
    const Index n = M.cols();
    if (r < 1 || r > std::min(m, n)) throw DimensionError("ahals_nmf: r = " + std::to_string(r) + " out of range");

    Rng rng(seed, Stream::Init);
    Matrix W = rng.uniform_matrix(m, r);
    Matrix H = rng.uniform_matrix(r, n);
    const double norm = M.norm();
    const double wh = (W * H).norm();
    if (wh > 0.0 && norm > 0.0) {
        const double s = std::sqrt(norm / wh);
        W *= s;
        H *= s;
    }

    // Inner sweep budget: 1 + alpha * rho with alpha = 0.5, where rho compares
    // the cost of forming W^T M against one sweep. Stop inner sweeps once the
    // update is below 10% of the first one.
    constexpr double alpha = 0.5;
    constexpr double eps = 0.1;
    const auto md = static_cast<double>(m);
    const auto nd = static_cast<double>(n);
    const auto rd = static_cast<double>(r);
    const int sweeps_w = static_cast<int>(std::floor(1.0 + alpha * (1.0 + (md * nd + nd * rd) / (md * (rd + 1.0)))));
    const int sweeps_h = static_cast<int>(std::floor(1.0 + alpha * (1.0 + (md * nd + md * rd) / (nd * (rd + 1.0)))));

    auto update = [&](const Matrix& A, const Matrix& Fixed, Matrix& V, int sweeps) {
        const Matrix G = Fixed.transpose() * Fixed;
        const Matrix C = Fixed.transpose() * A;
        const double skip = skip_threshold(G);
        double first = 0.0;
        for (int s = 0; s < sweeps; ++s) {
            const double change = hals_pass(G, C, V, skip);
            if (s == 0) first = change;
            else if (change <= eps * eps * first) break;
        }
    };

    const Matrix Mt = M.transpose();
    NmfResult out;
    Matrix Wt = W.transpose();
    for (int it = 0; it < max_iter; ++it) {
        // W^T = argmin ||M^T - H^T W^T||
        update(Mt, H.transpose(), Wt, sweeps_w);
        W = Wt.transpose();
        update(M, W, H, sweeps_h);
        out.residual_trace.push_back(norm > 0.0 ? (M - W * H).norm() / norm : 0.0);
    }
    out.W = std::move(W);
    out.H = std::move(H);
    out.rel_residual = out.residual_trace.empty() ? (norm > 0.0 ? (M - out.W * out.H).norm() / norm : 0.0)
                                                  : out.residual_trace.back();
    return out;
}

} // namespace cosep
