#include "cosep/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cosep/error.hpp"

namespace cosep {

void require_nonnegative(const Matrix& M, const char* what)
{
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            const double v = M(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw InvalidInputError(std::string(what) + " has a negative or non-finite entry at (" +
                                        std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
}

IndexSet::IndexSet(std::vector<Index> indices, Index bound)
    : indices_(std::move(indices)), bound_(bound)
{
    if (bound_ < 0) throw DimensionError("index set bound must be nonnegative");
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        const Index v = indices_[k];
        if (v < 0 || v >= bound_) {
            throw DimensionError("index " + std::to_string(v) + " out of range [0, " + std::to_string(bound_) + ")");
        }
        if (k > 0 && indices_[k - 1] >= v) {
            throw DimensionError("index set must be strictly increasing");
        }
    }
}

IndexSet IndexSet::from_unsorted(std::vector<Index> indices, Index bound)
{
    std::sort(indices.begin(), indices.end());
    return IndexSet(std::move(indices), bound);
}

IndexSet IndexSet::all(Index bound)
{
    std::vector<Index> idx(static_cast<std::size_t>(bound));
    std::iota(idx.begin(), idx.end(), Index{0});
    return IndexSet(std::move(idx), bound);
}

bool IndexSet::contains(Index i) const
{
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

Index intersection_size(const IndexSet& a, const IndexSet& b)
{
    Index count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

Matrix submatrix(const Matrix& M, const Selection& rows, const Selection& cols)
{
    if (rows && rows->bound() != M.rows()) {
        throw DimensionError("row index set bound " + std::to_string(rows->bound()) + " does not match " +
                             std::to_string(M.rows()) + " rows");
    }
    if (cols && cols->bound() != M.cols()) {
        throw DimensionError("column index set bound " + std::to_string(cols->bound()) + " does not match " +
                             std::to_string(M.cols()) + " columns");
    }
    const Index nr = rows ? rows->size() : M.rows();
    const Index nc = cols ? cols->size() : M.cols();
    Matrix out(nr, nc);
    for (Index i = 0; i < nr; ++i) {
        const Index si = rows ? (*rows)[static_cast<std::size_t>(i)] : i;
        for (Index j = 0; j < nc; ++j) {
            const Index sj = cols ? (*cols)[static_cast<std::size_t>(j)] : j;
            out(i, j) = M(si, sj);
        }
    }
    return out;
}

double frobenius_norm(const Matrix& M)
{
    return M.norm();
}

namespace {

// Power iteration on a symmetric PSD matrix from the given start vector.
// Returns the last Rayleigh quotient.
double power_iterate(const Matrix& G, Vector v, double tol, int max_iter)
{
    v.normalize();
    double rq = v.dot(G * v);
    for (int it = 0; it < max_iter; ++it) {
        Vector w = G * v;
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        const double next = v.dot(G * v);
        const bool done = std::abs(next - rq) < tol * std::abs(next);
        rq = next;
        if (done) break;
    }
    return rq;
}

} // namespace

double spectral_norm_sq(const Matrix& M, double tol, int max_iter)
{
    if (M.size() == 0) return 0.0;
    const double fro2 = M.squaredNorm();
    if (fro2 == 0.0) return 0.0;

    const Matrix G = M.rows() < M.cols() ? Matrix(M * M.transpose()) : Matrix(M.transpose() * M);
    const Index k = G.rows();

    double best = power_iterate(G, Vector::Ones(k), tol, max_iter);
    // The all-ones start can be (numerically) orthogonal to the top eigenvector,
    // in which case the quotient stalls far below the trace bound. Retry from the
    // canonical basis and keep the largest quotient seen.
    if (best <= 1e-12 * fro2) {
        for (Index i = 0; i < k; ++i) {
            best = std::max(best, power_iterate(G, Vector::Unit(k, i), tol, max_iter));
        }
    }
    return best;
}

Svd jacobi_svd(const Matrix& S)
{
    if (std::min(S.rows(), S.cols()) > kJacobiSvdMaxDim) {
        throw UnsupportedSizeError("jacobi_svd supports min(rows, cols) <= " + std::to_string(kJacobiSvdMaxDim));
    }
    if (S.rows() < S.cols()) {
        Svd t = jacobi_svd(Matrix(S.transpose()));
        return Svd{std::move(t.V), std::move(t.sigma), std::move(t.U)};
    }

    const Index m = S.rows();
    const Index n = S.cols();
    Eigen::MatrixXd A = S;  // column-major: the sweep works on columns
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);

    constexpr double eps = 1e-15;
    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (Index p = 0; p + 1 < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const double alpha = A.col(p).squaredNorm();
                const double beta = A.col(q).squaredNorm();
                const double gamma = A.col(p).dot(A.col(q));
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (Index i = 0; i < m; ++i) {
                    const double ap = A(i, p);
                    const double aq = A(i, q);
                    A(i, p) = c * ap - s * aq;
                    A(i, q) = s * ap + c * aq;
                }
                for (Index i = 0; i < n; ++i) {
                    const double vp = V(i, p);
                    const double vq = V(i, q);
                    V(i, p) = c * vp - s * vq;
                    V(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    Vector norms(n);
    for (Index j = 0; j < n; ++j) norms(j) = A.col(j).norm();
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return norms(a) > norms(b); });

    Svd out;
    out.U = Matrix::Zero(m, n);
    out.V = Matrix(n, n);
    out.sigma = Vector(n);
    const double smax = n > 0 ? norms(order[0]) : 0.0;
    const double zero_tol = std::max(smax, 1.0) * 1e-300;
    std::vector<bool> filled(static_cast<std::size_t>(n), false);
    for (Index k = 0; k < n; ++k) {
        const Index j = order[static_cast<std::size_t>(k)];
        out.sigma(k) = norms(j);
        out.V.col(k) = V.col(j);
        if (norms(j) > zero_tol) {
            out.U.col(k) = A.col(j) / norms(j);
            filled[static_cast<std::size_t>(k)] = true;
        }
    }

    // Complete U for zero singular values by Gram-Schmidt on canonical vectors.
    Index next_unit = 0;
    for (Index k = 0; k < n; ++k) {
        if (filled[static_cast<std::size_t>(k)]) continue;
        while (next_unit < m) {
            Vector cand = Vector::Unit(m, next_unit++);
            for (int pass = 0; pass < 2; ++pass) {
                for (Index c = 0; c < n; ++c) {
                    if (filled[static_cast<std::size_t>(c)]) cand -= out.U.col(c).dot(cand) * Vector(out.U.col(c));
                }
            }
            const double nc = cand.norm();
            if (nc > 1e-8) {
                out.U.col(k) = cand / nc;
                filled[static_cast<std::size_t>(k)] = true;
                break;
            }
        }
    }
    return out;
}

Matrix pinv_small(const Matrix& S, double rank_tol)
{
    const Svd svd = jacobi_svd(S);
    Matrix P = Matrix::Zero(S.cols(), S.rows());
    if (svd.sigma.size() == 0) return P;
    const double cutoff = rank_tol * svd.sigma(0);
    for (Index k = 0; k < svd.sigma.size(); ++k) {
        const double s = svd.sigma(k);
        if (s <= cutoff || s == 0.0) continue;
        P.noalias() += (svd.V.col(k) / s) * svd.U.col(k).transpose();
    }
    return P;
}

Balance sinkhorn_balance(const Matrix& M, int max_iter, double tol)
{
    const Index m = M.rows();
    const Index n = M.cols();
    for (Index i = 0; i < m; ++i) {
        if (!(M.row(i).sum() > 0.0)) throw BalanceError("row " + std::to_string(i) + " is zero");
    }
    for (Index j = 0; j < n; ++j) {
        if (!(M.col(j).sum() > 0.0)) throw BalanceError("column " + std::to_string(j) + " is zero");
    }

    const double row_target = static_cast<double>(n) / static_cast<double>(m);
    Balance b;
    b.row_scale = Vector::Ones(m);
    b.col_scale = Vector::Ones(n);
    for (int it = 0; it < max_iter; ++it) {
        b.iterations = it + 1;
        // columns: sum_i r_i M_ij c_j = 1
        const Vector colsum = M.transpose() * b.row_scale;
        for (Index j = 0; j < n; ++j) b.col_scale(j) = 1.0 / colsum(j);
        // rows: sum_j r_i M_ij c_j = n/m
        const Vector rowsum = M * b.col_scale;
        for (Index i = 0; i < m; ++i) b.row_scale(i) = row_target / rowsum(i);

        const Vector check = (M.transpose() * b.row_scale).cwiseProduct(b.col_scale);
        if ((check.array() - 1.0).abs().maxCoeff() < tol) {
            b.converged = true;
            break;
        }
    }
    return b;
}

Matrix apply_balance(const Matrix& M, const Balance& b)
{
    return b.row_scale.asDiagonal() * M * b.col_scale.asDiagonal();
}

} // namespace cosep
