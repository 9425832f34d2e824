#include "cosep/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cosep/assignment.hpp"
#include "cosep/error.hpp"

namespace cosep {

ClusterAssignment::ClusterAssignment(Matrix Q) : Q_(std::move(Q))
{
    if (Q_.cols() < 1) throw DimensionError("cluster assignment needs at least one cluster");
    for (Index i = 0; i < Q_.rows(); ++i) {
        int ones = 0;
        for (Index j = 0; j < Q_.cols(); ++j) {
            const double q = Q_(i, j);
            if (q == 1.0) {
                ++ones;
            } else if (q != 0.0) {
                throw InvalidInputError("cluster assignment entries must be 0 or 1");
            }
        }
        if (ones != 1) throw InvalidInputError("row " + std::to_string(i) + " of a cluster assignment needs exactly one 1");
    }
}

ClusterAssignment ClusterAssignment::from_labels(const std::vector<Index>& labels, Index r)
{
    Matrix Q = Matrix::Zero(static_cast<Index>(labels.size()), r);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= r) throw DimensionError("label " + std::to_string(labels[i]) + " out of range");
        Q(static_cast<Index>(i), labels[i]) = 1.0;
    }
    return ClusterAssignment(std::move(Q));
}

std::vector<Index> ClusterAssignment::labels() const
{
    std::vector<Index> out(static_cast<std::size_t>(Q_.rows()));
    for (Index i = 0; i < Q_.rows(); ++i) {
        Index j = 0;
        Q_.row(i).maxCoeff(&j);
        out[static_cast<std::size_t>(i)] = j;
    }
    return out;
}

double index_accuracy(const IndexSet& k1, const IndexSet& k2, const IndexSet& k1_star, const IndexSet& k2_star)
{
    const Index total = k1_star.size() + k2_star.size();
    if (total == 0) throw InvalidInputError("index_accuracy: planted sets are empty");
    return static_cast<double>(intersection_size(k1, k1_star) + intersection_size(k2, k2_star)) /
           static_cast<double>(total);
}

double relative_approx_cosep(const Matrix& M, const IndexSet& k1, const IndexSet& k2, const FactorParams& fit)
{
    return 1.0 - compute_factors(M, k1, k2, fit).rel_residual;
}

double relative_approx_generic(const Matrix& M, const Matrix& Mhat)
{
    if (M.rows() != Mhat.rows() || M.cols() != Mhat.cols()) throw DimensionError("relative_approx_generic: shape mismatch");
    const double norm = M.norm();
    if (norm == 0.0) return Mhat.norm() == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    return 1.0 - (M - Mhat).norm() / norm;
}

ClusterAssignment hard_cluster(const Matrix& P)
{
    if (P.cols() < 1) throw DimensionError("hard_cluster: need at least one column");
    Matrix Q = Matrix::Zero(P.rows(), P.cols());
    for (Index i = 0; i < P.rows(); ++i) {
        Index best = 0;
        for (Index j = 1; j < P.cols(); ++j) {
            if (P(i, j) > P(i, best)) best = j;
        }
        Q(i, best) = 1.0;
    }
    return ClusterAssignment(std::move(Q));
}

Matrix confusion_counts(const ClusterAssignment& Q, const ClusterAssignment& Qstar)
{
    if (Q.items() != Qstar.items() || Q.clusters() != Qstar.clusters()) {
        throw DimensionError("cluster assignments must have the same shape");
    }
    return Q.matrix().transpose() * Qstar.matrix();
}

double clustering_accuracy(const ClusterAssignment& Q, const ClusterAssignment& Qstar)
{
    const Matrix agree = confusion_counts(Q, Qstar);
    const Index r = Q.clusters();
    const Index n = Q.items();
    // Column a of Q moved to position b agrees on agree(a, b) items, so the best
    // permutation maximizes total agreement.
    const std::vector<Index> perm = solve_assignment(-agree);
    double matched = 0.0;
    for (Index a = 0; a < r; ++a) matched += agree(a, perm[static_cast<std::size_t>(a)]);
    // Each mismatched item contributes two unit entries to ||Q Pi - Q*||_F^2.
    const double mismatch_sq = 2.0 * (static_cast<double>(n) - matched);
    const double fro = std::sqrt(mismatch_sq);
    return 1.0 - std::sqrt(fro / static_cast<double>(r * n));
}

double cur_residual(const Matrix& M, const IndexSet& k1, const IndexSet& k2)
{
    const double norm = M.norm();
    if (norm == 0.0) return 0.0;
    const Matrix C = submatrix(M, kAll, k2);
    const Matrix R = submatrix(M, k1, kAll);
    const Matrix U = pinv_small(submatrix(M, k1, k2));
    return (M - C * (U * R)).norm() / norm;
}

} // namespace cosep
