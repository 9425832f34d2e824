#pragma once

#include <vector>

#include "cosep/factors.hpp"
#include "cosep/matrix.hpp"

namespace cosep {

// Binary n_items x r membership matrix with exactly one 1 per row.
class ClusterAssignment {
public:
    // Validates shape and the one-hot rows.
    explicit ClusterAssignment(Matrix Q);
    static ClusterAssignment from_labels(const std::vector<Index>& labels, Index r);

    const Matrix& matrix() const noexcept { return Q_; }
    Index items() const noexcept { return Q_.rows(); }
    Index clusters() const noexcept { return Q_.cols(); }
    std::vector<Index> labels() const;

private:
    Matrix Q_;
};

// (|k1 & k1*| + |k2 & k2*|) / (|k1*| + |k2*|)
double index_accuracy(const IndexSet& k1, const IndexSet& k2, const IndexSet& k1_star, const IndexSet& k2_star);

// 1 - min_{P1, P2 >= 0} ||M - P1 M(k1,k2) P2||_F / ||M||_F, fitted by compute_factors.
double relative_approx_cosep(const Matrix& M, const IndexSet& k1, const IndexSet& k2, const FactorParams& fit = {});

// 1 - ||M - Mhat||_F / ||M||_F; negative for fits worse than zero.
double relative_approx_generic(const Matrix& M, const Matrix& Mhat);

// Row-wise argmax, ties to the lowest column.
ClusterAssignment hard_cluster(const Matrix& P);

// r x r agreement counts: C(a, b) = #items with Q in cluster a and Qstar in b.
Matrix confusion_counts(const ClusterAssignment& Q, const ClusterAssignment& Qstar);

// 1 - min_Pi sqrt(||Q Pi - Q*||_F / (r n)), the minimizing column permutation
// found by linear assignment on the agreement counts.
double clustering_accuracy(const ClusterAssignment& Q, const ClusterAssignment& Qstar);

// ||M - M(:,k2) pinv(M(k1,k2)) M(k1,:)||_F / ||M||_F
double cur_residual(const Matrix& M, const IndexSet& k1, const IndexSet& k2);

} // namespace cosep
