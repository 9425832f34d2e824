#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace cosep {

// Row-major dense storage for every matrix in the library.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Throws InvalidInputError if any entry is negative or non-finite.
void require_nonnegative(const Matrix& M, const char* what = "matrix");

// Strictly increasing list of 0-based indices into a dimension of size `bound`.
class IndexSet {
public:
    IndexSet() = default;

    // Validates: strictly increasing, every index < bound.
    IndexSet(std::vector<Index> indices, Index bound);

    // Sorts and validates; duplicates are rejected.
    static IndexSet from_unsorted(std::vector<Index> indices, Index bound);
    static IndexSet all(Index bound);

    const std::vector<Index>& indices() const noexcept { return indices_; }
    Index bound() const noexcept { return bound_; }
    Index size() const noexcept { return static_cast<Index>(indices_.size()); }
    bool empty() const noexcept { return indices_.empty(); }
    bool contains(Index i) const;
    Index operator[](std::size_t k) const { return indices_[k]; }

    auto begin() const noexcept { return indices_.begin(); }
    auto end() const noexcept { return indices_.end(); }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<Index> indices_;
    Index bound_ = 0;
};

// Number of common elements of two index sets.
Index intersection_size(const IndexSet& a, const IndexSet& b);

// std::nullopt selects the whole dimension.
using Selection = std::optional<IndexSet>;
inline constexpr std::nullopt_t kAll = std::nullopt;

Matrix submatrix(const Matrix& M, const Selection& rows, const Selection& cols);

double frobenius_norm(const Matrix& M);

// Largest squared singular value by power iteration on the smaller Gram matrix.
double spectral_norm_sq(const Matrix& M, double tol = 1e-12, int max_iter = 10000);

struct Svd {
    Matrix U;           // rows(S) x k, orthonormal columns
    Vector sigma;       // k values, nonincreasing
    Matrix V;           // cols(S) x k, orthonormal columns
};

inline constexpr Index kJacobiSvdMaxDim = 64;

// One-sided (Hestenes) Jacobi SVD. Thin: k = min(rows, cols), which must be <= 64.
Svd jacobi_svd(const Matrix& S);

// Moore-Penrose pseudoinverse; singular values below rank_tol * sigma_max are dropped.
Matrix pinv_small(const Matrix& S, double rank_tol = 1e-12);

struct Balance {
    Vector row_scale;
    Vector col_scale;
    int iterations = 0;
    bool converged = false;
};

// Alternating column/row scaling of a positive matrix so that diag(r) M diag(c)
// has unit column sums and row sums n/m.
Balance sinkhorn_balance(const Matrix& M, int max_iter = 1000, double tol = 1e-10);

Matrix apply_balance(const Matrix& M, const Balance& b);

} // namespace cosep
