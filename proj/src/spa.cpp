#include "cosep/spa.hpp"

#include <cmath>
#include <string>

#include "cosep/error.hpp"

namespace cosep {

SpaResult spa(const Matrix& M, Index r)
{
    if (r < 1 || r > M.cols()) {
        throw DimensionError("spa: r = " + std::to_string(r) + " outside [1, " + std::to_string(M.cols()) + "]");
    }
    Eigen::MatrixXd R = M;  // column-major residual
    const double stop = 1e-12 * M.norm();
    Eigen::VectorXd norms2 = R.colwise().squaredNorm().transpose();

    SpaResult out;
    for (Index step = 0; step < r; ++step) {
        Index best = 0;
        for (Index j = 1; j < R.cols(); ++j) {
            if (norms2(j) > norms2(best)) best = j;
        }
        const double nrm = std::sqrt(norms2(best));
        if (nrm <= stop) break;
        out.selected.push_back(best);
        out.residual_norms.push_back(nrm);

        const Eigen::VectorXd u = R.col(best) / nrm;
        const Eigen::RowVectorXd proj = u.transpose() * R;
        R.noalias() -= u * proj;
        R.col(best).setZero();
        norms2 = R.colwise().squaredNorm().transpose();
    }
    return out;
}

IndexSet spar(const Matrix& M, Index r1)
{
    return IndexSet::from_unsorted(spa(M.transpose(), r1).selected, M.rows());
}

IndexSet spac(const Matrix& M, Index r2)
{
    return IndexSet::from_unsorted(spa(M, r2).selected, M.cols());
}

SpaPlusResult spa_plus(const Matrix& M, Index r1, Index r2)
{
    return SpaPlusResult{spar(M, r1), spac(M, r2)};
}

} // namespace cosep
