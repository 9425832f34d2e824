#include <doctest.h>

#include "cosep/cosfgm.hpp"
#include "cosep/error.hpp"
#include "cosep/factors.hpp"
#include "cosep/metrics.hpp"
#include "cosep/synth.hpp"
#include "support.hpp"

using namespace cosep;

TEST_CASE("nnls exact and scalar cases")
{
    std::mt19937_64 g(1);
    // well-conditioned W: the stopping rule's change bound is close to the error
    for (int trial = 0; trial < 10; ++trial) {
        Matrix W = Matrix::Identity(8, 3) + 0.1 * test::uniform(g, 8, 3);
        CHECK(test::max_abs_diff(nnls_hals(W, W), Matrix::Identity(3, 3)) < 1e-8);
    }
    // correlated columns slow the sweeps, so the error exceeds the final change
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix W = test::uniform(g, 8, 3);
        CHECK(test::max_abs_diff(nnls_hals(W, W), Matrix::Identity(3, 3)) < 1e-7);
    }

    const Matrix w = test::uniform(g, 5, 1, 0.1, 1.0);
    const Matrix V = nnls_hals(2.0 * w, w);
    CHECK(V(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("nnls with orthogonal columns matches the clamped closed form")
{
    std::mt19937_64 g(2);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix W = Matrix::Zero(6, 3);
        // disjoint supports make the columns orthogonal
        W.block(0, 0, 2, 1) = test::uniform(g, 2, 1, 0.1, 1.0);
        W.block(2, 1, 2, 1) = test::uniform(g, 2, 1, 0.1, 1.0);
        W.block(4, 2, 2, 1) = test::uniform(g, 2, 1, 0.1, 1.0);
        const Matrix A = test::uniform(g, 6, 4, -0.5, 1.0);
        const Matrix G = W.transpose() * W;
        const Matrix closed = (G.inverse() * W.transpose() * A).cwiseMax(0.0);
        CHECK(test::max_abs_diff(nnls_hals(A, W), closed) < 1e-8);
    }
}

TEST_CASE("nnls never increases the residual and stays nonnegative")
{
    std::mt19937_64 g(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix W = test::uniform(g, 10, 4);
        const Matrix A = test::uniform(g, 10, 6);
        const Matrix V0 = test::uniform(g, 4, 6);
        const Matrix V = nnls_hals(A, W, V0);
        CHECK((V.array() >= 0.0).all());
        CHECK((A - W * V).norm() <= (A - W * V0).norm() + 1e-12);
    }
}

TEST_CASE("active-set nnls agrees with converged HALS and satisfies KKT")
{
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix W = test::uniform(g, 12, 4);
        const Matrix A = test::uniform(g, 12, 5, -0.3, 1.0);
        const Matrix V = nnls_active_set(A, W);
        CHECK((V.array() >= 0.0).all());
        const Matrix grad = W.transpose() * (W * V - A);
        for (Index i = 0; i < V.rows(); ++i)
            for (Index j = 0; j < V.cols(); ++j) {
                CHECK(grad(i, j) >= -1e-10);
                if (V(i, j) > 1e-12) CHECK(std::abs(grad(i, j)) <= 1e-10);
            }
        NnlsOptions tight;
        tight.inner_iters = 20000;
        tight.tol = 1e-14;
        CHECK(test::max_abs_diff(nnls_hals(A, W, std::nullopt, tight), V) < 1e-6);
    }
    // rank-deficient W: residual is still exact
    const Matrix B = test::uniform(g, 10, 2);
    const Matrix W = B * test::uniform(g, 2, 6);
    const Matrix A = W * test::uniform(g, 6, 8);
    CHECK((A - W * nnls_active_set(A, W)).norm() <= 1e-12 * A.norm());
}

TEST_CASE("representation fits keep the identity on the selected items")
{
    const SyntheticInstance inst = gen_cosep(50, 40, 6, 3, 0.0, 21);
    const Matrix P1 = fit_row_representation(inst.M, inst.k1_star);
    const Matrix P2 = fit_col_representation(inst.M, inst.k2_star);
    CHECK(submatrix(P1, inst.k1_star, kAll) == Matrix::Identity(6, 6));
    CHECK(submatrix(P2, kAll, inst.k2_star) == Matrix::Identity(3, 3));
    CHECK((inst.M - P1 * submatrix(inst.M, inst.k1_star, kAll)).norm() <= 1e-12 * inst.M.norm());
    CHECK((inst.M - submatrix(inst.M, kAll, inst.k2_star) * P2).norm() <= 1e-12 * inst.M.norm());
}

TEST_CASE("factors on planted instances")
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const SyntheticInstance inst = gen_cosep(100, 100, 10, 3, 0.0, seed);
        const CosFactors f = compute_factors(inst.M, inst.k1_star, inst.k2_star);
        CHECK(f.rel_residual <= 1e-6);
        CHECK(f.P1.rows() == 100);
        CHECK(f.P1.cols() == 10);
        CHECK(f.P2.rows() == 3);
        CHECK(f.P2.cols() == 100);
        CHECK((f.P1.array() >= 0.0).all());
        CHECK((f.P2.array() >= 0.0).all());
        CHECK(f.S == submatrix(inst.M, inst.k1_star, inst.k2_star));
        for (std::size_t k = 1; k < f.residual_trace.size(); ++k)
            CHECK(f.residual_trace[k] <= f.residual_trace[k - 1] + 1e-12);
    }
}

TEST_CASE("factors with full index sets are identities")
{
    std::mt19937_64 g(4);
    const Matrix S = test::uniform(g, 5, 4, 0.1, 1.0);
    const CosFactors f = compute_factors(S, IndexSet::all(5), IndexSet::all(4));
    CHECK(test::max_abs_diff(f.P1, Matrix::Identity(5, 5)) < 1e-8);
    CHECK(test::max_abs_diff(f.P2, Matrix::Identity(4, 4)) < 1e-8);
    CHECK(f.rel_residual < 1e-12);

    Matrix Z = S;
    Z(0, 0) = 0;
    CHECK_THROWS_AS(compute_factors(Z, IndexSet({0}, 5), IndexSet({0}, 4)), DegenerateCoreError);
}

TEST_CASE("ahals")
{
    std::mt19937_64 g(5);
    const Matrix u = test::uniform(g, 20, 1, 0.1, 1.0);
    const Matrix v = test::uniform(g, 1, 15, 0.1, 1.0);
    CHECK(ahals_nmf(u * v, 1, 1000, 1).rel_residual <= 1e-6);

    const Matrix W = test::uniform(g, 30, 4);
    const Matrix H = test::uniform(g, 4, 25);
    const NmfResult out = ahals_nmf(W * H, 4, 1000, 2);
    CHECK(out.rel_residual <= 1e-3);
    CHECK((out.W.array() >= 0.0).all());
    CHECK((out.H.array() >= 0.0).all());
    CHECK(out.rel_residual == doctest::Approx((W * H - out.W * out.H).norm() / (W * H).norm()).epsilon(1e-9));
    CHECK(ahals_nmf(W * H, 4, 50, 9).W == ahals_nmf(W * H, 4, 50, 9).W);
}

TEST_CASE("planted characterizations and CUR")
{
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
        const SyntheticInstance inst = gen_cosep(60, 50, 6, 3, 0.0, seed);
        const CharacterizationReport rep = verify_characterizations(inst.M, inst.k1_star, inst.k2_star, 1e-10);
        CHECK(rep.row_residual <= 1e-10);
        CHECK(rep.col_residual <= 1e-10);
        CHECK(rep.cosep_residual <= 1e-10);
        CHECK(rep.all_ok());
        const double cur = cur_residual(inst.M, inst.k1_star, inst.k2_star);
        CHECK(cur <= 1e-8);
        CHECK(cur <= compute_factors(inst.M, inst.k1_star, inst.k2_star).rel_residual + 1e-8);
        CHECK(relative_approx_cosep(inst.M, inst.k1_star, inst.k2_star) >= 1.0 - 1e-6);
    }
}

TEST_CASE("full index sets characterize any matrix")
{
    std::mt19937_64 g(6);
    const Matrix M = test::uniform(g, 6, 5);
    const CharacterizationReport rep = verify_characterizations(M, IndexSet::all(6), IndexSet::all(5), 1e-12);
    CHECK(rep.row_residual == doctest::Approx(0.0));
    CHECK(rep.col_residual == doctest::Approx(0.0));
    CHECK(rep.cosep_residual == doctest::Approx(0.0));
    CHECK(cur_residual(M, IndexSet::all(6), IndexSet::all(5)) < 1e-10);
    CHECK(cur_residual(M, IndexSet({0, 1}, 6), IndexSet({0, 1}, 5)) > 1e-6);
}
