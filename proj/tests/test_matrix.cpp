#include <doctest.h>

#include <sstream>

#include "cosep/error.hpp"
#include "cosep/matrix.hpp"
#include "cosep/mmio.hpp"
#include "cosep/rng.hpp"
#include "support.hpp"

using namespace cosep;

TEST_CASE("index sets validate and compare")
{
    IndexSet s({1, 3, 4}, 6);
    CHECK(s.size() == 3);
    CHECK(s.contains(3));
    CHECK_FALSE(s.contains(2));
    CHECK_THROWS_AS(IndexSet({2, 1}, 4), DimensionError);
    CHECK_THROWS_AS(IndexSet({1, 1}, 4), DimensionError);
    CHECK_THROWS_AS(IndexSet({0, 4}, 4), DimensionError);
    CHECK(IndexSet::from_unsorted({4, 1, 3}, 6) == s);
    CHECK(intersection_size(s, IndexSet({0, 3, 4, 5}, 6)) == 2);
    CHECK(IndexSet::all(3).indices() == std::vector<Index>{0, 1, 2});
}

TEST_CASE("submatrix")
{
    const Matrix I = Matrix::Identity(3, 3);
    Matrix expect(2, 3);
    expect << 1, 0, 0, 0, 0, 1;
    CHECK(submatrix(I, IndexSet({0, 2}, 3), kAll) == expect);

    std::mt19937_64 g(1);
    const Matrix R = test::uniform(g, 4, 5);
    CHECK(submatrix(R, kAll, kAll) == R);

    Matrix M(2, 2);
    M << 1, 2, 3, 4;
    const Matrix one = submatrix(M, IndexSet({1}, 2), IndexSet({0}, 2));
    REQUIRE(one.rows() == 1);
    REQUIRE(one.cols() == 1);
    CHECK(one(0, 0) == 3.0);
    CHECK_THROWS_AS(submatrix(M, IndexSet({0}, 3), kAll), DimensionError);
}

TEST_CASE("frobenius norm")
{
    CHECK(frobenius_norm(Matrix::Zero(3, 2)) == 0.0);
    CHECK(frobenius_norm(Matrix::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    Matrix v(1, 2);
    v << 3, 4;
    CHECK(frobenius_norm(v) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("spectral norm squared")
{
    CHECK(spectral_norm_sq(Matrix::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-12));
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 3;
    D(1, 1) = 1;
    CHECK(spectral_norm_sq(D) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(spectral_norm_sq(Matrix::Zero(3, 3)) == 0.0);

    // Start vector orthogonal to the top singular vector.
    Matrix A(2, 2);
    A << 1, -1, -1, 1;
    CHECK(spectral_norm_sq(A) == doctest::Approx(4.0).epsilon(1e-10));

    std::mt19937_64 g(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix R = test::uniform(g, 5, 4, -1.0, 1.0);
        const double oracle = jacobi_svd(R).sigma(0);
        CHECK(spectral_norm_sq(R) == doctest::Approx(oracle * oracle).epsilon(1e-8));
    }
}

TEST_CASE("jacobi svd")
{
    CHECK(jacobi_svd(Matrix::Identity(3, 3)).sigma.isApprox(Vector::Ones(3)));
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 2;
    const Svd d = jacobi_svd(D);
    CHECK(d.sigma(0) == doctest::Approx(2.0));
    CHECK(d.sigma(1) == doctest::Approx(0.0));

    std::mt19937_64 g(3);
    for (auto [r, c] : {std::pair<Index, Index>{4, 3}, {3, 5}, {6, 6}}) {
        const Matrix R = test::uniform(g, r, c, -1.0, 1.0);
        const Svd s = jacobi_svd(R);
        const Matrix rec = s.U * s.sigma.asDiagonal() * s.V.transpose();
        CHECK(test::max_abs_diff(rec, R) < 1e-10);
        const Index k = s.sigma.size();
        CHECK(test::max_abs_diff(s.U.transpose() * s.U, Matrix::Identity(k, k)) < 1e-10);
        CHECK(test::max_abs_diff(s.V.transpose() * s.V, Matrix::Identity(k, k)) < 1e-10);
        for (Index i = 1; i < k; ++i) CHECK(s.sigma(i) <= s.sigma(i - 1));
    }
    CHECK_THROWS_AS(jacobi_svd(Matrix::Zero(kJacobiSvdMaxDim + 1, kJacobiSvdMaxDim + 1)), UnsupportedSizeError);
}

TEST_CASE("pseudo-inverse")
{
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 2;
    D(1, 1) = 4;
    Matrix Dinv = Matrix::Zero(2, 2);
    Dinv(0, 0) = 0.5;
    Dinv(1, 1) = 0.25;
    CHECK(test::max_abs_diff(pinv_small(D), Dinv) < 1e-14);

    const Matrix Z = pinv_small(Matrix::Zero(3, 2));
    CHECK(Z.rows() == 2);
    CHECK(Z.cols() == 3);
    CHECK(Z.isZero());

    std::mt19937_64 g(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix S = test::uniform(g, 5, 3);
        CHECK(test::max_abs_diff(pinv_small(S) * S, Matrix::Identity(3, 3)) < 1e-8);
        const Matrix P = pinv_small(S);
        // Moore-Penrose conditions
        CHECK(test::max_abs_diff(S * P * S, S) < 1e-10);
        CHECK(test::max_abs_diff(P * S * P, P) < 1e-10);
    }
}

TEST_CASE("sinkhorn balancing")
{
    const Matrix ones = Matrix::Ones(4, 6);
    const Matrix B = apply_balance(ones, sinkhorn_balance(ones));
    CHECK(test::max_abs_diff(B, Matrix::Constant(4, 6, 0.25)) < 1e-12);

    // already balanced: column sums 1, row sums n/m
    const Balance fixed = sinkhorn_balance(B);
    CHECK(fixed.converged);
    CHECK((fixed.row_scale.array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK((fixed.col_scale.array() - 1.0).abs().maxCoeff() < 1e-10);

    std::mt19937_64 g(11);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix R = test::uniform(g, 10, 8, 0.01, 1.0);
        const Balance b = sinkhorn_balance(R);
        CHECK(b.converged);
        const Matrix S = apply_balance(R, b);
        CHECK((S.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
        CHECK((S.rowwise().sum().array() - 0.8).abs().maxCoeff() < 1e-8);
    }

    Matrix bad = Matrix::Ones(3, 3);
    bad.row(1).setZero();
    CHECK_THROWS_AS(sinkhorn_balance(bad), BalanceError);
}

TEST_CASE("nonnegativity check")
{
    Matrix M = Matrix::Ones(2, 2);
    CHECK_NOTHROW(require_nonnegative(M));
    M(1, 0) = -1e-300;
    CHECK_THROWS_AS(require_nonnegative(M), InvalidInputError);
    M(1, 0) = std::nan("");
    CHECK_THROWS_AS(require_nonnegative(M), InvalidInputError);
}

TEST_CASE("matrix market round trip")
{
    std::mt19937_64 g(2);
    const Matrix R = test::uniform(g, 7, 4);
    std::stringstream ss;
    write_matrix_market(ss, R);
    const Matrix back = read_matrix_market(ss);
    CHECK(back == R);  // 17 significant digits round-trip exactly
}

TEST_CASE("matrix market coordinate input")
{
    std::istringstream in(
        "%%MatrixMarket matrix coordinate integer general\n"
        "% comment\n"
        "\n"
        "2 3 3\n"
        "1 1 5\n"
        "2 3 1\n"
        "2 3 2\n");
    const Matrix M = read_matrix_market(in);
    REQUIRE(M.rows() == 2);
    REQUIRE(M.cols() == 3);
    CHECK(M(0, 0) == 5.0);
    CHECK(M(1, 2) == 3.0);  // duplicates accumulate
    CHECK(M.sum() == 8.0);
}

namespace {

std::size_t parse_error_line(const std::string& text)
{
    std::istringstream in(text);
    try {
        read_matrix_market(in);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST_CASE("matrix market errors carry line numbers")
{
    CHECK(parse_error_line("") == 1);
    CHECK(parse_error_line("hello\n") == 1);
    CHECK(parse_error_line("%%MatrixMarket matrix array complex general\n") == 1);
    CHECK(parse_error_line("%%MatrixMarket matrix array real general\n% c\n2 x\n") == 3);
    CHECK(parse_error_line("%%MatrixMarket matrix array real general\n2 1\n1.0\nabc\n") == 4);
    CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n") == 3);
    CHECK(parse_error_line("%%MatrixMarket matrix array real general\n1 1\n1.0\n2.0\n") == 4);
    CHECK(parse_error_line("%%MatrixMarket matrix array real general\n2 2\n1.0\n") > 0);

    std::istringstream in("%%MatrixMarket matrix array real general\n1 1\nnope\n");
    try {
        read_matrix_market(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("rng streams are reproducible and independent")
{
    Rng a(42, Stream::Blocks), b(42, Stream::Blocks), c(42, Stream::Noise);
    const Matrix A = a.uniform_matrix(3, 3);
    CHECK(A == b.uniform_matrix(3, 3));
    CHECK(A != c.uniform_matrix(3, 3));
    CHECK((A.array() >= 0.0).all());
    CHECK((A.array() < 1.0).all());

    Rng p(9, Stream::Permutation);
    auto perm = p.permutation(50);
    std::sort(perm.begin(), perm.end());
    for (Index i = 0; i < 50; ++i) CHECK(perm[static_cast<std::size_t>(i)] == i);

    Rng n(1, Stream::Noise);
    const Matrix N = n.normal_matrix(200, 200);
    CHECK(std::abs(N.mean()) < 0.02);
    CHECK(std::abs(N.squaredNorm() / N.size() - 1.0) < 0.02);

    Rng u(3, Stream::Init);
    for (int k = 0; k < 1000; ++k) CHECK(u.below(7) < 7);
}
