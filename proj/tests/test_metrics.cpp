#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "cosep/assignment.hpp"
#include "cosep/docs_prep.hpp"
#include "cosep/error.hpp"
#include "cosep/metrics.hpp"
#include "cosep/synth.hpp"
#include "support.hpp"

using namespace cosep;

namespace {

double brute_force_accuracy(const ClusterAssignment& Q, const ClusterAssignment& Qs)
{
    const Index r = Q.clusters();
    const Index n = Q.items();
    std::vector<Index> perm(static_cast<std::size_t>(r));
    std::iota(perm.begin(), perm.end(), Index{0});
    double best = INFINITY;
    do {
        Matrix P = Matrix::Zero(r, r);
        for (Index k = 0; k < r; ++k) P(k, perm[static_cast<std::size_t>(k)]) = 1.0;
        best = std::min(best, (Q.matrix() * P - Qs.matrix()).norm());
    } while (std::next_permutation(perm.begin(), perm.end()));
    return 1.0 - std::sqrt(best / static_cast<double>(r * n));
}

double brute_force_cost(const Matrix& C)
{
    std::vector<Index> perm(static_cast<std::size_t>(C.cols()));
    std::iota(perm.begin(), perm.end(), Index{0});
    double best = INFINITY;
    do {
        double s = 0.0;
        for (Index i = 0; i < C.rows(); ++i) s += C(i, perm[static_cast<std::size_t>(i)]);
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

TEST_CASE("assignment matches brute force")
{
    std::mt19937_64 g(50);
    for (int trial = 0; trial < 100; ++trial) {
        const Index r = 1 + trial % 6;
        const Matrix C = test::uniform(g, r, r, -2.0, 5.0);
        const auto a = solve_assignment(C);
        CHECK(assignment_cost(C, a) == doctest::Approx(brute_force_cost(C)).epsilon(1e-12));
        auto sorted = a;
        std::sort(sorted.begin(), sorted.end());
        for (Index k = 0; k < r; ++k) CHECK(sorted[static_cast<std::size_t>(k)] == k);
    }
}

TEST_CASE("index accuracy")
{
    const IndexSet a({1, 2}, 5), b({4}, 5);
    CHECK(index_accuracy(a, b, a, b) == 1.0);
    CHECK(index_accuracy(IndexSet({0, 3}, 5), IndexSet({0}, 5), a, b) == 0.0);
    CHECK(index_accuracy(IndexSet({1, 3}, 5), b, a, b) == doctest::Approx(2.0 / 3.0));
    CHECK(index_accuracy(IndexSet::from_unsorted({3, 1}, 5), b, a, b) == index_accuracy(IndexSet({1, 3}, 5), b, a, b));
}

TEST_CASE("generic relative approximation")
{
    std::mt19937_64 g(51);
    const Matrix M = test::uniform(g, 4, 3);
    CHECK(relative_approx_generic(M, M) == 1.0);
    CHECK(relative_approx_generic(M, Matrix::Zero(4, 3)) == 0.0);
    CHECK(relative_approx_generic(M, 2.0 * M) == doctest::Approx(0.0));
    CHECK(relative_approx_generic(M, 3.0 * M) == doctest::Approx(-1.0));
    CHECK(relative_approx_cosep(M, IndexSet::all(4), IndexSet::all(3)) == doctest::Approx(1.0));
}

TEST_CASE("hard clustering")
{
    CHECK(hard_cluster(Matrix::Identity(3, 3)).matrix() == Matrix::Identity(3, 3));
    Matrix P(3, 2);
    P << 0.2, 0.2, 0.0, 0.0, 0.1, 0.7;
    CHECK(hard_cluster(P).labels() == std::vector<Index>{0, 0, 1});
}

TEST_CASE("clustering accuracy hand cases")
{
    Matrix I = Matrix::Identity(2, 2);
    const ClusterAssignment Qs(I);
    CHECK(clustering_accuracy(Qs, Qs) == 1.0);
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    CHECK(clustering_accuracy(ClusterAssignment(swap), Qs) == 1.0);
    Matrix same(2, 2);
    same << 1, 0, 1, 0;
    const double expect = 1.0 - std::sqrt(std::sqrt(2.0) / 4.0);
    CHECK(clustering_accuracy(ClusterAssignment(same), Qs) == doctest::Approx(expect).epsilon(1e-15));
    CHECK(clustering_accuracy(ClusterAssignment(same), Qs) == doctest::Approx(0.4054).epsilon(1e-4));

    Matrix bad(1, 2);
    bad << 1, 1;
    CHECK_THROWS_AS(ClusterAssignment{bad}, InvalidInputError);
    CHECK_THROWS_AS(ClusterAssignment::from_labels({0, 2}, 2), DimensionError);
}

TEST_CASE("clustering accuracy equals the brute-force permutation minimum")
{
    std::mt19937_64 g(52);
    for (int trial = 0; trial < 50; ++trial) {
        const Index r = 2 + trial % 5;
        std::uniform_int_distribution<Index> lab(0, r - 1);
        std::vector<Index> a(30), b(30);
        for (auto& x : a) x = lab(g);
        for (auto& x : b) x = lab(g);
        const auto Q = ClusterAssignment::from_labels(a, r);
        const auto Qs = ClusterAssignment::from_labels(b, r);
        CHECK(clustering_accuracy(Q, Qs) == brute_force_accuracy(Q, Qs));
        const Matrix C = confusion_counts(Q, Qs);
        CHECK(C.sum() == 30.0);
    }
}

TEST_CASE("cur residual")
{
    const SyntheticInstance inst = gen_cosep(40, 30, 5, 3, 0.0, 3);
    CHECK(cur_residual(inst.M, inst.k1_star, inst.k2_star) <= 1e-8);
}

TEST_CASE("top words and word labels")
{
    Matrix M0(3, 4);
    M0 << 2, 1, 0, 1,
          1, 3, 0, 0,
          0, 1, 4, 5;
    const LabeledCorpus all = select_top_words(M0, {0, 1, 2}, 4);
    CHECK(all.M == M0);
    CHECK(all.word_labels == std::vector<Index>{0, 1, 2, 2});
    CHECK(all.doc_labels == std::vector<Index>{0, 1, 2});
    CHECK(all.r == 3);

    // totals: 3, 5, 4, 6 -> keep words 1 and 3
    const LabeledCorpus top = select_top_words(M0, {0, 1, 2}, 2);
    CHECK(top.kept_words == std::vector<Index>{1, 3});
    CHECK(top.M.cols() == 2);
    // doc shares on the trimmed matrix: (1/2,1/2), (1,0), (1/6,5/6)
    CHECK(top.word_labels == std::vector<Index>{1, 2});

    Matrix single = Matrix::Zero(3, 2);
    single(0, 0) = 1;
    single(1, 0) = 1;
    single(2, 1) = 4;
    CHECK(select_top_words(single, {5, 0, 1}, 2).word_labels == std::vector<Index>{5, 1});

    Matrix empty_doc = M0;
    empty_doc.row(1) << 1, 0, 0, 0;  // only word 0, which is dropped
    const LabeledCorpus dropped = select_top_words(empty_doc, {0, 1, 2}, 2);
    CHECK(dropped.kept_docs == std::vector<Index>{0, 2});
    CHECK(dropped.M.rows() == 2);
}

TEST_CASE("scaling by cluster size")
{
    std::mt19937_64 g(53);
    const Matrix M = test::uniform(g, 4, 3);
    CHECK(scale_by_cluster_size(M, {1, 1, 1}, Axis::Cols) == M);
    const Matrix S = scale_by_cluster_size(M, {1, 4, 9}, Axis::Cols);
    CHECK(test::max_abs_diff(S.col(0), M.col(0)) < 1e-15);
    CHECK(test::max_abs_diff(S.col(1), 2.0 * M.col(1)) < 1e-15);
    CHECK(test::max_abs_diff(S.col(2), 3.0 * M.col(2)) < 1e-15);
    const Matrix R = scale_by_cluster_size(M, {4, 1, 1, 1}, Axis::Rows);
    CHECK(test::max_abs_diff(R.row(0), 2.0 * M.row(0)) < 1e-15);
    CHECK_THROWS_AS(scale_by_cluster_size(M, {1, 0, 1}, Axis::Cols), InvalidWeightError);
}

TEST_CASE("label files round trip")
{
    const auto path = std::filesystem::temp_directory_path() / "cosep_labels_test.txt";
    write_labels(path, {3, 0, 2});
    CHECK(read_labels(path) == std::vector<Index>{3, 0, 2});
    std::filesystem::remove(path);
}
