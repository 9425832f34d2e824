#include "cosep/docs_prep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "cosep/error.hpp"

namespace cosep {

LabeledCorpus select_top_words(const Matrix& M0, const std::vector<Index>& doc_labels, Index k)
{
    if (static_cast<Index>(doc_labels.size()) != M0.rows()) {
        throw DimensionError("select_top_words: one label per document required");
    }
    if (k < 1 || k > M0.cols()) {
        throw DimensionError("select_top_words: k = " + std::to_string(k) + " exceeds vocabulary of " +
                             std::to_string(M0.cols()));
    }
    require_nonnegative(M0, "document-word matrix");
    for (Index l : doc_labels) {
        if (l < 0) throw InvalidInputError("select_top_words: labels must be nonnegative");
    }

    const Vector totals = M0.colwise().sum().transpose();
    std::vector<Index> order(static_cast<std::size_t>(M0.cols()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return totals(a) > totals(b); });
    order.resize(static_cast<std::size_t>(k));
    if (!(totals(order.back()) > 0.0)) {
        throw DimensionError("select_top_words: fewer than " + std::to_string(k) + " words occur in the corpus");
    }
    std::sort(order.begin(), order.end());

    LabeledCorpus out;
    out.kept_words = order;
    const Matrix trimmed = submatrix(M0, kAll, IndexSet(order, M0.cols()));
    for (Index i = 0; i < trimmed.rows(); ++i) {
        if (trimmed.row(i).sum() > 0.0) out.kept_docs.push_back(i);
    }
    out.M = submatrix(trimmed, IndexSet(out.kept_docs, trimmed.rows()), kAll);
    for (Index i : out.kept_docs) out.doc_labels.push_back(doc_labels[static_cast<std::size_t>(i)]);
    out.r = out.doc_labels.empty() ? 0 : *std::max_element(out.doc_labels.begin(), out.doc_labels.end()) + 1;

    const Vector doc_len = out.M.rowwise().sum();
    out.word_labels.resize(static_cast<std::size_t>(out.M.cols()));
    for (Index j = 0; j < out.M.cols(); ++j) {
        Index best = 0;
        double best_share = -1.0;
        for (Index i = 0; i < out.M.rows(); ++i) {
            const double share = out.M(i, j) / doc_len(i);
            if (share > best_share) {
                best_share = share;
                best = i;
            }
        }
        out.word_labels[static_cast<std::size_t>(j)] = out.doc_labels[static_cast<std::size_t>(best)];
    }
    return out;
}

Matrix scale_by_cluster_size(const Matrix& M, const std::vector<Index>& weights, Axis axis)
{
    const Index len = axis == Axis::Rows ? M.rows() : M.cols();
    if (static_cast<Index>(weights.size()) != len) throw DimensionError("scale_by_cluster_size: weight count mismatch");
    Vector s(len);
    for (Index i = 0; i < len; ++i) {
        const Index w = weights[static_cast<std::size_t>(i)];
        if (w <= 0) throw InvalidWeightError("scale_by_cluster_size: weights must be positive");
        s(i) = std::sqrt(static_cast<double>(w));
    }
    if (axis == Axis::Rows) return s.asDiagonal() * M;
    return M * s.asDiagonal();
}

std::vector<Index> read_labels(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<Index> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        long long v = 0;
        const char* b = line.data() + first;
        const char* e = line.data() + last + 1;
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e) throw ParseError(path.string() + ": invalid label '" + std::string(b, e) + "'", lineno);
        labels.push_back(static_cast<Index>(v));
    }
    return labels;
}

void write_labels(const std::filesystem::path& path, const std::vector<Index>& labels)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (Index l : labels) out << l << '\n';
}

} // namespace cosep
