#pragma once

#include <filesystem>
#include <vector>

#include "cosep/matrix.hpp"

namespace cosep {

struct LabeledCorpus {
    Matrix M;                        // documents x words
    std::vector<Index> doc_labels;
    std::vector<Index> word_labels;
    Index r = 0;                     // number of classes
    std::vector<Index> kept_docs;    // original row of each document
    std::vector<Index> kept_words;   // original column of each word
};

// Keeps the k words of largest total weight (ties to the lower index), drops
// documents left empty, and labels each word with the class of the document
// in which its in-document share M(i,j) / sum_t M(i,t) is largest (ties to
// the lower document). Shares are taken on the trimmed matrix.
LabeledCorpus select_top_words(const Matrix& M0, const std::vector<Index>& doc_labels, Index k);

enum class Axis { Rows, Cols };

// Multiplies row (or column) i by sqrt(weights[i]).
Matrix scale_by_cluster_size(const Matrix& M, const std::vector<Index>& weights, Axis axis);

// One integer per non-blank line.
std::vector<Index> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const std::vector<Index>& labels);

} // namespace cosep
