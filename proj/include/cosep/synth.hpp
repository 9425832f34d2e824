#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "cosep/matrix.hpp"

namespace cosep {

struct SyntheticInstance {
    Matrix M;              // permuted, noisy, truncated at 0
    IndexSet k1_star;      // planted rows after permutation
    IndexSet k2_star;      // planted columns after permutation
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    Index r1 = 0;
    Index r2 = 0;
    Matrix clean;          // balanced planted matrix before noise and permutation
    Matrix noise;          // noise added to `clean`, before truncation
    std::vector<Index> row_perm;  // M(i, :) comes from row row_perm[i] of max(0, clean + noise)
    std::vector<Index> col_perm;  // M(:, j) comes from column col_perm[j]
};

// Planted co-(r1, r2)-separable matrix
//   M = Pi_r max(0, D_r [S, S H; W S, W S H] D_c + N) Pi_c
// with S, W, H uniform in [0, 1], (D_r, D_c) from sinkhorn_balance, and
// ||N||_F = epsilon ||D_r [...] D_c||_F. Blocks, noise and permutations come
// from separate random streams, so changing epsilon keeps the planted part.
SyntheticInstance gen_cosep(Index m, Index n, Index r1, Index r2, double epsilon, std::uint64_t seed);

// 20 noise levels 10^(-7 + 6k/19), k = 0..19.
std::vector<double> noise_grid();

struct GroundTruth {
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    Index m = 0;
    Index n = 0;
    Index r1 = 0;
    Index r2 = 0;
    IndexSet k1_star;
    IndexSet k2_star;
};

GroundTruth ground_truth(const SyntheticInstance& inst);

// <stem>.mtx plus the <stem>.json sidecar (seed, epsilon, shape, planted sets).
void write_instance(const std::filesystem::path& mtx_path, const SyntheticInstance& inst);

std::filesystem::path sidecar_path(const std::filesystem::path& mtx_path);
void write_sidecar(const std::filesystem::path& json_path, const GroundTruth& truth);
GroundTruth read_sidecar(const std::filesystem::path& json_path);
// Reads the sidecar next to a matrix file if one exists.
std::optional<GroundTruth> find_sidecar(const std::filesystem::path& mtx_path);

} // namespace cosep
