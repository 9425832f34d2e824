#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cosep/matrix.hpp"

namespace cosep {

// Named sub-streams of a seeded generator. Each stream is an mt19937_64 seeded
// through std::seed_seq{seed_lo, seed_hi, stream}, so streams are independent
// of each other and of the order in which they are consumed. The value
// conversions below are fixed (not the implementation-defined std
// distributions) so draws are identical across standard libraries.
enum class Stream : std::uint32_t {
    Blocks = 1,       // planted S, W, H
    Noise = 2,
    Permutation = 3,
    Init = 4,         // factorization starting points
};

class Rng {
public:
    Rng(std::uint64_t seed, Stream stream);

    std::uint64_t next_u64() { return engine_(); }
    double uniform();                      // [0, 1), 53-bit
    double normal();                       // standard normal, Box-Muller
    std::uint64_t below(std::uint64_t n);  // uniform in [0, n), rejection sampled

    Matrix uniform_matrix(Index rows, Index cols);
    Matrix normal_matrix(Index rows, Index cols);
    // Uniformly random permutation of 0..n-1 (Fisher-Yates).
    std::vector<Index> permutation(Index n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace cosep
