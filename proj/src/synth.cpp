#include "cosep/synth.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cosep/error.hpp"
#include "cosep/mmio.hpp"
#include "cosep/rng.hpp"

namespace cosep {

SyntheticInstance gen_cosep(Index m, Index n, Index r1, Index r2, double epsilon, std::uint64_t seed)
{
    if (r1 < 1 || r2 < 1 || r1 >= m || r2 >= n) {
        throw DimensionError("gen_cosep: need 1 <= r1 < m and 1 <= r2 < n");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidInputError("gen_cosep: epsilon must be >= 0");

    Rng blocks(seed, Stream::Blocks);
    const Matrix S = blocks.uniform_matrix(r1, r2);
    const Matrix W = blocks.uniform_matrix(m - r1, r1);
    const Matrix H = blocks.uniform_matrix(r2, n - r2);

    Matrix planted(m, n);
    planted.topLeftCorner(r1, r2) = S;
    planted.topRightCorner(r1, n - r2) = S * H;
    planted.bottomLeftCorner(m - r1, r2) = W * S;
    planted.bottomRightCorner(m - r1, n - r2) = W * S * H;

    SyntheticInstance inst;
    inst.epsilon = epsilon;
    inst.seed = seed;
    inst.r1 = r1;
    inst.r2 = r2;
    const Balance bal = sinkhorn_balance(planted);
    inst.clean = apply_balance(planted, bal);

    Rng noise(seed, Stream::Noise);
    inst.noise = noise.normal_matrix(m, n);
    const double nn = inst.noise.norm();
    const double target = epsilon * inst.clean.norm();
    if (nn > 0.0) inst.noise *= target / nn;
    if (epsilon == 0.0) inst.noise.setZero();

    const Matrix noisy = (inst.clean + inst.noise).cwiseMax(0.0);

    Rng perm(seed, Stream::Permutation);
    inst.row_perm = perm.permutation(m);
    inst.col_perm = perm.permutation(n);
    inst.M.resize(m, n);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < n; ++j) {
            inst.M(i, j) = noisy(inst.row_perm[static_cast<std::size_t>(i)], inst.col_perm[static_cast<std::size_t>(j)]);
        }
    }

    std::vector<Index> k1;
    std::vector<Index> k2;
    for (Index i = 0; i < m; ++i) {
        if (inst.row_perm[static_cast<std::size_t>(i)] < r1) k1.push_back(i);
    }
    for (Index j = 0; j < n; ++j) {
        if (inst.col_perm[static_cast<std::size_t>(j)] < r2) k2.push_back(j);
    }
    inst.k1_star = IndexSet(std::move(k1), m);
    inst.k2_star = IndexSet(std::move(k2), n);
    return inst;
}

std::vector<double> noise_grid()
{
    std::vector<double> grid;
    grid.reserve(20);
    for (int k = 0; k < 20; ++k) grid.push_back(std::pow(10.0, -7.0 + 6.0 * k / 19.0));
    return grid;
}

GroundTruth ground_truth(const SyntheticInstance& inst)
{
    return GroundTruth{inst.seed, inst.epsilon, inst.M.rows(), inst.M.cols(), inst.r1, inst.r2, inst.k1_star, inst.k2_star};
}

std::filesystem::path sidecar_path(const std::filesystem::path& mtx_path)
{
    std::filesystem::path p = mtx_path;
    p.replace_extension(".json");
    return p;
}

void write_sidecar(const std::filesystem::path& json_path, const GroundTruth& truth)
{
    nlohmann::ordered_json j;
    j["seed"] = truth.seed;
    j["epsilon"] = truth.epsilon;
    j["m"] = truth.m;
    j["n"] = truth.n;
    j["r1"] = truth.r1;
    j["r2"] = truth.r2;
    j["k1_star"] = truth.k1_star.indices();
    j["k2_star"] = truth.k2_star.indices();
    std::ofstream out(json_path);
    if (!out) throw Error("cannot write " + json_path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error("write failed for " + json_path.string());
}

GroundTruth read_sidecar(const std::filesystem::path& json_path)
{
    std::ifstream in(json_path);
    if (!in) throw Error("cannot open " + json_path.string());
    try {
        const auto j = nlohmann::json::parse(in);
        GroundTruth t;
        t.seed = j.at("seed").get<std::uint64_t>();
        t.epsilon = j.at("epsilon").get<double>();
        t.m = j.at("m").get<Index>();
        t.n = j.at("n").get<Index>();
        t.r1 = j.at("r1").get<Index>();
        t.r2 = j.at("r2").get<Index>();
        t.k1_star = IndexSet::from_unsorted(j.at("k1_star").get<std::vector<Index>>(), t.m);
        t.k2_star = IndexSet::from_unsorted(j.at("k2_star").get<std::vector<Index>>(), t.n);
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw Error(json_path.string() + ": " + e.what());
    }
}

std::optional<GroundTruth> find_sidecar(const std::filesystem::path& mtx_path)
{
    const auto p = sidecar_path(mtx_path);
    if (!std::filesystem::exists(p)) return std::nullopt;
    return read_sidecar(p);
}

void write_instance(const std::filesystem::path& mtx_path, const SyntheticInstance& inst)
{
    write_matrix_market(mtx_path, inst.M);
    write_sidecar(sidecar_path(mtx_path), ground_truth(inst));
}

} // namespace cosep
