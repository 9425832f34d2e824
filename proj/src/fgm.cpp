#include "cosep/fgm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cosep/factors.hpp"
#include "cosep/spa.hpp"

namespace cosep {

OmegaWeights::OmegaWeights(Vector w) : w_(std::move(w))
{
    for (Index t = 0; t < w_.size(); ++t) {
        if (!(w_(t) > 0.0) || !std::isfinite(w_(t))) {
            throw InvalidWeightError("omega weight " + std::to_string(t) + " must be positive");
        }
    }
}

OmegaWeights OmegaWeights::of_columns(const Matrix& M)
{
    return OmegaWeights(M.cwiseAbs().colwise().sum().transpose());
}

double default_lambda(const Matrix& M, double factor)
{
    return factor * spectral_norm_sq(M) / static_cast<double>(M.cols());
}

namespace {

// Row projection with a preallocated scratch list of the positive
// off-diagonal coordinates; writes the result into `out`.
void project_row_into(const double* z, Index n, Index t, const double* w, int steps, double* out,
                      std::vector<std::pair<double, double>>& active)
{
    active.clear();
    const double wt = w[t];
    for (Index l = 0; l < n; ++l) {
        out[l] = 0.0;
        if (l != t && z[l] > 0.0) active.emplace_back(w[l] / wt, z[l]);
    }
    const double zt = z[t];

    // Half of g'(x) is nondecreasing and piecewise linear:
    //   x - z_t + sum over active l of c_l (c_l x - z_l),
    // where l is active while c_l x < min(1, z_l). The active set only shrinks
    // as x grows, so equal counts at both ends of a bracket mean no kink inside.
    struct Slope {
        double value;
        std::size_t active;
        double cc;  // sum c_l^2 over the active set
        double cz;  // sum c_l z_l over the active set
    };
    auto slope = [&](double x) {
        Slope s{x - zt, 0, 0.0, 0.0};
        for (const auto& [c, zl] : active) {
            const double cap = c * x;
            if (cap < 1.0 && cap < zl) {
                s.value += c * (cap - zl);
                ++s.active;
                s.cc += c * c;
                s.cz += c * zl;
            }
        }
        return s;
    };

    double x = 0.0;
    const Slope at0 = slope(0.0);
    const Slope at1 = at0.value >= 0.0 ? at0 : slope(1.0);
    if (at0.value >= 0.0) {
        x = 0.0;
    } else if (at1.value <= 0.0) {
        x = 1.0;
    } else {
        double lo = 0.0;
        double hi = 1.0;
        std::size_t lo_active = at0.active;
        std::size_t hi_active = at1.active;
        Slope lo_slope = at0;
        bool solved = false;
        for (int k = 0; k < steps; ++k) {
            if (lo_active == hi_active) {
                // linear on [lo, hi]: root of x (1 + cc) - z_t - cz
                x = std::clamp((zt + lo_slope.cz) / (1.0 + lo_slope.cc), lo, hi);
                solved = true;
                break;
            }
            const double mid = 0.5 * (lo + hi);
            const Slope sm = slope(mid);
            if (sm.value < 0.0) {
                lo = mid;
                lo_active = sm.active;
                lo_slope = sm;
            } else {
                hi = mid;
                hi_active = sm.active;
            }
        }
        if (!solved) x = 0.5 * (lo + hi);
    }

    out[t] = x;
    for (Index l = 0; l < n; ++l) {
        if (l == t || z[l] <= 0.0) continue;
        const double cap = std::min(1.0, (w[l] / wt) * x);
        out[l] = std::min(z[l], cap);
    }
}

} // namespace

Vector project_omega_row(std::span<const double> z, Index diag_pos, const OmegaWeights& w, int bisection_steps)
{
    const auto n = static_cast<Index>(z.size());
    if (w.size() != n) throw DimensionError("project_omega_row: weight length does not match row length");
    if (diag_pos < 0 || diag_pos >= n) throw DimensionError("project_omega_row: diagonal position out of range");
    Vector out(n);
    std::vector<std::pair<double, double>> active;
    project_row_into(z.data(), n, diag_pos, w.values().data(), bisection_steps, out.data(), active);
    return out;
}

void project_omega(Matrix& Z, const OmegaWeights& w, int bisection_steps)
{
    const Index n = Z.cols();
    if (Z.rows() != n || w.size() != n) throw DimensionError("project_omega: shape mismatch");
    std::vector<std::pair<double, double>> active;
    active.reserve(static_cast<std::size_t>(n));
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Index t = 0; t < n; ++t) {
        std::copy(Z.row(t).data(), Z.row(t).data() + n, row.begin());
        project_row_into(row.data(), n, t, w.values().data(), bisection_steps, Z.row(t).data(), active);
    }
}

bool in_omega(const Matrix& Y, const OmegaWeights& w, double slack)
{
    const Index n = Y.cols();
    if (Y.rows() != n || w.size() != n) return false;
    for (Index t = 0; t < n; ++t) {
        const double diag = Y(t, t);
        for (Index l = 0; l < n; ++l) {
            const double y = Y(t, l);
            if (y < -slack || y > 1.0 + slack) return false;
            if (w[t] * y > w[l] * diag + slack * std::max(w[t], w[l])) return false;
        }
    }
    return true;
}

double objective(const Matrix& M, const Matrix& Y, double lambda)
{
    if (Y.rows() != M.cols() || Y.cols() != M.cols()) throw DimensionError("objective: Y must be n x n");
    return 0.5 * (M - M * Y).squaredNorm() + lambda * Y.trace();
}

Matrix objective_gradient(const Matrix& M, const Matrix& Y, double lambda)
{
    if (Y.rows() != M.cols() || Y.cols() != M.cols()) throw DimensionError("objective_gradient: Y must be n x n");
    const Matrix G = M.transpose() * M;
    Matrix grad = G * Y - G;
    grad.diagonal().array() += lambda;
    return grad;
}

FgmOutput fgm_snmf(const Matrix& M, const FgmParams& params)
{
    if (params.normalize_columns) {
        const Vector d = M.cwiseAbs().colwise().sum().transpose();
        for (Index t = 0; t < d.size(); ++t) {
            if (!(d(t) > 0.0)) throw InvalidInputError("fgm_snmf: column " + std::to_string(t) + " is zero");
        }
        FgmParams inner = params;
        inner.normalize_columns = false;
        FgmOutput out = fgm_snmf(M * d.cwiseInverse().asDiagonal(), inner);
        out.Y = d.cwiseInverse().asDiagonal() * out.Y * d.asDiagonal();
        return out;
    }

    const Index n = M.cols();
    if (n == 0 || M.rows() == 0) throw DimensionError("fgm_snmf: empty matrix");
    if (!(params.alpha0 > 0.0 && params.alpha0 < 1.0)) throw InvalidInputError("fgm_snmf: alpha0 must lie in (0, 1)");
    const Vector l1 = M.cwiseAbs().colwise().sum().transpose();
    for (Index t = 0; t < n; ++t) {
        if (!(l1(t) > 0.0)) throw InvalidInputError("fgm_snmf: column " + std::to_string(t) + " is zero");
    }
    const OmegaWeights w(l1);

    FgmOutput out;
    out.lipschitz = spectral_norm_sq(M);
    out.lambda = params.lambda.value_or(params.lambda_factor * out.lipschitz / static_cast<double>(n));
    if (!(out.lambda > 0.0)) throw InvalidInputError("fgm_snmf: lambda must be positive");
    const double L = out.lipschitz;
    const double lambda = out.lambda;

    const Matrix G = M.transpose() * M;
    const double trace_G = G.trace();
    // G X as M^T (M X) when M is short.
    const bool factored = 2 * M.rows() < n;
    auto gram_times = [&](const Matrix& X) -> Matrix {
        if (factored) return M.transpose() * (M * X);
        return G * X;
    };
    // F via the Gram matrix: 1/2 (tr G - 2 <G, Y> + <Y, GY>) + lambda tr Y
    auto value = [&](const Matrix& Y, const Matrix& GY) {
        return 0.5 * (trace_G - 2.0 * G.cwiseProduct(Y).sum() + Y.cwiseProduct(GY).sum()) + lambda * Y.trace();
    };

    Matrix Y = params.init == FgmInit::Identity ? Matrix(Matrix::Identity(n, n)) : Matrix(Matrix::Zero(n, n));
    Matrix GY = gram_times(Y);  // feasible iterate and its Gram product
    Matrix Yprev = Y;
    Matrix GYprev = GY;
    Matrix Z = Y;                    // extrapolated point
    Matrix GZ = GY;
    double F = value(Y, GY);
    double alpha = params.alpha0;

    out.objective_trace.reserve(static_cast<std::size_t>(std::max(params.max_iter, 0)));
    Matrix step(n, n);
    for (int k = 0; k < params.max_iter; ++k) {
        // Z - (G Z - G + lambda I) / L
        step = Z - (GZ - G) / L;
        step.diagonal().array() -= lambda / L;
        project_omega(step, w, params.bisection_steps);

        Matrix GYn = gram_times(step);
        const double Fn = value(step, GYn);

        if (params.restart_enabled && Fn > F) {
            // Discard the step, restart momentum from the current feasible point.
            alpha = params.alpha0;
            Z = Y;
            GZ = GY;
            out.objective_trace.push_back(F);
            ++out.iterations_run;
            continue;
        }

        const double alpha_next = 0.5 * (std::sqrt(alpha * alpha * alpha * alpha + 4.0 * alpha * alpha) - alpha * alpha);
        const double beta = alpha * (1.0 - alpha) / (alpha * alpha + alpha_next);
        alpha = alpha_next;

        Yprev.swap(Y);
        GYprev.swap(GY);
        Y = step;
        GY = std::move(GYn);
        F = Fn;

        Z = Y + beta * (Y - Yprev);
        GZ = GY + beta * (GY - GYprev);

        out.objective_trace.push_back(F);
        ++out.iterations_run;
    }
    out.Y = std::move(Y);
    return out;
}

IndexSet postprocess_diag(const Matrix& Y, Index r)
{
    const Index n = Y.rows();
    if (Y.cols() != n) throw DimensionError("postprocess_diag: Y must be square");
    if (r < 0 || r > n) throw DimensionError("postprocess_diag: r out of range");
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return Y(a, a) > Y(b, b); });
    order.resize(static_cast<std::size_t>(r));
    return IndexSet::from_unsorted(std::move(order), n);
}

IndexSet postprocess_spa(const Matrix& Y, Index r)
{
    const Index n = Y.rows();
    if (Y.cols() != n) throw DimensionError("postprocess_spa: Y must be square");
    if (r < 1 || r > n) throw DimensionError("postprocess_spa: r out of range");
    const SpaResult res = spa(Y.transpose(), r);
    IndexSet picked = IndexSet::from_unsorted(res.selected, n);
    if (static_cast<Index>(res.selected.size()) < r) {
        throw DegenerateSelectionError("postprocess_spa: Y has only " + std::to_string(res.selected.size()) +
                                           " numerically nonzero rows, " + std::to_string(r) + " requested",
                                       std::move(picked));
    }
    return picked;
}

IndexSet postprocess(const Matrix& Y, Index r, Postprocess how)
{
    return how == Postprocess::Diag ? postprocess_diag(Y, r) : postprocess_spa(Y, r);
}

std::vector<double> logspace(double lo, double hi, int count)
{
    std::vector<double> out;
    if (count <= 0) return out;
    if (count == 1) return {std::pow(10.0, hi)};
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        out.push_back(std::pow(10.0, lo + (hi - lo) * k / (count - 1)));
    }
    return out;
}

LambdaSweepResult fgm_lambda_sweep(const Matrix& M, Index r, const FgmParams& params, Postprocess how,
                                   std::span<const double> lambdas)
{
    if (lambdas.empty()) throw InvalidInputError("fgm_lambda_sweep: no penalties given");
    const double norm = M.norm();
    LambdaSweepResult best;
    bool have = false;
    for (const double lambda : lambdas) {
        FgmParams p = params;
        p.lambda = lambda;
        const FgmOutput fit = fgm_snmf(M, p);
        IndexSet sel;
        try {
            sel = postprocess(fit.Y, r, how);
        } catch (const DegenerateSelectionError&) {
            continue;
        }
        const Matrix C = submatrix(M, kAll, sel);
        const Matrix H = nnls_hals(M, C);
        const double rel = norm > 0.0 ? 1.0 - (M - C * H).norm() / norm : 1.0;
        if (!have || rel > best.rel_approx) {
            best = LambdaSweepResult{lambda, std::move(sel), rel};
            have = true;
        }
    }
    if (!have) throw DegenerateSelectionError("fgm_lambda_sweep: every penalty gave a degenerate Y", IndexSet{});
    return best;
}

} // namespace cosep
