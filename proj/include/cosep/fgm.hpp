#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cosep/error.hpp"
#include "cosep/matrix.hpp"

namespace cosep {

// Column l1 norms of M, the weights of the feasible set
//   Omega = { Y : 0 <= Y <= 1, w_t Y(t,l) <= w_l Y(t,t) }.
class OmegaWeights {
public:
    explicit OmegaWeights(Vector w);
    static OmegaWeights of_columns(const Matrix& M);

    const Vector& values() const noexcept { return w_; }
    Index size() const noexcept { return w_.size(); }
    double operator[](Index t) const { return w_(t); }

private:
    Vector w_;
};

enum class FgmInit { Zero, Identity };

struct FgmParams {
    // Trace penalty. Unset means lambda_factor * sigma_max(M)^2 / n.
    std::optional<double> lambda;
    double lambda_factor = 1e-6;
    int max_iter = 1000;
    double alpha0 = 0.05;
    bool restart_enabled = true;
    FgmInit init = FgmInit::Zero;
    // Run on M D^-1 with D = diag(column l1 norms) and map Y back as D^-1 Y D.
    // The diagonal, and so the diag post-processing, is unchanged by the map;
    // off-diagonal entries may exceed 1 and the trace is that of the scaled problem.
    bool normalize_columns = false;
    // Cap on row-projection bisection steps on [0, 1]. The search ends early
    // with an exact linear solve once the bracket contains no kink.
    int bisection_steps = 60;
};

struct FgmOutput {
    Matrix Y;
    std::vector<double> objective_trace;  // F(Y) after every iteration
    int iterations_run = 0;
    double lambda = 0.0;
    double lipschitz = 0.0;
};

// factor * sigma_max(M)^2 / n.
double default_lambda(const Matrix& M, double factor = 1e-2);

// Euclidean projection of z onto the row-t slice of Omega:
//   { y : 0 <= y_t <= 1, 0 <= y_l <= min(1, (w_l / w_t) y_t) }.
Vector project_omega_row(std::span<const double> z, Index diag_pos, const OmegaWeights& w, int bisection_steps = 60);

// Applies project_omega_row to every row of Z in place.
void project_omega(Matrix& Z, const OmegaWeights& w, int bisection_steps = 60);

// True if every entry satisfies the Omega bounds with absolute slack `slack`.
bool in_omega(const Matrix& Y, const OmegaWeights& w, double slack = 1e-9);

// F(Y) = 1/2 ||M - MY||_F^2 + lambda tr(Y)
double objective(const Matrix& M, const Matrix& Y, double lambda);

// grad F(Y) = M^T M Y - M^T M + lambda I
Matrix objective_gradient(const Matrix& M, const Matrix& Y, double lambda);

// Nesterov-accelerated projected gradient on F over Omega, starting at Y = 0.
// The returned Y and every trace value belong to the projected (feasible)
// iterate; the extrapolated point is internal.
FgmOutput fgm_snmf(const Matrix& M, const FgmParams& params = {});

// Raised when SPA on Y^T runs out of nonzero rows before r picks.
class DegenerateSelectionError : public Error {
public:
    DegenerateSelectionError(const std::string& what, IndexSet partial)
        : Error(what), partial_(std::move(partial)) {}
    const IndexSet& partial() const noexcept { return partial_; }

private:
    IndexSet partial_;
};

// r largest diagonal entries (ties to the lowest index), sorted ascending.
IndexSet postprocess_diag(const Matrix& Y, Index r);

// First r columns extracted by SPA on Y^T, sorted ascending.
IndexSet postprocess_spa(const Matrix& Y, Index r);

enum class Postprocess { Diag, SpaSort };

IndexSet postprocess(const Matrix& Y, Index r, Postprocess how);

// Geometric grid 10^lo ... 10^hi with `count` points, endpoints included.
std::vector<double> logspace(double lo, double hi, int count);

struct LambdaSweepResult {
    double lambda = 0.0;
    IndexSet selected;
    double rel_approx = 0.0;  // 1 - min_{H >= 0} ||M - M(:,K) H||_F / ||M||_F
};

// Runs fgm_snmf for every penalty in `lambdas` and keeps the one whose
// post-processed column selection best approximates M.
LambdaSweepResult fgm_lambda_sweep(const Matrix& M, Index r, const FgmParams& params, Postprocess how,
                                   std::span<const double> lambdas);

} // namespace cosep
