#pragma once

#include <vector>

#include "lsqd/assembly.hpp"

namespace lsqd {

enum class Preconditioner { incomplete_cholesky, jacobi, none };

struct SolveOptions {
    double abs_tol = 1e-26;   // infinity-norm residual
    double rel_tol = 1e-12;   // relative to the infinity norm of the right-hand side
    int max_iters = 100000;
    Preconditioner preconditioner = Preconditioner::incomplete_cholesky;
};

struct SolveReport {
    std::vector<double> alpha;
    int iterations = 0;
    double final_residual_inf = 0.0;
    double epsilon_used = 0.0;
    double wall_time = 0.0;
    bool converged = false;
    // (iteration, quadratic-form energy) samples, every 100 iterations.
    std::vector<std::pair<int, double>> energy_samples;
};

/// Preconditioned conjugate gradient from a zero initial guess. The incomplete
/// Cholesky preconditioner retries with growing diagonal shifts on breakdown
/// and falls back to Jacobi if the shifts run out.
SolveReport solve(const NormalSystem& ns, const SolveOptions& opts = {});

/// Gershgorin bracket plus a 50-step power-iteration estimate of lambda_max.
struct ConditionEstimate {
    double gershgorin_max = 0.0;
    double gershgorin_min = 0.0;
    double power_lambda_max = 0.0;
};
ConditionEstimate condition_estimate(const NormalSystem& ns);

/// Zero-fill incomplete Cholesky L (lower triangle, CSR, diagonal last in each
/// row). Returns false on breakdown at the given diagonal shift.
struct IncompleteCholesky {
    CsrMatrix L;
    bool factor(const CsrMatrix& G, double shift);
    // z = (L L^T)^{-1} r
    void apply(std::span<const double> r, std::span<double> z,
               std::span<double> work) const;
};

}  // namespace lsqd
