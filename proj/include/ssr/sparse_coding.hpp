#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ssr/dictionary.hpp"
#include "ssr/mat.hpp"
#include "ssr/patch.hpp"

namespace ssr {

struct SolverSettings {
    int max_iterations = 1000;
    double tolerance = 1e-6;       // relative objective-change stop
    double zero_threshold = 1e-10; // snap smaller coefficients to exact zero

    void validate() const;
};

struct SparseCodeProblem {
    const Dictionary* dictionary = nullptr;
    std::span<const double> signal;
    double lambda = 0.0;

    void validate() const;
};

struct LassoResult {
    std::vector<double> w;
    bool converged = false;
    int iterations = 0;               // completed full sweeps
    double objective = 0.0;           // final ||x - Dw||^2 + lambda*||w||_1
    std::vector<double> objective_trace; // objective after each sweep
};

struct SparseCodes {
    Mat w;                               // K x N coefficients
    std::vector<std::uint32_t> nnz;      // per-column nonzero counts
    std::vector<std::uint8_t> converged; // per-column convergence flags
};

// Proximal operator of t*|.|: sign(x) * max(|x| - t, 0).
double soft_threshold(double x, double t);

// Coordinate descent on ||x - Dw||^2 + lambda*||w||_1 with a precomputed
// Gram matrix. Stops when the relative objective change drops below the
// tolerance and the optimality residual is at solver precision; hitting
// max_iterations returns the last (best) iterate with converged=false.
LassoResult lasso_solve(const SparseCodeProblem& problem, const SolverSettings& settings);

// Independent column-by-column lasso_solve over a patch matrix; results do
// not depend on how columns are scheduled across threads.
SparseCodes batch_code(const PatchMatrix& signals, const Dictionary& dictionary,
                       double lambda, const SolverSettings& settings);

// Same, but starts each column's descent from the matching column of
// initial_codes (K x N) instead of from zero. Exact coordinate minimization
// never increases the objective, so warm starts are safe wherever the
// previous codes are still feasible guesses.
SparseCodes batch_code(const PatchMatrix& signals, const Dictionary& dictionary,
                       double lambda, const SolverSettings& settings,
                       const Mat& initial_codes);

// max_j of |2*d_j'(Dw - x) + lambda*sign(w_j)| over nonzero coordinates and
// max(|2*d_j'(Dw - x)| - lambda, 0) over zero ones; zero iff w is optimal.
double kkt_residual(const SparseCodeProblem& problem, std::span<const double> w);

// ||x - Dw||^2 + lambda*||w||_1 evaluated by explicit residual.
double lasso_objective(const Dictionary& dictionary, std::span<const double> signal,
                       std::span<const double> w, double lambda);

} // namespace ssr
