#include "ssr/sparse_coding.hpp"

#include <cmath>

#include "ssr/errors.hpp"
#include "ssr/kernels.hpp"
#include "ssr/threading.hpp"

namespace ssr {

void SolverSettings::validate() const {
    if (max_iterations < 1)
        throw invalid_input_error("SolverSettings: max_iterations must be at least 1");
    if (!(tolerance > 0.0))
        throw invalid_input_error("SolverSettings: tolerance must be positive");
    if (!(zero_threshold >= 0.0))
        throw invalid_input_error("SolverSettings: zero_threshold must be nonnegative");
}

void SparseCodeProblem::validate() const {
    if (!dictionary || dictionary->size() == 0)
        throw invalid_input_error("SparseCodeProblem: dictionary must have at least one atom");
    if (signal.size() != dictionary->dim())
        throw invalid_input_error("SparseCodeProblem: signal length does not match dictionary rows");
    if (!(lambda >= 0.0))
        throw invalid_input_error("SparseCodeProblem: lambda must be nonnegative");
    if (!dictionary->atoms.all_finite())
        throw invalid_input_error("SparseCodeProblem: dictionary has non-finite entries");
    for (double v : signal)
        if (!std::isfinite(v))
            throw invalid_input_error("SparseCodeProblem: signal has non-finite entries");
}

double soft_threshold(double x, double t) {
    double m = std::fabs(x) - t;
    if (m <= 0.0) return 0.0;
    return x < 0.0 ? -m : m;
}

namespace {

// Shared per-dictionary precomputation for coordinate descent. rows_t holds
// the dictionary transposed so c = D'x can accumulate row by row; gram holds
// G = D'D with each entry summed in ascending row order, making every inner
// product bit-identical to a naive ascending dot.
struct CoderPlan {
    const Dictionary* dict;
    Mat rows_t; // K x d: column r is row r of D
    Mat gram;   // K x K

    explicit CoderPlan(const Dictionary& d) : dict(&d) {
        const Mat& a = d.atoms;
        rows_t = transpose_copy(a);
        gram = Mat(a.cols, a.cols);
        for (std::size_t r = 0; r < a.rows; ++r)
            for (std::size_t j = 0; j < a.cols; ++j)
                kernels::axpy(a.cols, a.at(r, j), rows_t.col(r), gram.col(j));
    }
};

struct SolveScratch {
    std::vector<double> c, q, resid;
};

// ||x - Dw||^2 + lambda*||w||_1 by explicit residual, atoms in ascending
// order, zero coefficients skipped.
double objective_explicit(const Mat& atoms, const double* x, const double* w,
                          double lambda, std::vector<double>& resid) {
    std::size_t d = atoms.rows;
    resid.assign(x, x + d);
    for (std::size_t j = 0; j < atoms.cols; ++j)
        if (w[j] != 0.0) kernels::axpy(d, -w[j], atoms.col(j), resid.data());
    double l1 = 0.0;
    for (std::size_t j = 0; j < atoms.cols; ++j) l1 += std::fabs(w[j]);
    return norm2_sq_seq(d, resid.data()) + lambda * l1;
}

// Optimality residual from an explicitly recomputed gradient.
double kkt_explicit(const Mat& atoms, const double* x, const double* w, double lambda,
                    std::vector<double>& resid) {
    std::size_t d = atoms.rows;
    resid.assign(x, x + d);
    for (std::size_t j = 0; j < atoms.cols; ++j)
        if (w[j] != 0.0) kernels::axpy(d, -w[j], atoms.col(j), resid.data());
    double worst = 0.0;
    for (std::size_t j = 0; j < atoms.cols; ++j) {
        double g = 2.0 * dot_seq(d, atoms.col(j), resid.data()); // -d/dw_j of ||r||^2
        double v;
        if (w[j] > 0.0) v = std::fabs(lambda - g);
        else if (w[j] < 0.0) v = std::fabs(-lambda - g);
        else v = std::fmax(std::fabs(g) - lambda, 0.0);
        if (v > worst) worst = v;
    }
    return worst;
}

// Cyclic coordinate descent with q = c - Gw maintained incrementally.
// w0 (length K) selects a warm start; null starts from zero.
LassoResult solve_with_plan(const CoderPlan& plan, const double* x,
                            double lambda, const SolverSettings& st,
                            SolveScratch& scr, const double* w0 = nullptr) {
    const Mat& atoms = plan.dict->atoms;
    std::size_t d = atoms.rows;
    std::size_t k = atoms.cols;
    double thresh = lambda / 2.0;

    LassoResult res;
    if (w0) res.w.assign(w0, w0 + k);
    else res.w.assign(k, 0.0);

    // c = D'x accumulated row by row.
    scr.c.assign(k, 0.0);
    for (std::size_t r = 0; r < d; ++r)
        kernels::axpy(k, x[r], plan.rows_t.col(r), scr.c.data());
    scr.q = scr.c;
    if (w0)
        for (std::size_t j = 0; j < k; ++j)
            if (res.w[j] != 0.0) kernels::axpy(k, -res.w[j], plan.gram.col(j), scr.q.data());

    // Optimality gate scaled to the gradient magnitude at w = 0, so signals
    // far from unit scale stop in comparable sweep counts.
    double cmax = 0.0;
    for (std::size_t j = 0; j < k; ++j) cmax = std::fmax(cmax, std::fabs(scr.c[j]));
    double kkt_gate = 10.0 * st.tolerance * std::fmax(lambda, 2.0 * cmax);

    double prev = w0 ? objective_explicit(atoms, x, res.w.data(), lambda, scr.resid)
                     : norm2_sq_seq(d, x);
    res.objective = prev;

    for (int iter = 1; iter <= st.max_iterations; ++iter) {
        for (std::size_t j = 0; j < k; ++j) {
            double gjj = plan.gram.at(j, j);
            double wj = res.w[j];
            double wn;
            if (gjj > 0.0) {
                double rho = scr.q[j] + gjj * wj;
                wn = soft_threshold(rho, thresh) / gjj;
                if (std::fabs(wn) < st.zero_threshold) wn = 0.0;
            } else {
                wn = 0.0; // zero atom never helps
            }
            if (wn != wj) {
                kernels::axpy(k, wj - wn, plan.gram.col(j), scr.q.data());
                res.w[j] = wn;
            }
        }
        double obj = objective_explicit(atoms, x, res.w.data(), lambda, scr.resid);
        res.objective_trace.push_back(obj);
        res.iterations = iter;

        bool small_change = std::fabs(prev - obj) <= st.tolerance * std::fmax(prev, 1e-30);
        prev = obj;
        res.objective = obj;
        if (small_change) {
            if (lambda == 0.0 ||
                kkt_explicit(atoms, x, res.w.data(), lambda, scr.resid) <= kkt_gate) {
                res.converged = true;
                break;
            }
        }
    }
    return res;
}

} // namespace

LassoResult lasso_solve(const SparseCodeProblem& problem, const SolverSettings& settings) {
    problem.validate();
    settings.validate();
    CoderPlan plan(*problem.dictionary);
    SolveScratch scr;
    return solve_with_plan(plan, problem.signal.data(), problem.lambda, settings, scr);
}

namespace {

SparseCodes batch_code_impl(const PatchMatrix& signals, const Dictionary& dictionary,
                            double lambda, const SolverSettings& settings,
                            const Mat* initial_codes) {
    settings.validate();
    if (dictionary.size() == 0)
        throw invalid_input_error("batch_code: dictionary must have at least one atom");
    if (signals.columns.rows != dictionary.dim())
        throw invalid_input_error("batch_code: signal dimension does not match dictionary rows");
    if (!(lambda >= 0.0)) throw invalid_input_error("batch_code: lambda must be nonnegative");
    if (!dictionary.atoms.all_finite())
        throw invalid_input_error("batch_code: dictionary has non-finite entries");
    if (!signals.columns.all_finite())
        throw invalid_input_error("batch_code: signals have non-finite entries");
    if (initial_codes &&
        (initial_codes->rows != dictionary.size() || initial_codes->cols != signals.count()))
        throw invalid_input_error("batch_code: initial codes must be K x N");

    std::size_t n = signals.count();
    SparseCodes out;
    out.w = Mat(dictionary.size(), n);
    out.nnz.assign(n, 0);
    out.converged.assign(n, 0);
    if (n == 0) return out;

    CoderPlan plan(dictionary);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        SolveScratch scr;
        for (std::size_t i = begin; i < end; ++i) {
            const double* w0 = initial_codes ? initial_codes->col(i) : nullptr;
            LassoResult r =
                solve_with_plan(plan, signals.columns.col(i), lambda, settings, scr, w0);
            double* dst = out.w.col(i);
            std::uint32_t count = 0;
            for (std::size_t j = 0; j < r.w.size(); ++j) {
                dst[j] = r.w[j];
                if (r.w[j] != 0.0) ++count;
            }
            out.nnz[i] = count;
            out.converged[i] = r.converged ? 1 : 0;
        }
    });
    return out;
}

} // namespace

SparseCodes batch_code(const PatchMatrix& signals, const Dictionary& dictionary,
                       double lambda, const SolverSettings& settings) {
    return batch_code_impl(signals, dictionary, lambda, settings, nullptr);
}

SparseCodes batch_code(const PatchMatrix& signals, const Dictionary& dictionary,
                       double lambda, const SolverSettings& settings,
                       const Mat& initial_codes) {
    if (!initial_codes.all_finite())
        throw invalid_input_error("batch_code: initial codes have non-finite entries");
    return batch_code_impl(signals, dictionary, lambda, settings, &initial_codes);
}

double kkt_residual(const SparseCodeProblem& problem, std::span<const double> w) {
    problem.validate();
    if (w.size() != problem.dictionary->size())
        throw invalid_input_error("kkt_residual: coefficient length does not match atom count");
    std::vector<double> resid;
    return kkt_explicit(problem.dictionary->atoms, problem.signal.data(), w.data(),
                        problem.lambda, resid);
}

double lasso_objective(const Dictionary& dictionary, std::span<const double> signal,
                       std::span<const double> w, double lambda) {
    if (signal.size() != dictionary.dim() || w.size() != dictionary.size())
        throw invalid_input_error("lasso_objective: dimension mismatch");
    std::vector<double> resid;
    return objective_explicit(dictionary.atoms, signal.data(), w.data(), lambda, resid);
}

} // namespace ssr
