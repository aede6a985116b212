#include "ssr/dict_learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ssr/errors.hpp"
#include "ssr/kernels.hpp"
#include "ssr/linalg.hpp"
#include "ssr/rng.hpp"

namespace ssr {

void TrainConfig::validate() const {
    if (dict_size < 1) throw invalid_input_error("TrainConfig: dict_size must be at least 1");
    if (!(lambda > 0.0)) throw invalid_input_error("TrainConfig: lambda must be positive");
    if (outer_iterations < 1)
        throw invalid_input_error("TrainConfig: outer_iterations must be at least 1");
    if (ridge_epsilon && !(*ridge_epsilon >= 0.0))
        throw invalid_input_error("TrainConfig: ridge_epsilon must be nonnegative");
    solver.validate();
}

Dictionary init_dictionary(const PatchMatrix& signals, std::size_t dict_size, std::uint64_t seed) {
    const Mat& y = signals.columns;
    if (dict_size < 1) throw invalid_input_error("init_dictionary: dict_size must be at least 1");

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < y.cols; ++i)
        if (norm2_sq_seq(y.rows, y.col(i)) > 0.0) usable.push_back(i);
    if (usable.size() < dict_size)
        throw invalid_input_error("init_dictionary: only " + std::to_string(usable.size()) +
                                  " nonzero signal columns for " + std::to_string(dict_size) +
                                  " atoms");

    Rng rng(seed);
    partial_shuffle(usable, dict_size, rng);

    Dictionary d;
    d.atoms = Mat(y.rows, dict_size);
    for (std::size_t k = 0; k < dict_size; ++k) {
        const double* src = y.col(usable[k]);
        double* dst = d.atoms.col(k);
        std::copy(src, src + y.rows, dst);
        double nrm = std::sqrt(norm2_sq_seq(y.rows, dst));
        kernels::scale(y.rows, 1.0 / nrm, dst);
    }
    return d;
}

double dict_objective(const Mat& signals, const Mat& atoms, const Mat& w, double lambda) {
    if (signals.cols != w.cols || atoms.cols != w.rows || atoms.rows != signals.rows)
        throw invalid_input_error("dict_objective: dimension mismatch");
    std::vector<double> resid(signals.rows);
    double total = 0.0;
    for (std::size_t i = 0; i < signals.cols; ++i) {
        const double* x = signals.col(i);
        const double* wi = w.col(i);
        resid.assign(x, x + signals.rows);
        for (std::size_t k = 0; k < atoms.cols; ++k)
            if (wi[k] != 0.0) kernels::axpy(signals.rows, -wi[k], atoms.col(k), resid.data());
        total += norm2_sq_seq(signals.rows, resid.data());
    }
    double l1 = 0.0;
    for (double v : w.data) l1 += std::fabs(v);
    return total + lambda * l1;
}

double auto_ridge_epsilon(const Mat& w) {
    if (w.rows == 0) return 0.0;
    double tr = norm2_sq_seq(w.data.size(), w.data.data()); // trace(WW') = ||W||_F^2
    return 1e-6 * tr / static_cast<double>(w.rows);
}

Mat ridge_dictionary_solve(const Mat& x, const Mat& w, double eps) {
    if (x.cols != w.cols)
        throw invalid_input_error("ridge_dictionary_solve: column counts differ");
    if (!(eps >= 0.0))
        throw invalid_input_error("ridge_dictionary_solve: ridge term must be nonnegative");
    std::size_t k = w.rows;
    std::size_t d = x.rows;
    std::size_t n = x.cols;

    // A = WW' + eps*I, accumulated over signals; zero coefficients skipped.
    Mat a(k, k);
    for (std::size_t i = 0; i < n; ++i) {
        const double* wi = w.col(i);
        for (std::size_t l = 0; l < k; ++l)
            if (wi[l] != 0.0) kernels::axpy(k, wi[l], wi, a.col(l));
    }
    for (std::size_t j = 0; j < k; ++j) a.at(j, j) += eps;

    // B = XW' (d x K).
    Mat b(d, k);
    for (std::size_t i = 0; i < n; ++i) {
        const double* wi = w.col(i);
        for (std::size_t l = 0; l < k; ++l)
            if (wi[l] != 0.0) kernels::axpy(d, wi[l], x.col(i), b.col(l));
    }

    if (!llt_factor(a)) {
        if (eps == 0.0)
            throw singular_matrix_error(
                "ridge_dictionary_solve: WW' is singular (some atom is never used); "
                "set ridge_epsilon > 0 or prune dead atoms");
        throw singular_matrix_error("ridge_dictionary_solve: WW' + eps*I is not positive definite");
    }
    Mat rhs = transpose_copy(b); // K x d, one solve column per signal dimension
    llt_solve(a, rhs);
    return transpose_copy(rhs);
}

namespace {

// Squared residual of each signal under the current dictionary and codes.
std::vector<double> column_residuals(const Mat& y, const Mat& atoms, const Mat& w) {
    std::vector<double> out(y.cols);
    std::vector<double> resid(y.rows);
    for (std::size_t i = 0; i < y.cols; ++i) {
        const double* x = y.col(i);
        const double* wi = w.col(i);
        resid.assign(x, x + y.rows);
        for (std::size_t k = 0; k < atoms.cols; ++k)
            if (wi[k] != 0.0) kernels::axpy(y.rows, -wi[k], atoms.col(k), resid.data());
        out[i] = norm2_sq_seq(y.rows, resid.data());
    }
    return out;
}

} // namespace

int atomwise_dict_update(const PatchMatrix& signals, const SparseCodes& codes, Dictionary& dict) {
    const Mat& y = signals.columns;
    const Mat& w = codes.w;
    if (w.cols != y.cols)
        throw invalid_input_error("atomwise_dict_update: code and signal counts differ");
    if (dict.dim() != y.rows || dict.size() != w.rows)
        throw invalid_input_error("atomwise_dict_update: dictionary does not match signals/codes");

    std::size_t d = y.rows;
    std::size_t k = w.rows;
    Mat& atoms = dict.atoms;

    // A = WW' and B = YW', accumulated over signals; zero coefficients skipped.
    Mat a(k, k);
    Mat b(d, k);
    for (std::size_t i = 0; i < y.cols; ++i) {
        const double* wi = w.col(i);
        for (std::size_t l = 0; l < k; ++l)
            if (wi[l] != 0.0) {
                kernels::axpy(k, wi[l], wi, a.col(l));
                kernels::axpy(d, wi[l], y.col(i), b.col(l));
            }
    }

    // Cyclic passes: each atom is set to the exact minimizer of the
    // reconstruction error over the unit sphere with everything else fixed.
    // For unit-norm d_j the block objective is A_jj - 2*d_j'v + const with
    // v = B_j - sum_{l != j} d_l*A_lj, so the minimizer is v/||v|| and each
    // replacement decreases the objective by 2*(||v|| - d_j'v) >= 0.
    std::vector<double> v(d);
    const int max_passes = 16;
    int passes = 0;
    double first_gain = -1.0;
    while (passes < max_passes) {
        double gain = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double* aj = a.col(j);
            if (aj[j] == 0.0) continue; // unused atom, replaced below
            std::copy(b.col(j), b.col(j) + d, v.data());
            for (std::size_t l = 0; l < k; ++l)
                if (l != j && aj[l] != 0.0) kernels::axpy(d, -aj[l], atoms.col(l), v.data());
            double nv = std::sqrt(norm2_sq_seq(d, v.data()));
            if (nv == 0.0) continue; // objective is flat in this atom
            gain += 2.0 * (nv - dot_seq(d, atoms.col(j), v.data()));
            std::copy(v.data(), v.data() + d, atoms.col(j));
            kernels::scale(d, 1.0 / nv, atoms.col(j));
        }
        ++passes;
        if (first_gain < 0.0) first_gain = gain;
        if (gain <= 1e-6 * first_gain) break;
    }

    // Replace atoms no signal uses with the worst-reconstructed signals,
    // normalized; their code rows are zero, so the objective is unchanged.
    // Largest residual first, ties broken toward lower indices.
    std::vector<std::size_t> dead;
    for (std::size_t j = 0; j < k; ++j)
        if (a.at(j, j) == 0.0) dead.push_back(j);
    if (!dead.empty()) {
        std::vector<double> res = column_residuals(y, atoms, w);
        std::vector<std::size_t> order(y.cols);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&res](std::size_t a, std::size_t b) { return res[a] > res[b]; });
        std::size_t next = 0;
        for (std::size_t j : dead) {
            while (next < order.size() && norm2_sq_seq(y.rows, y.col(order[next])) == 0.0)
                ++next;
            if (next >= order.size()) break; // nothing usable; keep the current atom
            const double* src = y.col(order[next]);
            std::copy(src, src + y.rows, atoms.col(j));
            double nrm = std::sqrt(norm2_sq_seq(y.rows, atoms.col(j)));
            kernels::scale(y.rows, 1.0 / nrm, atoms.col(j));
            ++next;
        }
    }
    return passes;
}

DictLearnResult dict_learn(const PatchMatrix& signals, const TrainConfig& config) {
    config.validate();
    const Mat& y = signals.columns;
    if (y.cols == 0) throw invalid_input_error("dict_learn: no training signals");
    if (!y.all_finite()) throw invalid_input_error("dict_learn: signals have non-finite entries");
    bool any_nonzero = false;
    for (std::size_t i = 0; i < y.cols && !any_nonzero; ++i)
        if (norm2_sq_seq(y.rows, y.col(i)) > 0.0) any_nonzero = true;
    if (!any_nonzero) throw invalid_input_error("dict_learn: all training signals are zero");
    if (config.dict_size > y.cols)
        throw invalid_input_error("dict_learn: dict_size exceeds the number of training signals");

    DictLearnResult res;
    res.dictionary = init_dictionary(signals, config.dict_size, config.seed);

    for (int it = 0; it < config.outer_iterations; ++it) {
        // Later iterations warm-start from the previous codes, which the
        // dictionary update leaves untouched; coordinate descent and the
        // atom updates are both non-increasing, so the objective descends
        // across every half-step.
        if (it == 0)
            res.codes = batch_code(signals, res.dictionary, config.lambda, config.solver);
        else
            res.codes =
                batch_code(signals, res.dictionary, config.lambda, config.solver, res.codes.w);
        res.trace.after_coding.push_back(
            dict_objective(y, res.dictionary.atoms, res.codes.w, config.lambda));

        atomwise_dict_update(signals, res.codes, res.dictionary);
        res.trace.after_update.push_back(
            dict_objective(y, res.dictionary.atoms, res.codes.w, config.lambda));
    }
    return res;
}

namespace {

Mat take_rows(const Mat& src, std::size_t row0, std::size_t nrows) {
    Mat out(nrows, src.cols);
    for (std::size_t j = 0; j < src.cols; ++j)
        std::copy(src.col(j) + row0, src.col(j) + row0 + nrows, out.col(j));
    return out;
}

} // namespace

JointTrainResult joint_train(const PatchMatrix& y, const PatchMatrix& x, const TrainConfig& config) {
    if (y.count() != x.count())
        throw invalid_input_error("joint_train: LR and HR column counts differ");
    std::size_t dl = y.columns.rows;
    std::size_t dh = x.columns.rows;
    std::size_t n = y.count();

    double wy = config.block_weighting ? 1.0 / std::sqrt(static_cast<double>(dl)) : 1.0;
    double wx = config.block_weighting ? 1.0 / std::sqrt(static_cast<double>(dh)) : 1.0;

    PatchMatrix stacked;
    stacked.columns = Mat(dl + dh, n);
    stacked.means.assign(n, 0.0);
    stacked.origins = y.origins;
    for (std::size_t i = 0; i < n; ++i) {
        double* dst = stacked.columns.col(i);
        const double* ys = y.columns.col(i);
        const double* xs = x.columns.col(i);
        for (std::size_t r = 0; r < dl; ++r) dst[r] = wy * ys[r];
        for (std::size_t r = 0; r < dh; ++r) dst[dl + r] = wx * xs[r];
    }

    DictLearnResult learned = dict_learn(stacked, config);

    JointTrainResult res;
    res.codes = std::move(learned.codes);
    res.trace = std::move(learned.trace);
    res.stacked = std::move(learned.dictionary.atoms);
    if (config.block_weighting) {
        // Undo the block weights so the halves live on the patch scale again.
        for (std::size_t j = 0; j < res.stacked.cols; ++j) {
            double* col = res.stacked.col(j);
            kernels::scale(dl, 1.0 / wy, col);
            kernels::scale(dh, 1.0 / wx, col + dl);
        }
    }

    res.d_lo = Dictionary(take_rows(res.stacked, 0, dl));
    res.d_hi = take_rows(res.stacked, dl, dh);

    bool renorm_lo = config.split_renorm != SplitRenorm::none;
    bool renorm_hi = config.split_renorm == SplitRenorm::both;
    if (renorm_lo) {
        for (std::size_t k = 0; k < res.d_lo.atoms.cols; ++k) {
            double nrm = std::sqrt(norm2_sq_seq(dl, res.d_lo.atoms.col(k)));
            if (nrm == 0.0) continue; // atom lives entirely in the HR block
            kernels::scale(dl, 1.0 / nrm, res.d_lo.atoms.col(k));
            for (std::size_t i = 0; i < res.codes.w.cols; ++i) res.codes.w.at(k, i) *= nrm;
        }
    }
    if (renorm_hi) {
        for (std::size_t k = 0; k < res.d_hi.cols; ++k) {
            double nrm = std::sqrt(norm2_sq_seq(dh, res.d_hi.col(k)));
            if (nrm == 0.0) continue;
            kernels::scale(dh, 1.0 / nrm, res.d_hi.col(k));
        }
    }
    return res;
}

DecoupledTrainResult decoupled_train(const PatchMatrix& y, const PatchMatrix& x,
                                     const TrainConfig& config) {
    if (y.count() != x.count())
        throw invalid_input_error("decoupled_train: LR and HR column counts differ");

    DictLearnResult learned = dict_learn(y, config);

    double eps = config.ridge_epsilon ? *config.ridge_epsilon : auto_ridge_epsilon(learned.codes.w);
    DecoupledTrainResult res;
    res.d_hi = ridge_dictionary_solve(x.columns, learned.codes.w, eps);
    res.d_lo = std::move(learned.dictionary);
    res.codes = std::move(learned.codes);
    res.trace = std::move(learned.trace);
    return res;
}

} // namespace ssr
