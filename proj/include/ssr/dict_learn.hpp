#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ssr/dictionary.hpp"
#include "ssr/patch.hpp"
#include "ssr/sparse_coding.hpp"

namespace ssr {

// After splitting a jointly trained stacked dictionary, which halves get an
// independent column renormalization. lr_only rescales code rows so the LR
// reconstruction D_l*W is preserved; the HR half stays exactly as split.
enum class SplitRenorm { lr_only, both, none };

struct TrainConfig {
    std::size_t dict_size = 1024;
    double lambda = 0.15;
    int outer_iterations = 40;
    SolverSettings solver;
    std::uint64_t seed = 0;
    // Ridge term for the decoupled method's closed-form HR solve. Unset
    // means the scale-aware default 1e-6 * trace(WW')/K; an explicit 0 is
    // honored and may raise a singularity error. Joint training ignores it.
    std::optional<double> ridge_epsilon;
    bool block_weighting = false; // weight stacked blocks by 1/sqrt(dim)
    SplitRenorm split_renorm = SplitRenorm::lr_only;

    void validate() const;
};

// Objective value after each half-step of the alternation.
struct DictLearnTrace {
    std::vector<double> after_coding;
    std::vector<double> after_update;
};

struct DictLearnResult {
    Dictionary dictionary;
    SparseCodes codes; // final codes, rows rescaled to match the returned atoms
    DictLearnTrace trace;
};

struct JointTrainResult {
    Dictionary d_lo;
    Mat d_hi;
    SparseCodes codes;
    DictLearnTrace trace;
    Mat stacked; // concatenated-space dictionary before the split renorms
};

struct DecoupledTrainResult {
    Dictionary d_lo;
    Mat d_hi;
    SparseCodes codes;
    DictLearnTrace trace;
};

// K distinct nonzero signal columns drawn uniformly (seeded), normalized.
Dictionary init_dictionary(const PatchMatrix& signals, std::size_t dict_size, std::uint64_t seed);

// ||Y - DW||_F^2 + lambda*sum|W|, by explicit residual.
double dict_objective(const Mat& signals, const Mat& atoms, const Mat& w, double lambda);

// Scale-aware default ridge term: 1e-6 * trace(WW')/K.
double auto_ridge_epsilon(const Mat& w);

// Closed-form ridge least squares D = X*W'*(WW' + eps*I)^-1.
Mat ridge_dictionary_solve(const Mat& x, const Mat& w, double eps);

// Cyclic per-atom dictionary refinement at fixed codes: every unit-norm
// atom is replaced by the exact minimizer of ||Y - DW||_F^2 over the unit
// sphere with all other atoms fixed, so the objective never increases.
// Atoms whose code row is all zero are replaced by the normalized
// worst-reconstructed signals, which leaves the objective unchanged.
// Returns the number of passes over the atoms.
int atomwise_dict_update(const PatchMatrix& signals, const SparseCodes& codes, Dictionary& dict);

// Alternates batch_code and atomwise_dict_update from a seeded signal
// sample. The objective is non-increasing across every recorded half-step.
DictLearnResult dict_learn(const PatchMatrix& signals, const TrainConfig& config);

// Baseline: dict_learn on the stacked [Y; X] columns, then split into the LR
// and HR halves with the configured renormalization.
JointTrainResult joint_train(const PatchMatrix& y, const PatchMatrix& x, const TrainConfig& config);

// Proposed method: dict_learn on Y alone, then the closed-form HR dictionary
// for the final codes, with no renormalization and no further code update.
DecoupledTrainResult decoupled_train(const PatchMatrix& y, const PatchMatrix& x,
                                     const TrainConfig& config);

} // namespace ssr
