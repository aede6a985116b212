#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ssr/dict_learn.hpp"
#include "ssr/dictionary.hpp"
#include "ssr/image.hpp"
#include "ssr/patch.hpp"
#include "ssr/sparse_coding.hpp"

namespace ssr {

enum class TrainMethod { joint, decoupled };

const char* train_method_name(TrainMethod m);
TrainMethod parse_train_method(const std::string& name);

// Everything inference needs: the LR coding dictionary (unit-norm atoms),
// the HR reconstruction matrix (not norm-constrained), the patch geometry,
// and the training lambda, which is also used for coding at inference.
struct DictionaryPair {
    Dictionary d_lo;
    Mat d_hi;
    PatchGeometry geometry;
    double lambda = 0.15;
    TrainMethod method = TrainMethod::decoupled;
    std::vector<std::pair<std::string, std::string>> meta; // provenance key/values

    void validate() const;
};

struct SparsityStats {
    std::size_t patches = 0;
    double mean_nnz = 0.0;
    std::uint32_t min_nnz = 0;
    std::uint32_t max_nnz = 0;
    double nonconverged_fraction = 0.0;
};

struct StageTimings {
    double extract_s = 0.0;
    double code_s = 0.0;
    double reconstruct_s = 0.0;
    double assemble_s = 0.0;
    double total_s = 0.0;
};

// Per-patch record for diagnostics dumps: origin, sparsity, coding residual.
struct PatchCodeInfo {
    std::size_t row = 0, col = 0;
    std::uint32_t nnz = 0;
    double residual = 0.0; // ||y - D_l w||_2
};

struct SRResult {
    GrayImage image;
    SparsityStats sparsity;
    StageTimings timing;
    std::vector<PatchCodeInfo> codes; // filled when collect_codes is set
};

struct SRColorResult {
    ColorImage image;
    SparsityStats sparsity;
    StageTimings timing;
    std::vector<PatchCodeInfo> codes; // luma-channel codes when collect_codes is set
};

// Samples training pairs from the corpus and trains a dictionary pair with
// the requested method.
DictionaryPair train_pair(const std::vector<GrayImage>& corpus, const TrainConfig& config,
                          const PatchGeometry& geom, TrainMethod method,
                          std::size_t patch_count, double variance_floor);

// Patch-wise sparse-coding super-resolution of a grayscale image. Output is
// exactly scale times the input in each dimension.
SRResult super_resolve(const GrayImage& lr, const DictionaryPair& pair,
                       const SolverSettings& settings, bool collect_codes = false);

// Color pipeline: the luma channel goes through super_resolve, chroma is
// bicubically upscaled, everything reassembled in RGB.
SRColorResult super_resolve_color(const ColorImage& lr, const DictionaryPair& pair,
                                  const SolverSettings& settings, bool collect_codes = false);

} // namespace ssr
