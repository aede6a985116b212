#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ssr/image.hpp"
#include "ssr/mat.hpp"

namespace ssr {

struct PatchGeometry {
    int lr_patch = 5;
    int scale = 2;
    int lr_stride = 1;

    int hr_patch() const { return lr_patch * scale; }
    void validate() const;
};

// Column-stacked vectorized patches. Each column is one patch in row-major
// pixel order; means[i] is the per-patch mean subtracted from column i (zero
// when no subtraction was applied); origins[i] is the top-left (row, col) of
// the patch in its source image.
struct PatchMatrix {
    Mat columns;
    std::vector<double> means;
    std::vector<std::pair<std::size_t, std::size_t>> origins;

    std::size_t count() const { return columns.cols; }
};

enum class MeanPolicy { subtract, keep };

// Top-left positions along one axis: multiples of stride, with a final
// position clamped to extent - patch so the edge is always covered.
std::vector<std::size_t> patch_positions(std::size_t extent, std::size_t patch, std::size_t stride);

// Overlapping patch grid in row-major origin order. With MeanPolicy::subtract
// each column has its mean removed and stored.
PatchMatrix extract_lr_patches(const GrayImage& lr, const PatchGeometry& geom,
                               MeanPolicy policy = MeanPolicy::subtract);

// Seeded random draw of aligned (LR, HR) patch pairs from a corpus. Each HR
// image is cropped to scale-divisible dimensions and reduced with degrade();
// LR patches with variance below variance_floor are rejected and redrawn.
// Both patches of a pair have the LR patch mean subtracted. Y holds the LR
// patches, X the HR patches; X origins are scale times the Y origins.
struct TrainingPairs {
    PatchMatrix lr, hr;
};
TrainingPairs sample_training_pairs(const std::vector<GrayImage>& hr_corpus,
                                    const PatchGeometry& geom, std::size_t count,
                                    double variance_floor, std::uint64_t seed);

// Overlap-average reconstruction: each output pixel is the plain average of
// all patch values covering it, clamped to [0, 255]. Patch origins are in
// output coordinates; a pixel no patch covers is a geometry bug and throws.
GrayImage assemble_hr_image(const PatchMatrix& patches, std::size_t rows, std::size_t cols);

} // namespace ssr
