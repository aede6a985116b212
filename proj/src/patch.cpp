#include "ssr/patch.hpp"

#include <cmath>
#include <string>

#include "ssr/errors.hpp"
#include "ssr/kernels.hpp"
#include "ssr/resize.hpp"
#include "ssr/rng.hpp"

namespace ssr {

void PatchGeometry::validate() const {
    if (lr_patch < 1) throw invalid_input_error("PatchGeometry: lr_patch must be at least 1");
    if (scale < 1) throw invalid_input_error("PatchGeometry: scale must be at least 1");
    if (lr_stride < 1 || lr_stride > lr_patch)
        throw invalid_input_error("PatchGeometry: lr_stride must satisfy 1 <= lr_stride <= lr_patch");
}

std::vector<std::size_t> patch_positions(std::size_t extent, std::size_t patch, std::size_t stride) {
    if (patch > extent)
        throw invalid_input_error("patch_positions: patch larger than image extent");
    std::size_t limit = extent - patch;
    std::vector<std::size_t> pos;
    for (std::size_t k = 0;; ++k) {
        std::size_t p = k * stride;
        if (p >= limit) {
            if (pos.empty() || pos.back() != limit) pos.push_back(limit);
            break;
        }
        pos.push_back(p);
    }
    return pos;
}

namespace {

// Copies the patch at (r0, c0) into dst as one row-major column; returns its mean.
double copy_patch(const GrayImage& im, std::size_t r0, std::size_t c0, std::size_t p, double* dst) {
    std::size_t idx = 0;
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < p; ++c)
            dst[idx++] = im.at(r0 + r, c0 + c);
    return sum_seq(idx, dst) / static_cast<double>(idx);
}

double patch_variance(std::size_t n, const double* v) {
    double mean = sum_seq(n, v) / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = v[i] - mean;
        acc += d * d;
    }
    return acc / static_cast<double>(n);
}

} // namespace

PatchMatrix extract_lr_patches(const GrayImage& lr, const PatchGeometry& geom, MeanPolicy policy) {
    geom.validate();
    auto p = static_cast<std::size_t>(geom.lr_patch);
    if (lr.rows < p || lr.cols < p)
        throw invalid_input_error("extract_lr_patches: image smaller than the patch size");

    auto rows_pos = patch_positions(lr.rows, p, static_cast<std::size_t>(geom.lr_stride));
    auto cols_pos = patch_positions(lr.cols, p, static_cast<std::size_t>(geom.lr_stride));

    PatchMatrix out;
    out.columns = Mat(p * p, rows_pos.size() * cols_pos.size());
    out.means.resize(out.columns.cols, 0.0);
    out.origins.reserve(out.columns.cols);

    std::size_t i = 0;
    for (std::size_t r : rows_pos) {
        for (std::size_t c : cols_pos) {
            double* col = out.columns.col(i);
            double mean = copy_patch(lr, r, c, p, col);
            if (policy == MeanPolicy::subtract) {
                kernels::add_scalar(p * p, -mean, col);
                out.means[i] = mean;
            }
            out.origins.emplace_back(r, c);
            ++i;
        }
    }
    return out;
}

TrainingPairs sample_training_pairs(const std::vector<GrayImage>& hr_corpus,
                                    const PatchGeometry& geom, std::size_t count,
                                    double variance_floor, std::uint64_t seed) {
    geom.validate();
    if (hr_corpus.empty())
        throw invalid_input_error("sample_training_pairs: empty corpus");

    auto p = static_cast<std::size_t>(geom.lr_patch);
    auto s = static_cast<std::size_t>(geom.scale);
    std::size_t hp = p * s;

    // Crop to scale-divisible dimensions and precompute the LR counterparts.
    std::vector<GrayImage> hr, lr;
    hr.reserve(hr_corpus.size());
    lr.reserve(hr_corpus.size());
    for (const GrayImage& im : hr_corpus) {
        GrayImage cropped(im.rows - im.rows % s, im.cols - im.cols % s);
        if (cropped.rows < hp || cropped.cols < hp)
            throw invalid_input_error("sample_training_pairs: corpus image smaller than one HR patch");
        for (std::size_t r = 0; r < cropped.rows; ++r)
            for (std::size_t c = 0; c < cropped.cols; ++c)
                cropped.at(r, c) = im.at(r, c);
        lr.push_back(degrade(cropped, geom.scale));
        hr.push_back(std::move(cropped));
    }

    TrainingPairs out;
    out.lr.columns = Mat(p * p, count);
    out.hr.columns = Mat(hp * hp, count);
    out.lr.means.resize(count, 0.0);
    out.hr.means.resize(count, 0.0);
    out.lr.origins.reserve(count);
    out.hr.origins.reserve(count);

    Rng rng(seed);
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    std::size_t max_attempts = count * 100;
    while (accepted < count) {
        if (attempts >= max_attempts)
            throw corpus_too_flat_error(
                "sample_training_pairs: could not collect " + std::to_string(count) +
                " patch pairs after " + std::to_string(max_attempts) +
                " draws; variance floor " + std::to_string(variance_floor) +
                " rejects nearly every patch");
        ++attempts;

        std::size_t img = rng.bounded(lr.size());
        const GrayImage& l = lr[img];
        std::size_t r0 = rng.bounded(l.rows - p + 1);
        std::size_t c0 = rng.bounded(l.cols - p + 1);

        double* ycol = out.lr.columns.col(accepted);
        double mean = copy_patch(l, r0, c0, p, ycol);
        kernels::add_scalar(p * p, -mean, ycol);
        if (patch_variance(p * p, ycol) < variance_floor) continue;

        double* xcol = out.hr.columns.col(accepted);
        copy_patch(hr[img], r0 * s, c0 * s, hp, xcol);
        kernels::add_scalar(hp * hp, -mean, xcol);

        out.lr.means[accepted] = mean;
        out.hr.means[accepted] = mean;
        out.lr.origins.emplace_back(r0, c0);
        out.hr.origins.emplace_back(r0 * s, c0 * s);
        ++accepted;
    }
    return out;
}

GrayImage assemble_hr_image(const PatchMatrix& patches, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0)
        throw invalid_input_error("assemble_hr_image: empty output dimensions");
    std::size_t d = patches.columns.rows;
    auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
    if (d == 0 || side * side != d)
        throw invalid_input_error("assemble_hr_image: columns are not square patches");
    if (patches.origins.size() != patches.count())
        throw invalid_input_error("assemble_hr_image: origin count does not match column count");

    GrayImage sum(rows, cols);
    std::vector<std::uint32_t> cover(rows * cols, 0);
    for (std::size_t i = 0; i < patches.count(); ++i) {
        auto [r0, c0] = patches.origins[i];
        if (r0 + side > rows || c0 + side > cols)
            throw invalid_input_error("assemble_hr_image: patch exceeds output bounds");
        const double* col = patches.columns.col(i);
        std::size_t idx = 0;
        for (std::size_t r = 0; r < side; ++r) {
            for (std::size_t c = 0; c < side; ++c) {
                sum.at(r0 + r, c0 + c) += col[idx++];
                ++cover[(r0 + r) * cols + c0 + c];
            }
        }
    }

    for (std::size_t i = 0; i < sum.pix.size(); ++i) {
        if (cover[i] == 0)
            throw coverage_error("assemble_hr_image: pixel " + std::to_string(i / cols) + "," +
                                 std::to_string(i % cols) + " covered by no patch");
        sum.pix[i] /= static_cast<double>(cover[i]);
    }
    kernels::clamp(sum.pix.size(), 0.0, 255.0, sum.pix.data());
    return sum;
}

} // namespace ssr
