#include "ssr/sr_engine.hpp"

#include <chrono>
#include <cmath>

#include "ssr/errors.hpp"
#include "ssr/kernels.hpp"
#include "ssr/resize.hpp"
#include "ssr/threading.hpp"

namespace ssr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

const char* train_method_name(TrainMethod m) {
    return m == TrainMethod::joint ? "joint" : "decoupled";
}

TrainMethod parse_train_method(const std::string& name) {
    if (name == "joint") return TrainMethod::joint;
    if (name == "decoupled") return TrainMethod::decoupled;
    throw invalid_input_error("unknown training method '" + name +
                              "' (expected joint or decoupled)");
}

void DictionaryPair::validate() const {
    geometry.validate();
    auto p = static_cast<std::size_t>(geometry.lr_patch);
    auto hp = static_cast<std::size_t>(geometry.hr_patch());
    if (d_lo.dim() != p * p)
        throw invalid_input_error("DictionaryPair: LR dictionary rows do not match lr_patch^2");
    if (d_hi.rows != hp * hp)
        throw invalid_input_error("DictionaryPair: HR dictionary rows do not match hr_patch^2");
    if (d_hi.cols != d_lo.size())
        throw invalid_input_error("DictionaryPair: LR and HR dictionaries have different atom counts");
    if (d_lo.size() == 0)
        throw invalid_input_error("DictionaryPair: empty dictionary");
    if (!(lambda >= 0.0))
        throw invalid_input_error("DictionaryPair: lambda must be nonnegative");
    if (!d_lo.atoms.all_finite() || !d_hi.all_finite())
        throw invalid_input_error("DictionaryPair: non-finite dictionary entries");
}

DictionaryPair train_pair(const std::vector<GrayImage>& corpus, const TrainConfig& config,
                          const PatchGeometry& geom, TrainMethod method,
                          std::size_t patch_count, double variance_floor) {
    geom.validate();
    TrainingPairs pairs = sample_training_pairs(corpus, geom, patch_count, variance_floor,
                                                config.seed);
    DictionaryPair out;
    out.geometry = geom;
    out.lambda = config.lambda;
    out.method = method;
    if (method == TrainMethod::joint) {
        JointTrainResult r = joint_train(pairs.lr, pairs.hr, config);
        out.d_lo = std::move(r.d_lo);
        out.d_hi = std::move(r.d_hi);
    } else {
        DecoupledTrainResult r = decoupled_train(pairs.lr, pairs.hr, config);
        out.d_lo = std::move(r.d_lo);
        out.d_hi = std::move(r.d_hi);
    }
    out.validate();
    return out;
}

SRResult super_resolve(const GrayImage& lr, const DictionaryPair& pair,
                       const SolverSettings& settings, bool collect_codes) {
    pair.validate();
    settings.validate();
    auto p = static_cast<std::size_t>(pair.geometry.lr_patch);
    auto s = static_cast<std::size_t>(pair.geometry.scale);
    auto hp = static_cast<std::size_t>(pair.geometry.hr_patch());
    if (lr.rows < p || lr.cols < p)
        throw invalid_input_error("super_resolve: image smaller than the LR patch size");

    SRResult res;
    auto t_total = std::chrono::steady_clock::now();

    auto t0 = std::chrono::steady_clock::now();
    PatchMatrix patches = extract_lr_patches(lr, pair.geometry, MeanPolicy::subtract);
    res.timing.extract_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    SparseCodes codes = batch_code(patches, pair.d_lo, pair.lambda, settings);
    res.timing.code_s = seconds_since(t0);

    std::size_t n = patches.count();
    t0 = std::chrono::steady_clock::now();
    PatchMatrix hr;
    hr.columns = Mat(hp * hp, n);
    hr.means = patches.means;
    hr.origins.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        hr.origins[i] = {patches.origins[i].first * s, patches.origins[i].second * s};
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double* dst = hr.columns.col(i);
            const double* wi = codes.w.col(i);
            for (std::size_t k = 0; k < pair.d_hi.cols; ++k)
                if (wi[k] != 0.0) kernels::axpy(hp * hp, wi[k], pair.d_hi.col(k), dst);
            kernels::add_scalar(hp * hp, patches.means[i], dst);
        }
    });
    res.timing.reconstruct_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    res.image = assemble_hr_image(hr, lr.rows * s, lr.cols * s);
    res.timing.assemble_s = seconds_since(t0);
    res.timing.total_s = seconds_since(t_total);

    res.sparsity.patches = n;
    if (n > 0) {
        std::uint64_t total = 0;
        std::uint32_t lo = codes.nnz[0], hi = codes.nnz[0];
        std::size_t bad = 0;
        for (std::size_t i = 0; i < n; ++i) {
            total += codes.nnz[i];
            if (codes.nnz[i] < lo) lo = codes.nnz[i];
            if (codes.nnz[i] > hi) hi = codes.nnz[i];
            if (!codes.converged[i]) ++bad;
        }
        res.sparsity.mean_nnz = static_cast<double>(total) / static_cast<double>(n);
        res.sparsity.min_nnz = lo;
        res.sparsity.max_nnz = hi;
        res.sparsity.nonconverged_fraction = static_cast<double>(bad) / static_cast<double>(n);
    }

    if (collect_codes) {
        res.codes.resize(n);
        std::vector<double> resid(p * p);
        for (std::size_t i = 0; i < n; ++i) {
            const double* y = patches.columns.col(i);
            const double* wi = codes.w.col(i);
            resid.assign(y, y + p * p);
            for (std::size_t k = 0; k < pair.d_lo.size(); ++k)
                if (wi[k] != 0.0)
                    kernels::axpy(p * p, -wi[k], pair.d_lo.atoms.col(k), resid.data());
            res.codes[i] = {patches.origins[i].first, patches.origins[i].second, codes.nnz[i],
                            std::sqrt(norm2_sq_seq(p * p, resid.data()))};
        }
    }
    return res;
}

SRColorResult super_resolve_color(const ColorImage& lr, const DictionaryPair& pair,
                                  const SolverSettings& settings, bool collect_codes) {
    YCbCrImage planes = rgb_to_ycbcr(lr);
    SRResult luma = super_resolve(planes.y, pair, settings, collect_codes);

    YCbCrImage up;
    up.y = std::move(luma.image);
    up.cb = bicubic_upscale(planes.cb, pair.geometry.scale);
    up.cr = bicubic_upscale(planes.cr, pair.geometry.scale);

    SRColorResult res;
    res.image = ycbcr_to_rgb(up);
    res.sparsity = luma.sparsity;
    res.timing = luma.timing;
    res.codes = std::move(luma.codes);
    return res;
}

} // namespace ssr
