#include "ssr/resize.hpp"

#include <cmath>

#include "ssr/errors.hpp"
#include "ssr/kernels.hpp"

namespace ssr {

namespace resize_detail {

double keys_cubic(double t) {
    t = std::fabs(t);
    if (t <= 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
    if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
    return 0.0;
}

namespace {

// Whole-sample mirror: ... 2 1 | 0 1 2 3 | 2 1 ...
// Keeps the parity structure of periodic patterns intact at the border,
// which is what makes a 0/255 checkerboard reduce to a uniform 127.5 plane.
std::size_t mirror_index(long k, std::size_t n) {
    if (n == 1) return 0;
    long period = 2 * (static_cast<long>(n) - 1);
    long m = k % period;
    if (m < 0) m += period;
    if (m >= static_cast<long>(n)) m = period - m;
    return static_cast<std::size_t>(m);
}

} // namespace

std::vector<std::pair<std::size_t, double>>
axis_taps(std::size_t n, std::size_t out_index, int scale, bool upscale) {
    double u;
    long first, last;
    double stretch;
    if (upscale) {
        u = (static_cast<double>(out_index) + 0.5) / scale - 0.5;
        first = static_cast<long>(std::floor(u)) - 1;
        last = first + 3;
        stretch = 1.0;
    } else {
        u = (static_cast<double>(out_index) + 0.5) * scale - 0.5;
        first = static_cast<long>(std::ceil(u - 2.0 * scale));
        last = static_cast<long>(std::floor(u + 2.0 * scale));
        stretch = static_cast<double>(scale);
    }

    // Fold out-of-range taps back with the mirror rule, accumulating weights
    // per source index in ascending tap order.
    std::vector<double> acc(n, 0.0);
    double wsum = 0.0;
    for (long k = first; k <= last; ++k) {
        double w = keys_cubic((static_cast<double>(k) - u) / stretch);
        if (w == 0.0) continue;
        acc[mirror_index(k, n)] += w;
        wsum += w;
    }
    std::vector<std::pair<std::size_t, double>> taps;
    for (std::size_t i = 0; i < n; ++i)
        if (acc[i] != 0.0) taps.emplace_back(i, acc[i] / wsum);
    return taps;
}

namespace {

// Vertical pass: each output row is an ordered weighted sum of input rows.
GrayImage resample_rows(const GrayImage& in, std::size_t out_rows, int scale, bool upscale) {
    GrayImage out(out_rows, in.cols);
    for (std::size_t r = 0; r < out_rows; ++r) {
        auto taps = axis_taps(in.rows, r, scale, upscale);
        double* dst = &out.pix[r * in.cols];
        for (const auto& [k, w] : taps)
            kernels::axpy(in.cols, w, &in.pix[k * in.cols], dst);
    }
    return out;
}

// Horizontal pass: ordered per-pixel reduction over the taps.
GrayImage resample_cols(const GrayImage& in, std::size_t out_cols, int scale, bool upscale) {
    GrayImage out(in.rows, out_cols);
    std::vector<std::vector<std::pair<std::size_t, double>>> taps(out_cols);
    for (std::size_t c = 0; c < out_cols; ++c)
        taps[c] = axis_taps(in.cols, c, scale, upscale);
    for (std::size_t r = 0; r < in.rows; ++r) {
        const double* src = &in.pix[r * in.cols];
        double* dst = &out.pix[r * out_cols];
        for (std::size_t c = 0; c < out_cols; ++c) {
            double s = 0.0;
            for (const auto& [k, w] : taps[c]) s += w * src[k];
            dst[c] = s;
        }
    }
    return out;
}

void check_image(const GrayImage& im, const char* who) {
    if (im.rows == 0 || im.cols == 0)
        throw invalid_input_error(std::string(who) + ": empty image");
}

} // namespace

} // namespace resize_detail

GrayImage degrade(const GrayImage& hr, int scale) {
    resize_detail::check_image(hr, "degrade");
    if (scale < 1) throw invalid_input_error("degrade: scale factor must be at least 1");
    if (scale == 1) return hr;
    if (hr.rows % scale != 0 || hr.cols % scale != 0)
        throw invalid_input_error("degrade: image dimensions must be divisible by the scale factor (crop first)");
    GrayImage tmp = resize_detail::resample_rows(hr, hr.rows / scale, scale, false);
    GrayImage out = resize_detail::resample_cols(tmp, hr.cols / scale, scale, false);
    kernels::clamp(out.pix.size(), 0.0, 255.0, out.pix.data());
    return out;
}

GrayImage bicubic_upscale(const GrayImage& lr, int scale) {
    resize_detail::check_image(lr, "bicubic_upscale");
    if (scale < 1) throw invalid_input_error("bicubic_upscale: scale factor must be at least 1");
    if (scale == 1) return lr;
    GrayImage tmp = resize_detail::resample_rows(lr, lr.rows * scale, scale, true);
    GrayImage out = resize_detail::resample_cols(tmp, lr.cols * scale, scale, true);
    kernels::clamp(out.pix.size(), 0.0, 255.0, out.pix.data());
    return out;
}

ColorImage bicubic_upscale(const ColorImage& lr, int scale) {
    ColorImage out(lr.rows * scale, lr.cols * scale);
    GrayImage plane(lr.rows, lr.cols);
    const std::vector<double>* src[3] = {&lr.r, &lr.g, &lr.b};
    std::vector<double>* dst[3] = {&out.r, &out.g, &out.b};
    for (int p = 0; p < 3; ++p) {
        plane.pix = *src[p];
        *dst[p] = bicubic_upscale(plane, scale).pix;
    }
    return out;
}

} // namespace ssr
