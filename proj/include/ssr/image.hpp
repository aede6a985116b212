#pragma once

#include <cstddef>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

// Grayscale image, row-major, intensities nominally in [0, 255].
struct GrayImage {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pix;

    GrayImage() = default;
    GrayImage(std::size_t r, std::size_t c) : rows(r), cols(c), pix(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return pix[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return pix[r * cols + c]; }
};

// Planar RGB image, each plane row-major in [0, 255].
struct ColorImage {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> r, g, b;

    ColorImage() = default;
    ColorImage(std::size_t rr, std::size_t cc)
        : rows(rr), cols(cc), r(rr * cc, 0.0), g(rr * cc, 0.0), b(rr * cc, 0.0) {}
};

struct YCbCrImage {
    GrayImage y, cb, cr;
};

// BT.601 luma.
inline GrayImage luma(const ColorImage& im) {
    GrayImage out(im.rows, im.cols);
    for (std::size_t i = 0; i < im.r.size(); ++i)
        out.pix[i] = 0.299 * im.r[i] + 0.587 * im.g[i] + 0.114 * im.b[i];
    return out;
}

inline YCbCrImage rgb_to_ycbcr(const ColorImage& im) {
    YCbCrImage out;
    out.y = GrayImage(im.rows, im.cols);
    out.cb = GrayImage(im.rows, im.cols);
    out.cr = GrayImage(im.rows, im.cols);
    for (std::size_t i = 0; i < im.r.size(); ++i) {
        double y = 0.299 * im.r[i] + 0.587 * im.g[i] + 0.114 * im.b[i];
        out.y.pix[i] = y;
        out.cb.pix[i] = 128.0 + (im.b[i] - y) * 0.564;
        out.cr.pix[i] = 128.0 + (im.r[i] - y) * 0.713;
    }
    return out;
}

inline ColorImage ycbcr_to_rgb(const YCbCrImage& im) {
    const GrayImage& y = im.y;
    if (im.cb.rows != y.rows || im.cb.cols != y.cols ||
        im.cr.rows != y.rows || im.cr.cols != y.cols)
        throw invalid_input_error("ycbcr_to_rgb: plane sizes differ");
    ColorImage out(y.rows, y.cols);
    for (std::size_t i = 0; i < y.pix.size(); ++i) {
        double r = y.pix[i] + (im.cr.pix[i] - 128.0) / 0.713;
        double b = y.pix[i] + (im.cb.pix[i] - 128.0) / 0.564;
        double g = (y.pix[i] - 0.299 * r - 0.114 * b) / 0.587;
        double clampv[3] = {r, g, b};
        for (double& v : clampv) {
            if (v < 0.0) v = 0.0;
            if (v > 255.0) v = 255.0;
        }
        out.r[i] = clampv[0];
        out.g[i] = clampv[1];
        out.b[i] = clampv[2];
    }
    return out;
}

} // namespace ssr
