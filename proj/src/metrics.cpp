#include "ssr/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "ssr/errors.hpp"
#include "ssr/kernels.hpp"
#include "ssr/mat.hpp"

namespace ssr {

namespace {

void check_same_dims(const GrayImage& a, const GrayImage& b, const char* who) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw invalid_input_error(std::string(who) + ": image dimensions differ");
    if (a.rows == 0 || a.cols == 0)
        throw invalid_input_error(std::string(who) + ": empty image");
}

constexpr int kWin = 11;

std::array<double, kWin> gaussian_window() {
    std::array<double, kWin> w{};
    double sum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        double d = i - (kWin - 1) / 2.0;
        w[i] = std::exp(-(d * d) / (2.0 * 1.5 * 1.5));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Valid-region separable filtering: output is (rows-10) x (cols-10).
GrayImage filter_valid(const GrayImage& im, const std::array<double, kWin>& w) {
    std::size_t or_ = im.rows - (kWin - 1);
    std::size_t oc = im.cols - (kWin - 1);
    GrayImage tmp(or_, im.cols);
    for (std::size_t r = 0; r < or_; ++r)
        for (std::size_t c = 0; c < im.cols; ++c) {
            double s = 0.0;
            for (int k = 0; k < kWin; ++k) s += w[k] * im.at(r + k, c);
            tmp.at(r, c) = s;
        }
    GrayImage out(or_, oc);
    for (std::size_t r = 0; r < or_; ++r)
        for (std::size_t c = 0; c < oc; ++c) {
            double s = 0.0;
            for (int k = 0; k < kWin; ++k) s += w[k] * tmp.at(r, c + k);
            out.at(r, c) = s;
        }
    return out;
}

GrayImage hadamard_image(const GrayImage& a, const GrayImage& b) {
    GrayImage out(a.rows, a.cols);
    kernels::hadamard(a.pix.size(), a.pix.data(), b.pix.data(), out.pix.data());
    return out;
}

} // namespace

double mse(const GrayImage& a, const GrayImage& b) {
    check_same_dims(a, b, "mse");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.pix.size(); ++i) {
        double d = a.pix[i] - b.pix[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.pix.size());
}

double psnr(const GrayImage& a, const GrayImage& b) {
    double m = mse(a, b);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(255.0 / std::sqrt(m));
}

double ssim(const GrayImage& a, const GrayImage& b) {
    check_same_dims(a, b, "ssim");
    if (a.rows < kWin || a.cols < kWin)
        throw invalid_input_error("ssim: images must be at least 11x11");

    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    auto w = gaussian_window();

    GrayImage mu1 = filter_valid(a, w);
    GrayImage mu2 = filter_valid(b, w);
    GrayImage saa = filter_valid(hadamard_image(a, a), w);
    GrayImage sbb = filter_valid(hadamard_image(b, b), w);
    GrayImage sab = filter_valid(hadamard_image(a, b), w);

    double acc = 0.0;
    for (std::size_t i = 0; i < mu1.pix.size(); ++i) {
        double m1 = mu1.pix[i];
        double m2 = mu2.pix[i];
        double v1 = saa.pix[i] - m1 * m1;
        double v2 = sbb.pix[i] - m2 * m2;
        double cov = sab.pix[i] - m1 * m2;
        double num = (2.0 * m1 * m2 + c1) * (2.0 * cov + c2);
        double den = (m1 * m1 + m2 * m2 + c1) * (v1 + v2 + c2);
        acc += num / den;
    }
    return acc / static_cast<double>(mu1.pix.size());
}

GrayImage crop_border(const GrayImage& im, std::size_t margin) {
    if (im.rows <= 2 * margin || im.cols <= 2 * margin)
        throw invalid_input_error("crop_border: margin leaves no pixels");
    GrayImage out(im.rows - 2 * margin, im.cols - 2 * margin);
    for (std::size_t r = 0; r < out.rows; ++r)
        for (std::size_t c = 0; c < out.cols; ++c)
            out.at(r, c) = im.at(r + margin, c + margin);
    return out;
}

} // namespace ssr
