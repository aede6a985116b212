#pragma once

#include "ssr/image.hpp"

namespace ssr {

// Mean squared error over all pixels; images must have equal dimensions.
double mse(const GrayImage& a, const GrayImage& b);

// 20*log10(255/sqrt(MSE)); +infinity for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

// Mean structural similarity: 11x11 Gaussian window (sigma 1.5), K1=0.01,
// K2=0.03, L=255, covariances uncorrected, windows fully inside the image.
double ssim(const GrayImage& a, const GrayImage& b);

// Drops a margin of pixels on every side (used by eval's border option).
GrayImage crop_border(const GrayImage& im, std::size_t margin);

} // namespace ssr
