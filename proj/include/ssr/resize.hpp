#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ssr/image.hpp"

namespace ssr {

// Antialiased bicubic reduction by an integer factor. Dimensions must be
// divisible by the scale (crop beforehand); scale 1 is the identity. The
// cubic kernel is stretched by the scale factor so high frequencies are
// attenuated before decimation, borders use whole-sample mirroring, and
// values are clamped to [0, 255] at the end. See docs/resampling.md for the
// exact kernel and the scale-2 tap tables.
GrayImage degrade(const GrayImage& hr, int scale);

// Plain bicubic enlargement by an integer factor (no antialiasing), clamped
// to [0, 255].
GrayImage bicubic_upscale(const GrayImage& lr, int scale);

ColorImage bicubic_upscale(const ColorImage& lr, int scale);

namespace resize_detail {

// Piecewise cubic interpolation kernel with a = -0.5.
double keys_cubic(double t);

// Normalized taps (source index, weight) for one output sample on an axis of
// length n. upscale=false stretches the kernel by the scale factor.
std::vector<std::pair<std::size_t, double>>
axis_taps(std::size_t n, std::size_t out_index, int scale, bool upscale);

} // namespace resize_detail

} // namespace ssr
