#pragma once

#include <string>

#include "ssr/image.hpp"

namespace ssr {

// Decoded image file: gray is always filled (BT.601 luma for color inputs);
// color is meaningful only when is_color is set.
struct LoadedImage {
    bool is_color = false;
    GrayImage gray;
    ColorImage color;
};

// Reads an 8-bit PNG or PGM file (format by content for PNG signature, else
// PGM). 16-bit files are rejected with an error naming the bit depth.
LoadedImage read_image(const std::string& path);

// Writes an 8-bit grayscale PNG or PGM, chosen by file extension
// (.png / .pgm). Values are clamped and rounded to nearest.
void write_gray(const std::string& path, const GrayImage& im);

// Writes an 8-bit RGB PNG. PGM cannot hold color and is rejected.
void write_color(const std::string& path, const ColorImage& im);

} // namespace ssr
