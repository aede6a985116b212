#include "ssr/image_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include <png.h>

#include "ssr/errors.hpp"

namespace ssr {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::uint8_t quantize(double v) {
    if (v < 0.0) v = 0.0;
    if (v > 255.0) v = 255.0;
    return static_cast<std::uint8_t>(std::lrint(v));
}

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// ---- PNG ----

LoadedImage read_png(std::FILE* f, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw io_error("read_image: libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw io_error("read_image: libpng init failed");
    }
    std::vector<std::uint8_t> data;
    std::size_t width = 0, height = 0, channels = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error("read_image: corrupt PNG: " + path);
    }
    png_init_io(png, f);
    png_read_info(png, info);

    int depth = png_get_bit_depth(png, info);
    int ctype = png_get_color_type(png, info);
    if (depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error("read_image: " + path + " is 16-bit; only 8-bit images are supported");
    }
    if (ctype == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (ctype == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw io_error("read_image: unsupported channel count in " + path);
    }

    data.resize(width * height * channels);
    std::vector<png_bytep> rows(height);
    for (std::size_t r = 0; r < height; ++r) rows[r] = data.data() + r * width * channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    LoadedImage out;
    if (channels == 1) {
        out.gray = GrayImage(height, width);
        for (std::size_t i = 0; i < data.size(); ++i) out.gray.pix[i] = data[i];
    } else {
        out.is_color = true;
        out.color = ColorImage(height, width);
        for (std::size_t i = 0; i < width * height; ++i) {
            out.color.r[i] = data[3 * i];
            out.color.g[i] = data[3 * i + 1];
            out.color.b[i] = data[3 * i + 2];
        }
        out.gray = luma(out.color);
    }
    return out;
}

void write_png(const std::string& path, const std::uint8_t* data, std::size_t rows,
               std::size_t cols, int channels) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw io_error("write failed: cannot open " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw io_error("write failed: libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw io_error("write failed: libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw io_error("write failed: " + path);
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(cols), static_cast<png_uint_32>(rows), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rowptr(rows);
    for (std::size_t r = 0; r < rows; ++r)
        rowptr[r] = const_cast<png_bytep>(data + r * cols * channels);
    png_write_image(png, rowptr.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// ---- PGM ----

int pgm_next_value(std::FILE* f, const std::string& path) {
    int c;
    for (;;) {
        c = std::fgetc(f);
        if (c == '#') {
            while (c != EOF && c != '\n') c = std::fgetc(f);
        } else if (!std::isspace(c)) {
            break;
        }
    }
    int v = 0;
    bool any = false;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        any = true;
        c = std::fgetc(f);
    }
    if (!any) throw io_error("read_image: malformed PGM header in " + path);
    return v;
}

LoadedImage read_pgm(std::FILE* f, const std::string& path, bool binary) {
    int width = pgm_next_value(f, path);
    int height = pgm_next_value(f, path);
    int maxval = pgm_next_value(f, path);
    if (maxval > 255)
        throw io_error("read_image: " + path + " has 16-bit samples (maxval " +
                       std::to_string(maxval) + "); only 8-bit images are supported");
    if (width < 1 || height < 1 || maxval < 1)
        throw io_error("read_image: malformed PGM header in " + path);

    LoadedImage out;
    out.gray = GrayImage(static_cast<std::size_t>(height), static_cast<std::size_t>(width));
    std::size_t n = out.gray.pix.size();
    if (binary) {
        std::vector<std::uint8_t> buf(n);
        if (std::fread(buf.data(), 1, n, f) != n)
            throw io_error("read_image: truncated PGM data in " + path);
        for (std::size_t i = 0; i < n; ++i) out.gray.pix[i] = buf[i];
    } else {
        for (std::size_t i = 0; i < n; ++i)
            out.gray.pix[i] = pgm_next_value(f, path);
    }
    return out;
}

} // namespace

LoadedImage read_image(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw io_error("read_image: cannot open " + path);
    std::uint8_t sig[8] = {};
    std::size_t got = std::fread(sig, 1, 8, f.get());
    if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) {
        std::rewind(f.get());
        return read_png(f.get(), path);
    }
    if (got >= 2 && sig[0] == 'P' && (sig[1] == '5' || sig[1] == '2')) {
        std::fseek(f.get(), 2, SEEK_SET);
        return read_pgm(f.get(), path, sig[1] == '5');
    }
    throw io_error("read_image: " + path + " is neither PNG nor PGM");
}

void write_gray(const std::string& path, const GrayImage& im) {
    if (im.rows == 0 || im.cols == 0) throw invalid_input_error("write_gray: empty image");
    std::vector<std::uint8_t> bytes(im.pix.size());
    for (std::size_t i = 0; i < im.pix.size(); ++i) bytes[i] = quantize(im.pix[i]);
    if (has_suffix(path, ".png")) {
        write_png(path, bytes.data(), im.rows, im.cols, 1);
    } else if (has_suffix(path, ".pgm")) {
        FilePtr f(std::fopen(path.c_str(), "wb"));
        if (!f) throw io_error("write failed: cannot open " + path);
        std::fprintf(f.get(), "P5\n%zu %zu\n255\n", im.cols, im.rows);
        if (std::fwrite(bytes.data(), 1, bytes.size(), f.get()) != bytes.size())
            throw io_error("write failed: short write to " + path);
    } else {
        throw invalid_input_error("write_gray: unsupported extension (use .png or .pgm): " + path);
    }
}

void write_color(const std::string& path, const ColorImage& im) {
    if (im.rows == 0 || im.cols == 0) throw invalid_input_error("write_color: empty image");
    if (!has_suffix(path, ".png"))
        throw invalid_input_error("write_color: color output requires .png: " + path);
    std::vector<std::uint8_t> bytes(im.rows * im.cols * 3);
    for (std::size_t i = 0; i < im.rows * im.cols; ++i) {
        bytes[3 * i] = quantize(im.r[i]);
        bytes[3 * i + 1] = quantize(im.g[i]);
        bytes[3 * i + 2] = quantize(im.b[i]);
    }
    write_png(path, bytes.data(), im.rows, im.cols, 3);
}

} // namespace ssr
