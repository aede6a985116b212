#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "ssr/metrics.hpp"

using namespace ssr;

namespace {

// Frozen 31-bit linear congruential sequence; pixel = bits 16..23 of the
// state. Fixing the generator here keeps the SSIM reference value meaningful
// forever, independent of library RNG choices.
GrayImage lcg_image(std::uint32_t seed, std::size_t rows, std::size_t cols) {
    GrayImage im(rows, cols);
    std::uint64_t x = seed;
    for (auto& p : im.pix) {
        x = (1103515245ull * x + 12345ull) % 2147483648ull;
        p = static_cast<double>((x >> 16) & 0xFF);
    }
    return im;
}

} // namespace

TEST_CASE("mse matches the hand-computed 2x2 example") {
    GrayImage a(2, 2), b(2, 2);
    a.at(0, 0) = 0;
    a.at(0, 1) = 0;
    a.at(1, 0) = 0;
    a.at(1, 1) = 0;
    b.at(0, 0) = 3;
    b.at(0, 1) = 4;
    b.at(1, 0) = 0;
    b.at(1, 1) = 0;
    // Differences (3, 4, 0, 0): (9 + 16 + 0 + 0) / 4 = 6.25 exactly.
    CHECK(mse(a, b) == 6.25);
    CHECK(mse(b, a) == 6.25); // symmetric bit for bit
}

TEST_CASE("psnr identities") {
    GrayImage a(4, 4), b(4, 4);
    for (std::size_t i = 0; i < 16; ++i) {
        a.pix[i] = static_cast<double>(i * 3);
        b.pix[i] = a.pix[i];
    }
    CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
    CHECK(psnr(a, b) == std::numeric_limits<double>::infinity());

    // MSE of exactly 1 gives the analytic constant 20*log10(255).
    b.pix = a.pix;
    for (std::size_t i = 0; i < 16; ++i) b.pix[i] += 1.0;
    CHECK(mse(a, b) == 1.0);
    CHECK(psnr(a, b) == doctest::Approx(48.130803608679).epsilon(1e-12));
}

TEST_CASE("psnr decreases as distortion grows") {
    GrayImage a(8, 8), b(8, 8);
    for (std::size_t i = 0; i < 64; ++i) a.pix[i] = 128.0;
    double prev = std::numeric_limits<double>::infinity();
    for (double noise : {0.5, 1.0, 2.0, 8.0, 32.0}) {
        for (std::size_t i = 0; i < 64; ++i) b.pix[i] = 128.0 + ((i % 2) ? noise : -noise);
        double p = psnr(a, b);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("metric dimension validation") {
    GrayImage a(2, 2), b(2, 3);
    CHECK_THROWS_AS(mse(a, b), invalid_input_error);
    CHECK_THROWS_AS(psnr(a, b), invalid_input_error);
    CHECK_THROWS_AS(ssim(a, b), invalid_input_error);
    GrayImage small(8, 8); // smaller than the 11x11 window
    CHECK_THROWS_AS(ssim(small, small), invalid_input_error);
}

TEST_CASE("ssim of an image with itself is exactly one") {
    GrayImage a = lcg_image(77, 16, 20);
    CHECK(ssim(a, a) == 1.0);

    GrayImage flat(12, 12);
    for (auto& p : flat.pix) p = 43.0;
    CHECK(ssim(flat, flat) == 1.0);
}

TEST_CASE("ssim matches the frozen reference value") {
    // Reference computed once with the standard scikit-image implementation
    // (gaussian_weights, sigma 1.5, full 11x11 windows, data_range 255):
    // A = lcg_image(1), B = floor((3A + lcg_image(2)) / 4), 16x16.
    GrayImage a = lcg_image(1, 16, 16);
    GrayImage b2 = lcg_image(2, 16, 16);
    GrayImage b(16, 16);
    for (std::size_t i = 0; i < b.pix.size(); ++i)
        b.pix[i] = std::floor((3.0 * a.pix[i] + b2.pix[i]) / 4.0);

    CHECK(ssim(a, b) == doctest::Approx(0.934090864241232).epsilon(1e-6));
    CHECK(ssim(b, a) == doctest::Approx(ssim(a, b)).epsilon(1e-12));
}

TEST_CASE("ssim drops as structure degrades") {
    GrayImage a = lcg_image(5, 24, 24);
    GrayImage half(24, 24), flat(24, 24);
    double mean = 0.0;
    for (double p : a.pix) mean += p;
    mean /= static_cast<double>(a.pix.size());
    for (std::size_t i = 0; i < a.pix.size(); ++i) {
        half.pix[i] = 0.5 * (a.pix[i] + mean);
        flat.pix[i] = mean;
    }
    double s_half = ssim(a, half);
    double s_flat = ssim(a, flat);
    CHECK(s_half < 1.0);
    CHECK(s_flat < s_half);
}

TEST_CASE("crop_border trims every side") {
    GrayImage a(6, 7);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 7; ++c) a.at(r, c) = static_cast<double>(10 * r + c);
    GrayImage t = crop_border(a, 2);
    REQUIRE(t.rows == 2);
    REQUIRE(t.cols == 3);
    CHECK(t.at(0, 0) == 22.0);
    CHECK(t.at(1, 2) == 34.0);
    CHECK_THROWS_AS(crop_border(a, 3), invalid_input_error); // nothing would remain
    GrayImage same = crop_border(a, 0);
    CHECK(same.pix == a.pix);
}
