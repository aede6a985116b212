#include <doctest.h>

#include <cmath>

#include "ssr/resize.hpp"
#include "ssr/rng.hpp"

using namespace ssr;
using resize_detail::axis_taps;
using resize_detail::keys_cubic;

namespace {

GrayImage random_image(std::size_t rows, std::size_t cols, Rng& rng) {
    GrayImage im(rows, cols);
    for (auto& p : im.pix) p = 255.0 * rng.unit();
    return im;
}

std::size_t mirror(long k, std::size_t n) {
    if (n == 1) return 0;
    long period = 2 * (static_cast<long>(n) - 1);
    long m = k % period;
    if (m < 0) m += period;
    if (m >= static_cast<long>(n)) m = period - m;
    return static_cast<std::size_t>(m);
}

// Direct 2D reduction: for each output pixel accumulate the full separable
// kernel over the mirrored neighborhood, then normalize. Slow but independent
// of the two-pass implementation.
double brute_degrade_pixel(const GrayImage& hr, int s, std::size_t orow, std::size_t ocol) {
    double ur = (static_cast<double>(orow) + 0.5) * s - 0.5;
    double uc = (static_cast<double>(ocol) + 0.5) * s - 0.5;
    long r0 = static_cast<long>(std::ceil(ur - 2.0 * s));
    long r1 = static_cast<long>(std::floor(ur + 2.0 * s));
    long c0 = static_cast<long>(std::ceil(uc - 2.0 * s));
    long c1 = static_cast<long>(std::floor(uc + 2.0 * s));
    double num = 0.0, den = 0.0;
    for (long r = r0; r <= r1; ++r) {
        double wr = keys_cubic((static_cast<double>(r) - ur) / s);
        for (long c = c0; c <= c1; ++c) {
            double wc = keys_cubic((static_cast<double>(c) - uc) / s);
            double w = wr * wc;
            num += w * hr.at(mirror(r, hr.rows), mirror(c, hr.cols));
            den += w;
        }
    }
    double v = num / den;
    return std::fmin(std::fmax(v, 0.0), 255.0);
}

} // namespace

TEST_CASE("keys_cubic interpolates constants and vanishes at integers") {
    CHECK(keys_cubic(0.0) == 1.0);
    CHECK(keys_cubic(1.0) == 0.0);
    CHECK(keys_cubic(-1.0) == 0.0);
    CHECK(keys_cubic(2.0) == 0.0);
    CHECK(keys_cubic(2.5) == 0.0);
    // Interior sample of the negative lobe.
    CHECK(keys_cubic(1.5) == doctest::Approx(-0.0625));
    CHECK(keys_cubic(0.5) == doctest::Approx(0.5625));
}

TEST_CASE("axis taps are normalized and within range") {
    for (bool up : {false, true})
        for (std::size_t n : {4u, 5u, 16u})
            for (std::size_t i = 0; i < (up ? n * 2 : n / 2); ++i) {
                auto taps = axis_taps(up ? n : n * 2, i, 2, up);
                REQUIRE(!taps.empty());
                double sum = 0.0;
                for (auto [k, w] : taps) {
                    CHECK(k < (up ? n : n * 2));
                    sum += w;
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            }
}

TEST_CASE("constant images stay constant under both operators") {
    GrayImage flat(12, 8);
    for (auto& p : flat.pix) p = 100.0;

    GrayImage down = degrade(flat, 2);
    REQUIRE(down.rows == 6);
    REQUIRE(down.cols == 4);
    for (double p : down.pix) CHECK(p == doctest::Approx(100.0).epsilon(1e-13));

    GrayImage up = bicubic_upscale(flat, 3);
    REQUIRE(up.rows == 36);
    REQUIRE(up.cols == 24);
    for (double p : up.pix) CHECK(p == doctest::Approx(100.0).epsilon(1e-13));
}

TEST_CASE("scale 1 is the identity") {
    Rng rng(3);
    GrayImage im = random_image(5, 7, rng);
    GrayImage d = degrade(im, 1);
    GrayImage u = bicubic_upscale(im, 1);
    CHECK(d.pix == im.pix);
    CHECK(u.pix == im.pix);
}

TEST_CASE("a 0/255 checkerboard reduces to a uniform mid plane") {
    GrayImage board(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) board.at(r, c) = ((r + c) % 2) ? 255.0 : 0.0;

    GrayImage out = degrade(board, 2);
    REQUIRE(out.rows == 2);
    REQUIRE(out.cols == 2);
    for (double p : out.pix) CHECK(p == doctest::Approx(127.5).epsilon(1e-12));

    // Larger board, same invariant.
    GrayImage big(8, 8);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c) big.at(r, c) = ((r + c) % 2) ? 255.0 : 0.0;
    GrayImage out2 = degrade(big, 2);
    for (double p : out2.pix) CHECK(p == doctest::Approx(127.5).epsilon(1e-12));
}

TEST_CASE("two-pass degrade matches the direct 2D computation") {
    Rng rng(9);
    for (int s : {2, 3}) {
        GrayImage hr = random_image(6 * static_cast<std::size_t>(s), 4 * static_cast<std::size_t>(s), rng);
        GrayImage out = degrade(hr, s);
        for (std::size_t r = 0; r < out.rows; ++r)
            for (std::size_t c = 0; c < out.cols; ++c)
                CHECK(out.at(r, c) ==
                      doctest::Approx(brute_degrade_pixel(hr, s, r, c)).epsilon(1e-12));
    }
}

TEST_CASE("upscale of a smooth ramp stays close to the analytic ramp") {
    GrayImage ramp(8, 8);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c) ramp.at(r, c) = 10.0 * static_cast<double>(c) + 50.0;

    GrayImage up = bicubic_upscale(ramp, 2);
    // Keys cubic reproduces linear functions exactly away from the mirror
    // border effects; check interior columns.
    for (std::size_t r = 2; r < up.rows - 2; ++r)
        for (std::size_t c = 3; c < up.cols - 3; ++c) {
            double x = (static_cast<double>(c) + 0.5) / 2.0 - 0.5;
            CHECK(up.at(r, c) == doctest::Approx(10.0 * x + 50.0).epsilon(1e-10));
        }
}

TEST_CASE("degrade then upscale is close to the original for smooth content") {
    GrayImage smooth(16, 16);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c)
            smooth.at(r, c) =
                128.0 + 60.0 * std::sin(0.3 * static_cast<double>(r)) *
                            std::cos(0.25 * static_cast<double>(c));
    GrayImage round = bicubic_upscale(degrade(smooth, 2), 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < smooth.pix.size(); ++i)
        worst = std::fmax(worst, std::fabs(round.pix[i] - smooth.pix[i]));
    CHECK(worst < 15.0); // low-frequency content survives the round trip
}

TEST_CASE("dimension and scale validation") {
    GrayImage im(5, 6);
    CHECK_THROWS_AS(degrade(im, 2), invalid_input_error); // 5 not divisible
    CHECK_THROWS_AS(degrade(im, 0), invalid_input_error);
    CHECK_THROWS_AS(bicubic_upscale(im, 0), invalid_input_error);
    GrayImage empty;
    CHECK_THROWS_AS(degrade(empty, 2), invalid_input_error);
    CHECK_THROWS_AS(bicubic_upscale(empty, 2), invalid_input_error);
}

TEST_CASE("outputs are clamped to [0, 255]") {
    // A bright dot on black overshoots with cubic lobes unless clamped.
    GrayImage im(8, 8);
    im.at(3, 3) = 255.0;
    im.at(3, 4) = 255.0;
    im.at(4, 3) = 255.0;
    im.at(4, 4) = 255.0;
    GrayImage up = bicubic_upscale(im, 2);
    for (double p : up.pix) {
        CHECK(p >= 0.0);
        CHECK(p <= 255.0);
    }
    GrayImage down = degrade(im, 2);
    for (double p : down.pix) {
        CHECK(p >= 0.0);
        CHECK(p <= 255.0);
    }
}

TEST_CASE("color upscale resamples each plane like the gray path") {
    Rng rng(15);
    ColorImage c(6, 6);
    for (auto& v : c.r) v = 255.0 * rng.unit();
    for (auto& v : c.g) v = 255.0 * rng.unit();
    for (auto& v : c.b) v = 255.0 * rng.unit();

    ColorImage up = bicubic_upscale(c, 2);
    REQUIRE(up.rows == 12);

    GrayImage plane(6, 6);
    plane.pix = c.g;
    GrayImage up_g = bicubic_upscale(plane, 2);
    CHECK(up.g == up_g.pix);
}
