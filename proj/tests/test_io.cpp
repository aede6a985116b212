#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "ssr/dict_io.hpp"
#include "ssr/image_io.hpp"
#include "ssr/rng.hpp"

using namespace ssr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ssr_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

GrayImage test_pattern(std::size_t rows, std::size_t cols) {
    GrayImage im(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            im.at(r, c) = static_cast<double>((r * 31 + c * 7) % 256);
    return im;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

DictionaryPair sample_pair(Rng& rng) {
    DictionaryPair pair;
    pair.geometry = PatchGeometry{3, 2, 1};
    pair.lambda = 0.15;
    pair.method = TrainMethod::decoupled;
    pair.d_lo = Dictionary(Mat(9, 7));
    for (auto& v : pair.d_lo.atoms.data) v = gaussian(rng);
    for (std::size_t k = 0; k < 7; ++k) {
        double n = std::sqrt(norm2_sq_seq(9, pair.d_lo.atoms.col(k)));
        for (std::size_t i = 0; i < 9; ++i) pair.d_lo.atoms.at(i, k) /= n;
    }
    pair.d_hi = Mat(36, 7);
    for (auto& v : pair.d_hi.data) v = 100.0 * gaussian(rng);
    pair.meta.emplace_back("seed", "42");
    pair.meta.emplace_back("note", "unit test pair");
    return pair;
}

} // namespace

TEST_CASE("PNG grayscale round-trip is bit-identical for integer pixels") {
    TempDir tmp;
    GrayImage im = test_pattern(17, 23);
    write_gray(tmp.file("a.png"), im);

    LoadedImage back = read_image(tmp.file("a.png"));
    CHECK(!back.is_color);
    REQUIRE(back.gray.rows == 17);
    REQUIRE(back.gray.cols == 23);
    CHECK(std::memcmp(back.gray.pix.data(), im.pix.data(), im.pix.size() * sizeof(double)) == 0);
}

TEST_CASE("PGM round-trip, both binary and ASCII variants read back") {
    TempDir tmp;
    GrayImage im = test_pattern(9, 11);
    write_gray(tmp.file("a.pgm"), im);
    LoadedImage back = read_image(tmp.file("a.pgm"));
    CHECK(!back.is_color);
    CHECK(back.gray.pix == im.pix);

    // Hand-written ASCII P2 file with a comment line.
    std::ofstream p2(tmp.file("b.pgm"));
    p2 << "P2\n# comment\n3 2\n255\n0 128 255\n1 2 3\n";
    p2.close();
    LoadedImage ascii = read_image(tmp.file("b.pgm"));
    REQUIRE(ascii.gray.rows == 2);
    REQUIRE(ascii.gray.cols == 3);
    CHECK(ascii.gray.at(0, 0) == 0.0);
    CHECK(ascii.gray.at(0, 1) == 128.0);
    CHECK(ascii.gray.at(0, 2) == 255.0);
    CHECK(ascii.gray.at(1, 2) == 3.0);
}

TEST_CASE("color PNG round-trip and luma computation") {
    TempDir tmp;
    ColorImage c(5, 4);
    for (std::size_t i = 0; i < c.r.size(); ++i) {
        c.r[i] = static_cast<double>((i * 13) % 256);
        c.g[i] = static_cast<double>((i * 29) % 256);
        c.b[i] = static_cast<double>((i * 47) % 256);
    }
    write_color(tmp.file("c.png"), c);

    LoadedImage back = read_image(tmp.file("c.png"));
    CHECK(back.is_color);
    CHECK(back.color.r == c.r);
    CHECK(back.color.g == c.g);
    CHECK(back.color.b == c.b);

    // gray plane is BT.601 luma of the color planes.
    for (std::size_t i = 0; i < c.r.size(); ++i)
        CHECK(back.gray.pix[i] ==
              doctest::Approx(0.299 * c.r[i] + 0.587 * c.g[i] + 0.114 * c.b[i]).epsilon(1e-12));

    // Pure white has luma exactly 255.
    ColorImage white(3, 3);
    for (std::size_t i = 0; i < 9; ++i) white.r[i] = white.g[i] = white.b[i] = 255.0;
    write_color(tmp.file("w.png"), white);
    LoadedImage wback = read_image(tmp.file("w.png"));
    for (double v : wback.gray.pix) CHECK(v == 255.0);
}

TEST_CASE("writer quantization clamps and rounds to nearest") {
    TempDir tmp;
    GrayImage im(1, 5);
    im.pix = {-3.0, 0.4, 127.5, 127.49, 300.0};
    write_gray(tmp.file("q.png"), im);
    LoadedImage back = read_image(tmp.file("q.png"));
    CHECK(back.gray.pix[0] == 0.0);
    CHECK(back.gray.pix[1] == 0.0);
    CHECK(back.gray.pix[2] == 128.0); // round to nearest, ties to even
    CHECK(back.gray.pix[3] == 127.0);
    CHECK(back.gray.pix[4] == 255.0);
}

TEST_CASE("16-bit inputs are rejected with the depth named") {
    TempDir tmp;
    // Minimal 16-bit PGM.
    std::ofstream p5(tmp.file("deep.pgm"), std::ios::binary);
    p5 << "P5\n2 1\n65535\n";
    p5.put(0x01).put(0x02).put(0x03).put(0x04);
    p5.close();
    CHECK_THROWS_WITH_AS(read_image(tmp.file("deep.pgm")),
                         doctest::Contains("16-bit"), io_error);
}

TEST_CASE("missing files and unknown formats raise io_error") {
    TempDir tmp;
    CHECK_THROWS_AS(read_image(tmp.file("nope.png")), io_error);

    std::ofstream junk(tmp.file("junk.png"), std::ios::binary);
    junk << "this is not an image";
    junk.close();
    CHECK_THROWS_AS(read_image(tmp.file("junk.png")), io_error);

    GrayImage im = test_pattern(3, 3);
    CHECK_THROWS_AS(write_gray(tmp.file("bad.jpeg"), im), invalid_input_error);

    ColorImage c(3, 3);
    CHECK_THROWS_AS(write_color(tmp.file("bad.pgm"), c), invalid_input_error);
}

TEST_CASE("dictionary file round-trip is bit-exact including metadata") {
    TempDir tmp;
    Rng rng(7);
    DictionaryPair pair = sample_pair(rng);
    write_dict_file(tmp.file("d.srdict"), pair);

    DictionaryPair back = read_dict_file(tmp.file("d.srdict"));
    CHECK(back.geometry.lr_patch == 3);
    CHECK(back.geometry.scale == 2);
    CHECK(back.geometry.lr_stride == 1);
    CHECK(back.lambda == pair.lambda);
    CHECK(back.method == TrainMethod::decoupled);
    CHECK(std::memcmp(back.d_lo.atoms.data.data(), pair.d_lo.atoms.data.data(),
                      pair.d_lo.atoms.data.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(back.d_hi.data.data(), pair.d_hi.data.data(),
                      pair.d_hi.data.size() * sizeof(double)) == 0);
    REQUIRE(back.meta.size() == 2);
    CHECK(back.meta[0] == std::make_pair(std::string("seed"), std::string("42")));
    CHECK(back.meta[1] == std::make_pair(std::string("note"), std::string("unit test pair")));
}

TEST_CASE("dictionary writes are byte-deterministic") {
    TempDir tmp;
    Rng rng(13);
    DictionaryPair pair = sample_pair(rng);
    write_dict_file(tmp.file("a.srdict"), pair);
    write_dict_file(tmp.file("b.srdict"), pair);
    CHECK(slurp(tmp.file("a.srdict")) == slurp(tmp.file("b.srdict")));
}

TEST_CASE("corrupted dictionary files are rejected") {
    TempDir tmp;
    Rng rng(19);
    DictionaryPair pair = sample_pair(rng);
    std::string path = tmp.file("d.srdict");
    write_dict_file(path, pair);
    std::string bytes = slurp(path);

    // Wrong magic.
    std::string bad = bytes;
    bad[0] = 'X';
    std::ofstream(tmp.file("magic.srdict"), std::ios::binary) << bad;
    CHECK_THROWS_AS(read_dict_file(tmp.file("magic.srdict")), io_error);

    // Truncated payload.
    std::ofstream(tmp.file("trunc.srdict"), std::ios::binary)
        << bytes.substr(0, bytes.size() - 9);
    CHECK_THROWS_AS(read_dict_file(tmp.file("trunc.srdict")), io_error);

    // Trailing garbage.
    std::ofstream(tmp.file("trail.srdict"), std::ios::binary) << bytes << "extra";
    CHECK_THROWS_AS(read_dict_file(tmp.file("trail.srdict")), io_error);

    CHECK_THROWS_AS(read_dict_file(tmp.file("missing.srdict")), io_error);
}
