#include "ssr/dict_io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

namespace {

constexpr char kMagic[7] = {'S', 'R', 'D', 'I', 'C', 'T', '1'};

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void put_u32le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f64le(std::vector<std::uint8_t>& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xff));
}

double take_f64le(const std::uint8_t* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

void append_line(std::string& header, const std::string& key, const std::string& value) {
    if (key.empty() || key.find('=') != std::string::npos || key.find('\n') != std::string::npos)
        throw invalid_input_error("write_dict_file: bad header key: " + key);
    if (value.find('\n') != std::string::npos)
        throw invalid_input_error("write_dict_file: header value must not contain newlines");
    header += key;
    header += '=';
    header += value;
    header += '\n';
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_dict_file(const std::string& path, const DictionaryPair& pair) {
    pair.validate();

    std::string header;
    append_line(header, "lr_patch", std::to_string(pair.geometry.lr_patch));
    append_line(header, "scale", std::to_string(pair.geometry.scale));
    append_line(header, "lr_stride", std::to_string(pair.geometry.lr_stride));
    append_line(header, "dict_size", std::to_string(pair.d_lo.size()));
    append_line(header, "lambda", fmt_double(pair.lambda));
    append_line(header, "method", train_method_name(pair.method));
    for (const auto& [k, v] : pair.meta) append_line(header, k, v);

    if (header.size() > 0xffffffffu)
        throw invalid_input_error("write_dict_file: header too large");

    std::string prefix(kMagic, sizeof kMagic);
    put_u32le(prefix, static_cast<std::uint32_t>(header.size()));

    std::vector<std::uint8_t> payload;
    payload.reserve(8 * (pair.d_lo.atoms.data.size() + pair.d_hi.data.size()));
    for (double v : pair.d_lo.atoms.data) append_f64le(payload, v);
    for (double v : pair.d_hi.data) append_f64le(payload, v);

    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw io_error("write_dict_file: cannot open " + path);
    if (std::fwrite(prefix.data(), 1, prefix.size(), f.get()) != prefix.size() ||
        std::fwrite(header.data(), 1, header.size(), f.get()) != header.size() ||
        std::fwrite(payload.data(), 1, payload.size(), f.get()) != payload.size())
        throw io_error("write_dict_file: short write to " + path);
}

DictionaryPair read_dict_file(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw io_error("read_dict_file: cannot open " + path);

    std::uint8_t magic[sizeof kMagic];
    if (std::fread(magic, 1, sizeof magic, f.get()) != sizeof magic ||
        std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw io_error("read_dict_file: " + path + " does not start with the SRDICT1 magic");

    std::uint8_t lenb[4];
    if (std::fread(lenb, 1, 4, f.get()) != 4)
        throw io_error("read_dict_file: truncated header in " + path);
    std::uint32_t hlen = 0;
    for (int i = 0; i < 4; ++i) hlen |= static_cast<std::uint32_t>(lenb[i]) << (8 * i);

    std::string header(hlen, '\0');
    if (std::fread(header.data(), 1, hlen, f.get()) != hlen)
        throw io_error("read_dict_file: truncated header in " + path);

    DictionaryPair pair;
    long lr_patch = -1, scale = -1, lr_stride = -1, dict_size = -1;
    bool have_lambda = false, have_method = false;

    std::size_t pos = 0;
    while (pos < header.size()) {
        std::size_t nl = header.find('\n', pos);
        if (nl == std::string::npos)
            throw io_error("read_dict_file: unterminated header line in " + path);
        std::string line = header.substr(pos, nl - pos);
        pos = nl + 1;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw io_error("read_dict_file: malformed header line '" + line + "' in " + path);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);

        try {
            if (key == "lr_patch") lr_patch = std::stol(value);
            else if (key == "scale") scale = std::stol(value);
            else if (key == "lr_stride") lr_stride = std::stol(value);
            else if (key == "dict_size") dict_size = std::stol(value);
            else if (key == "lambda") { pair.lambda = std::stod(value); have_lambda = true; }
            else if (key == "method") { pair.method = parse_train_method(value); have_method = true; }
            else pair.meta.emplace_back(key, value);
        } catch (const invalid_input_error&) {
            throw io_error("read_dict_file: bad method value '" + value + "' in " + path);
        } catch (const std::exception&) {
            throw io_error("read_dict_file: bad numeric value for " + key + " in " + path);
        }
    }
    if (lr_patch < 0 || scale < 0 || lr_stride < 0 || dict_size < 0 || !have_lambda || !have_method)
        throw io_error("read_dict_file: header missing required keys in " + path);

    pair.geometry.lr_patch = static_cast<int>(lr_patch);
    pair.geometry.scale = static_cast<int>(scale);
    pair.geometry.lr_stride = static_cast<int>(lr_stride);

    std::size_t d_lo = static_cast<std::size_t>(lr_patch) * lr_patch;
    std::size_t d_hi = static_cast<std::size_t>(lr_patch) * scale * lr_patch * scale;
    std::size_t k = static_cast<std::size_t>(dict_size);
    std::size_t want = 8 * k * (d_lo + d_hi);

    std::vector<std::uint8_t> payload(want);
    if (std::fread(payload.data(), 1, want, f.get()) != want)
        throw io_error("read_dict_file: payload shorter than dictionary dimensions imply in " + path);
    std::uint8_t extra;
    if (std::fread(&extra, 1, 1, f.get()) == 1)
        throw io_error("read_dict_file: trailing bytes after payload in " + path);

    pair.d_lo.atoms = Mat(d_lo, k);
    pair.d_hi = Mat(d_hi, k);
    const std::uint8_t* p = payload.data();
    for (double& v : pair.d_lo.atoms.data) { v = take_f64le(p); p += 8; }
    for (double& v : pair.d_hi.data) { v = take_f64le(p); p += 8; }

    pair.validate();
    return pair;
}

} // namespace ssr
