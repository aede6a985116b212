#pragma once

#include <string>

#include "ssr/sr_engine.hpp"

namespace ssr {

// Dictionary-pair container: magic "SRDICT1", a 32-bit little-endian header
// length, UTF-8 key=value header lines, then D_l and D_h as little-endian
// IEEE 64-bit floats in column-major order. Writing is byte-deterministic;
// read(write(pair)) reproduces the pair bit-exactly. See docs/srdict-format.md.
void write_dict_file(const std::string& path, const DictionaryPair& pair);

DictionaryPair read_dict_file(const std::string& path);

} // namespace ssr
