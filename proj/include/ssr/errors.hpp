#pragma once

#include <stdexcept>
#include <string>

namespace ssr {

// Bad arguments: dimension mismatches, out-of-range settings, malformed
// requests. The CLI maps these to exit code 2.
struct invalid_input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A linear solve hit a non-positive pivot. The message names the matrix and
// the remedy (a positive ridge epsilon).
struct singular_matrix_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Patch extraction could not cover the image with the given geometry.
struct coverage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Training sampling rejected too many flat patches to fill the request.
struct corpus_too_flat_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File I/O and format problems (unreadable file, unsupported encoding,
// corrupt dictionary payload).
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ssr
