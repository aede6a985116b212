#pragma once

#include <cstddef>

namespace ssr::kernels {

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);

// Lanewise primitive table. Every entry maps element i of the inputs to
// element i of the output with the same scalar operation sequence, so all
// backends produce bit-identical results. Reductions are deliberately absent:
// those stay in ordered scalar code (see mat.hpp).
struct Ops {
    // y[i] += a * x[i]
    void (*axpy)(std::size_t n, double a, const double* x, double* y);
    // x[i] *= a
    void (*scale)(std::size_t n, double a, double* x);
    // x[i] += a
    void (*add_scalar)(std::size_t n, double a, double* x);
    // y[i] += x[i]
    void (*add)(std::size_t n, const double* x, double* y);
    // x[i] = min(max(x[i], lo), hi)
    void (*clamp)(std::size_t n, double lo, double hi, double* x);
    // out[i] = x[i] * y[i]
    void (*hadamard)(std::size_t n, const double* x, const double* y, double* out);
};

// Table for one backend. Throws invalid_input_error if the backend is not
// compiled in or the CPU lacks it.
const Ops& ops(Backend b);

bool backend_available(Backend b);

// Backend chosen on first use: the SRTOOL_KERNELS environment variable
// (auto|scalar|avx2|neon) if set, otherwise the widest available.
Backend active_backend();

inline void axpy(std::size_t n, double a, const double* x, double* y) {
    ops(active_backend()).axpy(n, a, x, y);
}
inline void scale(std::size_t n, double a, double* x) {
    ops(active_backend()).scale(n, a, x);
}
inline void add_scalar(std::size_t n, double a, double* x) {
    ops(active_backend()).add_scalar(n, a, x);
}
inline void add(std::size_t n, const double* x, double* y) {
    ops(active_backend()).add(n, x, y);
}
inline void clamp(std::size_t n, double lo, double hi, double* x) {
    ops(active_backend()).clamp(n, lo, hi, x);
}
inline void hadamard(std::size_t n, const double* x, const double* y, double* out) {
    ops(active_backend()).hadamard(n, x, y, out);
}

} // namespace ssr::kernels
