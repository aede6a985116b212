#include "ssr/kernels.hpp"

#include <cstdlib>
#include <string>

#include "ssr/errors.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace ssr::kernels {

namespace detail {
// Defined in kernels_avx2.cpp; returns nullptr when not compiled for x86.
const Ops* avx2_ops();
} // namespace detail

namespace {

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(std::size_t n, double a, double* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void add_scalar_scalar(std::size_t n, double a, double* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] += a;
}

void add_scalar_vec(std::size_t n, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void clamp_scalar(std::size_t n, double lo, double hi, double* x) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        if (v < lo) v = lo;
        if (v > hi) v = hi;
        x[i] = v;
    }
}

void hadamard_scalar(std::size_t n, const double* x, const double* y, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

constexpr Ops scalar_table = {
    axpy_scalar, scale_scalar, add_scalar_scalar,
    add_scalar_vec, clamp_scalar, hadamard_scalar,
};

#if defined(__aarch64__)

void axpy_neon(std::size_t n, double a, const double* x, double* y) {
    std::size_t i = 0;
    float64x2_t va = vdupq_n_f64(a);
    for (; i + 2 <= n; i += 2) {
        float64x2_t vy = vld1q_f64(y + i);
        float64x2_t vx = vld1q_f64(x + i);
        vy = vaddq_f64(vy, vmulq_f64(va, vx));
        vst1q_f64(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(std::size_t n, double a, double* x) {
    std::size_t i = 0;
    float64x2_t va = vdupq_n_f64(a);
    for (; i + 2 <= n; i += 2)
        vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
    for (; i < n; ++i) x[i] *= a;
}

void add_scalar_neon(std::size_t n, double a, double* x) {
    std::size_t i = 0;
    float64x2_t va = vdupq_n_f64(a);
    for (; i + 2 <= n; i += 2)
        vst1q_f64(x + i, vaddq_f64(vld1q_f64(x + i), va));
    for (; i < n; ++i) x[i] += a;
}

void add_vec_neon(std::size_t n, const double* x, double* y) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += x[i];
}

void clamp_neon(std::size_t n, double lo, double hi, double* x) {
    std::size_t i = 0;
    float64x2_t vlo = vdupq_n_f64(lo);
    float64x2_t vhi = vdupq_n_f64(hi);
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(x + i);
        v = vbslq_f64(vcltq_f64(v, vlo), vlo, v);
        v = vbslq_f64(vcgtq_f64(v, vhi), vhi, v);
        vst1q_f64(x + i, v);
    }
    for (; i < n; ++i) {
        double v = x[i];
        if (v < lo) v = lo;
        if (v > hi) v = hi;
        x[i] = v;
    }
}

void hadamard_neon(std::size_t n, const double* x, const double* y, double* out) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    for (; i < n; ++i) out[i] = x[i] * y[i];
}

constexpr Ops neon_table = {
    axpy_neon, scale_neon, add_scalar_neon,
    add_vec_neon, clamp_neon, hadamard_neon,
};

#endif // __aarch64__

Backend resolve_backend() {
    const char* env = std::getenv("SRTOOL_KERNELS");
    std::string req = env ? env : "auto";
    if (req == "auto") {
        if (backend_available(Backend::avx2)) return Backend::avx2;
        if (backend_available(Backend::neon)) return Backend::neon;
        return Backend::scalar;
    }
    Backend b;
    if (req == "scalar") b = Backend::scalar;
    else if (req == "avx2") b = Backend::avx2;
    else if (req == "neon") b = Backend::neon;
    else throw invalid_input_error("SRTOOL_KERNELS: unknown backend '" + req +
                                   "' (expected auto, scalar, avx2 or neon)");
    if (!backend_available(b))
        throw invalid_input_error("SRTOOL_KERNELS=" + req +
                                  ": backend not available on this machine");
    return b;
}

} // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

bool backend_available(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2: {
#if defined(__x86_64__) || defined(__i386__)
            return detail::avx2_ops() != nullptr && __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        }
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const Ops& ops(Backend b) {
    switch (b) {
        case Backend::scalar:
            return scalar_table;
        case Backend::avx2: {
            const Ops* t = backend_available(Backend::avx2) ? detail::avx2_ops() : nullptr;
            if (!t) throw invalid_input_error("avx2 kernels not available on this machine");
            return *t;
        }
        case Backend::neon: {
#if defined(__aarch64__)
            return neon_table;
#else
            throw invalid_input_error("neon kernels not available on this machine");
#endif
        }
    }
    throw invalid_input_error("unknown kernel backend");
}

Backend active_backend() {
    static const Backend chosen = resolve_backend();
    return chosen;
}

} // namespace ssr::kernels
