// AVX2 variants of the lanewise kernels. This translation unit is the only
// one compiled with -mavx2; callers reach it through the dispatch table after
// a runtime CPU check. Multiplies and adds stay separate instructions (no
// FMA), and the clamp uses compare+blend so NaN and signed-zero handling
// matches the scalar code exactly.

#include "ssr/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

namespace ssr::kernels {
namespace {

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
    std::size_t i = 0;
    __m256d va = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(std::size_t n, double a, double* x) {
    std::size_t i = 0;
    __m256d va = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    for (; i < n; ++i) x[i] *= a;
}

void add_scalar_avx2(std::size_t n, double a, double* x) {
    std::size_t i = 0;
    __m256d va = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_loadu_pd(x + i), va));
    for (; i < n; ++i) x[i] += a;
}

void add_vec_avx2(std::size_t n, const double* x, double* y) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] += x[i];
}

void clamp_avx2(std::size_t n, double lo, double hi, double* x) {
    std::size_t i = 0;
    __m256d vlo = _mm256_set1_pd(lo);
    __m256d vhi = _mm256_set1_pd(hi);
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        v = _mm256_blendv_pd(v, vlo, _mm256_cmp_pd(v, vlo, _CMP_LT_OQ));
        v = _mm256_blendv_pd(v, vhi, _mm256_cmp_pd(v, vhi, _CMP_GT_OQ));
        _mm256_storeu_pd(x + i, v);
    }
    for (; i < n; ++i) {
        double v = x[i];
        if (v < lo) v = lo;
        if (v > hi) v = hi;
        x[i] = v;
    }
}

void hadamard_avx2(std::size_t n, const double* x, const double* y, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] * y[i];
}

constexpr Ops avx2_table = {
    axpy_avx2, scale_avx2, add_scalar_avx2,
    add_vec_avx2, clamp_avx2, hadamard_avx2,
};

} // namespace

namespace detail {
const Ops* avx2_ops() { return &avx2_table; }
} // namespace detail

} // namespace ssr::kernels

#else

namespace ssr::kernels::detail {
const Ops* avx2_ops() { return nullptr; }
} // namespace ssr::kernels::detail

#endif
