#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

// Dense column-major matrix of doubles.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i + j * rows]; }
    double at(std::size_t i, std::size_t j) const { return data[i + j * rows]; }

    double* col(std::size_t j) { return data.data() + j * rows; }
    const double* col(std::size_t j) const { return data.data() + j * rows; }

    std::span<double> col_span(std::size_t j) { return {col(j), rows}; }
    std::span<const double> col_span(std::size_t j) const { return {col(j), rows}; }

    bool empty() const { return data.empty(); }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline Mat transpose_copy(const Mat& a) {
    Mat t(a.cols, a.rows);
    for (std::size_t j = 0; j < a.cols; ++j)
        for (std::size_t i = 0; i < a.rows; ++i)
            t.at(j, i) = a.at(i, j);
    return t;
}

// Sequential reductions in ascending index order. Every reduction in the
// library funnels through these (or repeats the identical order), which is
// what makes results independent of the selected kernel backend.
inline double dot_seq(std::size_t n, const double* x, const double* y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

inline double sum_seq(std::size_t n, const double* x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

inline double norm2_sq_seq(std::size_t n, const double* x) {
    return dot_seq(n, x, x);
}

} // namespace ssr
