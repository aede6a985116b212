#include "ssr/linalg.hpp"

#include <cmath>

#include "ssr/errors.hpp"

namespace ssr {

// Upper Cholesky, A = U'U. Column j of U is contiguous in column-major
// storage, so the inner products below run over contiguous prefixes.
bool llt_factor(Mat& a) {
    if (a.rows != a.cols) throw invalid_input_error("llt_factor: matrix not square");
    std::size_t n = a.rows;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a.at(j, j) - norm2_sq_seq(j, a.col(j));
        if (!(d > 0.0)) return false;
        d = std::sqrt(d);
        a.at(j, j) = d;
        for (std::size_t i = j + 1; i < n; ++i)
            a.at(j, i) = (a.at(j, i) - dot_seq(j, a.col(j), a.col(i))) / d;
    }
    return true;
}

void llt_solve(const Mat& u, Mat& b) {
    if (u.rows != u.cols || b.rows != u.rows)
        throw invalid_input_error("llt_solve: dimension mismatch");
    std::size_t n = u.rows;
    for (std::size_t c = 0; c < b.cols; ++c) {
        double* x = b.col(c);
        // forward: U' y = b
        for (std::size_t i = 0; i < n; ++i)
            x[i] = (x[i] - dot_seq(i, u.col(i), x)) / u.at(i, i);
        // backward: U x = y
        for (std::size_t ii = n; ii-- > 0;) {
            double s = x[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= u.at(ii, k) * x[k];
            x[ii] = s / u.at(ii, ii);
        }
    }
}

} // namespace ssr
