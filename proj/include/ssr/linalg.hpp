#pragma once

#include "ssr/mat.hpp"

namespace ssr {

// In-place upper Cholesky factorization of a symmetric matrix. Returns false
// on a non-positive pivot (matrix not positive definite). Only the upper
// triangle of a is read; on success it holds U with A = U'U.
bool llt_factor(Mat& a);

// Solves A*X = B in place given the factor U from llt_factor; b holds X on
// return.
void llt_solve(const Mat& u, Mat& b);

} // namespace ssr
