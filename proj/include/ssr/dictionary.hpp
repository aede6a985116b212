#pragma once

#include <cmath>
#include <cstddef>

#include "ssr/mat.hpp"

namespace ssr {

// Atom matrix, one atom per column. Training keeps learned atoms at unit
// length; a raw least-squares dictionary (the decoupled HR solve) is carried
// as a plain Mat instead.
struct Dictionary {
    Mat atoms; // d x K

    Dictionary() = default;
    explicit Dictionary(Mat a) : atoms(std::move(a)) {}

    std::size_t dim() const { return atoms.rows; }
    std::size_t size() const { return atoms.cols; }

    bool unit_norm(double tol = 1e-9) const {
        for (std::size_t k = 0; k < atoms.cols; ++k) {
            double n = std::sqrt(norm2_sq_seq(atoms.rows, atoms.col(k)));
            if (std::fabs(n - 1.0) > tol) return false;
        }
        return true;
    }
};

} // namespace ssr
