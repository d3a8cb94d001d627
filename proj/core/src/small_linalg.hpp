#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "kg/errors.hpp"

namespace kg::detail {

/// In-place Gauss-Jordan inversion of a dense row-major dim x dim matrix.
inline void invert_in_place(std::span<double> m, std::size_t dim) {
    std::span<double> a = m;
    double inv_storage[64] = {};
    std::span<double> inv(inv_storage, dim * dim);
    for (std::size_t i = 0; i < dim; ++i) inv[i * dim + i] = 1.0;

    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < dim; ++r) {
            if (std::abs(a[r * dim + col]) > std::abs(a[pivot * dim + col])) pivot = r;
        }
        if (a[pivot * dim + col] == 0.0) throw DomainError("singular stage matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < dim; ++j) {
                std::swap(a[col * dim + j], a[pivot * dim + j]);
                std::swap(inv[col * dim + j], inv[pivot * dim + j]);
            }
        }
        const double p = a[col * dim + col];
        for (std::size_t j = 0; j < dim; ++j) {
            a[col * dim + j] /= p;
            inv[col * dim + j] /= p;
        }
        for (std::size_t r = 0; r < dim; ++r) {
            if (r == col) continue;
            const double f = a[r * dim + col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                a[r * dim + j] -= f * a[col * dim + j];
                inv[r * dim + j] -= f * inv[col * dim + j];
            }
        }
    }
    for (std::size_t i = 0; i < dim * dim; ++i) m[i] = inv[i];
}

}  // namespace kg::detail
