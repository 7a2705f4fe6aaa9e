#pragma once

#include <array>
#include <cstddef>

namespace lppl::detail {

struct Lstsq4Result {
    std::array<double, 4> coef{};
    bool used_qr = false;
};

/// Minimizes ||X b - y|| for an n-by-4 design matrix given as 4 column
/// arrays. Primary path: normal equations + Cholesky. When the Cholesky
/// condition estimate exceeds cond_limit (or a pivot fails), retries with
/// column-pivoted Householder QR on the design matrix itself. Throws
/// NumericError if the matrix is numerically rank-deficient either way.
Lstsq4Result least_squares_4(const std::array<const double*, 4>& cols, const double* y,
                             std::size_t n, double cond_limit = 1e12);

}  // namespace lppl::detail
