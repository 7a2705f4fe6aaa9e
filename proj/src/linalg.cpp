#include "lppl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lppl/errors.hpp"

namespace lppl::detail {

namespace {

constexpr int kDim = 4;

// Cholesky solve of the 4x4 normal system. Returns false (instead of a
// result) when a pivot collapses or the diagonal condition estimate
// exceeds the limit, so the caller can fall back to QR.
bool try_normal_equations(const std::array<const double*, 4>& cols, const double* y,
                          std::size_t n, double cond_limit, std::array<double, 4>& out) {
    double gram[kDim][kDim] = {};
    double rhs[kDim] = {};
    for (int i = 0; i < kDim; ++i) {
        for (int j = i; j < kDim; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += cols[i][k] * cols[j][k];
            gram[i][j] = gram[j][i] = s;
        }
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += cols[i][k] * y[k];
        rhs[i] = s;
    }

    // In-place lower Cholesky factor.
    double chol[kDim][kDim] = {};
    double diag_max = 0.0, diag_min = 0.0;
    for (int j = 0; j < kDim; ++j) {
        double d = gram[j][j];
        for (int k = 0; k < j; ++k) d -= chol[j][k] * chol[j][k];
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        chol[j][j] = ljj;
        if (j == 0) {
            diag_max = diag_min = ljj;
        } else {
            diag_max = std::max(diag_max, ljj);
            diag_min = std::min(diag_min, ljj);
        }
        for (int i = j + 1; i < kDim; ++i) {
            double s = gram[i][j];
            for (int k = 0; k < j; ++k) s -= chol[i][k] * chol[j][k];
            chol[i][j] = s / ljj;
        }
    }
    const double cond_est = (diag_max / diag_min) * (diag_max / diag_min);
    if (!(cond_est < cond_limit)) return false;

    // Forward then backward substitution.
    double z[kDim];
    for (int i = 0; i < kDim; ++i) {
        double s = rhs[i];
        for (int k = 0; k < i; ++k) s -= chol[i][k] * z[k];
        z[i] = s / chol[i][i];
    }
    for (int i = kDim - 1; i >= 0; --i) {
        double s = z[i];
        for (int k = i + 1; k < kDim; ++k) s -= chol[k][i] * out[k];
        out[i] = s / chol[i][i];
    }
    return true;
}

// Column-pivoted Householder QR on the n x 4 design matrix. Rank-revealing:
// throws when a pivot falls below the noise floor of the leading pivot.
std::array<double, 4> qr_least_squares(const std::array<const double*, 4>& cols,
                                       const double* y, std::size_t n) {
    std::vector<double> a(kDim * n);  // column-major working copy
    for (int j = 0; j < kDim; ++j) std::copy(cols[j], cols[j] + n, a.begin() + j * n);
    std::vector<double> qty(y, y + n);

    int perm[kDim] = {0, 1, 2, 3};
    double r[kDim][kDim] = {};

    auto col = [&](int j) { return a.data() + j * n; };

    for (int k = 0; k < kDim; ++k) {
        // Pivot: remaining column with the largest trailing norm.
        int best = k;
        double best_norm = -1.0;
        for (int j = k; j < kDim; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += col(j)[i] * col(j)[i];
            if (s > best_norm) {
                best_norm = s;
                best = j;
            }
        }
        if (best != k) {
            for (std::size_t i = 0; i < n; ++i) std::swap(col(best)[i], col(k)[i]);
            for (int i = 0; i < k; ++i) std::swap(r[i][best], r[i][k]);
            std::swap(perm[best], perm[k]);
        }

        double norm = std::sqrt(std::max(best_norm, 0.0));
        if (k == 0 && !(norm > 0.0)) {
            throw NumericError("degenerate basis: all-zero design matrix");
        }

        // Householder vector stored in the trailing part of column k.
        double* ck = col(k);
        const double alpha = (ck[k] >= 0.0) ? -norm : norm;
        const double v0 = ck[k] - alpha;
        const double vnorm2 = v0 * v0 + (best_norm - ck[k] * ck[k]);
        ck[k] = v0;

        if (vnorm2 > 0.0) {
            for (int j = k + 1; j < kDim; ++j) {
                double dot = 0.0;
                for (std::size_t i = k; i < n; ++i) dot += ck[i] * col(j)[i];
                const double f = 2.0 * dot / vnorm2;
                for (std::size_t i = k; i < n; ++i) col(j)[i] -= f * ck[i];
            }
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += ck[i] * qty[i];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < n; ++i) qty[i] -= f * ck[i];
        }

        r[k][k] = alpha;
        for (int j = k + 1; j < kDim; ++j) r[k][j] = col(j)[k];
    }

    const double rank_tol = 1e-13 * std::abs(r[0][0]);
    for (int k = 0; k < kDim; ++k) {
        if (!(std::abs(r[k][k]) > rank_tol) || !std::isfinite(r[k][k])) {
            throw NumericError("degenerate basis: numerically rank-deficient system (pivot " +
                               std::to_string(k) + ")");
        }
    }

    double bp[kDim];
    for (int i = kDim - 1; i >= 0; --i) {
        double s = qty[i];
        for (int j = i + 1; j < kDim; ++j) s -= r[i][j] * bp[j];
        bp[i] = s / r[i][i];
    }
    std::array<double, 4> out{};
    for (int i = 0; i < kDim; ++i) out[perm[i]] = bp[i];
    return out;
}

}  // namespace

Lstsq4Result least_squares_4(const std::array<const double*, 4>& cols, const double* y,
                             std::size_t n, double cond_limit) {
    if (n < kDim) throw NumericError("least_squares_4 needs at least 4 rows");
    Lstsq4Result result;
    if (try_normal_equations(cols, y, n, cond_limit, result.coef)) return result;
    result.coef = qr_least_squares(cols, y, n);
    result.used_qr = true;
    return result;
}

}  // namespace lppl::detail
