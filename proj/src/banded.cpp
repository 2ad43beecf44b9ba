#include "liouville/banded.hpp"

#include <cmath>

#include "liouville/rational.hpp"

namespace liouville {

std::vector<double> solve_tridiagonal(std::vector<double> sub,
                                      std::vector<double> diag,
                                      std::vector<double> sup,
                                      std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (sub.size() != n || sup.size() != n || rhs.size() != n)
        throw UsageError("tridiagonal solve: mismatched band lengths");
    if (n == 0) return {};
    // Forward elimination.
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) throw NumericalFailure("tridiagonal solve: zero pivot");
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) throw NumericalFailure("tridiagonal solve: zero pivot");
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
    return rhs;
}

std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& sub,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& sup,
                                             const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n < 3) throw UsageError("cyclic tridiagonal solve needs n >= 3");
    // Sherman-Morrison: the wrap entries are A[0][n-1] = sub[0] and
    // A[n-1][0] = sup[n-1]. Write A = T + u v^T with
    // u = (gamma, 0, ..., 0, sup[n-1])^T, v = (1, 0, ..., 0, sub[0]/gamma)^T
    // and T the plain tridiagonal part with corrected corners.
    const double gamma = -diag[0];
    std::vector<double> d(diag);
    d[0] -= gamma;
    d[n - 1] -= sup[n - 1] * sub[0] / gamma;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = sup[n - 1];

    std::vector<double> y = solve_tridiagonal(sub, d, sup, rhs);
    std::vector<double> q = solve_tridiagonal(sub, d, sup, u);

    const double v_dot_y = y[0] + sub[0] / gamma * y[n - 1];
    const double v_dot_q = q[0] + sub[0] / gamma * q[n - 1];
    const double denom = 1.0 + v_dot_q;
    if (denom == 0.0 || !std::isfinite(denom))
        throw NumericalFailure("cyclic tridiagonal solve: singular correction");
    const double factor = v_dot_y / denom;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * q[i];
    return x;
}

DenseLU::DenseLU(std::vector<double> matrix, std::size_t n)
    : lu_(std::move(matrix)), pivot_(n), n_(n) {
    if (lu_.size() != n * n) throw UsageError("dense LU: matrix size mismatch");
    for (std::size_t col = 0; col < n_; ++col) {
        // Partial pivoting: largest magnitude in the column.
        std::size_t best = col;
        double best_mag = std::abs(lu_[col * n_ + col]);
        for (std::size_t r = col + 1; r < n_; ++r) {
            double mag = std::abs(lu_[r * n_ + col]);
            if (mag > best_mag) {
                best = r;
                best_mag = mag;
            }
        }
        pivot_[col] = static_cast<int>(best);
        if (best_mag == 0.0) {
            singular_ = true;
            return;
        }
        if (best != col)
            for (std::size_t k = 0; k < n_; ++k)
                std::swap(lu_[col * n_ + k], lu_[best * n_ + k]);
        const double inv_pivot = 1.0 / lu_[col * n_ + col];
        for (std::size_t r = col + 1; r < n_; ++r) {
            const double m = lu_[r * n_ + col] * inv_pivot;
            lu_[r * n_ + col] = m;
            if (m == 0.0) continue;
            for (std::size_t k = col + 1; k < n_; ++k)
                lu_[r * n_ + k] -= m * lu_[col * n_ + k];
        }
    }
}

std::vector<double> DenseLU::solve(std::vector<double> rhs) const {
    if (singular_) throw NumericalFailure("dense LU: singular matrix");
    if (rhs.size() != n_) throw UsageError("dense LU: rhs size mismatch");
    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t p = static_cast<std::size_t>(pivot_[col]);
        if (p != col) std::swap(rhs[col], rhs[p]);
        for (std::size_t r = col + 1; r < n_; ++r) rhs[r] -= lu_[r * n_ + col] * rhs[col];
    }
    for (std::size_t i = n_; i-- > 0;) {
        for (std::size_t k = i + 1; k < n_; ++k) rhs[i] -= lu_[i * n_ + k] * rhs[k];
        rhs[i] /= lu_[i * n_ + i];
    }
    return rhs;
}

}  // namespace liouville
