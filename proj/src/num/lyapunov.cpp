#include "etc/num/lyapunov.hpp"

#include "etc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace etc::num {

Vec solve_linear(Mat a, Vec b) {
    const std::size_t n = a.rows();
    if (!a.is_square() || b.size() != n) fail(ErrorCode::DimensionMismatch, "solve_linear");
    const double scale = std::max(a.norm_inf(), std::numeric_limits<double>::min());
    const double tiny = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
        if (std::abs(a(piv, col)) <= tiny) {
            fail(ErrorCode::SingularLyapunov, fmt::format("singular system at column {}", col));
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            double f = a(i, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
            b[i] -= f * b[col];
        }
    }
    Vec x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

double lyapunov_residual(const Mat& m, const Mat& p, const Mat& q) {
    return (m.transpose() * p + p * m + q).norm_inf();
}

Mat solve_lyapunov(const Mat& m, const Mat& q) {
    if (!m.is_square() || !q.is_square() || m.rows() != q.rows()) {
        fail(ErrorCode::DimensionMismatch, "solve_lyapunov needs square M and Q of equal size");
    }
    if (!q.is_symmetric(1e-12)) fail(ErrorCode::NotSymmetric, "Q must be symmetric");
    const std::size_t n = m.rows();
    const std::size_t nn = n * n;

    // Unknown p[i*n + j] = P(i, j); row (i, j) of M^T P + P M.
    Mat g(nn, nn);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t row = i * n + j;
            for (std::size_t k = 0; k < n; ++k) {
                g(row, k * n + j) += m(k, i);
                g(row, i * n + k) += m(k, j);
            }
        }
    }
    Vec rhs(nn);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rhs[i * n + j] = -q(i, j);

    Vec sol = solve_linear(g, rhs);
    // one step of iterative refinement
    Vec corr = solve_linear(g, rhs - g * sol);
    sol += corr;

    Mat p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = sol[i * n + j];
    if (!p.all_finite()) fail(ErrorCode::SingularLyapunov, "non-finite Lyapunov solution");
    p = p.symmetrized();

    const double res = lyapunov_residual(m, p, q);
    if (res > 1e-10 * q.norm_inf()) {
        fail(ErrorCode::SingularLyapunov,
             fmt::format("residual {:.3g} exceeds 1e-10*||Q|| (ill-conditioned or singular)", res));
    }
    return p;
}

}  // namespace etc::num
