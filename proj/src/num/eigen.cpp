#include "etc/num/eigen.hpp"

#include "etc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace etc::num {

namespace {

using Rows = std::vector<std::vector<double>>;

Rows to_rows(const Mat& m) {
    Rows a(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
    return a;
}

// Gaussian similarity reduction to upper Hessenberg form with pivoting.
void reduce_to_hessenberg(Rows& a) {
    const int n = static_cast<int>(a.size());
    for (int m = 1; m < n - 1; ++m) {
        double x = 0.0;
        int piv = m;
        for (int j = m; j < n; ++j) {
            if (std::abs(a[j][m - 1]) > std::abs(x)) {
                x = a[j][m - 1];
                piv = j;
            }
        }
        if (piv != m) {
            for (int j = m - 1; j < n; ++j) std::swap(a[piv][j], a[m][j]);
            for (int j = 0; j < n; ++j) std::swap(a[j][piv], a[j][m]);
        }
        if (x != 0.0) {
            for (int i = m + 1; i < n; ++i) {
                double y = a[i][m - 1];
                if (y == 0.0) continue;
                y /= x;
                a[i][m - 1] = y;
                for (int j = m; j < n; ++j) a[i][j] -= y * a[m][j];
                for (int j = 0; j < n; ++j) a[j][m] += y * a[j][i];
            }
        }
    }
    for (int i = 2; i < n; ++i)
        for (int j = 0; j < i - 1; ++j) a[i][j] = 0.0;
}

double sign_of(double magnitude, double s) {
    return s >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

std::vector<std::complex<double>> hessenberg_qr(Rows& a) {
    const int n = static_cast<int>(a.size());
    const double eps = std::numeric_limits<double>::epsilon();
    const int cap = 500 * std::max(n, 1);
    std::vector<std::complex<double>> w(static_cast<std::size_t>(n));

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a[i][j]);

    int nn = n - 1;
    int total = 0;
    double t = 0.0;
    double x = 0.0, y = 0.0, z = 0.0, p = 0.0, q = 0.0, r = 0.0, s = 0.0, wv = 0.0;
    while (nn >= 0) {
        int its = 0;
        for (;;) {
            int l = nn;
            for (; l > 0; --l) {
                s = std::abs(a[l - 1][l - 1]) + std::abs(a[l][l]);
                if (s == 0.0) s = anorm;
                if (std::abs(a[l][l - 1]) <= eps * s) {
                    a[l][l - 1] = 0.0;
                    break;
                }
            }
            x = a[nn][nn];
            if (l == nn) {
                w[static_cast<std::size_t>(nn)] = x + t;
                nn -= 1;
                break;
            }
            y = a[nn - 1][nn - 1];
            wv = a[nn][nn - 1] * a[nn - 1][nn];
            if (l == nn - 1) {
                p = 0.5 * (y - x);
                q = p * p + wv;
                z = std::sqrt(std::abs(q));
                x += t;
                if (q >= 0.0) {
                    z = p + sign_of(z, p);
                    w[static_cast<std::size_t>(nn - 1)] = w[static_cast<std::size_t>(nn)] = x + z;
                    if (z != 0.0) w[static_cast<std::size_t>(nn)] = x - wv / z;
                } else {
                    w[static_cast<std::size_t>(nn)] = {x + p, -z};
                    w[static_cast<std::size_t>(nn - 1)] = {x + p, z};
                }
                nn -= 2;
                break;
            }
            if (++total > cap) {
                fail(ErrorCode::Indeterminate,
                     fmt::format("QR iteration did not converge after {} iterations", cap));
            }
            if (its > 0 && its % 10 == 0) {
                // exceptional shift
                t += x;
                for (int i = 0; i <= nn; ++i) a[i][i] -= x;
                s = std::abs(a[nn][nn - 1]) + std::abs(a[nn - 1][nn - 2]);
                y = x = 0.75 * s;
                wv = -0.4375 * s * s;
            }
            ++its;
            int m = nn - 2;
            for (; m >= l; --m) {
                z = a[m][m];
                r = x - z;
                s = y - z;
                p = (r * s - wv) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - r - s;
                r = a[m + 2][m + 1];
                s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                double u = std::abs(a[m][m - 1]) * (std::abs(q) + std::abs(r));
                double v = std::abs(p) * (std::abs(a[m - 1][m - 1]) + std::abs(z) + std::abs(a[m + 1][m + 1]));
                if (u <= eps * v) break;
            }
            for (int i = m; i < nn - 1; ++i) {
                a[i + 2][i] = 0.0;
                if (i != m) a[i + 2][i - 1] = 0.0;
            }
            for (int k = m; k < nn; ++k) {
                if (k != m) {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = 0.0;
                    if (k + 1 != nn) r = a[k + 2][k - 1];
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x != 0.0) {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                if (s == 0.0) continue;
                if (k == m) {
                    if (l != m) a[k][k - 1] = -a[k][k - 1];
                } else {
                    a[k][k - 1] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= nn; ++j) {
                    p = a[k][j] + q * a[k + 1][j];
                    if (k + 1 != nn) {
                        p += r * a[k + 2][j];
                        a[k + 2][j] -= p * z;
                    }
                    a[k + 1][j] -= p * y;
                    a[k][j] -= p * x;
                }
                int mmin = nn < k + 3 ? nn : k + 3;
                for (int i = l; i <= mmin; ++i) {
                    p = x * a[i][k] + y * a[i][k + 1];
                    if (k + 1 != nn) {
                        p += z * a[i][k + 2];
                        a[i][k + 2] -= p * r;
                    }
                    a[i][k + 1] -= p * q;
                    a[i][k] -= p;
                }
            }
        }
    }
    return w;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Mat& m) {
    if (!m.is_square()) fail(ErrorCode::DimensionMismatch, "eigenvalues of a non-square matrix");
    if (!m.all_finite()) fail(ErrorCode::NonFinite, "eigenvalues of a non-finite matrix");
    if (m.rows() == 0) return {};
    Rows a = to_rows(m);
    reduce_to_hessenberg(a);
    return hessenberg_qr(a);
}

bool is_hurwitz(const Mat& m) {
    auto ev = eigenvalues(m);
    return std::all_of(ev.begin(), ev.end(), [](const std::complex<double>& l) { return l.real() < 0.0; });
}

std::vector<double> symmetric_eigenvalues(const Mat& s) {
    if (!s.is_square()) fail(ErrorCode::DimensionMismatch, "symmetric eigenvalues of a non-square matrix");
    if (!s.is_symmetric(1e-9)) fail(ErrorCode::NotSymmetric, "matrix is not symmetric");
    const std::size_t n = s.rows();
    Rows a = to_rows(s.symmetrized());

    double frob = 0.0;
    for (const auto& row : a)
        for (double v : row) frob += v * v;
    frob = std::sqrt(frob);

    constexpr int max_sweeps = 100;
    bool converged = n <= 1 || frob == 0.0;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (std::sqrt(off) <= 1e-15 * frob) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = sign_of(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][p];
                    double akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p][k];
                    double aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
            }
        }
    }
    if (!converged) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (std::sqrt(off) > 1e-12 * frob) {
            fail(ErrorCode::Indeterminate, "Jacobi sweeps did not converge");
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

EigBounds sym_eig_bounds(const Mat& p) {
    auto ev = symmetric_eigenvalues(p);
    if (ev.empty()) fail(ErrorCode::DimensionMismatch, "empty matrix");
    return {ev.front(), ev.back()};
}

double spectral_norm(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Mat g = m.transpose() * m;
    auto ev = symmetric_eigenvalues(g.symmetrized());
    return std::sqrt(std::max(ev.back(), 0.0));
}

}  // namespace etc::num
