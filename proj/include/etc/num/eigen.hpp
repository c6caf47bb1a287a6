#pragma once

#include "etc/num/linalg.hpp"

#include <complex>
#include <vector>

namespace etc::num {

/// Eigenvalues of a general real square matrix via Hessenberg reduction and
/// Francis double-shift QR. Throws Indeterminate after 500*n iterations.
std::vector<std::complex<double>> eigenvalues(const Mat& m);

/// True iff every eigenvalue has a strictly negative real part.
bool is_hurwitz(const Mat& m);

/// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
std::vector<double> symmetric_eigenvalues(const Mat& s);

struct EigBounds {
    double min;
    double max;
};

EigBounds sym_eig_bounds(const Mat& p);

/// ||M||_2 = sqrt(lambda_max(M^T M)).
double spectral_norm(const Mat& m);

}  // namespace etc::num
