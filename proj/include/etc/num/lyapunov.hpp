#pragma once

#include "etc/num/linalg.hpp"

namespace etc::num {

/// Solves M^T P + P M = -Q for symmetric P by vectorizing into an n^2 x n^2
/// system. Throws SingularLyapunov when M and -M share an eigenvalue.
/// On return ||M^T P + P M + Q||_inf <= 1e-10 ||Q||_inf and P is exactly symmetric.
Mat solve_lyapunov(const Mat& m, const Mat& q);

/// ||M^T P + P M + Q||_inf
double lyapunov_residual(const Mat& m, const Mat& p, const Mat& q);

/// Dense solve with partial pivoting; throws SingularLyapunov on a zero pivot.
Vec solve_linear(Mat a, Vec b);

}  // namespace etc::num
