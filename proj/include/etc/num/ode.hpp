#pragma once

#include "etc/num/linalg.hpp"

#include <functional>

namespace etc::num {

using VectorField = std::function<Vec(double t, const Vec& x)>;
using ScalarFn = std::function<double(double)>;

/// Classical fourth-order Runge-Kutta step of size h > 0.
/// Throws NonFiniteDerivative if any stage evaluation is non-finite.
Vec rk4_step(const VectorField& f, double t, const Vec& x, double h);

inline constexpr double kDefaultEventTol = 1e-6;

/// Bisection for the crossing of g in [t_lo, t_hi]. Requires g(t_lo) <= 0 < g(t_hi)
/// (a reversed bracket is accepted too). Returns the endpoint on the positive
/// side of the final bracket, so g(result) > 0 and g(result - tol) <= 0.
double locate_event(const ScalarFn& g, double t_lo, double t_hi, double tol = kDefaultEventTol);

}  // namespace etc::num
