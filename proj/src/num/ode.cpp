#include "etc/num/ode.hpp"

#include "etc/error.hpp"

#include <fmt/format.h>

namespace etc::num {

namespace {

const Vec& checked(const Vec& k, double t, int stage) {
    if (!k.all_finite()) {
        fail(ErrorCode::NonFiniteDerivative, fmt::format("stage {} derivative non-finite at t={}", stage, t));
    }
    return k;
}

}  // namespace

Vec rk4_step(const VectorField& f, double t, const Vec& x, double h) {
    if (!(h > 0.0)) fail(ErrorCode::NonPositiveConstant, "rk4_step needs h > 0");
    const double half = 0.5 * h;
    Vec k1 = f(t, x);
    checked(k1, t, 1);
    Vec k2 = f(t + half, x + half * k1);
    checked(k2, t + half, 2);
    Vec k3 = f(t + half, x + half * k2);
    checked(k3, t + half, 3);
    Vec k4 = f(t + h, x + h * k3);
    checked(k4, t + h, 4);

    Vec out = x;
    const double w = h / 6.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

double locate_event(const ScalarFn& g, double t_lo, double t_hi, double tol) {
    if (!(tol > 0.0)) fail(ErrorCode::NonPositiveConstant, "locate_event needs tol > 0");
    double g_lo = g(t_lo);
    double g_hi = g(t_hi);
    double neg = t_lo;
    double pos = t_hi;
    if (g_lo > 0.0 && g_hi <= 0.0) {
        std::swap(neg, pos);
    } else if (!(g_lo <= 0.0 && g_hi > 0.0)) {
        fail(ErrorCode::NoSignChange,
             fmt::format("no sign change on [{}, {}]: g = {}, {}", t_lo, t_hi, g_lo, g_hi));
    }
    while (std::abs(pos - neg) > tol) {
        double mid = 0.5 * (neg + pos);
        if (mid == neg || mid == pos) break;
        if (g(mid) > 0.0) {
            pos = mid;
        } else {
            neg = mid;
        }
    }
    return pos;
}

}  // namespace etc::num
