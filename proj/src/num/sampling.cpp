#include "etc/num/sampling.hpp"

#include "etc/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace etc::num {

namespace {

constexpr std::array<unsigned, 32> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,  31,  37,  41,  43,  47,  53,
                                              59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t k, unsigned base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (k > 0) {
        r += f * static_cast<double>(k % base);
        k /= base;
        f *= inv;
    }
    return r;
}

class HaltonStream {
public:
    HaltonStream(std::size_t dim, std::uint64_t seed) : dim_(dim), shift_(2 * dim) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& s : shift_) s = u(rng);
    }

    // Point in [-1, 1]^dim from the prime-base slot group `group` (0 or 1).
    Vec cube_point(std::uint64_t index, std::size_t group) const {
        Vec p(dim_);
        for (std::size_t d = 0; d < dim_; ++d) {
            std::size_t slot = group * dim_ + d;
            double h = radical_inverse(index + 1, kPrimes[slot % kPrimes.size()]) + shift_[slot];
            h -= std::floor(h);
            p[d] = 2.0 * h - 1.0;
        }
        return p;
    }

    Vec ball_point(std::uint64_t index, std::size_t group) const {
        Vec p = cube_point(index, group);
        double n = norm_two(p);
        if (n > 1.0) p *= 1.0 / n;
        return p;
    }

private:
    std::size_t dim_;
    std::vector<double> shift_;
};

}  // namespace

double lipschitz_lower_bound(const VecMap& f, const Vec& center, double radius, std::size_t samples,
                             std::uint64_t seed) {
    if (samples < 2) fail(ErrorCode::InsufficientSamples, "need at least 2 samples");
    if (!(radius > 0.0)) fail(ErrorCode::NonPositiveConstant, "radius must be positive");
    const std::size_t n = center.size();
    if (n == 0) fail(ErrorCode::DimensionMismatch, "empty domain");

    double best = 0.0;
    std::size_t used = 0;
    auto quotient = [&](const Vec& a, const Vec& b) {
        double den = norm_two(a - b);
        if (den == 0.0) return;
        double q = norm_two(f(a) - f(b)) / den;
        if (std::isfinite(q)) best = std::max(best, q);
        ++used;
    };

    constexpr std::array<double, 3> kScales = {1e-3, 0.1, 1.0};
    for (double scale : kScales) {
        for (std::size_t axis = 0; axis < n && used < samples; ++axis) {
            Vec b = center;
            b[axis] += scale * radius;
            quotient(center, b);
        }
    }

    HaltonStream halton(n, seed);
    for (std::uint64_t k = 0; used < samples; ++k) {
        Vec a = center + radius * halton.ball_point(k, 0);
        if (k % 2 == 0) {
            Vec b = center + radius * halton.ball_point(k, 1);
            quotient(a, b);
        } else {
            Vec dir = halton.cube_point(k, 1);
            double dn = norm_two(dir);
            if (dn == 0.0) {
                ++used;
                continue;
            }
            quotient(a, a + (1e-3 * radius / dn) * dir);
        }
    }
    return best;
}

}  // namespace etc::num
