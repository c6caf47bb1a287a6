#pragma once

#include "etc/num/linalg.hpp"

#include <cstdint>
#include <functional>

namespace etc::num {

using VecMap = std::function<Vec(const Vec&)>;

/// Largest sampled difference quotient ||f(a)-f(b)|| / ||a-b|| over `samples`
/// point pairs in the ball of `radius` around `center`. This is a certified
/// lower bound on the Lipschitz constant of f on that ball.
///
/// Pair sequence: coordinate-axis pairs at three scales come first, then
/// alternating global and local pairs drawn from a Halton sequence with a
/// seed-dependent Cranley-Patterson rotation. The sequence does not depend on
/// `samples`, so the estimate is non-decreasing in `samples`.
double lipschitz_lower_bound(const VecMap& f, const Vec& center, double radius, std::size_t samples,
                             std::uint64_t seed = 0);

}  // namespace etc::num
