#include "etc/error.hpp"
#include "etc/num/eigen.hpp"
#include "etc/num/linalg.hpp"
#include "etc/num/lyapunov.hpp"
#include "etc/num/ode.hpp"
#include "etc/num/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

using namespace etc;
using namespace etc::num;

namespace {

const Mat kA{{0, 1, 0, 0}, {-48.6, -1.25, 48.6, 0}, {0, 0, 0, 1}, {19.5, 0, -19.5, 0}};
const Mat kB{{0}, {21.6}, {0}, {0}};
const Mat kC{{1, 0, 0, 0}, {0, 1, 0, 0}};
const Mat kK{{7.8428, 1.1212, -4.3666, 1.1243}};
const Mat kL{{9.3334, 1.0001}, {-48.7804, 22.3665}, {-0.0524, 3.3194}, {19.4066, -0.3167}};

std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> v) {
    std::sort(v.begin(), v.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

void check_eigs(const Mat& m, std::vector<std::complex<double>> expected) {
    auto got = sorted(eigenvalues(m));
    expected = sorted(expected);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].real() == doctest::Approx(expected[i].real()).epsilon(1e-9));
        CHECK(got[i].imag() == doctest::Approx(expected[i].imag()).epsilon(1e-9));
    }
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an etc::Error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("vec arithmetic and norms") {
    Vec v{3, -4};
    CHECK(norm_one(v) == 7);
    CHECK(norm_two(v) == 5);
    CHECK(norm_inf(v) == 4);
    CHECK(dot(v, Vec{1, 1}) == -1);
    CHECK(concat(v, Vec{1}) == Vec{3, -4, 1});
    CHECK(v.slice(1, 1) == Vec{-4});
    CHECK((v + Vec{1, 1}) == Vec{4, -3});
    CHECK((2.0 * v) == Vec{6, -8});
    // scaled norm does not overflow
    CHECK(norm_two(Vec{1e200, 1e200}) == doctest::Approx(std::sqrt(2.0) * 1e200));
    CHECK(code_of([] { Vec{1.0, std::numeric_limits<double>::quiet_NaN()}; }) == ErrorCode::NonFinite);
    CHECK(code_of([] { Vec{1.0} + Vec{1.0, 2.0}; }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("mat basics") {
    Mat m{{1, 2}, {3, 4}};
    CHECK(m.transpose() == Mat{{1, 3}, {2, 4}});
    CHECK((m * Vec{1, 1}) == Vec{3, 7});
    CHECK((m * Mat::identity(2)) == m);
    CHECK(m.norm_inf() == 7);
    auto b = Mat::block(m, Mat(2, 1), Mat(1, 2), Mat{{9}});
    CHECK(b.rows() == 3);
    CHECK(b(2, 2) == 9);
    CHECK(b(1, 0) == 3);
    CHECK(quadratic_form(Mat{{2, 0}, {0, 3}}, Vec{1, 1}) == 5);
    CHECK(code_of([&] { m* Mat(3, 3); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("eigenvalues of the flexible-link closed loops") {
    // numpy.linalg.eigvals reference values
    check_eigs(kA - kB * kK, {{-9.600638878867692, 0},
                              {-5.763598114088962, 1.385774345905013},
                              {-5.763598114088962, -1.385774345905013},
                              {-4.340084892954379, 0}});
    check_eigs(kA - kL * kC,
               {{-9.80047289668789, 0}, {-9.333400197243277, 0}, {-8.425047360825564, 0}, {-5.390979545243262, 0}});
    check_eigs(kA + kB * kK, {{27.859151444550065, 0},
                              {-1.552229075244361, 5.196604617075105},
                              {-1.552229075244361, -5.196604617075105},
                              {-1.786773294061308, 0}});
    CHECK(is_hurwitz(kA - kB * kK));
    CHECK(is_hurwitz(kA - kL * kC));
    CHECK_FALSE(is_hurwitz(kA + kB * kK));
    CHECK_FALSE(is_hurwitz(kA));
}

TEST_CASE("eigenvalues of small matrices") {
    check_eigs(Mat{{-2}}, {{-2, 0}});
    check_eigs(Mat{{0, 1}, {-1, 0}}, {{0, 1}, {0, -1}});
    check_eigs(Mat{{0, 1}, {-2, -3}}, {{-1, 0}, {-2, 0}});
    CHECK_FALSE(is_hurwitz(Mat{{0, 1}, {-1, 0}}));  // pure imaginary pair is not strictly stable
    CHECK(code_of([] { eigenvalues(Mat(2, 3)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("symmetric eigenvalues and spectral norm") {
    auto ev = symmetric_eigenvalues(Mat{{2, 1}, {1, 2}});
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(3.0));
    CHECK(spectral_norm(Mat{{3, 0}, {4, 5}}) == doctest::Approx(3.0 * std::sqrt(5.0)));
    CHECK(spectral_norm(kK) == doctest::Approx(9.115802067289527).epsilon(1e-12));
    CHECK(code_of([] { symmetric_eigenvalues(Mat{{1, 2}, {0, 1}}); }) == ErrorCode::NotSymmetric);
}

TEST_CASE("lyapunov solve") {
    Mat p = solve_lyapunov(Mat{{0, 1}, {-2, -3}}, Mat::identity(2));
    CHECK(std::abs(p(0, 0) - 1.25) <= 1e-10);
    CHECK(std::abs(p(0, 1) - 0.25) <= 1e-10);
    CHECK(std::abs(p(1, 0) - 0.25) <= 1e-10);
    CHECK(std::abs(p(1, 1) - 0.25) <= 1e-10);
    CHECK(p.is_symmetric(0.0));

    Mat s = solve_lyapunov(Mat{{-1}}, Mat{{1}});
    CHECK(s(0, 0) == doctest::Approx(0.5));

    // lambda_i + lambda_j = 0 makes the vectorized operator singular
    CHECK(code_of([] { solve_lyapunov(Mat{{1, 0}, {0, -1}}, Mat::identity(2)); }) == ErrorCode::SingularLyapunov);
}

TEST_CASE("lyapunov residual on random hurwitz matrices") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        Mat m(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m(i, j) = u(rng);
        // Gershgorin shift
        Mat shift = Mat::identity(4);
        shift *= m.norm_inf() + 0.5;
        m -= shift;
        REQUIRE(is_hurwitz(m));
        Mat q = Mat::identity(4);
        Mat p = solve_lyapunov(m, q);
        CHECK(lyapunov_residual(m, p, q) <= 1e-10 * q.norm_inf());
    }
}

TEST_CASE("rk4 order and event location") {
    VectorField f = [](double, const Vec& x) { return -1.0 * x; };
    auto err = [&](int steps) {
        Vec x{1.0};
        const double h = 1.0 / steps;
        for (int i = 0; i < steps; ++i) x = rk4_step(f, i * h, x, h);
        return std::abs(x[0] - std::exp(-1.0));
    };
    const double ratio = err(10) / err(20);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
    CHECK(rk4_step(f, 0, Vec{1.0}, 0.1)[0] == doctest::Approx(0.90483741803596).epsilon(1e-6));

    const double t = locate_event([](double s) { return s - 0.3; }, 0.0, 1.0, 1e-9);
    CHECK(t >= 0.3);
    CHECK(t - 0.3 <= 1e-9);
    const double r = locate_event([](double s) { return 0.3 - s; }, 0.0, 1.0, 1e-9);
    CHECK(r <= 0.3);
    CHECK(0.3 - r <= 1e-9);
    CHECK(code_of([] { locate_event([](double) { return 1.0; }, 0.0, 1.0); }) == ErrorCode::NoSignChange);

    VectorField inf = [](double, const Vec&) {
        Vec v(1);
        v[0] = std::numeric_limits<double>::infinity();
        return v;
    };
    CHECK(code_of([&] { rk4_step(inf, 0, Vec{1.0}, 0.1); }) == ErrorCode::NonFiniteDerivative);
}

TEST_CASE("sampled lipschitz lower bound") {
    Mat m{{1, 2}, {0, 3}};
    VecMap lin = [&](const Vec& x) { return m * x; };
    const double est = lipschitz_lower_bound(lin, Vec{0, 0}, 1.0, 10000);
    CHECK(est >= 0.9 * spectral_norm(m));
    CHECK(est <= spectral_norm(m) * (1 + 1e-12));

    VecMap s = [](const Vec& x) { return Vec{std::sin(x[0])}; };
    const double es = lipschitz_lower_bound(s, Vec{0.0}, M_PI, 10000);
    CHECK(es <= 1.0);
    CHECK(es >= 0.95);

    VecMap c = [](const Vec&) { return Vec{2.0, 1.0}; };
    CHECK(lipschitz_lower_bound(c, Vec{0, 0}, 1.0, 1000) == 0.0);

    double prev = 0.0;
    for (std::size_t n : {2u, 10u, 100u, 1000u, 5000u}) {
        const double e = lipschitz_lower_bound(s, Vec{0.0}, M_PI, n, 3);
        CHECK(e >= prev);
        prev = e;
    }
    CHECK(code_of([&] { lipschitz_lower_bound(s, Vec{0.0}, 1.0, 1); }) == ErrorCode::InsufficientSamples);
}
