#include "etc/error.hpp"
#include "etc/models/partition.hpp"
#include "etc/models/plant.hpp"
#include "etc/models/registry.hpp"
#include "etc/num/eigen.hpp"

#include <doctest.h>

#include <cmath>

using namespace etc;
using namespace etc::models;
using num::Mat;
using num::Vec;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an etc::Error");
    return ErrorCode::IoError;
}

LipschitzAffinePlant benchmark() { return build_plant(FlexibleLinkBenchmark::model()); }

}  // namespace

TEST_CASE("node partitions") {
    auto p = NodePartition::from_widths({1, 2});
    CHECK(p.node_count() == 2);
    CHECK(p.total_dim() == 3);
    CHECK(p.span(1).offset == 1);
    CHECK(p.span(1).width == 2);
    CHECK(p.slice(Vec{1, 2, 3}, 1) == Vec{2, 3});
    CHECK(NodePartition::singletons(3).widths() == std::vector<std::size_t>{1, 1, 1});
    CHECK(code_of([] { NodePartition({{0, 1}, {2, 1}}, 3); }) == ErrorCode::ValidationError);
    CHECK(code_of([] { NodePartition::from_widths({1, 0}); }) == ErrorCode::ValidationError);
    CHECK(code_of([] { NodePartition({{0, 1}}, 2); }) == ErrorCode::ValidationError);
}

TEST_CASE("benchmark model matrices") {
    auto m = FlexibleLinkBenchmark::model();
    CHECK(m.A == Mat{{0, 1, 0, 0}, {-48.6, -1.25, 48.6, 0}, {0, 0, 0, 1}, {19.5, 0, -19.5, 0}});
    CHECK(m.B == Mat{{0}, {21.6}, {0}, {0}});
    CHECK(m.C == Mat{{1, 0, 0, 0}, {0, 1, 0, 0}});
    CHECK(m.rho == 3.3);
    CHECK(m.input_widths == std::vector<std::size_t>{1});
    CHECK(m.output_widths == std::vector<std::size_t>{1, 1});
    CHECK(FlexibleLinkBenchmark::K() == Mat{{7.8428, 1.1212, -4.3666, 1.1243}});
    CHECK(FlexibleLinkBenchmark::L() ==
          Mat{{9.3334, 1.0001}, {-48.7804, 22.3665}, {-0.0524, 3.3194}, {19.4066, -0.3167}});
}

TEST_CASE("plant dynamics") {
    auto plant = benchmark();
    // numpy: A x + phi(x) at x = (0, 0, pi/2, 0)
    Vec dx = plant_dynamics(plant, Vec{0, 0, M_PI / 2, 0}, Vec{0});
    CHECK(dx[0] == doctest::Approx(0.0));
    CHECK(dx[1] == doctest::Approx(76.34070148).epsilon(1e-9));
    CHECK(dx[2] == doctest::Approx(0.0));
    CHECK(dx[3] == doctest::Approx(-27.33052837).epsilon(1e-9));

    Vec at_rest = plant_dynamics(plant, Vec(4), Vec{0});
    CHECK(num::norm_two(at_rest) == 0.0);
    Vec pushed = plant_dynamics(plant, Vec(4), Vec{1});
    CHECK(pushed == Vec{0, 21.6, 0, 0});
    CHECK(plant.node_output(1, Vec{1, 2, 3, 4}) == Vec{2});
    CHECK(code_of([&] { plant_dynamics(plant, Vec(3), Vec{0}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("controller and observer") {
    auto plant = benchmark();
    Mat k = FlexibleLinkBenchmark::K();
    Mat applied = k;
    applied *= -1.0;
    LinearController ctrl(applied, plant.inputs());
    CHECK(controller_eval(ctrl, Vec{1, 0, 0, 0})[0] == doctest::Approx(-7.8428));
    CHECK(ctrl.node_lipschitz(0) == doctest::Approx(9.115802067289527).epsilon(1e-12));
    // the benchmark row only stabilizes with the sign flipped
    CHECK(num::is_hurwitz(plant.A() + plant.B() * applied));
    CHECK_FALSE(num::is_hurwitz(plant.A() + plant.B() * k));

    LuenbergerObserver obs(FlexibleLinkBenchmark::L(), plant);
    CHECK(obs.output_lipschitz() == doctest::Approx(1.0));
    CHECK(obs.node_lipschitz(0) == doctest::Approx(1.0));
    CHECK(obs.node_lipschitz(1) == doctest::Approx(1.0));

    // with a perfect estimate and fresh outputs the observer copies the plant
    Vec x{0.3, -0.2, 0.5, 0.1};
    Vec u{0.7};
    Vec dxh = observer_dynamics(plant, obs, x, u, plant.output(x));
    Vec dx = plant_dynamics(plant, x, u);
    for (std::size_t i = 0; i < 4; ++i) CHECK(dxh[i] == doctest::Approx(dx[i]));

    CHECK(code_of([&] { LinearController(Mat(2, 4), plant.inputs()); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("phi lipschitz check") {
    auto plant = benchmark();
    const double est = phi_lipschitz_check(plant, 10000, 10.0);
    CHECK(est <= 3.3);
    CHECK(est >= 0.95 * 3.3);

    auto spec = FlexibleLinkBenchmark::model();
    spec.rho = 1.0;
    auto loose = build_plant(spec);
    CHECK(code_of([&] { phi_lipschitz_check(loose, 1000, 10.0); }) == ErrorCode::RhoViolated);
}

TEST_CASE("model registry") {
    CHECK(builtin_model_names().size() == 3);
    for (const auto& name : builtin_model_names()) {
        auto m = builtin_model(name);
        CHECK(m.name == name);
        CHECK_NOTHROW(build_plant(m));
    }
    CHECK(code_of([] { builtin_model("pendulum"); }) == ErrorCode::UnknownModel);
    CHECK(sin_terms_rho({{3, 2, 3.3}}, 4) == doctest::Approx(3.3));
    CHECK(sin_terms_rho({{0, 0, 3.0}, {1, 1, 4.0}}, 2) == doctest::Approx(5.0));
    CHECK(code_of([] { sin_terms_rho({{4, 0, 1.0}}, 4); }) == ErrorCode::DimensionMismatch);

    ModelSpec bad = builtin_model("double-integrator");
    bad.B = Mat{{0}, {1}, {0}};
    CHECK(code_of([&] { build_plant(bad); }) == ErrorCode::DimensionMismatch);
}
