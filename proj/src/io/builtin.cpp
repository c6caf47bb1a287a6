#include "etc/io/builtin.hpp"

#include "etc/models/registry.hpp"

namespace etc::io {

namespace {

sim::Scenario flexible_link_benchmark() {
    using models::FlexibleLinkBenchmark;
    sim::Scenario s;
    s.name = "flexible-link-paper";
    s.model = FlexibleLinkBenchmark::model();
    s.K = FlexibleLinkBenchmark::K();
    s.negative_feedback = true;
    s.L = FlexibleLinkBenchmark::L();
    s.triggers.assign(3, sim::RelativeFactor{0.2, 0.01});
    s.x0 = num::Vec{1.0, 1.0, 1.0, 1.0};
    s.xhat0 = num::Vec{0.0, 0.0, 0.0, 0.0};
    s.sim = sim::SimConfig{15.0, 1e-3, 1e-6, 1'000'000};
    // The certified inter-event times are ~1e-12 s, so the ideal-policy check
    // runs on a short window with a matching step.
    s.validate = sim::SimConfig{2e-7, 1e-11, 1e-16, 1'000'000};
    s.disturbances.push_back({2.0, num::Vec{1.0, 1.0, 1.0, 1.0}});
    s.compare_delta = 0.05;
    return s;
}

}  // namespace

std::optional<sim::Scenario> builtin_scenario(const std::string& name) {
    if (name == "flexible-link-paper") return flexible_link_benchmark();
    return std::nullopt;
}

std::vector<std::string> builtin_scenario_names() { return {"flexible-link-paper"}; }

}  // namespace etc::io
