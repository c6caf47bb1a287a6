#include "etc/error.hpp"
#include "etc/io/builtin.hpp"
#include "etc/sim/scenario.hpp"
#include "etc/sim/simulator.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace etc;
using namespace etc::sim;
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

Scenario paper() { return *io::builtin_scenario("flexible-link-paper"); }

std::vector<std::vector<double>> times_by_node(const SimulationResult& r) {
    std::vector<std::vector<double>> out(r.node_labels.size());
    for (const auto& ev : r.trigger_log) out[ev.node].push_back(ev.t);
    return out;
}

Scenario scalar(double k) {
    Scenario s;
    s.name = "scalar";
    s.model = models::builtin_model("scalar-linear");
    s.K = Mat{{k}};
    s.L = Mat{{1}};
    s.triggers = {trig::TriggerPolicy{trig::Periodic{0.1}}, RelativeFactor{0.2, 0.01}};
    s.x0 = Vec{1.0};
    s.xhat0 = Vec{1.0};
    s.sim = SimConfig{1.0, 1e-3, 1e-6, 1'000'000};
    return s;
}

}  // namespace

TEST_CASE("equilibrium stays silent") {
    auto s = paper();
    s.x0 = Vec(4);
    s.xhat0 = Vec(4);
    s.disturbances.clear();
    auto r = simulate(s);
    for (const auto& row : r.trajectory) {
        CHECK(row.norm_x == 0.0);
        CHECK(row.norm_z == 0.0);
    }
    CHECK(r.transmissions == std::vector<std::size_t>{1, 1, 1});
    CHECK(r.trajectory.size() == 15001);

    auto v = run_ideal_validation(s, scenario_certificate(s, build_closed_loop(s)));
    CHECK(v.violations.empty());
    CHECK(v.result.transmissions == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("uncontrolled scalar plant follows exp(-t)") {
    auto r = simulate(scalar(0.0));
    const auto& last = r.trajectory.back();
    CHECK(last.t == doctest::Approx(1.0));
    CHECK(std::abs(last.x[0] - std::exp(-1.0)) <= 1e-6);
    CHECK(r.transmissions[0] == 11);
    for (const auto& row : r.trajectory) CHECK(row.ubar[0] == 0.0);
}

TEST_CASE("periodic baseline counts") {
    auto s = paper();
    auto r = simulate_periodic_baseline(s, 0.05);
    CHECK(r.transmissions == std::vector<std::size_t>{301, 301, 301});
    auto times = times_by_node(r);
    for (const auto& ts : times) {
        for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] - ts[i - 1] == doctest::Approx(0.05));
    }
    s.sim.t_end = 1.0;
    s.disturbances.clear();
    CHECK(simulate_periodic_baseline(s, 0.5).transmissions == std::vector<std::size_t>{3, 3, 3});

    auto still = paper();
    still.x0 = Vec(4);
    still.disturbances.clear();
    CHECK(simulate_periodic_baseline(still, 0.05).transmissions == std::vector<std::size_t>{301, 301, 301});
    CHECK(code_of([&] { simulate_periodic_baseline(still, 0.0); }) == ErrorCode::NonPositiveConstant);
}

TEST_CASE("benchmark run invariants") {
    auto s = paper();
    auto r = simulate(s);
    const auto& tr = r.trajectory;

    // one row per grid point plus one per distinct off-grid event instant
    std::set<double> grid;
    for (std::size_t i = 0; i <= 15000; ++i) grid.insert(static_cast<double>(i) * 1e-3);
    std::set<double> extra;
    for (const auto& ev : r.trigger_log) {
        if (!grid.contains(ev.t)) extra.insert(ev.t);
    }
    CHECK(tr.size() == 15001 + extra.size());
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i].t > tr[i - 1].t);

    // dwell floor per node
    auto times = times_by_node(r);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t i = 1; i < times[k].size(); ++i) {
            CHECK(times[k][i] - times[k][i - 1] >= r.node_dwell[k] - r.event_tol);
        }
    }

    // zero-order hold: held inputs only change at actuator triggers
    std::set<double> act_times(times[0].begin(), times[0].end());
    for (std::size_t i = 1; i < tr.size(); ++i) {
        if (!act_times.contains(tr[i].t)) CHECK(tr[i].ubar == tr[i - 1].ubar);
    }

    // reset: right after a trigger the node's sampling error is zero
    for (const auto& ev : r.trigger_log) {
        auto it = std::lower_bound(tr.begin(), tr.end(), ev.t, [](const auto& row, double t) { return row.t < t; });
        REQUIRE(it != tr.end());
        REQUIRE(it->t == ev.t);
        CHECK(std::abs(it->e[ev.node]) <= 1e-12 * (1.0 + num::norm_two(it->x)));
    }

    // the jump lands exactly at t = 2
    CHECK(r.disturbance_times == std::vector<double>{2.0});
    auto at2 = std::find_if(tr.begin(), tr.end(), [](const auto& row) { return row.t == 2.0; });
    REQUIRE(at2 != tr.end());
    CHECK(at2->norm_x > 1.0);
    CHECK((at2 - 1)->norm_x < 0.5);

    CHECK(tr.back().norm_x <= 0.05);
    CHECK(tr.back().norm_z <= 0.05);
}

TEST_CASE("determinism") {
    auto a = simulate(paper());
    auto b = simulate(paper());
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        CHECK(a.trajectory[i].t == b.trajectory[i].t);
        CHECK(a.trajectory[i].x == b.trajectory[i].x);
    }
    REQUIRE(a.trigger_log.size() == b.trigger_log.size());
    for (std::size_t i = 0; i < a.trigger_log.size(); ++i) CHECK(a.trigger_log[i].t == b.trigger_log[i].t);
}

TEST_CASE("refinement convergence under step halving") {
    auto s = paper();
    auto coarse = simulate(s);
    s.sim.dt /= 2;
    auto fine = simulate(s);
    auto tc = times_by_node(coarse);
    auto tf = times_by_node(fine);
    REQUIRE(tc.size() == tf.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < tc.size(); ++k) {
        CHECK_MESSAGE(tc[k].size() == tf[k].size(), "node " << k << ": " << tc[k].size() << " vs " << tf[k].size());
        const std::size_t n = std::min(tc[k].size(), tf[k].size());
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::abs(tc[k][i] - tf[k][i]);
            if (d >= 10 * s.sim.event_tol && worst < 10 * s.sim.event_tol)
                MESSAGE("node " << k << " first diverges at t=" << tc[k][i] << " (" << d << ")");
            worst = std::max(worst, d);
        }
    }
    MESSAGE("largest trigger time shift: " << worst);
    CHECK(worst < 10 * s.sim.event_tol);
}

TEST_CASE("runtime failures") {
    auto s = paper();
    s.sim.max_events_per_node = 5;
    CHECK(code_of([&] { simulate(s); }) == ErrorCode::ZenoSuspect);

    auto unstable = paper();
    unstable.negative_feedback = false;  // benchmark row with u = +K x_hat
    unstable.sim.t_end = 60.0;
    const auto c = code_of([&] { simulate_periodic_baseline(unstable, 0.05); });
    CHECK((c == ErrorCode::NonFinite || c == ErrorCode::NonFiniteDerivative));
}

TEST_CASE("scenario validation") {
    auto s = paper();
    s.K = Mat{{1, 2, 3}};
    CHECK(code_of([&] { build_closed_loop(s); }) == ErrorCode::ValidationError);
    s = paper();
    s.triggers.pop_back();
    CHECK(code_of([&] { build_closed_loop(s); }) == ErrorCode::ValidationError);
    s = paper();
    s.disturbances.push_back({20.0, Vec(4)});
    CHECK(code_of([&] { build_closed_loop(s); }) == ErrorCode::ValidationError);
    s = paper();
    s.triggers[0] = trig::TriggerPolicy{trig::NodeRelativeSensor{0.1, 1.0, 0.0}};
    auto loop = build_closed_loop(s);
    CHECK(code_of([&] { resolve_policies(s, loop, nullptr); }) == ErrorCode::ValidationError);
    s = paper();
    s.triggers[1] = AutoTrigger{};
    CHECK(code_of([&] { resolve_policies(s, loop, nullptr); }) == ErrorCode::ValidationError);
}

TEST_CASE("ideal validation on the certified benchmark window") {
    auto s = paper();
    auto loop = build_closed_loop(s);
    auto cert = scenario_certificate(s, loop);
    auto v = run_ideal_validation(s, cert);
    CHECK(v.violations.empty());
    CHECK(v.samples > 20000);
    CHECK(v.max_ratio <= cert.sigma_prime);
    auto times = times_by_node(v.result);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(times[k].size() > 1);
        for (std::size_t i = 1; i < times[k].size(); ++i) {
            CHECK(times[k][i] - times[k][i - 1] >= cert.tau_min[k] - v.result.event_tol);
        }
    }

    auto doubled = cert;
    for (auto& k : doubled.kappa) k *= 2;
    CHECK(code_of([&] { run_ideal_validation(s, doubled); }) == ErrorCode::BudgetExceeded);
}
