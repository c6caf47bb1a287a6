#pragma once

#include "etc/models/plant.hpp"
#include "etc/models/registry.hpp"
#include "etc/num/linalg.hpp"
#include "etc/triggering/certificate.hpp"
#include "etc/triggering/policy.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace etc::sim {

/// Instantaneous jump added to x (the plant state only).
struct DisturbanceEvent {
    double time = 0.0;
    num::Vec state_jump;
    friend bool operator==(const DisturbanceEvent&, const DisturbanceEvent&) = default;
};

struct SimConfig {
    double t_end = 15.0;
    double dt = 1e-3;
    double event_tol = 1e-6;
    std::size_t max_events_per_node = 1'000'000;
    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Per-node trigger from the certificate budget.
struct AutoTrigger {
    friend bool operator==(const AutoTrigger&, const AutoTrigger&) = default;
};

/// Practical node-relative rule: ||v - v(t_k)|| > factor ||v|| after `dwell`.
/// Resolves to NodeRelativeActuator / NodeRelativeSensor with the matching kappa.
struct RelativeFactor {
    double factor = 0.0;
    double dwell = 0.0;
    friend bool operator==(const RelativeFactor&, const RelativeFactor&) = default;
};

using TriggerSpec = std::variant<trig::TriggerPolicy, AutoTrigger, RelativeFactor>;

struct LyapunovSpec {
    double eta_c = 1.0;
    double eta_o = 1.0;
    trig::A3Term a3_term = trig::A3Term::ScaledInverse;
    friend bool operator==(const LyapunovSpec&, const LyapunovSpec&) = default;
};

struct OutputSpec {
    std::string csv = "trajectory.csv";
    std::string svg = "trajectory.svg";
    std::string report = "report.txt";
    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct Scenario {
    std::string name;
    models::ModelSpec model;
    num::Mat K;  // as written in the scenario
    bool negative_feedback = false;  // u = -K x_hat when set
    num::Mat L;
    LyapunovSpec lyapunov;
    std::vector<TriggerSpec> triggers;  // actuators first, then sensors
    num::Vec x0;
    num::Vec xhat0;
    SimConfig sim;
    std::optional<SimConfig> validate;  // ideal-policy run; defaults to `sim`
    std::vector<DisturbanceEvent> disturbances;
    double compare_delta = 0.05;
    OutputSpec outputs;

    num::Mat applied_gain() const;
    const SimConfig& validate_config() const { return validate ? *validate : sim; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ClosedLoop {
    models::LipschitzAffinePlant plant;
    models::LinearController controller;
    models::LuenbergerObserver observer;

    std::size_t actuator_count() const { return plant.inputs().node_count(); }
    std::size_t sensor_count() const { return plant.outputs().node_count(); }
    std::size_t node_count() const { return actuator_count() + sensor_count(); }
};

/// Throws ValidationError on inconsistent dimensions or bad times.
void validate_scenario(const Scenario& s);

ClosedLoop build_closed_loop(const Scenario& s);

trig::LyapunovPair lyapunov_pair(const Scenario& s, const ClosedLoop& loop);
trig::IssCertificate scenario_certificate(const Scenario& s, const ClosedLoop& loop);

bool needs_certificate(const Scenario& s);

/// Concrete per-node policies; `cert` is required when any node is `auto`.
std::vector<trig::TriggerPolicy> resolve_policies(const Scenario& s, const ClosedLoop& loop,
                                                  const trig::IssCertificate* cert);

/// Explicit kappa-carrying policies must fit the certified budget.
void check_explicit_budget(const Scenario& s, const trig::IssCertificate& cert);

std::string node_label(const ClosedLoop& loop, std::size_t node);

}  // namespace etc::sim
