#pragma once

#include "etc/num/linalg.hpp"
#include "etc/sim/scenario.hpp"
#include "etc/triggering/certificate.hpp"
#include "etc/triggering/policy.hpp"

#include <string>
#include <vector>

namespace etc::sim {

/// One logged instant. `e` is the sampling error (K x_hat - u_held, C x - y_held).
struct TrajectoryRow {
    double t = 0.0;
    num::Vec x, xhat, ubar, ybar, e;
    double norm_x = 0.0;
    double norm_z = 0.0;
};

struct TriggerEvent {
    double t = 0.0;
    std::size_t node = 0;  // actuators first, then sensors
    trig::NodeKind kind = trig::NodeKind::Actuator;
    num::Vec value;
};

struct SimulationResult {
    std::vector<TrajectoryRow> trajectory;
    std::vector<TriggerEvent> trigger_log;  // includes the t = 0 transmissions
    std::vector<std::string> node_labels;
    std::vector<trig::NodeKind> node_kinds;
    std::vector<std::string> policy_names;
    std::vector<double> node_dwell;
    std::vector<std::size_t> transmissions;  // per node, including t = 0
    std::vector<double> disturbance_times;
    std::size_t state_dim = 0;
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    double t_end = 0.0;
    double dt = 0.0;
    double event_tol = 0.0;
};

struct RunSetup {
    num::Vec x0;
    num::Vec xhat0;
    SimConfig sim;
    std::vector<DisturbanceEvent> disturbances;
};

RunSetup run_setup(const Scenario& s);

/// Hybrid closed loop: RK4 between events, per-node predicates checked at every
/// step end, crossings localized by bisection and the step re-integrated to
/// the crossing. Throws NonFinite or ZenoSuspect.
SimulationResult simulate(const ClosedLoop& loop, const std::vector<trig::TriggerPolicy>& policies,
                          const RunSetup& setup);

/// Resolves the scenario's triggers (building the certificate if needed) and runs it.
SimulationResult simulate(const Scenario& s);

/// Same scenario with Periodic{delta} on every node.
SimulationResult simulate_periodic_baseline(const Scenario& s, double delta);

struct IdealViolation {
    double t = 0.0;
    double norm_E = 0.0;
    double bound = 0.0;
};

struct IdealValidationReport {
    SimulationResult result;
    std::vector<IdealViolation> violations;
    std::size_t samples = 0;
    double sigma_prime = 0.0;
    double slack_factor = 0.0;  // slack = slack_factor * ||X||
    double max_ratio = 0.0;     // max ||E|| / ||X|| over samples with X != 0
};

/// Runs IdealNode policies from the certificate over the scenario's validate
/// window and flags rows with ||E|| > sigma' ||X|| + 2 L_G event_tol ||X||.
/// Throws BudgetExceeded before running if the certificate is unsound.
IdealValidationReport run_ideal_validation(const Scenario& s, const trig::IssCertificate& cert);

}  // namespace etc::sim
