#pragma once

#include "etc/num/sampling.hpp"
#include "etc/sim/simulator.hpp"
#include "etc/triggering/certificate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace etc::analysis {

struct NodeStats {
    std::string label;
    trig::NodeKind kind = trig::NodeKind::Actuator;
    std::size_t count = 0;  // transmissions including t = 0
    // Inter-event gaps; empty when the node only transmitted once.
    std::optional<double> min_gap, mean_gap, max_gap;
};

struct TriggerStats {
    std::vector<NodeStats> nodes;
    std::size_t actuator_total = 0;
    std::size_t sensor_total = 0;
};

/// Throws EmptyLog when nothing was transmitted.
TriggerStats trigger_stats(const sim::SimulationResult& result);

struct ConvergenceReport {
    double threshold = 0.0;
    /// First time after the last disturbance from which ||x|| stays below
    /// `threshold`; empty when the run never settles.
    std::optional<double> settling_time;
    bool never_settles = false;
    double tail_sup_x = 0.0;  // over the last 10% of the horizon
    double tail_sup_z = 0.0;
    double peak_x = 0.0;  // after the last disturbance (whole run if none)
    /// Least-squares slope of -log ||x|| after the peak; informational.
    std::optional<double> decay_rate;
};

ConvergenceReport convergence_report(const sim::SimulationResult& result, double threshold);

struct LyapunovSample {
    double t = 0.0;
    double dVdt = 0.0;
    double bound = 0.0;  // -|X|_1 / L_a3_inv + L_b |E|_1
    double slack = 0.0;
};

enum class LyapunovVerdict { Holds, Violated };

struct LyapunovCheck {
    std::vector<LyapunovSample> violations;
    std::vector<double> excluded_times;
    std::size_t checked = 0;
    double max_slack = 0.0;
    /// max of (dVdt - bound) over checked samples; negative means strict decrease margin.
    double worst_excess = 0.0;

    LyapunovVerdict verdict() const {
        return violations.empty() ? LyapunovVerdict::Holds : LyapunovVerdict::Violated;
    }
};

/// V = lambda_c * 2 sqrt(x_hat' P_c x_hat) + 2 sqrt(z' P_o z).
double composite_lyapunov(const trig::LyapunovPair& lyap, double lambda_c, const num::Vec& xhat,
                          const num::Vec& z);

/// Central-difference check of dV/dt <= -|X|/L_a3_inv + L_b |E| along the
/// logged trajectory. A sample is skipped when a trigger lies strictly inside
/// its stencil or a disturbance lies in (t_prev, t_next]. Slack per sample is
/// 10 h |V''| plus a rounding term 8 eps max|V| / (t_next - t_prev).
/// Throws InsufficientSamples with fewer than three rows.
LyapunovCheck check_lyapunov_decrease(const sim::SimulationResult& result, const trig::LyapunovPair& lyap,
                                      const trig::IssCertificate& cert);

/// For probes that break the budget on purpose: finding violations falsifies
/// the bound for that run, not finding any proves nothing.
enum class ProbeOutcome { Falsified, Inconclusive };
ProbeOutcome probe_outcome(const LyapunovCheck& check);

/// Sampled lower bound on the Lipschitz constant (deterministic for a seed).
double estimate_lipschitz(const num::VecMap& f, const num::Vec& center, double radius, std::size_t samples,
                          std::uint64_t seed = 0);

std::string to_string(LyapunovVerdict v);
std::string to_string(ProbeOutcome p);

}  // namespace etc::analysis
