#pragma once

#include "etc/num/linalg.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

namespace etc::trig {

// Classic single-signal policies. Their predicates use the 1-norm.

/// t_{k+1} = t_k + delta
struct Periodic {
    double delta = 0.0;
    friend bool operator==(const Periodic&, const Periodic&) = default;
};
/// |v(t) - v(t_k)| > epsilon
struct EpsilonCrossing {
    double epsilon = 0.0;
    friend bool operator==(const EpsilonCrossing&, const EpsilonCrossing&) = default;
};
/// |v(t) - v(t_k)| > sigma |v| + epsilon
struct StateDependent {
    double sigma = 0.0;
    double epsilon = 0.0;
    friend bool operator==(const StateDependent&, const StateDependent&) = default;
};
/// t >= t_k + delta_min and |v(t) - v(t_k)| > epsilon
struct Mixed {
    double epsilon = 0.0;
    double delta_min = 0.0;
    friend bool operator==(const Mixed&, const Mixed&) = default;
};
/// |v(t) - v(t_k)| > sigma |v|
struct RelativeState {
    double sigma = 0.0;
    friend bool operator==(const RelativeState&, const RelativeState&) = default;
};

// Per-node policies that only use information local to the node (Euclidean norms).

/// t >= t_k + tau_min and ||u_i - u_i(t_k)|| > (kappa / L_gamma) ||gamma_i(x_hat)||
struct NodeRelativeActuator {
    double kappa = 0.0;
    double L_gamma = 0.0;
    double tau_min = 0.0;
    friend bool operator==(const NodeRelativeActuator&, const NodeRelativeActuator&) = default;
};
/// t >= t_k + tau_min and ||y_j - y_j(t_k)|| > (kappa / (2 L_h)) ||y_j||
struct NodeRelativeSensor {
    double kappa = 0.0;
    double L_h = 0.0;
    double tau_min = 0.0;
    friend bool operator==(const NodeRelativeSensor&, const NodeRelativeSensor&) = default;
};
/// t >= t_k + tau_min and ||v - v(t_k)|| > kappa ||X||, with the true extended
/// state X = (x_hat, z). Not implementable on a network; used for validation.
struct IdealNode {
    double kappa = 0.0;
    double tau_min = 0.0;
    friend bool operator==(const IdealNode&, const IdealNode&) = default;
};

using TriggerPolicy = std::variant<Periodic, EpsilonCrossing, StateDependent, Mixed, RelativeState,
                                   NodeRelativeActuator, NodeRelativeSensor, IdealNode>;

/// Throws ValidationError on non-positive parameters.
void validate_policy(const TriggerPolicy& policy);
std::string policy_name(const TriggerPolicy& policy);
/// Guaranteed minimum spacing between consecutive triggers (0 if none).
double dwell_time(const TriggerPolicy& policy);
/// Time-driven policies fire at a schedule rather than on a state crossing.
bool is_time_driven(const TriggerPolicy& policy);

enum class NodeKind { Actuator, Sensor };

/// Zero-order-hold register of one node: the last transmitted value and when
/// it was sent.
class NodeRegister {
public:
    NodeRegister(NodeKind kind, TriggerPolicy policy, num::Vec initial, double t0);

    NodeKind kind() const noexcept { return kind_; }
    const TriggerPolicy& policy() const noexcept { return policy_; }
    const num::Vec& held_value() const noexcept { return held_; }
    double last_trigger_time() const noexcept { return last_; }
    std::size_t trigger_count() const noexcept { return count_; }

    /// Latch a new sample; t must not precede the previous trigger.
    void accept(double t, num::Vec sample);

private:
    NodeKind kind_;
    TriggerPolicy policy_;
    num::Vec held_;
    double last_;
    std::size_t count_ = 1;
};

bool should_trigger_actuator(const NodeRegister& reg, double t, const num::Vec& u_now, const num::Vec& gamma_xhat);
bool should_trigger_sensor(const NodeRegister& reg, double t, const num::Vec& y_now);
bool should_trigger_generic(const NodeRegister& reg, double t, const num::Vec& current, double reference_magnitude);
bool should_trigger_ideal(const NodeRegister& reg, double t, const num::Vec& current, double extended_norm);

// Budget arithmetic.

/// 1 / (L_a3_inv * L_b), the supremum of admissible sigma.
double sigma_bound(double L_a3_inv, double L_b);
/// sigma / sqrt(dim_E): a Euclidean margin implying the 1-norm one.
double euclidean_margin(double sigma, std::size_t dim_E);
/// Uniform split of sigma_prime; the last entry absorbs rounding so the sum is exact.
std::vector<double> allocate_kappa(double sigma_prime, std::size_t node_count);

/// ln(1 + kappa / L_gamma) / (L_G (1 + sigma_prime)). kappa = 0 gives 0.
double min_interevent_actuator(double L_G, double sigma_prime, double kappa_i, double L_gamma_i);
/// ln(1 + kappa / L_h) / (L_G (1 + sigma_prime)). kappa = 0 gives 0.
double min_interevent_sensor(double L_G, double sigma_prime, double kappa_j, double L_h_j);

}  // namespace etc::trig
