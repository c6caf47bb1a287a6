#include "etc/triggering/policy.hpp"

#include "etc/error.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace etc::trig {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        fail(ErrorCode::ValidationError, fmt::format("{} must be positive, got {}", what, v));
    }
}

void non_negative(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        fail(ErrorCode::ValidationError, fmt::format("{} must be non-negative, got {}", what, v));
    }
}

bool dwell_elapsed(const NodeRegister& reg, double t, double tau) {
    return t >= reg.last_trigger_time() + tau;
}

double deviation_two(const NodeRegister& reg, const num::Vec& current) {
    return num::norm_two(current - reg.held_value());
}

void require_width(const NodeRegister& reg, const num::Vec& v) {
    if (v.size() != reg.held_value().size()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("node value of width {} for a register of width {}", v.size(), reg.held_value().size()));
    }
}

}  // namespace

void validate_policy(const TriggerPolicy& policy) {
    std::visit(overloaded{
                   [](const Periodic& p) { positive(p.delta, "periodic delta"); },
                   [](const EpsilonCrossing& p) { positive(p.epsilon, "epsilon"); },
                   [](const StateDependent& p) {
                       positive(p.sigma, "sigma");
                       positive(p.epsilon, "epsilon");
                   },
                   [](const Mixed& p) {
                       positive(p.epsilon, "epsilon");
                       positive(p.delta_min, "delta_min");
                   },
                   [](const RelativeState& p) { positive(p.sigma, "sigma"); },
                   [](const NodeRelativeActuator& p) {
                       positive(p.kappa, "kappa");
                       positive(p.L_gamma, "L_gamma");
                       non_negative(p.tau_min, "tau_min");
                   },
                   [](const NodeRelativeSensor& p) {
                       positive(p.kappa, "kappa");
                       positive(p.L_h, "L_h");
                       non_negative(p.tau_min, "tau_min");
                   },
                   [](const IdealNode& p) {
                       non_negative(p.kappa, "kappa");
                       non_negative(p.tau_min, "tau_min");
                   },
               },
               policy);
}

std::string policy_name(const TriggerPolicy& policy) {
    return std::visit(overloaded{
                          [](const Periodic&) { return std::string("periodic"); },
                          [](const EpsilonCrossing&) { return std::string("epsilon"); },
                          [](const StateDependent&) { return std::string("state-dependent"); },
                          [](const Mixed&) { return std::string("mixed"); },
                          [](const RelativeState&) { return std::string("relative-state"); },
                          [](const NodeRelativeActuator&) { return std::string("actuator"); },
                          [](const NodeRelativeSensor&) { return std::string("sensor"); },
                          [](const IdealNode&) { return std::string("ideal"); },
                      },
                      policy);
}

double dwell_time(const TriggerPolicy& policy) {
    return std::visit(overloaded{
                          [](const Periodic& p) { return p.delta; },
                          [](const Mixed& p) { return p.delta_min; },
                          [](const NodeRelativeActuator& p) { return p.tau_min; },
                          [](const NodeRelativeSensor& p) { return p.tau_min; },
                          [](const IdealNode& p) { return p.tau_min; },
                          [](const auto&) { return 0.0; },
                      },
                      policy);
}

bool is_time_driven(const TriggerPolicy& policy) {
    return std::holds_alternative<Periodic>(policy);
}

NodeRegister::NodeRegister(NodeKind kind, TriggerPolicy policy, num::Vec initial, double t0)
    : kind_(kind), policy_(std::move(policy)), held_(std::move(initial)), last_(t0) {
    validate_policy(policy_);
    if (held_.empty()) fail(ErrorCode::DimensionMismatch, "node register of width 0");
}

void NodeRegister::accept(double t, num::Vec sample) {
    if (t < last_) {
        fail(ErrorCode::ValidationError, fmt::format("trigger at {} precedes the previous one at {}", t, last_));
    }
    require_width(*this, sample);
    held_ = std::move(sample);
    last_ = t;
    ++count_;
}

bool should_trigger_actuator(const NodeRegister& reg, double t, const num::Vec& u_now, const num::Vec& gamma_xhat) {
    double kappa = 0.0;
    double scale = 0.0;
    double tau = 0.0;
    if (const auto* p = std::get_if<NodeRelativeActuator>(&reg.policy())) {
        kappa = p->kappa;
        scale = p->L_gamma;
        tau = p->tau_min;
    } else {
        fail(ErrorCode::PolicyMismatch,
             fmt::format("actuator predicate on a '{}' register", policy_name(reg.policy())));
    }
    if (reg.kind() != NodeKind::Actuator) fail(ErrorCode::PolicyMismatch, "actuator predicate on a sensor node");
    require_width(reg, u_now);
    if (!dwell_elapsed(reg, t, tau)) return false;
    return deviation_two(reg, u_now) > (kappa / scale) * num::norm_two(gamma_xhat);
}

bool should_trigger_sensor(const NodeRegister& reg, double t, const num::Vec& y_now) {
    const auto* p = std::get_if<NodeRelativeSensor>(&reg.policy());
    if (p == nullptr) {
        fail(ErrorCode::PolicyMismatch, fmt::format("sensor predicate on a '{}' register", policy_name(reg.policy())));
    }
    if (reg.kind() != NodeKind::Sensor) fail(ErrorCode::PolicyMismatch, "sensor predicate on an actuator node");
    require_width(reg, y_now);
    if (!dwell_elapsed(reg, t, p->tau_min)) return false;
    return deviation_two(reg, y_now) > (p->kappa / (2.0 * p->L_h)) * num::norm_two(y_now);
}

bool should_trigger_ideal(const NodeRegister& reg, double t, const num::Vec& current, double extended_norm) {
    const auto* p = std::get_if<IdealNode>(&reg.policy());
    if (p == nullptr) {
        fail(ErrorCode::PolicyMismatch, fmt::format("ideal predicate on a '{}' register", policy_name(reg.policy())));
    }
    require_width(reg, current);
    if (!dwell_elapsed(reg, t, p->tau_min)) return false;
    return deviation_two(reg, current) > p->kappa * extended_norm;
}

bool should_trigger_generic(const NodeRegister& reg, double t, const num::Vec& current, double reference_magnitude) {
    require_width(reg, current);
    auto dev = [&] { return num::norm_one(current - reg.held_value()); };
    return std::visit(overloaded{
                          [&](const Periodic& p) { return dwell_elapsed(reg, t, p.delta); },
                          [&](const EpsilonCrossing& p) { return dev() > p.epsilon; },
                          [&](const StateDependent& p) { return dev() > p.sigma * reference_magnitude + p.epsilon; },
                          [&](const Mixed& p) { return dwell_elapsed(reg, t, p.delta_min) && dev() > p.epsilon; },
                          [&](const RelativeState& p) { return dev() > p.sigma * reference_magnitude; },
                          [&](const auto&) -> bool {
                              fail(ErrorCode::PolicyMismatch, fmt::format("generic predicate on a '{}' register",
                                                                          policy_name(reg.policy())));
                          },
                      },
                      reg.policy());
}

double sigma_bound(double L_a3_inv, double L_b) {
    if (!(L_a3_inv > 0.0) || !(L_b > 0.0)) {
        fail(ErrorCode::NonPositiveConstant,
             fmt::format("sigma bound needs positive constants, got L_a3_inv={} L_b={}", L_a3_inv, L_b));
    }
    return 1.0 / (L_a3_inv * L_b);
}

double euclidean_margin(double sigma, std::size_t dim_E) {
    if (!(sigma > 0.0)) fail(ErrorCode::NonPositiveConstant, "sigma must be positive");
    if (dim_E == 0) fail(ErrorCode::DimensionMismatch, "E must have at least one entry");
    return sigma / std::sqrt(static_cast<double>(dim_E));
}

std::vector<double> allocate_kappa(double sigma_prime, std::size_t node_count) {
    if (node_count == 0) fail(ErrorCode::DimensionMismatch, "no nodes to allocate kappa over");
    std::vector<double> k(node_count, sigma_prime / static_cast<double>(node_count));
    double head = std::accumulate(k.begin(), k.end() - 1, 0.0);
    k.back() = sigma_prime - head;
    return k;
}

static double min_interevent(double L_G, double sigma_prime, double kappa, double L_node) {
    if (!(L_G > 0.0) || !(sigma_prime > 0.0) || !(L_node > 0.0) || !(kappa >= 0.0)) {
        fail(ErrorCode::NonPositiveConstant,
             fmt::format("tau_min needs positive constants (L_G={}, sigma'={}, kappa={}, L={})", L_G, sigma_prime,
                         kappa, L_node));
    }
    return std::log1p(kappa / L_node) / (L_G * (1.0 + sigma_prime));
}

double min_interevent_actuator(double L_G, double sigma_prime, double kappa_i, double L_gamma_i) {
    return min_interevent(L_G, sigma_prime, kappa_i, L_gamma_i);
}

double min_interevent_sensor(double L_G, double sigma_prime, double kappa_j, double L_h_j) {
    return min_interevent(L_G, sigma_prime, kappa_j, L_h_j);
}

}  // namespace etc::trig
