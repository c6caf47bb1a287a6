#pragma once

#include "etc/models/plant.hpp"
#include "etc/num/linalg.hpp"
#include "etc/triggering/policy.hpp"

#include <string>
#include <vector>

namespace etc::trig {

/// V_c(x) = x' P_c x and V_o(z) = z' P_o z with decay rates eta_c, eta_o.
struct LyapunovPair {
    num::Mat P_c;
    double eta_c = 1.0;
    num::Mat P_o;
    double eta_o = 1.0;
};

/// How the controller branch enters the Lipschitz constant of a3^{-1}.
/// ScaledInverse uses L_{alpha_c3^{-1}} / lambda_c, the slope of (lambda_c alpha_c3)^{-1}.
/// Literal uses lambda_c / L_{alpha_c3}.
enum class A3Term { ScaledInverse, Literal };

std::string to_string(A3Term term);
A3Term a3_term_from_string(const std::string& s);

struct IssCertificate {
    double L_a3_inv = 0.0;
    double L_b = 0.0;
    double L_G = 0.0;
    double lambda_c = 0.0;
    double L_beta_c = 0.0;
    double L_beta_o = 0.0;
    double L_alpha_c3 = 0.0;
    double L_alpha_c3_inv = 0.0;
    double L_alpha_o3_inv = 0.0;
    double sigma_max = 0.0;
    double sigma = 0.0;
    double sigma_prime = 0.0;
    /// Actuator nodes first, then sensor nodes.
    std::vector<double> kappa;
    std::vector<double> tau_min;
    std::vector<double> L_gamma;  // per actuator node
    std::vector<double> L_h;      // per sensor node
    double L_h_global = 0.0;      // ||C||_2, used in the sensor threshold
    std::size_t actuator_count = 0;
    std::size_t sensor_count = 0;
    std::size_t dim_E = 0;
    A3Term a3_term = A3Term::ScaledInverse;
    std::vector<std::string> warnings;
};

/// P from M' P + P M = -I for the controller (A + B K) and observer (A - L C)
/// error dynamics, with eta = 1.
LyapunovPair lyapunov_pair_from_gains(const models::LipschitzAffinePlant& plant, const models::LinearController& ctrl,
                                      const models::LuenbergerObserver& obs);

/// The gain stored in `ctrl` is the applied one (u = K x_hat).
IssCertificate build_certificate(const models::LipschitzAffinePlant& plant, const models::LinearController& ctrl,
                                 const models::LuenbergerObserver& obs, const LyapunovPair& lyap,
                                 A3Term a3_term = A3Term::ScaledInverse);

/// Re-asserts the budget inequalities; throws BudgetExceeded or CertificateDegenerate.
void validate_certificate(const IssCertificate& cert);

/// Policies implied by the certificate, actuators first.
std::vector<TriggerPolicy> certified_node_policies(const IssCertificate& cert);
std::vector<TriggerPolicy> ideal_node_policies(const IssCertificate& cert);

}  // namespace etc::trig
