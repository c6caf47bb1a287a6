#include "etc/triggering/certificate.hpp"

#include "etc/error.hpp"
#include "etc/num/eigen.hpp"
#include "etc/num/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace etc::trig {

using num::Mat;

std::string to_string(A3Term term) {
    return term == A3Term::ScaledInverse ? "scaled-inverse" : "literal";
}

A3Term a3_term_from_string(const std::string& s) {
    if (s == "scaled-inverse") return A3Term::ScaledInverse;
    if (s == "literal") return A3Term::Literal;
    fail(ErrorCode::ValidationError, fmt::format("unknown a3_term '{}' (expected scaled-inverse or literal)", s));
}

namespace {

Mat closed_loop_controller(const models::LipschitzAffinePlant& plant, const models::LinearController& ctrl) {
    return plant.A() + plant.B() * ctrl.gain();
}

Mat closed_loop_observer(const models::LipschitzAffinePlant& plant, const models::LuenbergerObserver& obs) {
    return plant.A() - obs.gain() * plant.C();
}

// lambda_min(-(M'P + PM)) must reach eta, the decay rate claimed for V.
void check_decay(const Mat& m, const Mat& p, double eta, const char* which) {
    if (!(eta > 0.0)) fail(ErrorCode::NonPositiveConstant, fmt::format("{}: eta must be positive", which));
    if (!p.is_symmetric(1e-9)) fail(ErrorCode::NotSymmetric, fmt::format("{}: P is not symmetric", which));
    if (num::sym_eig_bounds(p).min <= 0.0) {
        fail(ErrorCode::LyapunovResidualTooLarge, fmt::format("{}: P is not positive definite", which));
    }
    Mat lhs = m.transpose() * p + p * m;
    lhs *= -1.0;
    double decay = num::sym_eig_bounds(lhs.symmetrized()).min;
    if (decay < eta * (1.0 - 1e-8)) {
        fail(ErrorCode::LyapunovResidualTooLarge,
             fmt::format("{}: lambda_min(-(M'P+PM)) = {} is below eta = {}", which, decay, eta));
    }
}

}  // namespace

LyapunovPair lyapunov_pair_from_gains(const models::LipschitzAffinePlant& plant, const models::LinearController& ctrl,
                                      const models::LuenbergerObserver& obs) {
    const std::size_t n = plant.state_dim();
    Mat mc = closed_loop_controller(plant, ctrl);
    Mat mo = closed_loop_observer(plant, obs);
    if (!num::is_hurwitz(mc)) fail(ErrorCode::NotHurwitz, "A + BK is not Hurwitz");
    if (!num::is_hurwitz(mo)) fail(ErrorCode::NotHurwitz, "A - LC is not Hurwitz");
    return {num::solve_lyapunov(mc, Mat::identity(n)), 1.0, num::solve_lyapunov(mo, Mat::identity(n)), 1.0};
}

IssCertificate build_certificate(const models::LipschitzAffinePlant& plant, const models::LinearController& ctrl,
                                 const models::LuenbergerObserver& obs, const LyapunovPair& lyap, A3Term a3_term) {
    const std::size_t n = plant.state_dim();
    if (lyap.P_c.rows() != n || lyap.P_c.cols() != n || lyap.P_o.rows() != n || lyap.P_o.cols() != n) {
        fail(ErrorCode::DimensionMismatch, fmt::format("Lyapunov matrices must be {0}x{0}", n));
    }
    Mat mc = closed_loop_controller(plant, ctrl);
    Mat mo = closed_loop_observer(plant, obs);
    if (!num::is_hurwitz(mc)) fail(ErrorCode::NotHurwitz, "A + BK is not Hurwitz");
    if (!num::is_hurwitz(mo)) fail(ErrorCode::NotHurwitz, "A - LC is not Hurwitz");
    check_decay(mc, lyap.P_c, lyap.eta_c, "controller");
    check_decay(mo, lyap.P_o, lyap.eta_o, "observer");

    const auto pc = num::sym_eig_bounds(lyap.P_c);
    const auto po = num::sym_eig_bounds(lyap.P_o);
    const Mat BK = plant.B() * ctrl.gain();
    const Mat LC = obs.gain() * plant.C();
    const double nBK = num::spectral_norm(BK);
    const double nLC = num::spectral_norm(LC);

    IssCertificate c;
    c.a3_term = a3_term;
    c.L_alpha_c3 = lyap.eta_c / std::sqrt(pc.max);
    c.L_alpha_c3_inv = std::sqrt(pc.max) / lyap.eta_c;
    c.L_beta_c = (nBK + 2.0 * nLC) / std::sqrt(pc.min);
    c.L_alpha_o3_inv = std::sqrt(po.max) / lyap.eta_o;
    c.L_beta_o = 2.0 * nLC / std::sqrt(po.min);

    c.lambda_c = c.L_beta_c > 0.0 ? 1.0 / (2.0 * c.L_alpha_o3_inv * c.L_beta_c) : 1.0;
    const double denom = 1.0 - c.lambda_c * c.L_alpha_o3_inv * c.L_beta_c;
    if (!(denom > 0.0)) fail(ErrorCode::CertificateDegenerate, "lambda_c L_alpha_o3_inv L_beta_c >= 1");

    const double ctrl_term =
        a3_term == A3Term::ScaledInverse ? c.L_alpha_c3_inv / c.lambda_c : c.lambda_c / c.L_alpha_c3;
    c.L_a3_inv = std::max(ctrl_term, c.L_alpha_o3_inv / denom);
    c.L_b = c.L_beta_c + c.L_beta_o;
    if (!(c.L_b > 0.0)) {
        fail(ErrorCode::CertificateDegenerate, "L_b = 0: the loop does not depend on the sampling error");
    }

    const double nK = num::spectral_norm(ctrl.gain());
    c.L_G = num::spectral_norm(Mat::block(mc, LC, Mat(n, n), mo)) + plant.rho() * (1.0 + nK) + nBK + nLC;

    c.actuator_count = plant.inputs().node_count();
    c.sensor_count = plant.outputs().node_count();
    c.dim_E = plant.input_dim() + plant.output_dim();
    c.sigma_max = sigma_bound(c.L_a3_inv, c.L_b);
    c.sigma = c.sigma_max / 2.0;
    c.sigma_prime = euclidean_margin(c.sigma, c.dim_E);
    c.kappa = allocate_kappa(c.sigma_prime, c.actuator_count + c.sensor_count);
    c.L_gamma = ctrl.per_node_lipschitz();
    c.L_h = obs.per_node_lipschitz();
    c.L_h_global = obs.output_lipschitz();

    for (std::size_t i = 0; i < c.actuator_count; ++i) {
        if (!(c.L_gamma[i] > 0.0)) {
            fail(ErrorCode::CertificateDegenerate, fmt::format("actuator node {} has a zero gain block", i + 1));
        }
        c.tau_min.push_back(min_interevent_actuator(c.L_G, c.sigma_prime, c.kappa[i], c.L_gamma[i]));
    }
    for (std::size_t j = 0; j < c.sensor_count; ++j) {
        if (!(c.L_h[j] > 0.0)) {
            fail(ErrorCode::CertificateDegenerate, fmt::format("sensor node {} observes nothing", j + 1));
        }
        c.tau_min.push_back(
            min_interevent_sensor(c.L_G, c.sigma_prime, c.kappa[c.actuator_count + j], c.L_h[j]));
    }
    for (std::size_t k = 0; k < c.kappa.size(); ++k) {
        if (c.kappa[k] == 0.0) c.warnings.push_back(fmt::format("ZeroKappa: node {} has kappa = 0", k + 1));
    }
    if (a3_term == A3Term::Literal) {
        c.warnings.push_back("a3_term=literal: lambda_c / L_alpha_c3 does not bound the controller branch of a3^-1");
    }
    validate_certificate(c);
    return c;
}

void validate_certificate(const IssCertificate& c) {
    if (!(c.sigma > 0.0) || !(c.sigma < 1.0 / (c.L_a3_inv * c.L_b))) {
        fail(ErrorCode::BudgetExceeded, fmt::format("sigma = {} outside (0, 1/(L_a3_inv L_b))", c.sigma));
    }
    if (c.sigma_prime * std::sqrt(static_cast<double>(c.dim_E)) > c.sigma * (1.0 + 1e-12)) {
        fail(ErrorCode::BudgetExceeded, "sigma' sqrt(dim_E) exceeds sigma");
    }
    double total = std::accumulate(c.kappa.begin(), c.kappa.end(), 0.0);
    if (total > c.sigma_prime * (1.0 + 1e-12)) {
        fail(ErrorCode::BudgetExceeded, fmt::format("sum of kappa {} exceeds sigma' {}", total, c.sigma_prime));
    }
    if (c.lambda_c * c.L_alpha_o3_inv * c.L_beta_c >= 1.0) {
        fail(ErrorCode::CertificateDegenerate, "lambda_c L_alpha_o3_inv L_beta_c >= 1");
    }
    if (c.tau_min.size() != c.kappa.size()) fail(ErrorCode::CertificateDegenerate, "tau_min and kappa lists differ");
    for (std::size_t k = 0; k < c.kappa.size(); ++k) {
        if (c.kappa[k] > 0.0 && !(c.tau_min[k] > 0.0)) {
            fail(ErrorCode::CertificateDegenerate, fmt::format("node {} has kappa > 0 but tau_min = 0", k + 1));
        }
    }
}

std::vector<TriggerPolicy> certified_node_policies(const IssCertificate& c) {
    std::vector<TriggerPolicy> out;
    for (std::size_t i = 0; i < c.actuator_count; ++i) {
        out.emplace_back(NodeRelativeActuator{c.kappa[i], c.L_gamma[i], c.tau_min[i]});
    }
    for (std::size_t j = 0; j < c.sensor_count; ++j) {
        const std::size_t k = c.actuator_count + j;
        out.emplace_back(NodeRelativeSensor{c.kappa[k], c.L_h_global, c.tau_min[k]});
    }
    return out;
}

std::vector<TriggerPolicy> ideal_node_policies(const IssCertificate& c) {
    std::vector<TriggerPolicy> out;
    for (std::size_t k = 0; k < c.kappa.size(); ++k) out.emplace_back(IdealNode{c.kappa[k], c.tau_min[k]});
    return out;
}

}  // namespace etc::trig
