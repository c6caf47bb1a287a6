#pragma once

#include "etc/models/partition.hpp"
#include "etc/num/linalg.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace etc::models {

using PhiFn = std::function<num::Vec(const num::Vec& x, const num::Vec& u)>;

/// x' = A x + B u + phi(x, u), y = C x, with ||phi(a,u) - phi(b,u)|| <= rho ||a - b||.
class LipschitzAffinePlant {
public:
    /// An empty `phi` means phi == 0.
    LipschitzAffinePlant(std::string name, num::Mat a, num::Mat b, num::Mat c, PhiFn phi, double rho,
                         NodePartition inputs, NodePartition outputs);

    const std::string& name() const noexcept { return name_; }
    const num::Mat& A() const noexcept { return a_; }
    const num::Mat& B() const noexcept { return b_; }
    const num::Mat& C() const noexcept { return c_; }
    double rho() const noexcept { return rho_; }
    const NodePartition& inputs() const noexcept { return inputs_; }
    const NodePartition& outputs() const noexcept { return outputs_; }

    std::size_t state_dim() const noexcept { return a_.rows(); }
    std::size_t input_dim() const noexcept { return b_.cols(); }
    std::size_t output_dim() const noexcept { return c_.rows(); }
    bool has_phi() const noexcept { return static_cast<bool>(phi_); }

    num::Vec phi(const num::Vec& x, const num::Vec& u) const;
    num::Vec output(const num::Vec& x) const { return c_ * x; }
    /// y_j = C_j x for output node j.
    num::Vec node_output(std::size_t node, const num::Vec& x) const;

private:
    std::string name_;
    num::Mat a_, b_, c_;
    PhiFn phi_;
    double rho_;
    NodePartition inputs_, outputs_;
};

/// u = K x_hat, split across actuator nodes.
class LinearController {
public:
    LinearController(num::Mat gain, NodePartition inputs);

    const num::Mat& gain() const noexcept { return k_; }
    const NodePartition& inputs() const noexcept { return inputs_; }
    /// L_{gamma_i}: spectral norm of the gain rows owned by node i.
    double node_lipschitz(std::size_t node) const { return per_node_.at(node); }
    const std::vector<double>& per_node_lipschitz() const noexcept { return per_node_; }

private:
    num::Mat k_;
    NodePartition inputs_;
    std::vector<double> per_node_;
};

/// x_hat' = A x_hat + B u + phi(x_hat, u) + L (y_held - C x_hat).
class LuenbergerObserver {
public:
    LuenbergerObserver(num::Mat gain, const LipschitzAffinePlant& plant);

    const num::Mat& gain() const noexcept { return l_; }
    /// L_h = ||C||_2
    double output_lipschitz() const noexcept { return l_h_; }
    /// L_{h_j}: spectral norm of the rows of C owned by sensor node j.
    double node_lipschitz(std::size_t node) const { return per_node_.at(node); }
    const std::vector<double>& per_node_lipschitz() const noexcept { return per_node_; }

private:
    num::Mat l_;
    double l_h_;
    std::vector<double> per_node_;
};

num::Vec plant_dynamics(const LipschitzAffinePlant& plant, const num::Vec& x, const num::Vec& u_held);

num::Vec observer_dynamics(const LipschitzAffinePlant& plant, const LuenbergerObserver& obs,
                           const num::Vec& x_hat, const num::Vec& u_held, const num::Vec& y_held);

num::Vec controller_eval(const LinearController& ctrl, const num::Vec& x_hat);
num::Vec controller_eval_node(const LinearController& ctrl, std::size_t node, const num::Vec& x_hat);

/// Sampled lower bound on the Lipschitz constant of phi(., 0) on the ball of
/// `domain_radius` around the origin. Throws RhoViolated if it exceeds rho.
double phi_lipschitz_check(const LipschitzAffinePlant& plant, std::size_t sample_count, double domain_radius,
                           std::uint64_t seed = 0);

}  // namespace etc::models
