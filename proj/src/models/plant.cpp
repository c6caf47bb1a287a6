#include "etc/models/plant.hpp"

#include "etc/error.hpp"
#include "etc/num/eigen.hpp"
#include "etc/num/sampling.hpp"

#include <fmt/format.h>

namespace etc::models {

using num::Mat;
using num::Vec;

LipschitzAffinePlant::LipschitzAffinePlant(std::string name, Mat a, Mat b, Mat c, PhiFn phi, double rho,
                                           NodePartition inputs, NodePartition outputs)
    : name_(std::move(name)),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      phi_(std::move(phi)),
      rho_(rho),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)) {
    const std::size_t n = a_.rows();
    if (n == 0 || !a_.is_square()) fail(ErrorCode::DimensionMismatch, "A must be square and non-empty");
    if (b_.rows() != n) fail(ErrorCode::DimensionMismatch, fmt::format("B has {} rows, expected {}", b_.rows(), n));
    if (c_.cols() != n) fail(ErrorCode::DimensionMismatch, fmt::format("C has {} cols, expected {}", c_.cols(), n));
    if (!(rho_ >= 0.0)) fail(ErrorCode::ValidationError, "rho must be non-negative");
    if (inputs_.total_dim() != b_.cols()) {
        fail(ErrorCode::DimensionMismatch, "input partition does not match the columns of B");
    }
    if (outputs_.total_dim() != c_.rows()) {
        fail(ErrorCode::DimensionMismatch, "output partition does not match the rows of C");
    }
}

Vec LipschitzAffinePlant::phi(const Vec& x, const Vec& u) const {
    if (!phi_) return Vec(state_dim());
    return phi_(x, u);
}

Vec LipschitzAffinePlant::node_output(std::size_t node, const Vec& x) const {
    const auto& s = outputs_.span(node);
    Vec y(s.width);
    for (std::size_t r = 0; r < s.width; ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < c_.cols(); ++j) acc += c_(s.offset + r, j) * x[j];
        y[r] = acc;
    }
    return y;
}

LinearController::LinearController(Mat gain, NodePartition inputs) : k_(std::move(gain)), inputs_(std::move(inputs)) {
    if (inputs_.total_dim() != k_.rows()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("controller gain has {} rows but the input partition covers {}", k_.rows(),
                         inputs_.total_dim()));
    }
    for (const auto& s : inputs_.spans()) per_node_.push_back(num::spectral_norm(k_.row_block(s.offset, s.width)));
}

LuenbergerObserver::LuenbergerObserver(Mat gain, const LipschitzAffinePlant& plant) : l_(std::move(gain)) {
    if (l_.rows() != plant.state_dim() || l_.cols() != plant.output_dim()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("observer gain is {}x{}, expected {}x{}", l_.rows(), l_.cols(), plant.state_dim(),
                         plant.output_dim()));
    }
    l_h_ = num::spectral_norm(plant.C());
    for (const auto& s : plant.outputs().spans()) {
        per_node_.push_back(num::spectral_norm(plant.C().row_block(s.offset, s.width)));
    }
}

Vec plant_dynamics(const LipschitzAffinePlant& plant, const Vec& x, const Vec& u_held) {
    Vec dx = plant.A() * x + plant.B() * u_held + plant.phi(x, u_held);
    if (!dx.all_finite()) fail(ErrorCode::NonFinite, "plant derivative is not finite");
    return dx;
}

Vec observer_dynamics(const LipschitzAffinePlant& plant, const LuenbergerObserver& obs, const Vec& x_hat,
                      const Vec& u_held, const Vec& y_held) {
    Vec innovation = y_held - plant.C() * x_hat;
    Vec dx = plant.A() * x_hat + plant.B() * u_held + plant.phi(x_hat, u_held) + obs.gain() * innovation;
    if (!dx.all_finite()) fail(ErrorCode::NonFinite, "observer derivative is not finite");
    return dx;
}

Vec controller_eval(const LinearController& ctrl, const Vec& x_hat) {
    return ctrl.gain() * x_hat;
}

Vec controller_eval_node(const LinearController& ctrl, std::size_t node, const Vec& x_hat) {
    const auto& s = ctrl.inputs().span(node);
    Vec u(s.width);
    const auto& k = ctrl.gain();
    for (std::size_t r = 0; r < s.width; ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k.cols(); ++j) acc += k(s.offset + r, j) * x_hat[j];
        u[r] = acc;
    }
    return u;
}

double phi_lipschitz_check(const LipschitzAffinePlant& plant, std::size_t sample_count, double domain_radius,
                           std::uint64_t seed) {
    const Vec u0(plant.input_dim());
    auto f = [&plant, &u0](const Vec& x) { return plant.phi(x, u0); };
    double est = num::lipschitz_lower_bound(f, Vec(plant.state_dim()), domain_radius, sample_count, seed);
    if (est > plant.rho() * (1.0 + 1e-12)) {
        fail(ErrorCode::RhoViolated,
             fmt::format("sampled Lipschitz estimate {:.6g} exceeds declared rho {:.6g}", est, plant.rho()));
    }
    return est;
}

}  // namespace etc::models
