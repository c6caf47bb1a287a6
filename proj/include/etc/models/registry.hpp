#pragma once

#include "etc/models/plant.hpp"

#include <optional>
#include <string>
#include <vector>

namespace etc::models {

/// phi_row += gain * sin(x_col), zero-based indices.
struct SinTerm {
    std::size_t row = 0;
    std::size_t col = 0;
    double gain = 0.0;

    friend bool operator==(const SinTerm&, const SinTerm&) = default;
};

/// Serializable plant description: either a registry name (matrices filled
/// from the registry) or inline matrices with optional sine terms.
struct ModelSpec {
    std::string name;  // empty for inline models
    num::Mat A, B, C;
    std::vector<SinTerm> sin_terms;
    double rho = 0.0;
    std::vector<std::size_t> input_widths;
    std::vector<std::size_t> output_widths;

    bool is_named() const noexcept { return !name.empty(); }

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Conservative Lipschitz bound for a sum of sine terms: Frobenius norm of the
/// |gain| matrix.
double sin_terms_rho(const std::vector<SinTerm>& terms, std::size_t n);

LipschitzAffinePlant build_plant(const ModelSpec& spec);

/// Registry lookup: "flexible-link", "double-integrator", "scalar-linear".
ModelSpec builtin_model(const std::string& name);
std::vector<std::string> builtin_model_names();

/// Flexible-link robot arm constants (A, B, C, phi as a model spec, and the
/// controller/observer gains of the benchmark).
struct FlexibleLinkBenchmark {
    static ModelSpec model();
    /// Benchmark gain row; the stabilizing law is u = -K x_hat.
    static num::Mat K();
    static num::Mat L();
};

}  // namespace etc::models
