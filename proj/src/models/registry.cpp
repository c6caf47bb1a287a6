#include "etc/models/registry.hpp"

#include "etc/error.hpp"

#include <cmath>

#include <fmt/format.h>

namespace etc::models {

using num::Mat;
using num::Vec;

double sin_terms_rho(const std::vector<SinTerm>& terms, std::size_t n) {
    Mat g(n, n);
    for (const auto& t : terms) {
        if (t.row >= n || t.col >= n) {
            fail(ErrorCode::DimensionMismatch, fmt::format("sine term ({}, {}) outside a {}-state model", t.row + 1,
                                                           t.col + 1, n));
        }
        g(t.row, t.col) += std::abs(t.gain);
    }
    double s = 0.0;
    for (double v : g.entries()) s += v * v;
    return std::sqrt(s);
}

LipschitzAffinePlant build_plant(const ModelSpec& spec) {
    const std::size_t n = spec.A.rows();
    for (const auto& t : spec.sin_terms) {
        if (t.row >= n || t.col >= n) {
            fail(ErrorCode::DimensionMismatch, fmt::format("sine term ({}, {}) outside a {}-state model", t.row + 1,
                                                           t.col + 1, n));
        }
    }
    PhiFn phi;
    if (!spec.sin_terms.empty()) {
        phi = [terms = spec.sin_terms, n](const Vec& x, const Vec&) {
            Vec out(n);
            for (const auto& t : terms) out[t.row] += t.gain * std::sin(x[t.col]);
            return out;
        };
    }
    return LipschitzAffinePlant(spec.is_named() ? spec.name : "inline", spec.A, spec.B, spec.C, std::move(phi),
                                spec.rho, NodePartition::from_widths(spec.input_widths),
                                NodePartition::from_widths(spec.output_widths));
}

ModelSpec FlexibleLinkBenchmark::model() {
    ModelSpec m;
    m.name = "flexible-link";
    m.A = Mat{{0.0, 1.0, 0.0, 0.0}, {-48.6, -1.25, 48.6, 0.0}, {0.0, 0.0, 0.0, 1.0}, {19.5, 0.0, -19.5, 0.0}};
    m.B = Mat{{0.0}, {21.6}, {0.0}, {0.0}};
    m.C = Mat{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}};
    m.sin_terms = {{3, 2, 3.3}};
    m.rho = 3.3;
    m.input_widths = {1};
    m.output_widths = {1, 1};
    return m;
}

Mat FlexibleLinkBenchmark::K() {
    return Mat{{7.8428, 1.1212, -4.3666, 1.1243}};
}

Mat FlexibleLinkBenchmark::L() {
    return Mat{{9.3334, 1.0001}, {-48.7804, 22.3665}, {-0.0524, 3.3194}, {19.4066, -0.3167}};
}

ModelSpec builtin_model(const std::string& name) {
    if (name == "flexible-link") return FlexibleLinkBenchmark::model();
    ModelSpec m;
    m.name = name;
    if (name == "double-integrator") {
        m.A = Mat{{0.0, 1.0}, {0.0, 0.0}};
        m.B = Mat{{0.0}, {1.0}};
        m.C = Mat{{1.0, 0.0}};
        m.input_widths = {1};
        m.output_widths = {1};
        return m;
    }
    if (name == "scalar-linear") {
        m.A = Mat{{-1.0}};
        m.B = Mat{{1.0}};
        m.C = Mat{{1.0}};
        m.input_widths = {1};
        m.output_widths = {1};
        return m;
    }
    fail(ErrorCode::UnknownModel, fmt::format("unknown model '{}'", name));
}

std::vector<std::string> builtin_model_names() {
    return {"flexible-link", "double-integrator", "scalar-linear"};
}

}  // namespace etc::models
