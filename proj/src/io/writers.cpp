#include "etc/io/writers.hpp"

#include "etc/error.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

namespace etc::io {

namespace {

std::string num(double v) { return fmt::format("{:.12g}", v); }
std::string exact(double v) { return fmt::format("{:.17g}", v); }

std::string list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + exact(v[i]);
    return out;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : "none"; }

std::string convergence_lines(const std::string& prefix, const analysis::ConvergenceReport& c) {
    std::string out;
    out += fmt::format("{}settling_threshold: {}\n", prefix, num(c.threshold));
    out += fmt::format("{}settling_time: {}\n", prefix, c.never_settles ? "never" : opt(c.settling_time));
    out += fmt::format("{}peak_norm_x: {}\n", prefix, num(c.peak_x));
    out += fmt::format("{}tail_sup_norm_x: {}\n", prefix, num(c.tail_sup_x));
    out += fmt::format("{}tail_sup_norm_z: {}\n", prefix, num(c.tail_sup_z));
    out += fmt::format("{}decay_rate: {}\n", prefix, opt(c.decay_rate));
    return out;
}

}  // namespace

std::string write_csv(const sim::SimulationResult& r) {
    std::string out = "t";
    for (std::size_t i = 1; i <= r.state_dim; ++i) out += fmt::format(",x{}", i);
    for (std::size_t i = 1; i <= r.state_dim; ++i) out += fmt::format(",xhat{}", i);
    for (std::size_t i = 1; i <= r.input_dim; ++i) out += fmt::format(",ubar{}", i);
    for (std::size_t i = 1; i <= r.output_dim; ++i) out += fmt::format(",ybar{}", i);
    out += ",norm_x,norm_z\n";
    for (const auto& row : r.trajectory) {
        out += num(row.t);
        for (const auto* v : {&row.x, &row.xhat, &row.ubar, &row.ybar}) {
            for (double e : *v) {
                out += ',';
                out += num(e);
            }
        }
        out += ',' + num(row.norm_x) + ',' + num(row.norm_z) + '\n';
    }
    return out;
}

std::string certificate_lines(const trig::IssCertificate& c) {
    std::string out;
    out += fmt::format("a3_term: {}\n", trig::to_string(c.a3_term));
    out += fmt::format("L_a3_inv: {}\n", exact(c.L_a3_inv));
    out += fmt::format("L_b: {}\n", exact(c.L_b));
    out += fmt::format("L_G: {}\n", exact(c.L_G));
    out += fmt::format("lambda_c: {}\n", exact(c.lambda_c));
    out += fmt::format("L_beta_c: {}\n", exact(c.L_beta_c));
    out += fmt::format("L_beta_o: {}\n", exact(c.L_beta_o));
    out += fmt::format("L_alpha_c3: {}\n", exact(c.L_alpha_c3));
    out += fmt::format("L_alpha_o3_inv: {}\n", exact(c.L_alpha_o3_inv));
    out += fmt::format("sigma_max: {}\n", exact(c.sigma_max));
    out += fmt::format("sigma: {}\n", exact(c.sigma));
    out += fmt::format("sigma_prime: {}\n", exact(c.sigma_prime));
    out += fmt::format("kappa: {}\n", list(c.kappa));
    out += fmt::format("tau_min: {}\n", list(c.tau_min));
    out += fmt::format("L_gamma: {}\n", list(c.L_gamma));
    out += fmt::format("L_h: {}\n", list(c.L_h));
    for (const auto& w : c.warnings) out += fmt::format("warning: {}\n", w);
    return out;
}

std::string trigger_table(const std::string& prefix, const analysis::TriggerStats& st) {
    std::string out;
    for (const auto& n : st.nodes) {
        out += fmt::format("{}.{}: count={} min_gap={} mean_gap={} max_gap={}\n", prefix, n.label, n.count,
                           opt(n.min_gap), opt(n.mean_gap), opt(n.max_gap));
    }
    out += fmt::format("{}.actuator_total: {}\n", prefix, st.actuator_total);
    out += fmt::format("{}.sensor_total: {}\n", prefix, st.sensor_total);
    return out;
}

std::string write_report(const RunReport& r) {
    std::string out = fmt::format("scenario: {}\n", r.scenario);
    if (r.certificate) {
        out += certificate_lines(*r.certificate);
    } else {
        out += fmt::format("certificate: unavailable ({})\n", r.certificate_error);
    }
    out += trigger_table("triggers", r.stats);
    out += convergence_lines("", r.convergence);
    return out;
}

std::string write_compare_report(const std::string& scenario, const analysis::TriggerStats& ev,
                                  const analysis::TriggerStats& per, double delta,
                                  const analysis::ConvergenceReport& ev_conv,
                                  const analysis::ConvergenceReport& per_conv) {
    std::string out = fmt::format("scenario: {}\nperiodic_delta: {}\n", scenario, num(delta));
    out += trigger_table("event_triggered", ev);
    out += trigger_table("periodic", per);
    for (std::size_t k = 0; k < ev.nodes.size() && k < per.nodes.size(); ++k) {
        // both counts include the t = 0 transmission
        out += fmt::format("fewer_transmissions.{}: {}\n", ev.nodes[k].label,
                           ev.nodes[k].count < per.nodes[k].count ? "yes" : "no");
    }
    out += convergence_lines("event_triggered.", ev_conv);
    out += convergence_lines("periodic.", per_conv);
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) fail(ErrorCode::IoError, fmt::format("cannot write '{}'", tmp.string()));
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) fail(ErrorCode::IoError, fmt::format("write to '{}' failed", tmp.string()));
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::IoError, fmt::format("cannot move output into '{}'", path));
    }
}

}  // namespace etc::io
